// Copyright 2026 The DGM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DGM_SPLIT_H_
#define DGM_SPLIT_H_

#include <cstdint>
#include <vector>

#include "dgm/table.h"

namespace dgm {

struct SplitPair {
  DataTable train;
  DataTable holdout;
  // Source row indices, in output order.
  std::vector<size_t> train_rows;
  std::vector<size_t> holdout_rows;
};

// Uniform seeded split. The holdout receives round(fraction * n) rows,
// clamped so both sides keep at least one row. Requires n >= 2 and
// fraction in (0, 1).
SplitPair Split(const DataTable& table, double holdout_fraction,
                uint64_t seed);

}  // namespace dgm

#endif  // DGM_SPLIT_H_
