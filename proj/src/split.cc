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

#include "dgm/split.h"

#include <algorithm>
#include <cmath>

#include "dgm/error.h"
#include "dgm/rng.h"

namespace dgm {

SplitPair Split(const DataTable& table, double holdout_fraction,
                uint64_t seed) {
  const size_t n = table.num_rows();
  if (n < 2) throw DataError("split: need at least 2 rows");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("split: holdout_fraction must be in (0, 1)");
  }
  auto holdout_n = static_cast<size_t>(
      std::llround(holdout_fraction * static_cast<double>(n)));
  holdout_n = std::clamp<size_t>(holdout_n, 1, n - 1);

  SeededRng rng(seed, 0x5917);
  std::vector<size_t> perm = rng.Permutation(n);
  SplitPair out;
  out.holdout_rows.assign(perm.begin(), perm.begin() + holdout_n);
  out.train_rows.assign(perm.begin() + holdout_n, perm.end());
  std::sort(out.holdout_rows.begin(), out.holdout_rows.end());
  std::sort(out.train_rows.begin(), out.train_rows.end());
  out.train = table.SelectRows(out.train_rows);
  out.holdout = table.SelectRows(out.holdout_rows);
  return out;
}

}  // namespace dgm
