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

#ifndef DGM_NEIGHBORS_H_
#define DGM_NEIGHBORS_H_

#include <cstddef>
#include <vector>

#include "dgm/encoding.h"

namespace dgm {

struct Neighbor {
  double distance;
  size_t index;
};

// Brute-force k nearest reference rows for every query row, sorted by
// (distance, index). With exclude_same_index, query i never matches
// reference i (use when queries and references are the same matrix).
std::vector<std::vector<Neighbor>> KNearest(const RowMatrix& queries,
                                            const RowMatrix& references,
                                            size_t k,
                                            bool exclude_same_index = false);

// Euclidean distance from every query to its nearest reference.
std::vector<double> NearestDistance(const RowMatrix& queries,
                                    const RowMatrix& references,
                                    bool exclude_same_index = false);

}  // namespace dgm

#endif  // DGM_NEIGHBORS_H_
