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

#include "dgm/neighbors.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgm/error.h"

namespace dgm {

std::vector<std::vector<Neighbor>> KNearest(const RowMatrix& queries,
                                            const RowMatrix& references,
                                            size_t k,
                                            bool exclude_same_index) {
  if (queries.cols() != references.cols()) {
    throw Error("KNearest: dimension mismatch");
  }
  const auto nq = static_cast<size_t>(queries.rows());
  const auto nr = static_cast<size_t>(references.rows());
  const auto d = static_cast<size_t>(queries.cols());
  std::vector<std::vector<Neighbor>> out(nq);
  std::vector<Neighbor> heap;
  auto worse = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance ||
           (a.distance == b.distance && a.index < b.index);
  };
  for (size_t q = 0; q < nq; ++q) {
    heap.clear();
    const double* qp = queries.data() + q * d;
    for (size_t r = 0; r < nr; ++r) {
      if (exclude_same_index && r == q) continue;
      const double* rp = references.data() + r * d;
      double s = 0.0;
      for (size_t t = 0; t < d; ++t) {
        const double diff = qp[t] - rp[t];
        s += diff * diff;
      }
      Neighbor cand{s, r};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), worse);
      } else if (k > 0 && worse(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), worse);
      }
    }
    std::sort_heap(heap.begin(), heap.end(), worse);
    for (Neighbor& nb : heap) nb.distance = std::sqrt(nb.distance);
    out[q] = heap;
  }
  return out;
}

std::vector<double> NearestDistance(const RowMatrix& queries,
                                    const RowMatrix& references,
                                    bool exclude_same_index) {
  if (queries.cols() != references.cols()) {
    throw Error("NearestDistance: dimension mismatch");
  }
  const auto nq = static_cast<size_t>(queries.rows());
  const auto nr = static_cast<size_t>(references.rows());
  const auto d = static_cast<size_t>(queries.cols());
  std::vector<double> out(nq, std::numeric_limits<double>::infinity());
  for (size_t q = 0; q < nq; ++q) {
    const double* qp = queries.data() + q * d;
    double best = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < nr; ++r) {
      if (exclude_same_index && r == q) continue;
      const double* rp = references.data() + r * d;
      double s = 0.0;
      for (size_t t = 0; t < d && s < best; ++t) {
        const double diff = qp[t] - rp[t];
        s += diff * diff;
      }
      if (s < best) best = s;
    }
    out[q] = std::sqrt(best);
  }
  return out;
}

}  // namespace dgm
