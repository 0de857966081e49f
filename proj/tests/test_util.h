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

#ifndef DGM_TESTS_TEST_UTIL_H_
#define DGM_TESTS_TEST_UTIL_H_

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dgm/rng.h"
#include "dgm/table.h"

namespace dgm::testing {

inline DataTable NumericTable(const std::vector<std::vector<double>>& cols) {
  std::vector<Column> out;
  for (size_t j = 0; j < cols.size(); ++j) {
    out.push_back(Column::Numerical("c" + std::to_string(j), cols[j]));
  }
  return DataTable(std::move(out));
}

// Mixed table: x0 ~ N(0,1), x1 = x0 + noise, grp depends on x0, y is a
// binary label driven by x0 + x1.
inline DataTable CorrelatedFixture(size_t n, uint64_t seed) {
  SeededRng rng(seed, 77);
  std::vector<double> x0(n), x1(n), x2(n);
  std::vector<int32_t> grp(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x0[i] = rng.Normal();
    x1[i] = 0.8 * x0[i] + 0.6 * rng.Normal();
    x2[i] = rng.Normal();
    grp[i] = x0[i] < -0.5 ? 0 : (x0[i] < 0.5 ? 1 : 2);
    y[i] = x0[i] + x1[i] + 0.5 * rng.Normal() > 0 ? 1 : 0;
  }
  std::vector<Column> cols;
  cols.push_back(Column::Numerical("x0", x0));
  cols.push_back(Column::Numerical("x1", x1));
  cols.push_back(Column::Numerical("x2", x2));
  cols.push_back(Column::Categorical("grp", {"lo", "mid", "hi"}, grp));
  cols.push_back(Column::Categorical("y", {"no", "yes"}, y));
  return DataTable(std::move(cols));
}

inline std::vector<double> SortedColumn(const DataTable& t, size_t j) {
  std::vector<double> v = t.column(j).AsDoubles();
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<size_t> idx(v.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
    for (size_t t = i; t < j; ++t) r[idx[t]] = 0.5 * static_cast<double>(i + j - 1);
    i = j;
  }
  return r;
}

// Spearman rank correlation with midranks.
inline double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = Ranks(a), rb = Ranks(b);
  double ma = 0, mb = 0;
  for (size_t i = 0; i < ra.size(); ++i) ma += ra[i], mb += rb[i];
  ma /= ra.size();
  mb /= rb.size();
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace dgm::testing

#endif  // DGM_TESTS_TEST_UTIL_H_
