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

#include "dgm/correlation.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dgm/error.h"

namespace dgm {
namespace {

constexpr double kVarianceFloor = 1e-14;

}  // namespace

double Pearson(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double scale = static_cast<double>(n);
  if (sxx / scale <= kVarianceFloor * (1.0 + mx * mx) ||
      syy / scale <= kVarianceFloor * (1.0 + my * my)) {
    return 0.0;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double CramersV(std::span<const int32_t> a, size_t a_levels,
                std::span<const int32_t> b, size_t b_levels) {
  const size_t n = a.size();
  if (n != b.size() || n == 0) return 0.0;
  std::vector<double> joint(a_levels * b_levels, 0.0);
  std::vector<double> ra(a_levels, 0.0), rb(b_levels, 0.0);
  for (size_t i = 0; i < n; ++i) {
    joint[static_cast<size_t>(a[i]) * b_levels + static_cast<size_t>(b[i])] +=
        1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  size_t observed_a = 0, observed_b = 0;
  for (double c : ra) observed_a += c > 0;
  for (double c : rb) observed_b += c > 0;
  if (observed_a < 2 || observed_b < 2) return 0.0;
  const double total = static_cast<double>(n);
  double chi2 = 0.0;
  for (size_t i = 0; i < a_levels; ++i) {
    if (ra[i] == 0) continue;
    for (size_t j = 0; j < b_levels; ++j) {
      if (rb[j] == 0) continue;
      const double expected = ra[i] * rb[j] / total;
      const double d = joint[i * b_levels + j] - expected;
      chi2 += d * d / expected;
    }
  }
  const double dof = static_cast<double>(std::min(observed_a, observed_b) - 1);
  return std::clamp(std::sqrt(chi2 / (total * dof)), 0.0, 1.0);
}

double CorrelationRatio(std::span<const int32_t> groups, size_t levels,
                        std::span<const double> values) {
  const size_t n = values.size();
  if (n != groups.size() || n < 2) return 0.0;
  std::vector<double> sum(levels, 0.0), count(levels, 0.0);
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sum[groups[i]] += values[i];
    count[groups[i]] += 1.0;
    mean += values[i];
  }
  mean /= static_cast<double>(n);
  size_t occupied = 0;
  for (double c : count) occupied += c > 0;
  double ss_total = 0.0;
  for (double v : values) ss_total += (v - mean) * (v - mean);
  if (occupied < 2 ||
      ss_total / static_cast<double>(n) <= kVarianceFloor * (1.0 + mean * mean)) {
    return 0.0;
  }
  double ss_between = 0.0;
  for (size_t g = 0; g < levels; ++g) {
    if (count[g] == 0) continue;
    const double d = sum[g] / count[g] - mean;
    ss_between += count[g] * d * d;
  }
  return std::clamp(std::sqrt(ss_between / ss_total), 0.0, 1.0);
}

Eigen::MatrixXd MixedCorrelation(const DataTable& table) {
  const size_t k = table.num_cols();
  if (table.num_rows() < 2) {
    throw DataError("mixed_correlation: need at least 2 rows");
  }
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
  for (size_t i = 0; i < k; ++i) {
    const Column& a = table.column(i);
    for (size_t j = i + 1; j < k; ++j) {
      const Column& b = table.column(j);
      double v;
      if (!a.meta.is_categorical() && !b.meta.is_categorical()) {
        v = Pearson(a.numbers, b.numbers);
      } else if (a.meta.is_categorical() && b.meta.is_categorical()) {
        v = CramersV(a.codes, a.meta.num_categories(), b.codes,
                     b.meta.num_categories());
      } else if (a.meta.is_categorical()) {
        v = CorrelationRatio(a.codes, a.meta.num_categories(), b.numbers);
      } else {
        v = CorrelationRatio(b.codes, b.meta.num_categories(), a.numbers);
      }
      corr(i, j) = v;
      corr(j, i) = v;
    }
  }
  return corr;
}

}  // namespace dgm
