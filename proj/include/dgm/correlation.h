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

#ifndef DGM_CORRELATION_H_
#define DGM_CORRELATION_H_

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "dgm/table.h"

namespace dgm {

// Pearson correlation; 0 when either side has zero variance.
double Pearson(std::span<const double> x, std::span<const double> y);

// Cramer's V without bias correction, over observed categories.
// 0 when either column shows a single observed category.
double CramersV(std::span<const int32_t> a, size_t a_levels,
                std::span<const int32_t> b, size_t b_levels);

// Correlation ratio eta = sqrt(SS_between / SS_total) of `values` grouped
// by `groups`. 0 when `values` has zero variance or only one group occurs.
double CorrelationRatio(std::span<const int32_t> groups, size_t levels,
                        std::span<const double> values);

// Association between every pair of columns: Pearson for numeric pairs,
// Cramer's V for categorical pairs, correlation ratio for mixed pairs
// (placed symmetrically). The diagonal is 1.
Eigen::MatrixXd MixedCorrelation(const DataTable& table);

}  // namespace dgm

#endif  // DGM_CORRELATION_H_
