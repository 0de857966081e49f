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

#ifndef DGM_ENCODING_H_
#define DGM_ENCODING_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dgm/table.h"

namespace dgm {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One-hot for categoricals, z-score for numericals. Statistics are learned
// from the table passed to Fit and reused for every Transform.
class Encoder {
 public:
  static Encoder Fit(const DataTable& reference);

  size_t dims() const { return source_column_.size(); }
  // Original column of every encoded dimension.
  const std::vector<size_t>& source_column() const { return source_column_; }
  RowMatrix Transform(const DataTable& table) const;

 private:
  std::vector<ColumnMeta> schema_;
  std::vector<size_t> offset_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<size_t> source_column_;
};

}  // namespace dgm

#endif  // DGM_ENCODING_H_
