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

#include "dgm/encoding.h"

#include <cmath>

#include "dgm/error.h"

namespace dgm {

Encoder Encoder::Fit(const DataTable& reference) {
  Encoder enc;
  enc.schema_ = reference.schema();
  const size_t n = reference.num_rows();
  size_t offset = 0;
  for (size_t j = 0; j < reference.num_cols(); ++j) {
    const Column& col = reference.column(j);
    enc.offset_.push_back(offset);
    if (col.meta.is_categorical()) {
      enc.mean_.push_back(0.0);
      enc.scale_.push_back(1.0);
      for (size_t c = 0; c < col.meta.num_categories(); ++c) {
        enc.source_column_.push_back(j);
      }
      offset += col.meta.num_categories();
    } else {
      double mean = 0.0;
      for (double v : col.numbers) mean += v;
      mean = n ? mean / static_cast<double>(n) : 0.0;
      double var = 0.0;
      for (double v : col.numbers) var += (v - mean) * (v - mean);
      var = n ? var / static_cast<double>(n) : 0.0;
      const double sd = std::sqrt(var);
      enc.mean_.push_back(mean);
      enc.scale_.push_back(sd > 1e-12 ? sd : 1.0);
      enc.source_column_.push_back(j);
      offset += 1;
    }
  }
  return enc;
}

RowMatrix Encoder::Transform(const DataTable& table) const {
  if (!SchemasCompatible(table.schema(), schema_)) {
    throw DataError("encoder: schema mismatch");
  }
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(table.num_rows()),
                                  static_cast<Eigen::Index>(dims()));
  for (size_t j = 0; j < table.num_cols(); ++j) {
    const Column& col = table.column(j);
    const auto base = static_cast<Eigen::Index>(offset_[j]);
    if (col.meta.is_categorical()) {
      for (size_t i = 0; i < col.codes.size(); ++i) {
        out(static_cast<Eigen::Index>(i), base + col.codes[i]) = 1.0;
      }
    } else {
      for (size_t i = 0; i < col.numbers.size(); ++i) {
        out(static_cast<Eigen::Index>(i), base) =
            (col.numbers[i] - mean_[j]) / scale_[j];
      }
    }
  }
  return out;
}

}  // namespace dgm
