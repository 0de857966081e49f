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

#ifndef DGM_SCORER_H_
#define DGM_SCORER_H_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "dgm/table.h"

namespace dgm {

// Maps candidate rows to validity scores in [0, 1].
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> Score(const DataTable& queries) const = 0;
};

class ConstantScorer : public Scorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  std::vector<double> Score(const DataTable& queries) const override {
    return std::vector<double>(queries.num_rows(), value_);
  }

 private:
  double value_;
};

// Scores each row with a caller-supplied function of (table, row).
class RowFunctionScorer : public Scorer {
 public:
  using Fn = std::function<double(const DataTable&, size_t)>;
  explicit RowFunctionScorer(Fn fn) : fn_(std::move(fn)) {}
  std::vector<double> Score(const DataTable& queries) const override {
    std::vector<double> out(queries.num_rows());
    for (size_t i = 0; i < out.size(); ++i) out[i] = fn_(queries, i);
    return out;
  }

 private:
  Fn fn_;
};

}  // namespace dgm

#endif  // DGM_SCORER_H_
