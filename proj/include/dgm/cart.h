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

#ifndef DGM_CART_H_
#define DGM_CART_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "dgm/rng.h"
#include "dgm/table.h"

namespace dgm {

// Column-major training data for a single tree. A feature with
// feature_levels[f] == 0 is numerical; otherwise it holds category codes in
// [0, levels). target_levels == 0 selects regression (variance reduction),
// otherwise classification with Gini impurity.
struct TreeData {
  std::vector<std::vector<double>> features;
  std::vector<size_t> feature_levels;
  std::vector<double> target;
  size_t target_levels = 0;

  size_t num_rows() const { return target.size(); }
  size_t num_features() const { return features.size(); }

  // Features are the given table columns, target is column target_col.
  static TreeData FromTable(const DataTable& table,
                            std::span<const size_t> feature_cols,
                            size_t target_col);
};

struct TreeParams {
  int max_depth = 12;
  size_t min_leaf = 5;
  // Features tried per node; 0 tries all of them.
  size_t max_features = 0;
  // Keep the training rows reaching each leaf (donor pools).
  bool keep_leaf_rows = true;
};

struct TreeNode {
  int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  // Categorical split: goes_left[c] != 0 routes category c left.
  std::vector<uint8_t> goes_left;
  int32_t left = -1;
  int32_t right = -1;
  int32_t leaf = -1;
};

class DecisionTree {
 public:
  // `rows` indexes into data and may contain repeats (bootstrap samples).
  static DecisionTree Fit(const TreeData& data, std::span<const uint32_t> rows,
                          const TreeParams& params, SeededRng& rng);

  // Routes a feature vector (indexed like TreeData::features) to a leaf.
  int32_t FindLeaf(std::span<const double> x) const;

  size_t num_leaves() const { return leaf_value_.size(); }
  size_t num_nodes() const { return nodes_.size(); }
  int depth() const;
  // Mean target of the training rows in a leaf (class-1 fraction for
  // binary targets).
  double leaf_value(int32_t leaf) const { return leaf_value_[leaf]; }
  const std::vector<uint32_t>& leaf_rows(int32_t leaf) const {
    return leaf_rows_[leaf];
  }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  nlohmann::json ToJson() const;
  static DecisionTree FromJson(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
  std::vector<double> leaf_value_;
  std::vector<std::vector<uint32_t>> leaf_rows_;
};

}  // namespace dgm

#endif  // DGM_CART_H_
