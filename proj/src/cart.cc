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

#include "dgm/cart.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dgm/error.h"

namespace dgm {
namespace {

// Sufficient statistics of a set of targets.
struct Stats {
  double count = 0.0;
  double sum = 0.0;
  double sumsq = 0.0;
  std::vector<double> classes;

  explicit Stats(size_t levels = 0) : classes(levels, 0.0) {}

  void Add(double y, double w = 1.0) {
    count += w;
    sum += w * y;
    sumsq += w * y * y;
    if (!classes.empty()) classes[static_cast<size_t>(y)] += w;
  }
  void AddStats(const Stats& o) {
    count += o.count;
    sum += o.sum;
    sumsq += o.sumsq;
    for (size_t c = 0; c < classes.size(); ++c) classes[c] += o.classes[c];
  }
  void SubStats(const Stats& o) {
    count -= o.count;
    sum -= o.sum;
    sumsq -= o.sumsq;
    for (size_t c = 0; c < classes.size(); ++c) classes[c] -= o.classes[c];
  }
  // Count-weighted impurity: N * gini, or the sum of squared errors.
  double Impurity() const {
    if (count <= 0.0) return 0.0;
    if (!classes.empty()) {
      double sq = 0.0;
      for (double c : classes) sq += c * c;
      return count - sq / count;
    }
    return std::max(0.0, sumsq - sum * sum / count);
  }
};

struct SplitChoice {
  bool found = false;
  double score = std::numeric_limits<double>::infinity();
  int32_t feature = -1;
  double threshold = 0.0;
  std::vector<uint8_t> goes_left;
};

double Midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

void SearchNumerical(const TreeData& data, size_t f,
                     std::span<const uint32_t> rows, size_t min_leaf,
                     const Stats& total, SplitChoice* best) {
  const std::vector<double>& x = data.features[f];
  std::vector<uint32_t> order(rows.begin(), rows.end());
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return x[a] < x[b]; });
  Stats left(data.target_levels);
  Stats right = total;
  const size_t n = order.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    const double y = data.target[order[i]];
    left.Add(y);
    right.Add(y, -1.0);
    if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
    const double xa = x[order[i]];
    const double xb = x[order[i + 1]];
    if (!(xa < xb)) continue;
    const double score = left.Impurity() + right.Impurity();
    if (score < best->score) {
      best->found = true;
      best->score = score;
      best->feature = static_cast<int32_t>(f);
      best->threshold = Midpoint(xa, xb);
      best->goes_left.clear();
    }
  }
}

void SearchCategorical(const TreeData& data, size_t f,
                       std::span<const uint32_t> rows, size_t min_leaf,
                       const Stats& total, SplitChoice* best) {
  const size_t levels = data.feature_levels[f];
  const std::vector<double>& x = data.features[f];
  std::vector<Stats> per(levels, Stats(data.target_levels));
  for (uint32_t r : rows) per[static_cast<size_t>(x[r])].Add(data.target[r]);
  std::vector<size_t> present;
  for (size_t c = 0; c < levels; ++c) {
    if (per[c].count > 0) present.push_back(c);
  }
  if (present.size() < 2) return;

  // Order categories by mean target, or by the share of the node's
  // majority class; prefix splits along that order are then searched.
  std::vector<double> key(levels, 0.0);
  if (data.target_levels == 0) {
    for (size_t c : present) key[c] = per[c].sum / per[c].count;
  } else {
    size_t major = 0;
    for (size_t k = 1; k < data.target_levels; ++k) {
      if (total.classes[k] > total.classes[major]) major = k;
    }
    for (size_t c : present) key[c] = per[c].classes[major] / per[c].count;
  }
  std::stable_sort(present.begin(), present.end(),
                   [&](size_t a, size_t b) { return key[a] < key[b]; });

  Stats left(data.target_levels);
  Stats right = total;
  for (size_t i = 0; i + 1 < present.size(); ++i) {
    left.AddStats(per[present[i]]);
    right.SubStats(per[present[i]]);
    if (left.count < static_cast<double>(min_leaf) ||
        right.count < static_cast<double>(min_leaf)) {
      continue;
    }
    const double score = left.Impurity() + right.Impurity();
    if (score < best->score) {
      best->found = true;
      best->score = score;
      best->feature = static_cast<int32_t>(f);
      best->threshold = 0.0;
      best->goes_left.assign(levels, 0);
      for (size_t t = 0; t <= i; ++t) best->goes_left[present[t]] = 1;
      // Categories unseen in this node follow the larger side.
      const uint8_t unseen = left.count >= right.count ? 1 : 0;
      for (size_t c = 0; c < levels; ++c) {
        if (per[c].count == 0) best->goes_left[c] = unseen;
      }
    }
  }
}

bool GoesLeft(const TreeNode& node, double value) {
  if (node.goes_left.empty()) return value <= node.threshold;
  const auto c = static_cast<int64_t>(value);
  if (c < 0 || c >= static_cast<int64_t>(node.goes_left.size())) return true;
  return node.goes_left[static_cast<size_t>(c)] != 0;
}

}  // namespace

TreeData TreeData::FromTable(const DataTable& table,
                             std::span<const size_t> feature_cols,
                             size_t target_col) {
  TreeData data;
  for (size_t f : feature_cols) {
    const Column& col = table.column(f);
    data.features.push_back(col.AsDoubles());
    data.feature_levels.push_back(
        col.meta.is_categorical() ? col.meta.num_categories() : 0);
  }
  const Column& target = table.column(target_col);
  data.target = target.AsDoubles();
  data.target_levels =
      target.meta.is_categorical() ? target.meta.num_categories() : 0;
  return data;
}

DecisionTree DecisionTree::Fit(const TreeData& data,
                               std::span<const uint32_t> rows,
                               const TreeParams& params, SeededRng& rng) {
  if (rows.empty()) throw Error("DecisionTree::Fit: no rows");
  const size_t min_leaf = std::max<size_t>(params.min_leaf, 1);
  const size_t nf = data.num_features();
  DecisionTree tree;

  struct Pending {
    int32_t node;
    int depth;
    std::vector<uint32_t> rows;
  };
  std::vector<Pending> stack;
  tree.nodes_.emplace_back();
  stack.push_back({0, 0, std::vector<uint32_t>(rows.begin(), rows.end())});

  std::vector<size_t> feature_order(nf);
  std::iota(feature_order.begin(), feature_order.end(), size_t{0});

  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    Stats total(data.target_levels);
    for (uint32_t r : item.rows) total.Add(data.target[r]);
    const double parent = total.Impurity();

    SplitChoice best;
    const bool splittable = item.depth < params.max_depth &&
                            item.rows.size() >= 2 * min_leaf &&
                            parent > 1e-12 * std::max(1.0, total.count) && nf > 0;
    if (splittable) {
      size_t tries = nf;
      if (params.max_features > 0 && params.max_features < nf) {
        tries = params.max_features;
        for (size_t i = 0; i < tries; ++i) {
          const size_t j = i + rng.UniformIndex(nf - i);
          std::swap(feature_order[i], feature_order[j]);
        }
      }
      for (size_t t = 0; t < tries; ++t) {
        const size_t f = params.max_features > 0 && params.max_features < nf
                             ? feature_order[t]
                             : t;
        if (data.feature_levels[f] == 0) {
          SearchNumerical(data, f, item.rows, min_leaf, total, &best);
        } else {
          SearchCategorical(data, f, item.rows, min_leaf, total, &best);
        }
      }
    }

    const double gain = parent - best.score;
    if (!best.found || !(gain > 1e-12 * std::max(1.0, parent))) {
      TreeNode& node = tree.nodes_[item.node];
      node.leaf = static_cast<int32_t>(tree.leaf_value_.size());
      tree.leaf_value_.push_back(total.sum / total.count);
      if (params.keep_leaf_rows) {
        tree.leaf_rows_.push_back(std::move(item.rows));
      } else {
        tree.leaf_rows_.emplace_back();
      }
      continue;
    }

    TreeNode split;
    split.feature = best.feature;
    split.threshold = best.threshold;
    split.goes_left = std::move(best.goes_left);
    std::vector<uint32_t> left_rows, right_rows;
    const std::vector<double>& x = data.features[split.feature];
    for (uint32_t r : item.rows) {
      (GoesLeft(split, x[r]) ? left_rows : right_rows).push_back(r);
    }
    split.left = static_cast<int32_t>(tree.nodes_.size());
    split.right = split.left + 1;
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    tree.nodes_[item.node] = std::move(split);
    const int32_t left_id = tree.nodes_[item.node].left;
    const int32_t right_id = tree.nodes_[item.node].right;
    stack.push_back({right_id, item.depth + 1, std::move(right_rows)});
    stack.push_back({left_id, item.depth + 1, std::move(left_rows)});
  }
  return tree;
}

int32_t DecisionTree::FindLeaf(std::span<const double> x) const {
  int32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const TreeNode& node = nodes_[id];
    id = GoesLeft(node, x[node.feature]) ? node.left : node.right;
  }
  return nodes_[id].leaf;
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].feature >= 0) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
      best = std::max(best, d[i] + 1);
    }
  }
  return best;
}

nlohmann::json DecisionTree::ToJson() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& node : nodes_) {
    nlohmann::json j;
    if (node.feature < 0) {
      j["leaf"] = node.leaf;
    } else {
      j["feature"] = node.feature;
      if (node.goes_left.empty()) {
        j["threshold"] = node.threshold;
      } else {
        j["left_categories"] = node.goes_left;
      }
      j["left"] = node.left;
      j["right"] = node.right;
    }
    nodes.push_back(std::move(j));
  }
  return {{"nodes", nodes},
          {"leaf_values", leaf_value_},
          {"leaf_rows", leaf_rows_}};
}

DecisionTree DecisionTree::FromJson(const nlohmann::json& j) {
  DecisionTree tree;
  for (const auto& jn : j.at("nodes")) {
    TreeNode node;
    if (jn.contains("leaf")) {
      node.leaf = jn.at("leaf").get<int32_t>();
    } else {
      node.feature = jn.at("feature").get<int32_t>();
      if (jn.contains("threshold")) {
        node.threshold = jn.at("threshold").get<double>();
      } else {
        node.goes_left = jn.at("left_categories").get<std::vector<uint8_t>>();
      }
      node.left = jn.at("left").get<int32_t>();
      node.right = jn.at("right").get<int32_t>();
    }
    tree.nodes_.push_back(std::move(node));
  }
  tree.leaf_value_ = j.at("leaf_values").get<std::vector<double>>();
  tree.leaf_rows_ = j.at("leaf_rows").get<std::vector<std::vector<uint32_t>>>();
  const auto nodes = static_cast<int32_t>(tree.nodes_.size());
  const auto leaves = static_cast<int32_t>(tree.leaf_value_.size());
  for (const TreeNode& node : tree.nodes_) {
    const bool bad_leaf = node.feature < 0 && (node.leaf < 0 || node.leaf >= leaves);
    const bool bad_split =
        node.feature >= 0 && (node.left <= 0 || node.left >= nodes ||
                              node.right <= 0 || node.right >= nodes);
    if (bad_leaf || bad_split) throw DataError("tree: malformed node");
  }
  return tree;
}

}  // namespace dgm
