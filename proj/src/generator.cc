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

#include "dgm/generator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "dgm/error.h"
#include "dgm/rng.h"

namespace dgm {
namespace {

using json = nlohmann::json;

json SchemaToJson(const std::vector<ColumnMeta>& schema) {
  json out = json::array();
  for (const ColumnMeta& m : schema) {
    json j = {{"name", m.name}, {"kind", std::string(ColumnKindName(m.kind))}};
    if (m.is_categorical()) {
      j["categories"] = m.categories;
    } else {
      j["min"] = m.min;
      j["max"] = m.max;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<ColumnMeta> SchemaFromJson(const json& j) {
  std::vector<ColumnMeta> out;
  for (const auto& jc : j) {
    ColumnMeta m;
    m.name = jc.at("name").get<std::string>();
    m.kind = ParseColumnKind(jc.at("kind").get<std::string>());
    if (m.is_categorical()) {
      m.categories = jc.at("categories").get<std::vector<std::string>>();
    } else {
      m.min = jc.at("min").get<double>();
      m.max = jc.at("max").get<double>();
    }
    m.Validate();
    out.push_back(std::move(m));
  }
  return out;
}

json DiscretizerToJson(const Discretizer& d) {
  return {{"categorical", d.categorical},
          {"levels", d.levels},
          {"lo", d.lo},
          {"width", d.width}};
}

Discretizer DiscretizerFromJson(const json& j) {
  Discretizer d;
  d.categorical = j.at("categorical").get<bool>();
  d.levels = j.at("levels").get<size_t>();
  d.lo = j.at("lo").get<double>();
  d.width = j.at("width").get<double>();
  return d;
}

// Output columns in schema order from per-column cell buffers.
DataTable AssembleTable(const std::vector<ColumnMeta>& schema,
                        std::vector<std::vector<double>> cells) {
  std::vector<Column> columns;
  columns.reserve(schema.size());
  for (size_t j = 0; j < schema.size(); ++j) {
    Column col;
    col.meta = schema[j];
    if (col.meta.is_categorical()) {
      col.codes.reserve(cells[j].size());
      for (double v : cells[j]) col.codes.push_back(static_cast<int32_t>(v));
    } else {
      col.numbers = std::move(cells[j]);
    }
    columns.push_back(std::move(col));
  }
  return DataTable(std::move(columns));
}

void Normalize(std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) total += v;
  if (total > 0.0) {
    for (double& v : p) v /= total;
  } else {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
  }
}

void CheckFitInput(const DataTable& data) {
  if (data.num_rows() == 0) throw DataError("fit: empty table");
  if (data.num_cols() == 0) throw DataError("fit: table has no columns");
}

uint64_t Binomial(uint64_t n, uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  uint64_t out = 1;
  for (uint64_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
  }
  return out;
}

}  // namespace

std::string_view GeneratorKindName(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kMarginal:
      return "marginal";
    case GeneratorKind::kCartSequential:
      return "cart_sequential";
    case GeneratorKind::kBayesNet:
      return "bayes_net";
    case GeneratorKind::kDpMarginal:
      return "dp_marginal";
  }
  return "unknown";
}

GeneratorKind ParseGeneratorKind(std::string_view name) {
  if (name == "marginal") return GeneratorKind::kMarginal;
  if (name == "cart_sequential") return GeneratorKind::kCartSequential;
  if (name == "bayes_net") return GeneratorKind::kBayesNet;
  if (name == "dp_marginal") return GeneratorKind::kDpMarginal;
  throw ConfigError("unknown generator kind '" + std::string(name) + "'");
}

void GeneratorConfig::Validate() const {
  if (!(oversample_factor >= 1.0)) {
    throw ConfigError("generator: oversample_factor must be >= 1");
  }
  if (cart.min_leaf < 1) throw ConfigError("generator: cart.min_leaf must be >= 1");
  if (cart.max_depth < 0) throw ConfigError("generator: cart.max_depth must be >= 0");
  if (bn.max_parents < 1) throw ConfigError("generator: bn.max_parents must be >= 1");
  if (bn.bins < 2) throw ConfigError("generator: bn.bins must be >= 2");
  if (bn.epsilon && !(*bn.epsilon > 0.0)) {
    throw ConfigError("generator: bn.epsilon must be > 0");
  }
  if (!(dp.epsilon > 0.0)) throw ConfigError("generator: dp.epsilon must be > 0");
  if (dp.bins < 2) throw ConfigError("generator: dp.bins must be >= 2");
}

GeneratorConfig GeneratorConfigFromJson(const json& j) {
  GeneratorConfig c;
  try {
    if (j.contains("kind")) c.kind = ParseGeneratorKind(j.at("kind").get<std::string>());
    c.oversample_factor = j.value("oversample_factor", c.oversample_factor);
    c.seed = j.value("seed", c.seed);
    if (j.contains("cart")) {
      const json& jc = j.at("cart");
      c.cart.min_leaf = jc.value("min_leaf", c.cart.min_leaf);
      c.cart.max_depth = jc.value("max_depth", c.cart.max_depth);
      c.cart.visit_order = jc.value("visit_order", c.cart.visit_order);
    }
    if (j.contains("bn")) {
      const json& jb = j.at("bn");
      c.bn.max_parents = jb.value("max_parents", c.bn.max_parents);
      c.bn.bins = jb.value("bins", c.bn.bins);
      if (jb.contains("epsilon") && !jb.at("epsilon").is_null()) {
        c.bn.epsilon = jb.at("epsilon").get<double>();
      }
    }
    if (j.contains("dp")) {
      const json& jd = j.at("dp");
      c.dp.epsilon = jd.value("epsilon", c.dp.epsilon);
      c.dp.bins = jd.value("bins", c.dp.bins);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  c.Validate();
  return c;
}

json GeneratorConfigToJson(const GeneratorConfig& c) {
  json bn = {{"max_parents", c.bn.max_parents}, {"bins", c.bn.bins}};
  bn["epsilon"] = c.bn.epsilon ? json(*c.bn.epsilon) : json(nullptr);
  return {{"kind", std::string(GeneratorKindName(c.kind))},
          {"oversample_factor", c.oversample_factor},
          {"seed", c.seed},
          {"cart",
           {{"min_leaf", c.cart.min_leaf},
            {"max_depth", c.cart.max_depth},
            {"visit_order", c.cart.visit_order}}},
          {"bn", bn},
          {"dp", {{"epsilon", c.dp.epsilon}, {"bins", c.dp.bins}}}};
}

// ---------------------------------------------------------------------------
// Discretizer

Discretizer Discretizer::Fit(const Column& column, size_t bins) {
  Discretizer d;
  if (column.meta.is_categorical()) {
    d.categorical = true;
    d.levels = column.meta.num_categories();
    return d;
  }
  const auto& v = column.numbers;
  if (v.empty()) return d;
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  d.lo = *mn;
  if (*mx > *mn) {
    d.levels = bins;
    d.width = (*mx - *mn) / static_cast<double>(bins);
  }
  return d;
}

size_t Discretizer::Bin(double value) const {
  if (categorical) return static_cast<size_t>(value);
  if (levels <= 1 || width <= 0.0) return 0;
  const double pos = std::floor((value - lo) / width);
  if (pos < 0.0) return 0;
  return std::min(levels - 1, static_cast<size_t>(pos));
}

double Discretizer::Draw(size_t level, SeededRng& rng) const {
  if (categorical) return static_cast<double>(level);
  if (levels <= 1 || width <= 0.0) return lo;
  return lo + (static_cast<double>(level) + rng.Uniform()) * width;
}

// ---------------------------------------------------------------------------
// Marginal

std::unique_ptr<MarginalGenerator> MarginalGenerator::Fit(const DataTable& data) {
  CheckFitInput(data);
  std::unique_ptr<MarginalGenerator> gen(new MarginalGenerator(data.schema()));
  const double n = static_cast<double>(data.num_rows());
  for (const Column& col : data.columns()) {
    if (col.meta.is_categorical()) {
      std::vector<double> p(col.meta.num_categories(), 0.0);
      for (int32_t c : col.codes) p[c] += 1.0;
      for (double& v : p) v /= n;
      gen->probabilities_.push_back(std::move(p));
      gen->values_.emplace_back();
    } else {
      gen->probabilities_.emplace_back();
      gen->values_.push_back(col.numbers);
    }
  }
  return gen;
}

DataTable MarginalGenerator::Sample(size_t m, uint64_t seed) const {
  std::vector<std::vector<double>> cells(schema_.size());
  for (size_t j = 0; j < schema_.size(); ++j) {
    SeededRng rng(seed, j);
    cells[j].resize(m);
    for (size_t i = 0; i < m; ++i) {
      if (schema_[j].is_categorical()) {
        cells[j][i] = static_cast<double>(rng.Categorical(probabilities_[j]));
      } else {
        cells[j][i] = values_[j][rng.UniformIndex(values_[j].size())];
      }
    }
  }
  return AssembleTable(schema_, std::move(cells));
}

json MarginalGenerator::ToJson() const {
  return {{"kind", "marginal"},
          {"schema", SchemaToJson(schema_)},
          {"probabilities", probabilities_},
          {"values", values_}};
}

std::unique_ptr<MarginalGenerator> MarginalGenerator::FromJson(const json& j) {
  std::unique_ptr<MarginalGenerator> gen(
      new MarginalGenerator(SchemaFromJson(j.at("schema"))));
  gen->probabilities_ = j.at("probabilities").get<std::vector<std::vector<double>>>();
  gen->values_ = j.at("values").get<std::vector<std::vector<double>>>();
  if (gen->probabilities_.size() != gen->schema_.size() ||
      gen->values_.size() != gen->schema_.size()) {
    throw DataError("marginal model: column count mismatch");
  }
  return gen;
}

// ---------------------------------------------------------------------------
// Sequential CART

std::unique_ptr<CartSequentialGenerator> CartSequentialGenerator::Fit(
    const DataTable& data, const CartConfig& config, uint64_t seed) {
  CheckFitInput(data);
  std::unique_ptr<CartSequentialGenerator> gen(
      new CartSequentialGenerator(data.schema()));
  const size_t k = data.num_cols();
  if (config.visit_order.empty()) {
    gen->order_.resize(k);
    std::iota(gen->order_.begin(), gen->order_.end(), size_t{0});
  } else {
    std::vector<bool> seen(k, false);
    for (const std::string& name : config.visit_order) {
      const size_t j = data.ColumnIndex(name);
      if (seen[j]) throw ConfigError("visit_order repeats \"" + name + "\"");
      seen[j] = true;
      gen->order_.push_back(j);
    }
    if (gen->order_.size() != k) {
      throw ConfigError("visit_order must list every column exactly once");
    }
  }
  for (size_t j : gen->order_) gen->targets_.push_back(data.column(j).AsDoubles());

  TreeParams params;
  params.max_depth = config.max_depth;
  params.min_leaf = config.min_leaf;
  std::vector<uint32_t> rows(data.num_rows());
  std::iota(rows.begin(), rows.end(), uint32_t{0});
  SeededRng rng(seed, 0xca27);
  for (size_t t = 1; t < k; ++t) {
    std::span<const size_t> preceding(gen->order_.data(), t);
    const TreeData tree_data =
        TreeData::FromTable(data, preceding, gen->order_[t]);
    gen->trees_.push_back(DecisionTree::Fit(tree_data, rows, params, rng));
  }
  return gen;
}

DataTable CartSequentialGenerator::Sample(size_t m, uint64_t seed) const {
  const size_t k = order_.size();
  SeededRng rng(seed, 0x5a3e);
  std::vector<std::vector<double>> by_visit(k, std::vector<double>(m));
  std::vector<double> x(k);
  const size_t n = targets_.empty() ? 0 : targets_[0].size();
  for (size_t i = 0; i < m; ++i) {
    x[0] = targets_[0][rng.UniformIndex(n)];
    for (size_t t = 1; t < k; ++t) {
      const DecisionTree& tree = trees_[t - 1];
      const int32_t leaf = tree.FindLeaf(std::span<const double>(x.data(), t));
      const std::vector<uint32_t>& donors = tree.leaf_rows(leaf);
      x[t] = targets_[t][donors[rng.UniformIndex(donors.size())]];
    }
    for (size_t t = 0; t < k; ++t) by_visit[t][i] = x[t];
  }
  std::vector<std::vector<double>> cells(k);
  for (size_t t = 0; t < k; ++t) cells[order_[t]] = std::move(by_visit[t]);
  return AssembleTable(schema_, std::move(cells));
}

json CartSequentialGenerator::ToJson() const {
  json trees = json::array();
  for (const DecisionTree& tree : trees_) trees.push_back(tree.ToJson());
  return {{"kind", "cart_sequential"},
          {"schema", SchemaToJson(schema_)},
          {"visit_order", order_},
          {"targets", targets_},
          {"trees", trees}};
}

std::unique_ptr<CartSequentialGenerator> CartSequentialGenerator::FromJson(
    const json& j) {
  std::unique_ptr<CartSequentialGenerator> gen(
      new CartSequentialGenerator(SchemaFromJson(j.at("schema"))));
  gen->order_ = j.at("visit_order").get<std::vector<size_t>>();
  gen->targets_ = j.at("targets").get<std::vector<std::vector<double>>>();
  for (const auto& jt : j.at("trees")) {
    gen->trees_.push_back(DecisionTree::FromJson(jt));
  }
  const size_t k = gen->schema_.size();
  if (gen->order_.size() != k || gen->targets_.size() != k ||
      gen->trees_.size() + 1 != std::max<size_t>(k, 1)) {
    throw DataError("cart model: inconsistent sizes");
  }
  return gen;
}

// ---------------------------------------------------------------------------
// Bayesian network

std::unique_ptr<BayesNetGenerator> BayesNetGenerator::Fit(
    const DataTable& data, const BayesNetConfig& config, uint64_t seed) {
  CheckFitInput(data);
  std::unique_ptr<BayesNetGenerator> gen(new BayesNetGenerator(data.schema()));
  const size_t k = data.num_cols();
  const size_t n = data.num_rows();
  std::vector<std::vector<size_t>> codes(k, std::vector<size_t>(n));
  std::vector<size_t> levels(k);
  for (size_t j = 0; j < k; ++j) {
    gen->discretizers_.push_back(Discretizer::Fit(data.column(j), config.bins));
    levels[j] = gen->discretizers_[j].levels;
    for (size_t i = 0; i < n; ++i) {
      codes[j][i] = gen->discretizers_[j].Bin(data.value(i, j));
    }
  }

  auto config_index = [&](const std::vector<size_t>& parents, size_t row) {
    size_t idx = 0;
    for (size_t p : parents) idx = idx * levels[p] + codes[p][row];
    return idx;
  };
  auto config_count = [&](const std::vector<size_t>& parents) {
    size_t c = 1;
    for (size_t p : parents) c *= levels[p];
    return c;
  };
  auto mutual_information = [&](size_t child, const std::vector<size_t>& parents) {
    const size_t configs = config_count(parents);
    const size_t lc = levels[child];
    std::vector<double> joint(configs * lc, 0.0), pc(configs, 0.0), px(lc, 0.0);
    for (size_t i = 0; i < n; ++i) {
      const size_t c = config_index(parents, i);
      joint[c * lc + codes[child][i]] += 1.0;
      pc[c] += 1.0;
      px[codes[child][i]] += 1.0;
    }
    const double total = static_cast<double>(n);
    double mi = 0.0;
    for (size_t c = 0; c < configs; ++c) {
      for (size_t x = 0; x < lc; ++x) {
        const double v = joint[c * lc + x];
        if (v > 0) mi += v / total * std::log(v * total / (pc[c] * px[x]));
      }
    }
    return mi;
  };

  // Greedy structure search: every remaining attribute is scored against
  // every parent set of size min(max_parents, |included|).
  SeededRng rng(seed, 0xb4e7);
  std::vector<size_t> included = {rng.UniformIndex(k)};
  std::vector<bool> in_net(k, false);
  in_net[included[0]] = true;
  gen->nodes_.push_back(Node{included[0], {}, {}, 1});
  while (included.size() < k) {
    std::vector<size_t> pool = included;
    std::sort(pool.begin(), pool.end());
    const size_t r = std::min(config.max_parents, pool.size());
    double best_mi = -std::numeric_limits<double>::infinity();
    size_t best_attr = 0;
    std::vector<size_t> best_parents;
    for (size_t a = 0; a < k; ++a) {
      if (in_net[a]) continue;
      std::vector<size_t> pick(r);
      std::iota(pick.begin(), pick.end(), size_t{0});
      while (true) {
        std::vector<size_t> parents(r);
        for (size_t t = 0; t < r; ++t) parents[t] = pool[pick[t]];
        const double mi = mutual_information(a, parents);
        ++gen->evaluations_;
        if (mi > best_mi) {
          best_mi = mi;
          best_attr = a;
          best_parents = parents;
        }
        // Next combination in lexicographic order.
        size_t t = r;
        while (t > 0 && pick[t - 1] == pool.size() - r + t - 1) --t;
        if (t == 0) break;
        ++pick[t - 1];
        for (size_t u = t; u < r; ++u) pick[u] = pick[u - 1] + 1;
      }
    }
    in_net[best_attr] = true;
    included.push_back(best_attr);
    gen->nodes_.push_back(Node{best_attr, best_parents, {}, 1});
  }

  const double noise_scale =
      config.epsilon ? 2.0 * static_cast<double>(k) /
                           (static_cast<double>(n) * *config.epsilon)
                     : 0.0;
  SeededRng noise(seed, 0x1a91);
  for (Node& node : gen->nodes_) {
    node.configs = config_count(node.parents);
    const size_t lc = levels[node.column];
    std::vector<double> joint(node.configs * lc, 0.0);
    for (size_t i = 0; i < n; ++i) {
      joint[config_index(node.parents, i) * lc + codes[node.column][i]] +=
          1.0 / static_cast<double>(n);
    }
    if (noise_scale > 0.0) {
      for (double& v : joint) v = std::max(0.0, v + noise.Laplace(noise_scale));
    }
    for (size_t c = 0; c < node.configs; ++c) {
      std::vector<double> row(joint.begin() + c * lc, joint.begin() + (c + 1) * lc);
      Normalize(row);
      std::copy(row.begin(), row.end(), joint.begin() + c * lc);
    }
    node.conditional = std::move(joint);
  }
  return gen;
}

DataTable BayesNetGenerator::Sample(size_t m, uint64_t seed) const {
  const size_t k = schema_.size();
  SeededRng rng(seed, 0xbe5a);
  std::vector<std::vector<double>> cells(k, std::vector<double>(m));
  std::vector<size_t> level(k);
  for (size_t i = 0; i < m; ++i) {
    for (const Node& node : nodes_) {
      size_t c = 0;
      for (size_t p : node.parents) c = c * discretizers_[p].levels + level[p];
      const size_t lc = discretizers_[node.column].levels;
      std::span<const double> row(node.conditional.data() + c * lc, lc);
      level[node.column] = rng.Categorical(row);
      cells[node.column][i] = discretizers_[node.column].Draw(level[node.column], rng);
    }
  }
  return AssembleTable(schema_, std::move(cells));
}

json BayesNetGenerator::ToJson() const {
  json nodes = json::array();
  for (const Node& node : nodes_) {
    nodes.push_back({{"column", node.column},
                     {"parents", node.parents},
                     {"configs", node.configs},
                     {"conditional", node.conditional}});
  }
  json disc = json::array();
  for (const Discretizer& d : discretizers_) disc.push_back(DiscretizerToJson(d));
  return {{"kind", "bayes_net"},
          {"schema", SchemaToJson(schema_)},
          {"discretizers", disc},
          {"nodes", nodes},
          {"evaluations", evaluations_}};
}

std::unique_ptr<BayesNetGenerator> BayesNetGenerator::FromJson(const json& j) {
  std::unique_ptr<BayesNetGenerator> gen(
      new BayesNetGenerator(SchemaFromJson(j.at("schema"))));
  for (const auto& jd : j.at("discretizers")) {
    gen->discretizers_.push_back(DiscretizerFromJson(jd));
  }
  for (const auto& jn : j.at("nodes")) {
    Node node;
    node.column = jn.at("column").get<size_t>();
    node.parents = jn.at("parents").get<std::vector<size_t>>();
    node.configs = jn.at("configs").get<size_t>();
    node.conditional = jn.at("conditional").get<std::vector<double>>();
    gen->nodes_.push_back(std::move(node));
  }
  gen->evaluations_ = j.value("evaluations", uint64_t{0});
  const size_t k = gen->schema_.size();
  if (gen->discretizers_.size() != k || gen->nodes_.size() != k) {
    throw DataError("bayes_net model: inconsistent sizes");
  }
  for (const Node& node : gen->nodes_) {
    if (node.column >= k ||
        node.conditional.size() != node.configs * gen->discretizers_[node.column].levels) {
      throw DataError("bayes_net model: malformed node");
    }
  }
  return gen;
}

// ---------------------------------------------------------------------------
// DP marginal

std::unique_ptr<DpMarginalGenerator> DpMarginalGenerator::Fit(
    const DataTable& data, const DpConfig& config, uint64_t seed) {
  CheckFitInput(data);
  std::unique_ptr<DpMarginalGenerator> gen(
      new DpMarginalGenerator(data.schema()));
  const size_t k = data.num_cols();
  const double n = static_cast<double>(data.num_rows());
  // The budget is split evenly over the k histograms; replacing one record
  // moves a normalized histogram by at most 2/n in L1.
  const double scale = 2.0 * static_cast<double>(k) / (n * config.epsilon);
  SeededRng noise(seed, 0xd9a1);
  for (size_t j = 0; j < k; ++j) {
    Discretizer d = Discretizer::Fit(data.column(j), config.bins);
    std::vector<double> hist(d.levels, 0.0);
    for (size_t i = 0; i < data.num_rows(); ++i) {
      hist[d.Bin(data.value(i, j))] += 1.0 / n;
    }
    std::vector<double> noisy = hist;
    for (double& v : noisy) v = std::max(0.0, v + noise.Laplace(scale));
    Normalize(noisy);
    gen->discretizers_.push_back(d);
    gen->empirical_.push_back(std::move(hist));
    gen->noisy_.push_back(std::move(noisy));
  }
  return gen;
}

DataTable DpMarginalGenerator::Sample(size_t m, uint64_t seed) const {
  std::vector<std::vector<double>> cells(schema_.size());
  for (size_t j = 0; j < schema_.size(); ++j) {
    SeededRng rng(seed, j);
    cells[j].resize(m);
    for (size_t i = 0; i < m; ++i) {
      cells[j][i] = discretizers_[j].Draw(rng.Categorical(noisy_[j]), rng);
    }
  }
  return AssembleTable(schema_, std::move(cells));
}

json DpMarginalGenerator::ToJson() const {
  json disc = json::array();
  for (const Discretizer& d : discretizers_) disc.push_back(DiscretizerToJson(d));
  return {{"kind", "dp_marginal"},
          {"schema", SchemaToJson(schema_)},
          {"discretizers", disc},
          {"empirical", empirical_},
          {"histograms", noisy_}};
}

std::unique_ptr<DpMarginalGenerator> DpMarginalGenerator::FromJson(
    const json& j) {
  std::unique_ptr<DpMarginalGenerator> gen(
      new DpMarginalGenerator(SchemaFromJson(j.at("schema"))));
  for (const auto& jd : j.at("discretizers")) {
    gen->discretizers_.push_back(DiscretizerFromJson(jd));
  }
  gen->empirical_ = j.at("empirical").get<std::vector<std::vector<double>>>();
  gen->noisy_ = j.at("histograms").get<std::vector<std::vector<double>>>();
  const size_t k = gen->schema_.size();
  if (gen->discretizers_.size() != k || gen->noisy_.size() != k) {
    throw DataError("dp_marginal model: inconsistent sizes");
  }
  for (size_t c = 0; c < k; ++c) {
    if (gen->noisy_[c].size() != gen->discretizers_[c].levels) {
      throw DataError("dp_marginal model: histogram size mismatch");
    }
  }
  return gen;
}

// ---------------------------------------------------------------------------

std::unique_ptr<FittedGenerator> FitGenerator(const DataTable& data,
                                              const GeneratorConfig& config) {
  config.Validate();
  switch (config.kind) {
    case GeneratorKind::kMarginal:
      return MarginalGenerator::Fit(data);
    case GeneratorKind::kCartSequential:
      return CartSequentialGenerator::Fit(data, config.cart, config.seed);
    case GeneratorKind::kBayesNet:
      return BayesNetGenerator::Fit(data, config.bn, config.seed);
    case GeneratorKind::kDpMarginal:
      return DpMarginalGenerator::Fit(data, config.dp, config.seed);
  }
  throw ConfigError("unknown generator kind");
}

std::unique_ptr<FittedGenerator> GeneratorFromJson(const json& j) {
  try {
    switch (ParseGeneratorKind(j.at("kind").get<std::string>())) {
      case GeneratorKind::kMarginal:
        return MarginalGenerator::FromJson(j);
      case GeneratorKind::kCartSequential:
        return CartSequentialGenerator::FromJson(j);
      case GeneratorKind::kBayesNet:
        return BayesNetGenerator::FromJson(j);
      case GeneratorKind::kDpMarginal:
        return DpMarginalGenerator::FromJson(j);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  throw DataError("model file: unknown kind");
}

void SaveGenerator(const FittedGenerator& gen, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << gen.ToJson().dump() << '\n';
}

std::unique_ptr<FittedGenerator> LoadGenerator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  return GeneratorFromJson(j);
}

uint64_t GreedyBayesCost(size_t columns, size_t max_parents) {
  uint64_t total = 0;
  for (size_t t = 1; t < columns; ++t) {
    total += static_cast<uint64_t>(columns - t) *
             Binomial(t, std::min(max_parents, t));
  }
  return total;
}

uint64_t StructureSearchCost(size_t k, size_t num_partitions,
                             size_t max_parents) {
  if (num_partitions < 1 || num_partitions > k) {
    throw ConfigError("structure_search_cost: need 1 <= n_p <= k");
  }
  const size_t base = k / num_partitions;
  const size_t extra = k % num_partitions;
  uint64_t total = 0;
  for (size_t p = 0; p < num_partitions; ++p) {
    total += GreedyBayesCost(base + (p < extra ? 1 : 0), max_parents);
  }
  return total;
}

}  // namespace dgm
