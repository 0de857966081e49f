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

#ifndef DGM_GENERATOR_H_
#define DGM_GENERATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dgm/cart.h"
#include "dgm/table.h"

namespace dgm {

enum class GeneratorKind { kMarginal, kCartSequential, kBayesNet, kDpMarginal };

std::string_view GeneratorKindName(GeneratorKind kind);
GeneratorKind ParseGeneratorKind(std::string_view name);

struct CartConfig {
  size_t min_leaf = 5;
  int max_depth = 12;
  // Column visit order by name; empty means schema order.
  std::vector<std::string> visit_order;
};

struct BayesNetConfig {
  size_t max_parents = 2;
  size_t bins = 10;
  // Enables Laplace noise on the conditional tables when set.
  std::optional<double> epsilon;
};

struct DpConfig {
  double epsilon = 1.0;
  size_t bins = 10;
};

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::kCartSequential;
  // Generated rows per target output row.
  double oversample_factor = 3.0;
  CartConfig cart;
  BayesNetConfig bn;
  DpConfig dp;
  uint64_t seed = 0;

  void Validate() const;
};

GeneratorConfig GeneratorConfigFromJson(const nlohmann::json& j);
nlohmann::json GeneratorConfigToJson(const GeneratorConfig& config);

// A trained synthesizer for one column subset.
class FittedGenerator {
 public:
  virtual ~FittedGenerator() = default;

  virtual GeneratorKind kind() const = 0;
  const std::vector<ColumnMeta>& schema() const { return schema_; }

  // Exactly m rows with the fitted schema. Deterministic per seed.
  virtual DataTable Sample(size_t m, uint64_t seed) const = 0;
  virtual nlohmann::json ToJson() const = 0;

 protected:
  explicit FittedGenerator(std::vector<ColumnMeta> schema)
      : schema_(std::move(schema)) {}

  std::vector<ColumnMeta> schema_;
};

std::unique_ptr<FittedGenerator> FitGenerator(const DataTable& data,
                                              const GeneratorConfig& config);
std::unique_ptr<FittedGenerator> GeneratorFromJson(const nlohmann::json& j);
void SaveGenerator(const FittedGenerator& gen, const std::string& path);
std::unique_ptr<FittedGenerator> LoadGenerator(const std::string& path);

// Equal-width discretization used by the histogram-based generators.
struct Discretizer {
  bool categorical = false;
  size_t levels = 1;
  double lo = 0.0;
  double width = 0.0;

  static Discretizer Fit(const Column& column, size_t bins);
  size_t Bin(double value) const;
  // Uniform draw inside a bin; categorical codes pass through.
  double Draw(size_t level, SeededRng& rng) const;
};

// Independent per-column bootstrap.
class MarginalGenerator : public FittedGenerator {
 public:
  static std::unique_ptr<MarginalGenerator> Fit(const DataTable& data);

  GeneratorKind kind() const override { return GeneratorKind::kMarginal; }
  DataTable Sample(size_t m, uint64_t seed) const override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<MarginalGenerator> FromJson(const nlohmann::json& j);

  // Empirical category probabilities (categorical columns only).
  const std::vector<double>& probabilities(size_t col) const {
    return probabilities_[col];
  }

 private:
  using FittedGenerator::FittedGenerator;

  std::vector<std::vector<double>> probabilities_;
  std::vector<std::vector<double>> values_;
};

// Sequential CART synthesis: the first visited column is drawn from its
// empirical marginal; every later column is drawn from the training values
// in the leaf reached by a tree fitted on the preceding columns.
class CartSequentialGenerator : public FittedGenerator {
 public:
  static std::unique_ptr<CartSequentialGenerator> Fit(const DataTable& data,
                                                      const CartConfig& config,
                                                      uint64_t seed);

  GeneratorKind kind() const override { return GeneratorKind::kCartSequential; }
  DataTable Sample(size_t m, uint64_t seed) const override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<CartSequentialGenerator> FromJson(
      const nlohmann::json& j);

  const std::vector<size_t>& visit_order() const { return order_; }
  // Tree predicting the t-th visited column (t >= 1).
  const DecisionTree& tree(size_t t) const { return trees_[t - 1]; }

 private:
  using FittedGenerator::FittedGenerator;

  std::vector<size_t> order_;
  // Training values of each visited column, in visit order.
  std::vector<std::vector<double>> targets_;
  std::vector<DecisionTree> trees_;
};

// Greedy Bayesian network over discretized columns, sampled ancestrally.
class BayesNetGenerator : public FittedGenerator {
 public:
  struct Node {
    size_t column = 0;
    std::vector<size_t> parents;
    // configs x levels; rows indexed by mixed-radix parent configuration.
    std::vector<double> conditional;
    size_t configs = 1;
  };

  static std::unique_ptr<BayesNetGenerator> Fit(const DataTable& data,
                                                const BayesNetConfig& config,
                                                uint64_t seed);

  GeneratorKind kind() const override { return GeneratorKind::kBayesNet; }
  DataTable Sample(size_t m, uint64_t seed) const override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<BayesNetGenerator> FromJson(const nlohmann::json& j);

  // Nodes in insertion (ancestral) order.
  const std::vector<Node>& nodes() const { return nodes_; }
  // Candidate (attribute, parent set) pairs scored during structure search.
  uint64_t evaluations() const { return evaluations_; }

 private:
  using FittedGenerator::FittedGenerator;

  std::vector<Discretizer> discretizers_;
  std::vector<Node> nodes_;
  uint64_t evaluations_ = 0;
};

// Independent per-column histograms with Laplace noise, clamped at zero and
// renormalized. Numerical columns are binned and de-discretized uniformly.
class DpMarginalGenerator : public FittedGenerator {
 public:
  static std::unique_ptr<DpMarginalGenerator> Fit(const DataTable& data,
                                                  const DpConfig& config,
                                                  uint64_t seed);

  GeneratorKind kind() const override { return GeneratorKind::kDpMarginal; }
  DataTable Sample(size_t m, uint64_t seed) const override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<DpMarginalGenerator> FromJson(const nlohmann::json& j);

  const std::vector<double>& histogram(size_t col) const {
    return noisy_[col];
  }
  const std::vector<double>& empirical_histogram(size_t col) const {
    return empirical_[col];
  }

 private:
  using FittedGenerator::FittedGenerator;

  std::vector<Discretizer> discretizers_;
  std::vector<std::vector<double>> empirical_;
  std::vector<std::vector<double>> noisy_;
};

// Number of (attribute, parent set) candidates the greedy structure search
// scores on one partition of `columns` attributes.
uint64_t GreedyBayesCost(size_t columns, size_t max_parents);

// Total over n_p near-equal partitions (sizes as in RandomPartition).
uint64_t StructureSearchCost(size_t k, size_t num_partitions,
                             size_t max_parents);

}  // namespace dgm

#endif  // DGM_GENERATOR_H_
