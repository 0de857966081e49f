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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <set>

#include "dgm/correlation.h"
#include "dgm/error.h"
#include "dgm/generator.h"
#include "dgm/metrics.h"
#include "dgm/rng.h"
#include "test_util.h"

namespace dgm {
namespace {

GeneratorConfig Config(GeneratorKind kind, uint64_t seed = 1) {
  GeneratorConfig c;
  c.kind = kind;
  c.seed = seed;
  return c;
}

DataTable Binary(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("a", {"0", "1"}, a));
  cols.push_back(Column::Categorical("b", {"0", "1"}, b));
  return DataTable(std::move(cols));
}

TEST(Marginal, LearnsFrequencies) {
  std::vector<int32_t> codes(10, 0);
  codes[7] = codes[8] = codes[9] = 1;
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("c", {"A", "B"}, codes));
  const auto gen = MarginalGenerator::Fit(DataTable(std::move(cols)));
  EXPECT_NEAR(gen->probabilities(0)[0], 0.7, 1e-15);
  EXPECT_NEAR(gen->probabilities(0)[1], 0.3, 1e-15);
}

TEST(Marginal, ConstantColumn) {
  const auto gen = FitGenerator(testing::NumericTable({{4.2, 4.2, 4.2}}),
                                Config(GeneratorKind::kMarginal));
  const DataTable s = gen->Sample(5, 3);
  ASSERT_EQ(s.num_rows(), 5u);
  for (size_t r = 0; r < 5; ++r) EXPECT_EQ(s.value(r, 0), 4.2);
}

TEST(BayesNet, LinksPerfectlyCorrelatedColumns) {
  SeededRng rng(2);
  std::vector<int32_t> a(400), c(400);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int32_t>(rng.UniformIndex(2));
    c[i] = static_cast<int32_t>(rng.UniformIndex(2));
  }
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("a", {"0", "1"}, a));
  cols.push_back(Column::Categorical("c", {"0", "1"}, c));
  cols.push_back(Column::Categorical("b", {"0", "1"}, a));
  const DataTable t(std::move(cols));

  // Direct mutual information: I(a;b) = H(a) > I(a;c), I(b;c).
  auto mi = [&](size_t x, size_t y) {
    double p[2][2] = {{0, 0}, {0, 0}};
    const double n = static_cast<double>(t.num_rows());
    for (size_t r = 0; r < t.num_rows(); ++r) {
      p[t.column(x).codes[r]][t.column(y).codes[r]] += 1 / n;
    }
    double s = 0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double px = p[i][0] + p[i][1], py = p[0][j] + p[1][j];
        if (p[i][j] > 0) s += p[i][j] * std::log(p[i][j] / (px * py));
      }
    }
    return s;
  };
  ASSERT_GT(mi(0, 2), mi(0, 1));
  ASSERT_GT(mi(0, 2), mi(1, 2));

  for (uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg = Config(GeneratorKind::kBayesNet, seed);
    cfg.bn.max_parents = 1;
    const auto gen = BayesNetGenerator::Fit(t, cfg.bn, seed);
    bool linked = false;
    for (const auto& node : gen->nodes()) {
      for (size_t p : node.parents) {
        linked = linked || (node.column == 0 && p == 2) || (node.column == 2 && p == 0);
      }
    }
    EXPECT_TRUE(linked) << "seed " << seed;
  }
}

TEST(BayesNet, PreservesIndependence) {
  SeededRng rng(4);
  std::vector<int32_t> a(1000), b(1000);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int32_t>(rng.UniformIndex(2));
    b[i] = static_cast<int32_t>(rng.UniformIndex(2));
  }
  const auto gen = FitGenerator(Binary(a, b), Config(GeneratorKind::kBayesNet));
  const DataTable s = gen->Sample(1000, 7);
  EXPECT_LT(CramersV(s.column(0).codes, 2, s.column(1).codes, 2), 0.15);
}

TEST(BayesNet, EvaluationCountMatchesCostFormula) {
  for (size_t k = 1; k <= 7; ++k) {
    std::vector<std::vector<double>> cols(k, std::vector<double>(30));
    SeededRng rng(k);
    for (auto& c : cols) {
      for (double& v : c) v = rng.Normal();
    }
    for (size_t c = 1; c <= 3; ++c) {
      BayesNetConfig bn;
      bn.max_parents = c;
      const auto gen = BayesNetGenerator::Fit(testing::NumericTable(cols), bn, 5);
      EXPECT_EQ(gen->evaluations(), GreedyBayesCost(k, c)) << "k=" << k << " c=" << c;
    }
  }
}

TEST(StructureSearchCost, Examples) {
  EXPECT_LT(StructureSearchCost(24, 4, 2), StructureSearchCost(24, 1, 2));
  EXPECT_EQ(StructureSearchCost(2, 2, 2), 0u);
  // Two partitions of 4 columns: 3*1 + 2*2 + 1*3 per partition.
  EXPECT_EQ(StructureSearchCost(8, 2, 1), 20u);
  EXPECT_THROW(StructureSearchCost(3, 4, 2), ConfigError);
}

TEST(StructureSearchCost, MatchesSubsetEnumeration) {
  for (size_t s = 1; s <= 12; ++s) {
    for (size_t c = 1; c <= 3; ++c) {
      uint64_t count = 0;
      for (size_t t = 1; t < s; ++t) {
        const size_t want = std::min(c, t);
        uint64_t subsets = 0;
        for (uint64_t mask = 0; mask < (uint64_t{1} << t); ++mask) {
          subsets += static_cast<size_t>(std::popcount(mask)) == want;
        }
        count += (s - t) * subsets;
      }
      EXPECT_EQ(GreedyBayesCost(s, c), count);
    }
  }
}

TEST(DpMarginal, HugeEpsilonMatchesEmpirical) {
  const DataTable t = testing::CorrelatedFixture(300, 3);
  GeneratorConfig cfg = Config(GeneratorKind::kDpMarginal);
  cfg.dp.epsilon = 1e9;
  const auto gen = DpMarginalGenerator::Fit(t, cfg.dp, 1);
  for (size_t j = 0; j < t.num_cols(); ++j) {
    const auto& h = gen->histogram(j);
    const auto& e = gen->empirical_histogram(j);
    ASSERT_EQ(h.size(), e.size());
    for (size_t b = 0; b < h.size(); ++b) EXPECT_NEAR(h[b], e[b], 1e-4);
  }
}

TEST(DpMarginal, NoiseShrinksWithEpsilon) {
  const DataTable t = testing::CorrelatedFixture(200, 6);
  std::vector<double> mean_err;
  for (double eps : {0.1, 1.0, 10.0}) {
    double total = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      DpConfig dp;
      dp.epsilon = eps;
      const auto gen = DpMarginalGenerator::Fit(t, dp, seed);
      for (size_t j = 0; j < t.num_cols(); ++j) {
        for (size_t b = 0; b < gen->histogram(j).size(); ++b) {
          total += std::abs(gen->histogram(j)[b] - gen->empirical_histogram(j)[b]);
        }
      }
    }
    mean_err.push_back(total / 50);
  }
  EXPECT_GE(mean_err[0], mean_err[1]);
  EXPECT_GE(mean_err[1], mean_err[2]);
}

TEST(CartSequential, KeepsFunctionalRelation) {
  SeededRng rng(10);
  std::vector<int32_t> a(400), b(400);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int32_t>(rng.UniformIndex(4));
    b[i] = (a[i] * 3 + 1) % 4;
  }
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("a", {"p", "q", "r", "s"}, a));
  cols.push_back(Column::Categorical("b", {"w", "x", "y", "z"}, b));
  const DataTable t(std::move(cols));
  size_t ok = 0, total = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg = Config(GeneratorKind::kCartSequential, seed);
    cfg.cart.max_depth = 4;
    const DataTable s = FitGenerator(t, cfg)->Sample(200, seed + 100);
    for (size_t r = 0; r < s.num_rows(); ++r) {
      ok += s.column(1).codes[r] == (s.column(0).codes[r] * 3 + 1) % 4;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(ok) / total, 0.95);
}

TEST(CartSequential, SingleColumnDrawsFromTrainingSupport) {
  const DataTable t = testing::NumericTable({{1.5, 2.5, 2.5, 9.0, -3.0}});
  const auto gen = FitGenerator(t, Config(GeneratorKind::kCartSequential));
  const DataTable s = gen->Sample(500, 2);
  const std::set<double> support = {1.5, 2.5, 9.0, -3.0};
  std::set<double> seen;
  for (size_t r = 0; r < s.num_rows(); ++r) {
    EXPECT_TRUE(support.count(s.value(r, 0)));
    seen.insert(s.value(r, 0));
  }
  EXPECT_EQ(seen, support);
}

TEST(CartSequential, VisitOrderOverride) {
  const DataTable t = testing::CorrelatedFixture(100, 2);
  GeneratorConfig cfg = Config(GeneratorKind::kCartSequential);
  cfg.cart.visit_order = {"y", "x1", "x0", "grp", "x2"};
  const auto gen = CartSequentialGenerator::Fit(t, cfg.cart, 1);
  EXPECT_EQ(gen->visit_order(), (std::vector<size_t>{4, 1, 0, 3, 2}));
  cfg.cart.visit_order = {"nope"};
  EXPECT_THROW(FitGenerator(t, cfg), Error);
}

class AllKinds : public ::testing::TestWithParam<GeneratorKind> {};

TEST_P(AllKinds, SchemaDeterminismAndSerialization) {
  const DataTable t = testing::CorrelatedFixture(150, 9);
  GeneratorConfig cfg = Config(GetParam(), 4);
  const auto gen = FitGenerator(t, cfg);
  const DataTable s = gen->Sample(77, 12);
  EXPECT_EQ(s.num_rows(), 77u);
  EXPECT_TRUE(SchemasCompatible(s, t));
  for (size_t j = 0; j < s.num_cols(); ++j) {
    if (!s.meta(j).is_categorical()) continue;
    for (int32_t c : s.column(j).codes) {
      EXPECT_GE(c, 0);
      EXPECT_LT(static_cast<size_t>(c), t.meta(j).num_categories());
    }
  }
  const DataTable again = FitGenerator(t, cfg)->Sample(77, 12);
  for (size_t j = 0; j < s.num_cols(); ++j) {
    EXPECT_EQ(s.column(j).AsDoubles(), again.column(j).AsDoubles());
  }
  const auto path = std::filesystem::temp_directory_path() /
                    ("dgm_gen_" + std::string(GeneratorKindName(GetParam())) + ".json");
  SaveGenerator(*gen, path.string());
  const DataTable loaded = LoadGenerator(path.string())->Sample(77, 12);
  for (size_t j = 0; j < s.num_cols(); ++j) {
    EXPECT_EQ(s.column(j).AsDoubles(), loaded.column(j).AsDoubles());
  }
  std::filesystem::remove(path);
}

TEST_P(AllKinds, RejectsEmptyTable) {
  const DataTable t = testing::CorrelatedFixture(10, 1).Head(0);
  EXPECT_THROW(FitGenerator(t, Config(GetParam())), Error);
}

INSTANTIATE_TEST_SUITE_P(Generators, AllKinds,
                         ::testing::Values(GeneratorKind::kMarginal,
                                           GeneratorKind::kCartSequential,
                                           GeneratorKind::kBayesNet,
                                           GeneratorKind::kDpMarginal),
                         [](const auto& info) {
                           return std::string(GeneratorKindName(info.param));
                         });

class MarginalFidelity : public ::testing::TestWithParam<GeneratorKind> {};

TEST_P(MarginalFidelity, HellingerBelowFivePercent) {
  const DataTable t = testing::CorrelatedFixture(500, 21);
  double mean = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg = Config(GetParam(), seed);
    cfg.dp.epsilon = 10.0;
    const DataTable s = FitGenerator(t, cfg)->Sample(5000, seed + 50);
    double worst = 0;
    for (size_t j = 0; j < t.num_cols(); ++j) {
      worst = std::max(worst, HellingerColumn(t.column(j), s.column(j)));
    }
    mean += worst / 10;
  }
  EXPECT_LT(mean, 0.05);
}

INSTANTIATE_TEST_SUITE_P(Generators, MarginalFidelity,
                         ::testing::Values(GeneratorKind::kMarginal, GeneratorKind::kDpMarginal),
                         [](const auto& info) {
                           return std::string(GeneratorKindName(info.param));
                         });

TEST(GeneratorConfig, ValidatesAndRoundTrips) {
  GeneratorConfig c;
  c.oversample_factor = 0.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  c.oversample_factor = 2;
  c.bn.epsilon = 0.5;
  const GeneratorConfig back = GeneratorConfigFromJson(GeneratorConfigToJson(c));
  EXPECT_EQ(back.oversample_factor, 2);
  EXPECT_EQ(back.bn.epsilon, 0.5);
  EXPECT_THROW(GeneratorConfigFromJson(nlohmann::json{{"kind", "gan"}}), ConfigError);
}

}  // namespace
}  // namespace dgm
