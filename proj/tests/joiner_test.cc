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

#include <set>
#include <sstream>

#include "dgm/error.h"
#include "dgm/joiner.h"
#include "dgm/rng.h"
#include "dgm/validator.h"
#include "test_util.h"

namespace dgm {
namespace {

DataTable Part(const std::string& name, std::vector<double> v) {
  std::vector<Column> c;
  c.push_back(Column::Numerical(name, std::move(v)));
  return DataTable(std::move(c));
}

std::vector<double> Seq(size_t n, double offset) {
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = offset + static_cast<double>(i);
  return v;
}

TEST(ConcatJoin, SinglePartIsShuffledTruncation) {
  const std::vector<DataTable> parts = {Part("a", Seq(50, 0))};
  const DataTable out = ConcatJoin(parts, 20, 3);
  EXPECT_EQ(out.num_rows(), 20u);
  SeededRng rng(3, 0);
  auto perm = rng.Permutation(50);
  perm.resize(20);
  for (size_t r = 0; r < 20; ++r) EXPECT_EQ(out.value(r, 0), static_cast<double>(perm[r]));
}

TEST(ConcatJoin, PreservesMultisets) {
  const std::vector<DataTable> parts = {Part("a", Seq(100, 0)), Part("b", Seq(100, 1000))};
  const DataTable out = ConcatJoin(parts, 100, 8);
  EXPECT_EQ(testing::SortedColumn(out, 0), Seq(100, 0));
  EXPECT_EQ(testing::SortedColumn(out, 1), Seq(100, 1000));
}

TEST(ConcatJoin, ForcedJoinAndErrors) {
  const std::vector<DataTable> parts = {Part("a", std::vector<double>(5, 1.0)),
                                        Part("b", std::vector<double>(5, 2.0))};
  const DataTable out = ConcatJoin(parts, 5, 1);
  for (size_t r = 0; r < 5; ++r) {
    EXPECT_EQ(out.value(r, 0), 1.0);
    EXPECT_EQ(out.value(r, 1), 2.0);
  }
  EXPECT_THROW(ConcatJoin(parts, 6, 1), DataError);
}

TEST(ValidatorTraining, SingleRow) {
  const DataTable x = testing::NumericTable({{1.0}, {2.0}});
  const auto ts = BuildValidatorTraining(x, PartitionSpec{2, {0, 1}}, 1);
  ASSERT_EQ(ts.features.num_rows(), 2u);
  EXPECT_EQ(ts.labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(ts.features.value(0, 0), ts.features.value(1, 0));
  EXPECT_EQ(ts.features.value(0, 1), ts.features.value(1, 1));
}

TEST(ValidatorTraining, ShuffleBreaksCrossPartitionPairs) {
  double mismatch = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<double> v = Seq(1000, 0);
    const auto ts = BuildValidatorTraining(testing::NumericTable({v, v}),
                                           PartitionSpec{2, {0, 1}}, seed);
    size_t diff = 0;
    for (size_t r = 1000; r < 2000; ++r) diff += ts.features.value(r, 0) != ts.features.value(r, 1);
    mismatch += diff / 1000.0 / 10;
  }
  EXPECT_GT(mismatch, 0.99);
}

TEST(ValidatorTraining, ColumnsInPartitionOrder) {
  const DataTable x = testing::CorrelatedFixture(20, 1);
  const PartitionSpec spec{2, {1, 0, 1, 0, 1}};
  const auto ts = BuildValidatorTraining(x, spec, 2);
  EXPECT_EQ(ts.features.column_names(),
            (std::vector<std::string>{"x1", "grp", "x0", "x2", "y"}));
  const DataTable restored = RestoreColumnOrder(ts.features.Head(20), spec);
  EXPECT_EQ(restored.column_names(), x.column_names());
  for (size_t j = 0; j < x.num_cols(); ++j) {
    EXPECT_EQ(restored.column(j).AsDoubles(), x.column(j).AsDoubles());
  }
}

TEST(ValidatorTraining, SinglePartitionCarriesNoSignal) {
  const DataTable x = testing::CorrelatedFixture(1000, 3);
  const auto ts = BuildValidatorTraining(x, PartitionSpec{1, std::vector<size_t>(5, 0)}, 4);
  std::vector<size_t> fake_rows(1000);
  for (size_t i = 0; i < fake_rows.size(); ++i) fake_rows[i] = 1000 + i;
  const DataTable shuffled = ts.features.SelectRows(fake_rows);
  for (size_t j = 0; j < x.num_cols(); ++j) {
    EXPECT_EQ(testing::SortedColumn(shuffled, j), testing::SortedColumn(x, j));
  }
  const ValidatorModel m = ValidatorModel::Train(ts.features, ts.labels,
                                                 ValidatorBackend::kRandomForest,
                                                 HyperparameterGrid::Degraded(), 5);
  const auto holdout = BuildValidatorTraining(testing::CorrelatedFixture(1000, 99),
                                              PartitionSpec{1, std::vector<size_t>(5, 0)}, 6);
  EXPECT_NEAR(Auroc(m.Score(holdout.features), holdout.labels), 0.5, 0.1);
}

TEST(ValidatedJoin, AcceptAllEqualsConcat) {
  const std::vector<DataTable> parts = {Part("a", Seq(300, 0)), Part("b", Seq(300, 1000))};
  JoinConfig cfg;
  cfg.target_size = 100;
  const JoinResult r = ValidatedJoin(parts, ConstantScorer(1.0), cfg, 17);
  ASSERT_EQ(r.trace.rounds.size(), 1u);
  EXPECT_FALSE(r.truncated);
  const DataTable concat = ConcatJoin(parts, 100, 17);
  for (size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(r.table.column(j).AsDoubles(), concat.column(j).AsDoubles());
  }
}

TEST(ValidatedJoin, DecayForcesAcceptAfterStalls) {
  const std::vector<DataTable> parts = {Part("a", Seq(50, 0)), Part("b", Seq(50, 100))};
  JoinConfig cfg;
  cfg.target_size = 20;
  cfg.theta = 0.5;
  cfg.decay = 0.02;
  const JoinResult r = ValidatedJoin(parts, ConstantScorer(0.0), cfg, 1);
  ASSERT_EQ(r.trace.rounds.size(), 26u);
  for (size_t i = 0; i < 25; ++i) {
    EXPECT_EQ(r.trace.rounds[i].accepted, 0u);
    if (i > 0) EXPECT_LT(r.trace.rounds[i].theta, r.trace.rounds[i - 1].theta);
  }
  EXPECT_EQ(r.trace.rounds[25].theta, 0.0);
  EXPECT_EQ(r.trace.rounds[25].accepted, 20u);
  EXPECT_EQ(r.table.num_rows(), 20u);
  EXPECT_EQ(r.stop, JoinStop::kTargetReached);
}

TEST(ValidatedJoin, OracleSignPredicate) {
  SeededRng rng(5);
  std::vector<double> a(400), b(400);
  for (size_t i = 0; i < 400; ++i) a[i] = rng.Normal(), b[i] = rng.Normal();
  const std::vector<DataTable> parts = {Part("a", a), Part("b", b)};
  const RowFunctionScorer oracle([](const DataTable& q, size_t r) {
    return (q.value(r, 0) > 0) == (q.value(r, 1) > 0) ? 1.0 : 0.0;
  });
  JoinConfig cfg;
  cfg.target_size = 200;
  cfg.theta = 0.5;
  const JoinResult r = ValidatedJoin(parts, oracle, cfg, 9);
  EXPECT_GT(r.table.num_rows(), 150u);
  for (size_t i = 0; i < r.table.num_rows(); ++i) {
    EXPECT_EQ(r.table.value(i, 0) > 0, r.table.value(i, 1) > 0);
  }
  std::ostringstream csv;
  r.trace.WriteCsv(csv);
  EXPECT_EQ(csv.str().substr(0, 29), "round,theta,queries,accepted\n");
}

TEST(ValidatedJoin, AutoThresholdUsesQuantile) {
  const std::vector<DataTable> parts = {Part("a", Seq(100, 0)), Part("b", Seq(100, 0))};
  const RowFunctionScorer score([](const DataTable& q, size_t r) {
    return q.value(r, 0) / 100.0;
  });
  JoinConfig cfg;
  cfg.target_size = 100;
  const JoinResult r = ValidatedJoin(parts, score, cfg, 2);
  // Scores are 0.00..0.99; the 0.9 quantile is 0.891.
  EXPECT_NEAR(r.trace.rounds[0].theta, 0.891, 1e-12);
  EXPECT_EQ(r.trace.rounds[0].accepted, 10u);
  EXPECT_DOUBLE_EQ(Quantile({1, 2, 3, 4}, 0.5), 2.5);
}

TEST(ValidatedJoin, EarlyStopAndTruncation) {
  const std::vector<DataTable> parts = {Part("a", Seq(30, 0)), Part("b", Seq(30, 0))};
  JoinConfig cfg;
  cfg.target_size = 10;
  cfg.theta = 0.5;
  cfg.decay = 0.0;
  cfg.early_stop_rounds = 4;
  const JoinResult r = ValidatedJoin(parts, ConstantScorer(0.2), cfg, 1);
  EXPECT_EQ(r.stop, JoinStop::kEarlyStop);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.table.num_rows(), 0u);
  EXPECT_EQ(r.trace.rounds.size(), 4u);
}

TEST(ValidatedJoin, Errors) {
  const std::vector<DataTable> uneven = {Part("a", Seq(10, 0)), Part("b", Seq(11, 0))};
  JoinConfig cfg;
  cfg.target_size = 5;
  EXPECT_THROW(ValidatedJoin(uneven, ConstantScorer(1), cfg, 1), DataError);
  cfg.max_iters = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(ValidatedJoin, InvariantsOverRandomRuns) {
  SeededRng rng(123);
  for (int run = 0; run < 40; ++run) {
    const size_t np = 1 + rng.UniformIndex(3);
    const size_t m = 20 + rng.UniformIndex(80);
    std::vector<DataTable> parts;
    for (size_t p = 0; p < np; ++p) parts.push_back(Part("p" + std::to_string(p), Seq(m, 1000.0 * p)));
    JoinConfig cfg;
    cfg.target_size = 1 + rng.UniformIndex(m);
    cfg.decay = rng.Uniform(0.0, 0.1);
    cfg.max_iters = 5 + static_cast<int>(rng.UniformIndex(50));
    const double bias = rng.Uniform();
    const RowFunctionScorer scorer([bias](const DataTable& q, size_t r) {
      const double x = std::fmod(q.value(r, 0) * 0.618 + bias, 1.0);
      return x;
    });
    const JoinResult res = ValidatedJoin(parts, scorer, cfg, run);
    EXPECT_LE(res.trace.rounds.size(), static_cast<size_t>(cfg.max_iters));
    for (size_t i = 1; i < res.trace.rounds.size(); ++i) {
      EXPECT_LE(res.trace.rounds[i].theta, res.trace.rounds[i - 1].theta);
    }
    for (size_t p = 0; p < np; ++p) {
      std::set<size_t> used(res.provenance[p].begin(), res.provenance[p].end());
      EXPECT_EQ(used.size(), res.provenance[p].size());
      for (size_t r = 0; r < res.table.num_rows(); ++r) {
        EXPECT_EQ(res.table.value(r, p), 1000.0 * p + static_cast<double>(res.provenance[p][r]));
      }
    }
    EXPECT_LE(res.table.num_rows(), cfg.target_size);
  }
}

}  // namespace
}  // namespace dgm
