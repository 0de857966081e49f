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

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "dgm/correlation.h"
#include "dgm/csv.h"
#include "dgm/dummy.h"
#include "dgm/error.h"
#include "dgm/partition.h"

namespace dgm {
namespace {

// Off-diagonal Frobenius norms across vs. within the two column groups.
double RatioOracle(const Eigen::MatrixXd& m, size_t k1) {
  double ext = 0, in = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j) continue;
      const bool same = (static_cast<size_t>(i) < k1) == (static_cast<size_t>(j) < k1);
      (same ? in : ext) += m(i, j) * m(i, j);
    }
  }
  return std::sqrt(ext) / std::sqrt(in);
}

TEST(DummyCorrelation, IsAValidCorrelationMatrix) {
  for (double gamma : {0.0, 0.5, 1.0, 2.5, 4.0, 10.0}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      DummySpec s;
      s.gamma = gamma;
      s.base_seed = seed;
      const Eigen::MatrixXd m = DummyCorrelation(s);
      ASSERT_EQ(m.rows(), 6);
      EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(m(i, i), 1.0, 1e-12);
      EXPECT_LE(m.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << gamma << " " << seed;
    }
  }
}

TEST(DummyCorrelation, GammaScalesTheCrossBlock) {
  DummySpec s;
  s.base_seed = 4;
  s.gamma = 0.0;
  const Eigen::MatrixXd zero = DummyCorrelation(s);
  EXPECT_EQ(zero.block(0, 3, 3, 3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(SampleDummy(s).achieved_ratio, 0.0);
  s.gamma = 1.0;
  const Eigen::MatrixXd one = DummyCorrelation(s);
  EXPECT_LT((one.block(0, 0, 3, 3) - zero.block(0, 0, 3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  // Small gammas keep the matrix positive definite, so the ratio is linear.
  s.gamma = 0.25;
  EXPECT_NEAR(RatioOracle(DummyCorrelation(s), 3), 0.25 * RatioOracle(one, 3), 1e-9);
}

TEST(DummyCorrelation, AchievedRatioMatchesOracle) {
  for (double gamma : {0.3, 1.0, 3.0}) {
    DummySpec s;
    s.k1 = 2;
    s.k2 = 4;
    s.gamma = gamma;
    s.base_seed = 9;
    const DummySample d = SampleDummy(s);
    EXPECT_NEAR(d.achieved_ratio, RatioOracle(d.correlation, 2), 1e-12);
  }
}

TEST(SampleDummy, EmpiricalCorrelationTracksTarget) {
  DummySpec s;
  s.n = 20000;
  s.gamma = 1.5;
  s.base_seed = 2;
  const DummySample d = SampleDummy(s);
  ASSERT_EQ(d.table.num_rows(), 20000u);
  ASSERT_EQ(d.table.num_cols(), 6u);
  EXPECT_EQ(d.table.meta(0).name, "x0");
  EXPECT_EQ(d.table.meta(5).name, "x5");
  for (size_t i = 0; i < 6; ++i) {
    for (size_t j = i + 1; j < 6; ++j) {
      const double r = Pearson(d.table.column(i).numbers, d.table.column(j).numbers);
      EXPECT_NEAR(r, d.correlation(i, j), 0.03) << i << "," << j;
    }
  }
}

TEST(SampleDummy, DeterministicPerSeed) {
  DummySpec s;
  s.n = 50;
  s.base_seed = 11;
  const DummySample a = SampleDummy(s), b = SampleDummy(s);
  EXPECT_EQ(a.table.column(3).numbers, b.table.column(3).numbers);
  s.base_seed = 12;
  EXPECT_NE(a.table.column(3).numbers, SampleDummy(s).table.column(3).numbers);
}

TEST(DummySpec, RejectsBadValues) {
  DummySpec s;
  s.k1 = 0;
  EXPECT_THROW(s.Validate(), ConfigError);
  s = DummySpec{};
  s.n = 1;
  EXPECT_THROW(s.Validate(), ConfigError);
  s = DummySpec{};
  s.gamma = -0.1;
  EXPECT_THROW(s.Validate(), ConfigError);
  s.gamma = std::nan("");
  EXPECT_THROW(SampleDummy(s), ConfigError);
}

TEST(DummyGroups, FirstColumnsFormTheFirstPart) {
  DummySpec s;
  s.k1 = 2;
  s.k2 = 3;
  const PartitionSpec p = DummyGroups(s);
  EXPECT_EQ(p.num_partitions, 2u);
  EXPECT_EQ(p.assignment, (std::vector<size_t>{0, 0, 1, 1, 1}));
}

TEST(GammaForRatio, HitsReachableTargets) {
  DummySpec s;
  s.base_seed = 3;
  for (double target : {0.1, 0.5, 1.0, 1.5, 2.0}) {
    DummySpec t = s;
    t.gamma = GammaForRatio(s, target);
    EXPECT_NEAR(SampleDummy(t).achieved_ratio, target, 1e-6) << target;
  }
}

TEST(GammaForRatio, UnreachableTargetGivesThePeak) {
  DummySpec s;
  s.base_seed = 5;
  const double g = GammaForRatio(s, 1.5);
  s.gamma = g;
  const double peak = SampleDummy(s).achieved_ratio;
  EXPECT_LT(peak, 1.5);
  for (double other : {0.5, 2.0, 4.0, 10.0, 20.0}) {
    DummySpec t = s;
    t.gamma = other;
    EXPECT_LE(SampleDummy(t).achieved_ratio, peak + 1e-12) << other;
  }
}

TEST(RatioSweep, SortedAndIndependentOfJobs) {
  DummySpec base;
  base.n = 100;
  const std::vector<double> gammas = {0.0, 1.0, 2.0, 3.0};
  const std::vector<uint64_t> seeds = {1, 2, 3};
  const auto a = RatioSweep(base, gammas, seeds, 1);
  const auto b = RatioSweep(base, gammas, seeds, 4);
  ASSERT_EQ(a.size(), 12u);
  for (size_t i = 0; i < a.size(); ++i) {
    if (i > 0) EXPECT_LE(a[i - 1].sample.achieved_ratio, a[i].sample.achieved_ratio);
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].gamma, b[i].gamma);
    EXPECT_EQ(a[i].sample.table.column(0).numbers, b[i].sample.table.column(0).numbers);
  }
  EXPECT_THROW(RatioSweep(base, {}, seeds), ConfigError);
}

TEST(DefaultDummyPreset, CoversTheRatioRange) {
  const DummyPreset p = DefaultDummyPreset(7);
  EXPECT_EQ(p.gammas.size(), 21u);
  EXPECT_EQ(p.seeds.size(), 10u);
  EXPECT_EQ(p.gammas.front(), 0.0);
  EXPECT_EQ(p.gammas.back(), 4.0);
  DummySpec base = p.base;
  base.n = 20;
  const auto items = RatioSweep(base, p.gammas, p.seeds, 2);
  EXPECT_EQ(items.size(), 210u);
  EXPECT_EQ(items.front().sample.achieved_ratio, 0.0);
  EXPECT_GT(items.back().sample.achieved_ratio, 2.0);
}

TEST(WriteDummySweep, WritesTablesAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "dgm_dummy_sweep_test";
  std::filesystem::remove_all(dir);
  DummySpec base;
  base.n = 10;
  const auto items = RatioSweep(base, {0.0, 2.0}, {3, 4});
  WriteDummySweep(items, dir.string());
  std::ifstream manifest(dir / "manifest.csv");
  std::string line;
  std::getline(manifest, line);
  EXPECT_EQ(line, "seed,gamma,achieved_ratio,file");
  size_t rows = 0;
  while (std::getline(manifest, line)) ++rows;
  EXPECT_EQ(rows, 4u);
  std::ifstream schema_free(dir / "dummy_003.csv");
  std::getline(schema_free, line);
  EXPECT_EQ(line, "x0,x1,x2,x3,x4,x5");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dgm
