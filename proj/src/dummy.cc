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

#include "dgm/dummy.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dgm/csv.h"
#include "dgm/error.h"
#include "dgm/parallel.h"
#include "dgm/rng.h"

namespace dgm {
namespace {

constexpr double kEigenFloor = 1e-6;

Eigen::MatrixXd NormalizeDiagonal(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd d = m.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd out = d.asDiagonal() * m * d.asDiagonal();
  out.diagonal().setOnes();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd BaseCorrelation(const DummySpec& spec) {
  const auto k = static_cast<Eigen::Index>(spec.k());
  SeededRng rng(spec.base_seed, 1);
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = rng.Normal();
  }
  return NormalizeDiagonal(a * a.transpose());
}

}  // namespace

void DummySpec::Validate() const {
  if (k1 < 1 || k2 < 1) throw ConfigError("dummy: k1 and k2 must be >= 1");
  if (n < 2) throw ConfigError("dummy: n must be >= 2");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("dummy: gamma must be a finite value >= 0");
  }
}

PartitionSpec DummyGroups(const DummySpec& spec) {
  PartitionSpec p;
  p.num_partitions = 2;
  p.assignment.assign(spec.k(), 1);
  std::fill(p.assignment.begin(), p.assignment.begin() + spec.k1, 0);
  return p;
}

Eigen::MatrixXd DummyCorrelation(const DummySpec& spec) {
  spec.Validate();
  Eigen::MatrixXd m = BaseCorrelation(spec);
  const auto k1 = static_cast<Eigen::Index>(spec.k1);
  const auto k2 = static_cast<Eigen::Index>(spec.k2);
  m.block(0, k1, k1, k2) *= spec.gamma;
  m.block(k1, 0, k2, k1) *= spec.gamma;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() < kEigenFloor) {
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(kEigenFloor);
    m = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    m = NormalizeDiagonal(m);
  }
  return m;
}

DummySample SampleDummy(const DummySpec& spec) {
  DummySample out;
  out.correlation = DummyCorrelation(spec);
  out.achieved_ratio = ExteriorInteriorRatio(out.correlation, DummyGroups(spec)).ratio;

  const auto k = static_cast<Eigen::Index>(spec.k());
  Eigen::MatrixXd factor;
  Eigen::LLT<Eigen::MatrixXd> llt(out.correlation);
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(out.correlation);
    const Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd l = ldlt.matrixL();
    factor = ldlt.transpositionsP().transpose() * l * d.asDiagonal();
  }

  SeededRng rng(spec.base_seed, 2);
  std::vector<std::vector<double>> cols(spec.k(), std::vector<double>(spec.n));
  Eigen::VectorXd z(k);
  for (size_t r = 0; r < spec.n; ++r) {
    for (Eigen::Index j = 0; j < k; ++j) z(j) = rng.Normal();
    const Eigen::VectorXd x = factor * z;
    for (Eigen::Index j = 0; j < k; ++j) cols[j][r] = x(j);
  }
  std::vector<Column> columns;
  for (size_t j = 0; j < spec.k(); ++j) {
    columns.push_back(Column::Numerical("x" + std::to_string(j), std::move(cols[j])));
  }
  out.table = DataTable(std::move(columns));
  return out;
}

double GammaForRatio(const DummySpec& spec, double target, double max_gamma) {
  auto ratio = [&](double g) {
    DummySpec s = spec;
    s.gamma = g;
    return ExteriorInteriorRatio(DummyCorrelation(s), DummyGroups(s)).ratio;
  };
  // Clipping makes the ratio rise and then fall; bracket its first crossing.
  constexpr int kSteps = 400;
  double best_gamma = 0.0, best_ratio = 0.0;
  double prev = 0.0;
  for (int i = 1; i <= kSteps; ++i) {
    const double g = max_gamma * i / kSteps;
    const double r = ratio(g);
    if (r > best_ratio) best_ratio = r, best_gamma = g;
    if (r >= target) {
      double lo = prev, hi = g;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) < target ? lo : hi) = mid;
      }
      return std::abs(ratio(lo) - target) <= std::abs(ratio(hi) - target) ? lo : hi;
    }
    prev = g;
  }
  return best_gamma;
}

std::vector<DummySweepItem> RatioSweep(const DummySpec& base,
                                       const std::vector<double>& gammas,
                                       const std::vector<uint64_t>& seeds,
                                       size_t jobs) {
  if (gammas.empty() || seeds.empty()) {
    throw ConfigError("ratio_sweep: gammas and seeds must be non-empty");
  }
  std::vector<DummySweepItem> items(gammas.size() * seeds.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    DummySpec s = base;
    s.gamma = gammas[i / seeds.size()];
    s.base_seed = seeds[i % seeds.size()];
    items[i].seed = s.base_seed;
    items[i].gamma = s.gamma;
    items[i].sample = SampleDummy(s);
  });
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.sample.achieved_ratio < b.sample.achieved_ratio;
  });
  return items;
}

DummyPreset DefaultDummyPreset(uint64_t master_seed) {
  DummyPreset p;
  p.base.k1 = 3;
  p.base.k2 = 3;
  p.base.n = 1000;
  for (int i = 0; i <= 20; ++i) p.gammas.push_back(4.0 * i / 20.0);
  for (uint64_t s = 0; s < 10; ++s) p.seeds.push_back(DeriveSeed(master_seed, s));
  return p;
}

void WriteDummySweep(const std::vector<DummySweepItem>& items, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(std::filesystem::path(dir) / "manifest.csv");
  if (!manifest) throw Error("cannot write " + dir + "/manifest.csv");
  manifest << "seed,gamma,achieved_ratio,file\n";
  for (size_t i = 0; i < items.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "dummy_%03zu.csv", i);
    SaveCsv(items[i].sample.table, (std::filesystem::path(dir) / name).string());
    manifest << items[i].seed << ',' << FormatNumber(items[i].gamma) << ','
             << FormatNumber(items[i].sample.achieved_ratio) << ',' << name << '\n';
  }
}

}  // namespace dgm
