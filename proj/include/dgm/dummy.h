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

#ifndef DGM_DUMMY_H_
#define DGM_DUMMY_H_

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgm/partition.h"
#include "dgm/table.h"

namespace dgm {

// Gaussian table with two column groups. gamma scales the correlations
// between the groups relative to a random base correlation matrix.
struct DummySpec {
  size_t k1 = 3;
  size_t k2 = 3;
  size_t n = 1000;
  double gamma = 1.0;
  uint64_t base_seed = 0;

  size_t k() const { return k1 + k2; }
  void Validate() const;
};

struct DummySample {
  DataTable table;  // numerical columns x0..x{k-1}
  Eigen::MatrixXd correlation;
  double achieved_ratio = 0.0;
};

// Group assignment: the first k1 columns form partition 0.
PartitionSpec DummyGroups(const DummySpec& spec);

// Target correlation matrix only (no rows drawn).
Eigen::MatrixXd DummyCorrelation(const DummySpec& spec);
DummySample SampleDummy(const DummySpec& spec);

// Smallest gamma on [0, max_gamma] whose exterior/interior ratio reaches
// `target`; the ratio-maximizing gamma when none does.
double GammaForRatio(const DummySpec& spec, double target, double max_gamma = 20.0);

struct DummySweepItem {
  uint64_t seed = 0;
  double gamma = 0.0;
  DummySample sample;
};

// One table per (gamma, seed), sorted by achieved ratio.
std::vector<DummySweepItem> RatioSweep(const DummySpec& base,
                                       const std::vector<double>& gammas,
                                       const std::vector<uint64_t>& seeds,
                                       size_t jobs = 1);

struct DummyPreset {
  DummySpec base;
  std::vector<double> gammas;
  std::vector<uint64_t> seeds;
};
// 21 gammas evenly spaced on [0, 4] by 10 seeds.
DummyPreset DefaultDummyPreset(uint64_t master_seed);

// Writes dummy_NNN.csv per item and manifest.csv
// (seed,gamma,achieved_ratio,file) into `dir`.
void WriteDummySweep(const std::vector<DummySweepItem>& items, const std::string& dir);

}  // namespace dgm

#endif  // DGM_DUMMY_H_
