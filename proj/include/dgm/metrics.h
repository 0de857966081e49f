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

#ifndef DGM_METRICS_H_
#define DGM_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgm/encoding.h"
#include "dgm/table.h"
#include "json.hpp"

namespace dgm {

// Mean per-column Hellinger distance. Categorical columns compare category
// frequencies; numerical columns compare 10 equal-width bins over the union
// range.
double HellingerColumn(const Column& real, const Column& synth);
double HellingerAvg(const DataTable& real, const DataTable& synth);

// Frobenius norm of the difference of the mixed association matrices.
double CorrelationDiff(const DataTable& real, const DataTable& synth);

struct PcaDiff {
  // Sum of absolute eigenvalue differences over the real eigenvalue sum.
  double eigenvalue_diff = 0.0;
  // Angle in [0, pi/2] between the first principal axes.
  double angle_diff = 0.0;
};
// Both tables are encoded with statistics from `real`.
PcaDiff PcaDiffs(const DataTable& real, const DataTable& synth);

struct MlEfficacy {
  double auroc_diff = 0.0;
  double acc_diff_cv = 0.0;
  double acc_diff_holdout = 0.0;
};
// Random forest and k-NN classifiers trained on real vs. synthetic rows and
// scored on real data; each field is mean(synthetic - real). The label must
// be a binary categorical column; its second category is the positive class.
MlEfficacy MlEfficacyDiff(const DataTable& real_train, const DataTable& synth,
                          const DataTable& holdout, const std::string& label,
                          uint64_t seed);

// Per-dimension weights 1 / max(H, 0.01) where H is the entropy (nats) of
// the encoded dimension's source column in `real`.
std::vector<double> EntropyWeights(const DataTable& real, const Encoder& encoder);

// Fraction of real rows whose nearest synthetic row is strictly closer than
// their nearest other real row, under entropy-weighted distance.
double EpsIdentifiability(const DataTable& real, const DataTable& synth);

struct DcrResult {
  double value = 0.0;
  // The real nearest-neighbour median was 0; value is unnormalized.
  bool unnormalized = false;
};
// Median synthetic-to-real nearest distance over the median real
// nearest-neighbour distance.
DcrResult MedianDcr(const DataTable& real, const DataTable& synth);

struct MiaResult {
  double recall = 0.0;
  double precision = 0.0;
};
// Predicts "member" when a known record's nearest synthetic distance is
// below the median of those distances over all known records.
MiaResult MiaAttack(const DataTable& known, std::span<const int> members,
                    const DataTable& synth);

struct MetricsReport {
  double pca_eigenvalue_diff = 0.0;
  double pca_angle_diff = 0.0;
  double hellinger_avg = 0.0;
  double corr_diff_frobenius = 0.0;
  double auroc_diff = 0.0;
  double acc_diff_cv = 0.0;
  double acc_diff_holdout = 0.0;
  double eps_identifiability = 0.0;
  double median_dcr_normalized = 0.0;
  double mia_recall = 0.0;
  double mia_precision = 0.0;
  bool dcr_unnormalized = false;
  // eps_identifiability <= 0.09.
  bool eps_within_9pct = false;
  // False when no label column was given; the ML fields are then NaN.
  bool has_ml = false;

  nlohmann::ordered_json ToJson() const;
  static std::vector<std::string> CsvHeader();
  std::vector<std::string> CsvRow() const;
};

inline constexpr double kIdentificationRiskLimit = 0.09;

// `label` may be empty to skip ML efficacy.
MetricsReport EvaluateAll(const DataTable& real_train, const DataTable& synth,
                          const DataTable& holdout, const std::string& label,
                          uint64_t seed);

double Median(std::vector<double> values);

}  // namespace dgm

#endif  // DGM_METRICS_H_
