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

#ifndef DGM_VALIDATOR_H_
#define DGM_VALIDATOR_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgm/cart.h"
#include "dgm/encoding.h"
#include "dgm/scorer.h"
#include "dgm/table.h"

namespace dgm {

struct ForestParams {
  size_t trees = 50;
  int max_depth = 8;
  size_t min_leaf = 1;
  // Features tried per split; 0 uses floor(sqrt(features)).
  size_t max_features = 0;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

// Bagged Gini trees over raw features (category codes used directly).
class RandomForestClassifier {
 public:
  static RandomForestClassifier Fit(const DataTable& features,
                                    std::span<const int> labels,
                                    const ForestParams& params, uint64_t seed);
  // Mean leaf positive fraction over the trees.
  std::vector<double> PredictProba(const DataTable& queries) const;
  size_t num_trees() const { return trees_.size(); }

 private:
  std::vector<DecisionTree> trees_;
  size_t num_features_ = 0;
};

// Fraction of positive labels among the k nearest encoded training rows.
class KnnClassifier {
 public:
  static KnnClassifier Fit(const DataTable& features,
                           std::span<const int> labels, size_t k);
  std::vector<double> PredictProba(const DataTable& queries) const;
  size_t k() const { return k_; }

 private:
  Encoder encoder_;
  RowMatrix reference_;
  std::vector<int> labels_;
  size_t k_ = 5;
};

// Trained on positives only: score = 1 / (1 + d_k / tau), where d_k is the
// distance to the k-th nearest positive and tau the median of that distance
// over the positives themselves.
class OneClassDistance {
 public:
  static OneClassDistance Fit(const DataTable& features,
                              std::span<const int> labels, size_t k);
  std::vector<double> PredictProba(const DataTable& queries) const;
  double tau() const { return tau_; }
  // k-th nearest positive distance for each query.
  std::vector<double> KthDistance(const DataTable& queries) const;

 private:
  Encoder encoder_;
  RowMatrix positives_;
  size_t k_ = 5;
  double tau_ = 1.0;
};

enum class ValidatorBackend { kRandomForest, kKnn, kOneClassDistance };

std::string_view ValidatorBackendName(ValidatorBackend backend);
ValidatorBackend ParseValidatorBackend(std::string_view name);

struct HyperparameterGrid {
  std::vector<ForestParams> forest;
  std::vector<size_t> knn_k;
  std::vector<size_t> one_class_k;

  // trees {50, 200} x depth {8, 16} x min_leaf {1, 5}; knn k {5, 15, 31};
  // one-class k {5, 15}.
  static HyperparameterGrid Full();
  // Deliberately weak settings that leave scores bunched mid-range.
  static HyperparameterGrid Degraded();
  static HyperparameterGrid FromName(std::string_view name);
  size_t size(ValidatorBackend backend) const;
};

// p = 1 / (1 + exp(-(a * s + b))). Identity when not fitted.
struct SigmoidCalibration {
  double a = 1.0;
  double b = 0.0;
  bool identity = true;

  double Apply(double raw) const;
  // Newton's method on log loss with smoothed targets. Falls back to the
  // identity whenever the fit is not increasing, saturates, or does not
  // lower the Brier score on the supplied data.
  static SigmoidCalibration Fit(std::span<const double> raw,
                                std::span<const int> labels);
};

double Auroc(std::span<const double> scores, std::span<const int> labels);
double Brier(std::span<const double> scores, std::span<const int> labels);

struct TrainOptions {
  bool calibrate = true;
};

class ValidatorModel : public Scorer {
 public:
  // Splits 70/15/15 (stratified) into fit/select/calibrate, fits every grid
  // point on the fit split, keeps the best AUROC on the select split and
  // fits the calibration on the calibrate split.
  static ValidatorModel Train(const DataTable& features,
                              std::span<const int> labels,
                              ValidatorBackend backend,
                              const HyperparameterGrid& grid, uint64_t seed,
                              const TrainOptions& options = {});

  std::vector<double> Score(const DataTable& queries) const override;
  std::vector<double> ScoreRaw(const DataTable& queries) const;

  ValidatorBackend backend() const { return backend_; }
  const SigmoidCalibration& calibration() const { return calibration_; }
  double selection_auroc() const { return selection_auroc_; }
  // Human-readable description of the chosen grid point.
  const std::string& chosen() const { return chosen_; }
  // Rows (into the training input) of each internal split.
  const std::vector<size_t>& fit_rows() const { return fit_rows_; }
  const std::vector<size_t>& select_rows() const { return select_rows_; }
  const std::vector<size_t>& calibrate_rows() const { return calibrate_rows_; }

 private:
  ValidatorBackend backend_ = ValidatorBackend::kRandomForest;
  std::vector<ColumnMeta> schema_;
  std::shared_ptr<const RandomForestClassifier> forest_;
  std::shared_ptr<const KnnClassifier> knn_;
  std::shared_ptr<const OneClassDistance> one_class_;
  SigmoidCalibration calibration_;
  double selection_auroc_ = 0.5;
  std::string chosen_;
  std::vector<size_t> fit_rows_, select_rows_, calibrate_rows_;
};

struct ReliabilityBins {
  std::vector<double> edges;  // bins + 1 entries over [0, 1]
  std::vector<double> mean_score;
  std::vector<double> positive_fraction;
  std::vector<size_t> count;
};

// Equal-width bins; empty bins report 0 for both means.
ReliabilityBins ComputeReliability(std::span<const double> scores,
                                   std::span<const int> labels, size_t bins);

struct ReliabilityCurve {
  ReliabilityBins train;
  ReliabilityBins holdout;

  // Columns: set,bin,lo,hi,mean_score,positive_fraction,count
  void WriteCsv(std::ostream& out) const;
};

ReliabilityCurve Reliability(const Scorer& model, const DataTable& train,
                             std::span<const int> train_labels,
                             const DataTable& holdout,
                             std::span<const int> holdout_labels, size_t bins);

}  // namespace dgm

#endif  // DGM_VALIDATOR_H_
