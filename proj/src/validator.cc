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

#include "dgm/validator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "dgm/csv.h"
#include "dgm/error.h"
#include "dgm/neighbors.h"
#include "dgm/rng.h"

namespace dgm {
namespace {

constexpr uint64_t kSplitStream = 0x7a11;
constexpr double kQuantum = 1e-9;
constexpr double kMaxLogit = 15.0;

// Snaps raw scores to a fixed grid so distinct scores stay distinct after
// calibration.
double Quantize(double s) {
  return std::clamp(std::round(s / kQuantum) * kQuantum, 0.0, 1.0);
}

void CheckLabels(const DataTable& features, std::span<const int> labels) {
  if (features.num_rows() != labels.size()) {
    throw DataError("validator: " + std::to_string(features.num_rows()) +
                    " feature rows but " + std::to_string(labels.size()) +
                    " labels");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("validator: labels must be 0 or 1");
  }
}

std::vector<double> Row(const DataTable& t, size_t r) {
  std::vector<double> x(t.num_cols());
  for (size_t j = 0; j < x.size(); ++j) x[j] = t.value(r, j);
  return x;
}

std::vector<int> Gather(std::span<const int> v, std::span<const size_t> rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

}  // namespace

RandomForestClassifier RandomForestClassifier::Fit(const DataTable& features,
                                                   std::span<const int> labels,
                                                   const ForestParams& params,
                                                   uint64_t seed) {
  CheckLabels(features, labels);
  if (features.num_rows() == 0) throw DataError("forest: no training rows");
  if (params.trees == 0) throw ConfigError("forest: trees must be >= 1");
  TreeData data;
  for (const Column& c : features.columns()) {
    data.features.push_back(c.AsDoubles());
    data.feature_levels.push_back(c.meta.is_categorical() ? c.meta.num_categories()
                                                          : 0);
  }
  data.target.assign(labels.begin(), labels.end());
  data.target_levels = 2;

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.keep_leaf_rows = false;
  const size_t d = features.num_cols();
  tp.max_features = params.max_features > 0
                        ? params.max_features
                        : std::max<size_t>(1, static_cast<size_t>(std::sqrt(
                                                  static_cast<double>(d))));

  RandomForestClassifier forest;
  forest.num_features_ = d;
  const size_t n = features.num_rows();
  std::vector<uint32_t> rows(n);
  for (size_t t = 0; t < params.trees; ++t) {
    SeededRng rng(seed, t);
    for (size_t i = 0; i < n; ++i) rows[i] = static_cast<uint32_t>(rng.UniformIndex(n));
    forest.trees_.push_back(DecisionTree::Fit(data, rows, tp, rng));
  }
  return forest;
}

std::vector<double> RandomForestClassifier::PredictProba(
    const DataTable& queries) const {
  if (queries.num_cols() != num_features_) {
    throw DataError("forest: query has " + std::to_string(queries.num_cols()) +
                    " columns, expected " + std::to_string(num_features_));
  }
  std::vector<double> out(queries.num_rows(), 0.0);
  for (size_t r = 0; r < out.size(); ++r) {
    const std::vector<double> x = Row(queries, r);
    double sum = 0.0;
    for (const DecisionTree& tree : trees_) sum += tree.leaf_value(tree.FindLeaf(x));
    out[r] = sum / static_cast<double>(trees_.size());
  }
  return out;
}

KnnClassifier KnnClassifier::Fit(const DataTable& features,
                                 std::span<const int> labels, size_t k) {
  CheckLabels(features, labels);
  if (features.num_rows() == 0) throw DataError("knn: no training rows");
  if (k == 0) throw ConfigError("knn: k must be >= 1");
  KnnClassifier m;
  m.encoder_ = Encoder::Fit(features);
  m.reference_ = m.encoder_.Transform(features);
  m.labels_.assign(labels.begin(), labels.end());
  m.k_ = std::min(k, features.num_rows());
  return m;
}

std::vector<double> KnnClassifier::PredictProba(const DataTable& queries) const {
  const RowMatrix q = encoder_.Transform(queries);
  const auto nn = KNearest(q, reference_, k_);
  std::vector<double> out(nn.size());
  for (size_t i = 0; i < nn.size(); ++i) {
    size_t pos = 0;
    for (const Neighbor& nb : nn[i]) pos += labels_[nb.index] == 1;
    out[i] = static_cast<double>(pos) / static_cast<double>(nn[i].size());
  }
  return out;
}

OneClassDistance OneClassDistance::Fit(const DataTable& features,
                                       std::span<const int> labels, size_t k) {
  CheckLabels(features, labels);
  if (k == 0) throw ConfigError("one_class: k must be >= 1");
  std::vector<size_t> pos;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) pos.push_back(i);
  }
  if (pos.size() < 2) throw DataError("one_class: needs at least 2 positive rows");
  const DataTable positives = features.SelectRows(pos);
  OneClassDistance m;
  m.encoder_ = Encoder::Fit(positives);
  m.positives_ = m.encoder_.Transform(positives);
  m.k_ = std::min(k, pos.size() - 1);
  const auto nn = KNearest(m.positives_, m.positives_, m.k_, true);
  std::vector<double> dk(nn.size());
  for (size_t i = 0; i < nn.size(); ++i) dk[i] = nn[i].back().distance;
  std::nth_element(dk.begin(), dk.begin() + dk.size() / 2, dk.end());
  double tau = dk[dk.size() / 2];
  if (dk.size() % 2 == 0) {
    tau = 0.5 * (tau + *std::max_element(dk.begin(), dk.begin() + dk.size() / 2));
  }
  m.tau_ = tau > 0.0 ? tau : 1e-12;
  return m;
}

std::vector<double> OneClassDistance::KthDistance(const DataTable& queries) const {
  const RowMatrix q = encoder_.Transform(queries);
  const auto nn = KNearest(q, positives_, k_);
  std::vector<double> out(nn.size());
  for (size_t i = 0; i < nn.size(); ++i) out[i] = nn[i].back().distance;
  return out;
}

std::vector<double> OneClassDistance::PredictProba(const DataTable& queries) const {
  std::vector<double> d = KthDistance(queries);
  for (double& v : d) v = 1.0 / (1.0 + v / tau_);
  return d;
}

std::string_view ValidatorBackendName(ValidatorBackend backend) {
  switch (backend) {
    case ValidatorBackend::kRandomForest:
      return "random_forest";
    case ValidatorBackend::kKnn:
      return "knn";
    case ValidatorBackend::kOneClassDistance:
      return "one_class_distance";
  }
  return "unknown";
}

ValidatorBackend ParseValidatorBackend(std::string_view name) {
  if (name == "random_forest") return ValidatorBackend::kRandomForest;
  if (name == "knn") return ValidatorBackend::kKnn;
  if (name == "one_class_distance") return ValidatorBackend::kOneClassDistance;
  throw ConfigError("unknown validator backend '" + std::string(name) +
                    "' (expected random_forest, knn or one_class_distance)");
}

HyperparameterGrid HyperparameterGrid::Full() {
  HyperparameterGrid g;
  for (size_t trees : {50, 200}) {
    for (int depth : {8, 16}) {
      for (size_t leaf : {1, 5}) g.forest.push_back({trees, depth, leaf, 0});
    }
  }
  g.knn_k = {5, 15, 31};
  g.one_class_k = {5, 15};
  return g;
}

HyperparameterGrid HyperparameterGrid::Degraded() {
  HyperparameterGrid g;
  g.forest = {{10, 1, 50, 1}};
  g.knn_k = {201};
  g.one_class_k = {101};
  return g;
}

HyperparameterGrid HyperparameterGrid::FromName(std::string_view name) {
  if (name == "full") return Full();
  if (name == "degraded") return Degraded();
  throw ConfigError("unknown grid preset '" + std::string(name) +
                    "' (expected full or degraded)");
}

size_t HyperparameterGrid::size(ValidatorBackend backend) const {
  switch (backend) {
    case ValidatorBackend::kRandomForest:
      return forest.size();
    case ValidatorBackend::kKnn:
      return knn_k.size();
    case ValidatorBackend::kOneClassDistance:
      return one_class_k.size();
  }
  return 0;
}

double SigmoidCalibration::Apply(double raw) const {
  if (identity) return raw;
  return 1.0 / (1.0 + std::exp(-(a * raw + b)));
}

SigmoidCalibration SigmoidCalibration::Fit(std::span<const double> raw,
                                           std::span<const int> labels) {
  SigmoidCalibration identity_fit;
  if (raw.size() != labels.size() || raw.empty()) return identity_fit;
  double npos = 0, nneg = 0;
  for (int y : labels) (y == 1 ? npos : nneg) += 1;
  if (npos == 0 || nneg == 0) return identity_fit;
  const double hi = (npos + 1) / (npos + 2);
  const double lo = 1 / (nneg + 2);

  auto loss = [&](double a, double b) {
    double l = 0.0;
    for (size_t i = 0; i < raw.size(); ++i) {
      const double z = a * raw[i] + b;
      const double t = labels[i] == 1 ? hi : lo;
      // log(1 + e^z) computed stably.
      const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      l += softplus - t * z;
    }
    return l;
  };

  double a = 0.0, b = std::log((npos + 1) / (nneg + 1));
  double f = loss(a, b);
  for (int it = 0; it < 100; ++it) {
    double ga = 0, gb = 0, haa = 1e-12, hab = 0, hbb = 1e-12;
    for (size_t i = 0; i < raw.size(); ++i) {
      const double s = raw[i];
      const double p = 1.0 / (1.0 + std::exp(-(a * s + b)));
      const double t = labels[i] == 1 ? hi : lo;
      const double w = p * (1 - p);
      ga += (p - t) * s;
      gb += p - t;
      haa += w * s * s;
      hab += w * s;
      hbb += w;
    }
    if (std::abs(ga) < 1e-10 && std::abs(gb) < 1e-10) break;
    const double det = haa * hbb - hab * hab;
    if (!(det > 0)) break;
    const double da = -(hbb * ga - hab * gb) / det;
    const double db = -(-hab * ga + haa * gb) / det;
    double step = 1.0;
    bool moved = false;
    while (step > 1e-10) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = loss(na, nb);
      if (nf < f + 1e-4 * step * (ga * da + gb * db)) {
        a = na;
        b = nb;
        f = nf;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  SigmoidCalibration fit{a, b, false};
  if (!(a > 0) || !std::isfinite(b) || std::abs(b) > kMaxLogit ||
      std::abs(a + b) > kMaxLogit) {
    return identity_fit;
  }
  std::vector<double> cal(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) cal[i] = fit.Apply(raw[i]);
  if (Brier(cal, labels) > Brier(raw, labels)) return identity_fit;
  return fit;
}

double Auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("auroc: size mismatch");
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return scores[x] < scores[y]; });
  double pos_rank_sum = 0.0, npos = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        pos_rank_sum += mid;
        npos += 1;
      }
    }
    i = j;
  }
  const double nneg = static_cast<double>(n) - npos;
  if (npos == 0 || nneg == 0) return 0.5;
  return (pos_rank_sum - npos * (npos + 1) / 2) / (npos * nneg);
}

double Brier(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("brier: size mismatch");
  if (scores.empty()) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double d = scores[i] - labels[i];
    s += d * d;
  }
  return s / static_cast<double>(scores.size());
}

ValidatorModel ValidatorModel::Train(const DataTable& features,
                                     std::span<const int> labels,
                                     ValidatorBackend backend,
                                     const HyperparameterGrid& grid,
                                     uint64_t seed,
                                     const TrainOptions& options) {
  CheckLabels(features, labels);
  if (grid.size(backend) == 0) {
    throw ConfigError("validator: empty grid for backend " +
                      std::string(ValidatorBackendName(backend)));
  }
  ValidatorModel m;
  m.backend_ = backend;
  m.schema_ = features.schema();

  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) rows.push_back(i);
    }
    const size_t n = rows.size();
    if (n < 3) {
      throw DataError("validator: class " + std::to_string(cls) + " has " +
                      std::to_string(n) +
                      " rows; every split needs both classes (at least 3 each)");
    }
    SeededRng rng(seed, kSplitStream + cls);
    rng.Shuffle(rows);
    const size_t n_fit = std::max<size_t>(1, static_cast<size_t>(std::llround(0.70 * n)));
    const size_t n_sel = std::max<size_t>(1, static_cast<size_t>(std::llround(0.15 * n)));
    if (n_fit + n_sel >= n) {
      throw DataError("validator: too few rows of class " + std::to_string(cls));
    }
    m.fit_rows_.insert(m.fit_rows_.end(), rows.begin(), rows.begin() + n_fit);
    m.select_rows_.insert(m.select_rows_.end(), rows.begin() + n_fit,
                          rows.begin() + n_fit + n_sel);
    m.calibrate_rows_.insert(m.calibrate_rows_.end(), rows.begin() + n_fit + n_sel,
                             rows.end());
  }
  std::sort(m.fit_rows_.begin(), m.fit_rows_.end());
  std::sort(m.select_rows_.begin(), m.select_rows_.end());
  std::sort(m.calibrate_rows_.begin(), m.calibrate_rows_.end());

  const DataTable fit_x = features.SelectRows(m.fit_rows_);
  const std::vector<int> fit_y = Gather(labels, m.fit_rows_);
  const DataTable sel_x = features.SelectRows(m.select_rows_);
  const std::vector<int> sel_y = Gather(labels, m.select_rows_);

  double best = -1.0;
  for (size_t g = 0; g < grid.size(backend); ++g) {
    ValidatorModel cand = m;
    switch (backend) {
      case ValidatorBackend::kRandomForest: {
        const ForestParams& p = grid.forest[g];
        cand.forest_ = std::make_shared<RandomForestClassifier>(
            RandomForestClassifier::Fit(fit_x, fit_y, p, DeriveSeed(seed, g)));
        cand.chosen_ = "trees=" + std::to_string(p.trees) +
                       ",max_depth=" + std::to_string(p.max_depth) +
                       ",min_leaf=" + std::to_string(p.min_leaf);
        break;
      }
      case ValidatorBackend::kKnn:
        cand.knn_ = std::make_shared<KnnClassifier>(
            KnnClassifier::Fit(fit_x, fit_y, grid.knn_k[g]));
        cand.chosen_ = "k=" + std::to_string(grid.knn_k[g]);
        break;
      case ValidatorBackend::kOneClassDistance:
        cand.one_class_ = std::make_shared<OneClassDistance>(
            OneClassDistance::Fit(fit_x, fit_y, grid.one_class_k[g]));
        cand.chosen_ = "k=" + std::to_string(grid.one_class_k[g]);
        break;
    }
    const double auc = Auroc(cand.ScoreRaw(sel_x), sel_y);
    if (auc > best) {
      best = auc;
      cand.selection_auroc_ = auc;
      m = std::move(cand);
    }
  }

  if (options.calibrate) {
    const DataTable cal_x = features.SelectRows(m.calibrate_rows_);
    const std::vector<int> cal_y = Gather(labels, m.calibrate_rows_);
    m.calibration_ = SigmoidCalibration::Fit(m.ScoreRaw(cal_x), cal_y);
  }
  return m;
}

std::vector<double> ValidatorModel::ScoreRaw(const DataTable& queries) const {
  const std::vector<ColumnMeta> qs = queries.schema();
  if (!SchemasCompatible(qs, schema_)) {
    throw DataError("validator: query schema does not match training features");
  }
  std::vector<double> s;
  if (forest_) {
    s = forest_->PredictProba(queries);
  } else if (knn_) {
    s = knn_->PredictProba(queries);
  } else if (one_class_) {
    s = one_class_->PredictProba(queries);
  } else {
    throw Error("validator: model not trained");
  }
  for (double& v : s) v = Quantize(v);
  return s;
}

std::vector<double> ValidatorModel::Score(const DataTable& queries) const {
  std::vector<double> s = ScoreRaw(queries);
  for (double& v : s) v = calibration_.Apply(v);
  return s;
}

ReliabilityBins ComputeReliability(std::span<const double> scores,
                                   std::span<const int> labels, size_t bins) {
  if (bins < 2) throw ConfigError("reliability: bins must be >= 2");
  if (scores.size() != labels.size()) throw DataError("reliability: size mismatch");
  ReliabilityBins out;
  out.edges.resize(bins + 1);
  for (size_t b = 0; b <= bins; ++b) {
    out.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  }
  out.mean_score.assign(bins, 0.0);
  out.positive_fraction.assign(bins, 0.0);
  out.count.assign(bins, 0);
  for (size_t i = 0; i < scores.size(); ++i) {
    const double s = std::clamp(scores[i], 0.0, 1.0);
    const size_t b = std::min(bins - 1, static_cast<size_t>(s * static_cast<double>(bins)));
    out.mean_score[b] += scores[i];
    out.positive_fraction[b] += labels[i];
    ++out.count[b];
  }
  for (size_t b = 0; b < bins; ++b) {
    if (out.count[b] > 0) {
      out.mean_score[b] /= static_cast<double>(out.count[b]);
      out.positive_fraction[b] /= static_cast<double>(out.count[b]);
    }
  }
  return out;
}

void ReliabilityCurve::WriteCsv(std::ostream& out) const {
  out << "set,bin,lo,hi,mean_score,positive_fraction,count\n";
  auto emit = [&](const char* name, const ReliabilityBins& r) {
    for (size_t b = 0; b < r.count.size(); ++b) {
      out << name << ',' << b << ',' << FormatNumber(r.edges[b]) << ','
          << FormatNumber(r.edges[b + 1]) << ',' << FormatNumber(r.mean_score[b])
          << ',' << FormatNumber(r.positive_fraction[b]) << ',' << r.count[b]
          << '\n';
    }
  };
  emit("train", train);
  emit("holdout", holdout);
}

ReliabilityCurve Reliability(const Scorer& model, const DataTable& train,
                             std::span<const int> train_labels,
                             const DataTable& holdout,
                             std::span<const int> holdout_labels, size_t bins) {
  ReliabilityCurve c;
  c.train = ComputeReliability(model.Score(train), train_labels, bins);
  c.holdout = ComputeReliability(model.Score(holdout), holdout_labels, bins);
  return c;
}

}  // namespace dgm
