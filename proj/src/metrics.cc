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

#include "dgm/metrics.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "dgm/correlation.h"
#include "dgm/csv.h"
#include "dgm/error.h"
#include "dgm/neighbors.h"
#include "dgm/rng.h"
#include "dgm/validator.h"

namespace dgm {
namespace {

constexpr size_t kHellingerBins = 10;
constexpr size_t kCvFolds = 5;
constexpr uint64_t kCvStream = 0xc5f0;
constexpr uint64_t kMiaStream = 0x3a1a;

void RequireCompatible(const DataTable& a, const DataTable& b, const char* what) {
  if (!SchemasCompatible(a, b)) {
    throw DataError(std::string(what) + ": real and synthetic schemas differ");
  }
}

double HellingerFromCounts(const std::vector<double>& p, const std::vector<double>& q) {
  double sp = 0, sq = 0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  if (sp == 0 || sq == 0) return sp == sq ? 0.0 : 1.0;
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i] / sp) - std::sqrt(q[i] / sq);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(s) / std::numbers::sqrt2);
}

Eigen::MatrixXd Covariance(const RowMatrix& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const double denom = std::max<double>(1.0, static_cast<double>(x.rows()) - 1.0);
  return (centered.transpose() * centered) / denom;
}

struct Binary {
  DataTable features;
  std::vector<int> labels;
};

Binary SplitLabel(const DataTable& t, size_t label_col) {
  std::vector<size_t> cols;
  for (size_t j = 0; j < t.num_cols(); ++j) {
    if (j != label_col) cols.push_back(j);
  }
  Binary b;
  b.features = t.SelectColumns(cols);
  const Column& y = t.column(label_col);
  b.labels.assign(y.codes.begin(), y.codes.end());
  return b;
}

struct ClassifierScores {
  std::vector<std::vector<double>> per_model;  // forest, knn
};

// Trains both classifiers on `train` and scores `test`. A single-class
// training set predicts that class with certainty.
ClassifierScores FitAndScore(const Binary& train, const DataTable& test,
                             uint64_t seed) {
  ClassifierScores out;
  size_t pos = 0;
  for (int y : train.labels) pos += y == 1;
  if (pos == 0 || pos == train.labels.size()) {
    const double c = pos == 0 ? 0.0 : 1.0;
    out.per_model.assign(2, std::vector<double>(test.num_rows(), c));
    return out;
  }
  const ForestParams fp{50, 10, 1, 0};
  out.per_model.push_back(
      RandomForestClassifier::Fit(train.features, train.labels, fp, seed)
          .PredictProba(test));
  out.per_model.push_back(
      KnnClassifier::Fit(train.features, train.labels, 15).PredictProba(test));
  return out;
}

double Accuracy(std::span<const double> p, std::span<const int> y) {
  if (y.empty()) return 0.0;
  size_t ok = 0;
  for (size_t i = 0; i < y.size(); ++i) ok += (p[i] >= 0.5 ? 1 : 0) == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

std::vector<std::vector<size_t>> Folds(size_t n, size_t k, SeededRng& rng) {
  std::vector<size_t> perm = rng.Permutation(n);
  std::vector<std::vector<size_t>> folds(k);
  for (size_t i = 0; i < n; ++i) folds[i % k].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<size_t> Complement(size_t n, const std::vector<size_t>& sorted) {
  std::vector<size_t> out;
  out.reserve(n - sorted.size());
  size_t j = 0;
  for (size_t i = 0; i < n; ++i) {
    if (j < sorted.size() && sorted[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + mid));
  }
  return m;
}

double HellingerColumn(const Column& real, const Column& synth) {
  if (real.meta.is_categorical()) {
    const size_t levels = real.meta.num_categories();
    std::vector<double> p(levels, 0.0), q(levels, 0.0);
    for (int32_t c : real.codes) p[c] += 1;
    for (int32_t c : synth.codes) q[c] += 1;
    return HellingerFromCounts(p, q);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : real.numbers) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : synth.numbers) lo = std::min(lo, v), hi = std::max(hi, v);
  std::vector<double> p(kHellingerBins, 0.0), q(kHellingerBins, 0.0);
  const double width = (hi - lo) / static_cast<double>(kHellingerBins);
  auto bin = [&](double v) {
    if (!(width > 0)) return size_t{0};
    const auto b = static_cast<size_t>((v - lo) / width);
    return std::min(b, kHellingerBins - 1);
  };
  for (double v : real.numbers) p[bin(v)] += 1;
  for (double v : synth.numbers) q[bin(v)] += 1;
  return HellingerFromCounts(p, q);
}

double HellingerAvg(const DataTable& real, const DataTable& synth) {
  RequireCompatible(real, synth, "hellinger");
  if (real.num_cols() == 0) return 0.0;
  double s = 0.0;
  for (size_t j = 0; j < real.num_cols(); ++j) {
    s += HellingerColumn(real.column(j), synth.column(j));
  }
  return s / static_cast<double>(real.num_cols());
}

double CorrelationDiff(const DataTable& real, const DataTable& synth) {
  RequireCompatible(real, synth, "corr_diff");
  return (MixedCorrelation(real) - MixedCorrelation(synth)).norm();
}

PcaDiff PcaDiffs(const DataTable& real, const DataTable& synth) {
  RequireCompatible(real, synth, "pca");
  const Encoder enc = Encoder::Fit(real);
  if (enc.dims() < 2) throw DataError("pca: needs at least 2 encoded dimensions");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(Covariance(enc.Transform(real)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Covariance(enc.Transform(synth)));
  // Eigen sorts ascending.
  const Eigen::VectorXd lr = er.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd ls = es.eigenvalues().cwiseMax(0.0);
  PcaDiff out;
  const double total = lr.sum();
  const double diff = (lr - ls).cwiseAbs().sum();
  out.eigenvalue_diff = total > 0 ? diff / total : diff;

  const Eigen::Index last = lr.size() - 1;
  Eigen::VectorXd a = er.eigenvectors().col(last).normalized();
  Eigen::VectorXd b = es.eigenvectors().col(last).normalized();
  if (a.dot(b) < 0) b = -b;
  // Angle between lines, accurate near 0.
  out.angle_diff = 2.0 * std::atan2((a - b).norm(), (a + b).norm());
  out.angle_diff = std::clamp(out.angle_diff, 0.0, std::numbers::pi / 2);
  return out;
}

MlEfficacy MlEfficacyDiff(const DataTable& real_train, const DataTable& synth,
                          const DataTable& holdout, const std::string& label,
                          uint64_t seed) {
  RequireCompatible(real_train, synth, "ml_efficacy");
  RequireCompatible(real_train, holdout, "ml_efficacy");
  const size_t lc = real_train.ColumnIndex(label);
  const ColumnMeta& meta = real_train.meta(lc);
  if (!meta.is_categorical() || meta.num_categories() != 2) {
    throw DataError("ml_efficacy: label column \"" + label +
                    "\" must be categorical with exactly 2 categories");
  }
  if (real_train.num_cols() < 2) throw DataError("ml_efficacy: no feature columns");
  const Binary real = SplitLabel(real_train, lc);
  const Binary syn = SplitLabel(synth, lc);
  const Binary hold = SplitLabel(holdout, lc);

  MlEfficacy out;
  const ClassifierScores rs = FitAndScore(real, hold.features, seed);
  const ClassifierScores ss = FitAndScore(syn, hold.features, seed);
  const double models = static_cast<double>(rs.per_model.size());
  for (size_t c = 0; c < rs.per_model.size(); ++c) {
    out.auroc_diff += (Auroc(ss.per_model[c], hold.labels) -
                       Auroc(rs.per_model[c], hold.labels)) / models;
    out.acc_diff_holdout += (Accuracy(ss.per_model[c], hold.labels) -
                             Accuracy(rs.per_model[c], hold.labels)) / models;
  }

  // Paired folds: fold f trains on the other real (or synthetic) folds and
  // always tests on real fold f. Equal-sized inputs get identical folds.
  SeededRng real_rng(seed, kCvStream), synth_rng(seed, kCvStream);
  const size_t folds = std::min(kCvFolds, std::min(real_train.num_rows(), synth.num_rows()));
  if (folds < 2) throw DataError("ml_efficacy: too few rows for cross-validation");
  const auto rf = Folds(real_train.num_rows(), folds, real_rng);
  const auto sf = Folds(synth.num_rows(), folds, synth_rng);
  double cv = 0.0;
  for (size_t f = 0; f < folds; ++f) {
    const std::vector<size_t> r_train = Complement(real_train.num_rows(), rf[f]);
    const std::vector<size_t> s_train = Complement(synth.num_rows(), sf[f]);
    Binary rt{real.features.SelectRows(r_train), {}};
    for (size_t i : r_train) rt.labels.push_back(real.labels[i]);
    Binary st{syn.features.SelectRows(s_train), {}};
    for (size_t i : s_train) st.labels.push_back(syn.labels[i]);
    const DataTable test = real.features.SelectRows(rf[f]);
    std::vector<int> test_y;
    for (size_t i : rf[f]) test_y.push_back(real.labels[i]);
    const uint64_t fs = DeriveSeed(seed, f + 1);
    const ClassifierScores a = FitAndScore(rt, test, fs);
    const ClassifierScores b = FitAndScore(st, test, fs);
    for (size_t c = 0; c < a.per_model.size(); ++c) {
      cv += Accuracy(b.per_model[c], test_y) - Accuracy(a.per_model[c], test_y);
    }
  }
  out.acc_diff_cv = cv / (models * static_cast<double>(folds));
  return out;
}

std::vector<double> EntropyWeights(const DataTable& real, const Encoder& encoder) {
  std::vector<double> col_weight(real.num_cols());
  const double n = static_cast<double>(real.num_rows());
  for (size_t j = 0; j < real.num_cols(); ++j) {
    std::map<double, size_t> counts;
    for (size_t r = 0; r < real.num_rows(); ++r) ++counts[real.value(r, j)];
    double h = 0.0;
    for (const auto& [v, c] : counts) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
    col_weight[j] = 1.0 / std::max(h, 0.01);
  }
  std::vector<double> w(encoder.dims());
  for (size_t d = 0; d < w.size(); ++d) w[d] = col_weight[encoder.source_column()[d]];
  return w;
}

double EpsIdentifiability(const DataTable& real, const DataTable& synth) {
  RequireCompatible(real, synth, "eps_identifiability");
  if (real.num_rows() < 2) throw DataError("eps_identifiability: needs >= 2 real rows");
  if (synth.num_rows() == 0) return 0.0;
  const Encoder enc = Encoder::Fit(real);
  const std::vector<double> w = EntropyWeights(real, enc);
  const Eigen::Map<const Eigen::RowVectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const RowMatrix xr = enc.Transform(real).array().rowwise() * wv.array();
  const RowMatrix xs = enc.Transform(synth).array().rowwise() * wv.array();
  const std::vector<double> rr = NearestDistance(xr, xr, true);
  const std::vector<double> rs = NearestDistance(xr, xs);
  size_t hits = 0;
  for (size_t i = 0; i < rr.size(); ++i) hits += rs[i] < rr[i];
  return static_cast<double>(hits) / static_cast<double>(rr.size());
}

DcrResult MedianDcr(const DataTable& real, const DataTable& synth) {
  RequireCompatible(real, synth, "median_dcr");
  if (real.num_rows() == 0 || synth.num_rows() == 0) {
    throw DataError("median_dcr: empty input");
  }
  const Encoder enc = Encoder::Fit(real);
  const RowMatrix xr = enc.Transform(real);
  const RowMatrix xs = enc.Transform(synth);
  const double dcr = Median(NearestDistance(xs, xr));
  DcrResult out;
  const double base = real.num_rows() >= 2 ? Median(NearestDistance(xr, xr, true)) : 0.0;
  if (base > 0) {
    out.value = dcr / base;
  } else {
    out.value = dcr;
    out.unnormalized = true;
  }
  return out;
}

MiaResult MiaAttack(const DataTable& known, std::span<const int> members,
                    const DataTable& synth) {
  RequireCompatible(known, synth, "mia");
  if (known.num_rows() != members.size()) throw DataError("mia: label count mismatch");
  MiaResult out;
  if (known.num_rows() == 0 || synth.num_rows() == 0) return out;
  const Encoder enc = Encoder::Fit(known);
  const std::vector<double> d = NearestDistance(enc.Transform(known), enc.Transform(synth));
  const double cut = Median(d);
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    const bool pred = d[i] < cut;
    if (pred && members[i] == 1) ++tp;
    if (pred && members[i] == 0) ++fp;
    if (!pred && members[i] == 1) ++fn;
  }
  out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  return out;
}

nlohmann::ordered_json MetricsReport::ToJson() const {
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json j;
  j["pca_eigenvalue_diff"] = num(pca_eigenvalue_diff);
  j["pca_angle_diff"] = num(pca_angle_diff);
  j["hellinger_avg"] = num(hellinger_avg);
  j["corr_diff_frobenius"] = num(corr_diff_frobenius);
  j["auroc_diff"] = num(auroc_diff);
  j["acc_diff_cv"] = num(acc_diff_cv);
  j["acc_diff_holdout"] = num(acc_diff_holdout);
  j["eps_identifiability"] = num(eps_identifiability);
  j["median_dcr_normalized"] = num(median_dcr_normalized);
  j["mia_recall"] = num(mia_recall);
  j["mia_precision"] = num(mia_precision);
  j["dcr_unnormalized"] = dcr_unnormalized;
  j["eps_within_9pct"] = eps_within_9pct;
  return j;
}

std::vector<std::string> MetricsReport::CsvHeader() {
  return {"pca_eigenvalue_diff", "pca_angle_diff",     "hellinger_avg",
          "corr_diff_frobenius", "auroc_diff",         "acc_diff_cv",
          "acc_diff_holdout",    "eps_identifiability", "median_dcr_normalized",
          "mia_recall",          "mia_precision",      "dcr_unnormalized",
          "eps_within_9pct"};
}

std::vector<std::string> MetricsReport::CsvRow() const {
  auto num = [](double v) { return std::isnan(v) ? std::string() : FormatNumber(v); };
  return {num(pca_eigenvalue_diff), num(pca_angle_diff),    num(hellinger_avg),
          num(corr_diff_frobenius), num(auroc_diff),        num(acc_diff_cv),
          num(acc_diff_holdout),    num(eps_identifiability), num(median_dcr_normalized),
          num(mia_recall),          num(mia_precision),     dcr_unnormalized ? "1" : "0",
          eps_within_9pct ? "1" : "0"};
}

MetricsReport EvaluateAll(const DataTable& real_train, const DataTable& synth,
                          const DataTable& holdout, const std::string& label,
                          uint64_t seed) {
  RequireCompatible(real_train, synth, "evaluate");
  RequireCompatible(real_train, holdout, "evaluate");
  MetricsReport r;
  const PcaDiff pca = PcaDiffs(real_train, synth);
  r.pca_eigenvalue_diff = pca.eigenvalue_diff;
  r.pca_angle_diff = pca.angle_diff;
  r.hellinger_avg = HellingerAvg(real_train, synth);
  r.corr_diff_frobenius = CorrelationDiff(real_train, synth);
  if (label.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.auroc_diff = r.acc_diff_cv = r.acc_diff_holdout = nan;
  } else {
    const MlEfficacy ml = MlEfficacyDiff(real_train, synth, holdout, label, seed);
    r.auroc_diff = ml.auroc_diff;
    r.acc_diff_cv = ml.acc_diff_cv;
    r.acc_diff_holdout = ml.acc_diff_holdout;
    r.has_ml = true;
  }
  r.eps_identifiability = EpsIdentifiability(real_train, synth);
  const DcrResult dcr = MedianDcr(real_train, synth);
  r.median_dcr_normalized = dcr.value;
  r.dcr_unnormalized = dcr.unnormalized;

  // Balanced known-record set: equally many training and holdout rows.
  const size_t half = std::min(real_train.num_rows(), holdout.num_rows());
  SeededRng rng(seed, kMiaStream);
  std::vector<size_t> tr = rng.Permutation(real_train.num_rows());
  std::vector<size_t> ho = rng.Permutation(holdout.num_rows());
  tr.resize(half);
  ho.resize(half);
  std::sort(tr.begin(), tr.end());
  std::sort(ho.begin(), ho.end());
  const std::vector<DataTable> known_parts = {real_train.SelectRows(tr),
                                              holdout.SelectRows(ho)};
  const DataTable known = DataTable::VConcat(known_parts);
  std::vector<int> members(half, 1);
  members.resize(2 * half, 0);
  const MiaResult mia = MiaAttack(known, members, synth);
  r.mia_recall = mia.recall;
  r.mia_precision = mia.precision;
  r.eps_within_9pct = r.eps_identifiability <= kIdentificationRiskLimit;
  return r;
}

}  // namespace dgm
