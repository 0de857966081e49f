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

#include "dgm/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dgm/csv.h"
#include "dgm/error.h"
#include "dgm/parallel.h"
#include "dgm/rng.h"
#include "dgm/split.h"

namespace dgm {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr uint64_t kSplitStream = 0x5911;
constexpr uint64_t kPartitionStream = 0x9a00;
constexpr uint64_t kFitStream = 0x6e00;
constexpr uint64_t kSampleStream = 0x5a00;
constexpr uint64_t kJoinStream = 0x701d;
constexpr uint64_t kValidatorDataStream = 0x7a1d;
constexpr uint64_t kValidatorTrainStream = 0x7a1e;
constexpr uint64_t kEvalStream = 0xe7a1;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

template <typename F>
auto Stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(std::string(name) + " stage failed: " + e.what());
  }
}

void CheckKeys(const ojson& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

std::string ResolvePath(const std::string& p, const std::string& base) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

uint64_t RunSeed(uint64_t master, size_t repeat) { return DeriveSeed(master, repeat); }

MetricsReport NanReport() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MetricsReport r;
  r.pca_eigenvalue_diff = r.pca_angle_diff = r.hellinger_avg = nan;
  r.corr_diff_frobenius = r.auroc_diff = r.acc_diff_cv = r.acc_diff_holdout = nan;
  r.eps_identifiability = r.median_dcr_normalized = r.mia_recall = nan;
  r.mia_precision = nan;
  return r;
}

// Reports NaN metrics when the joined table is too small to evaluate.
MetricsReport Evaluate(const SplitPair& split, const DataTable& synth,
                       const std::string& label, uint64_t seed) {
  if (synth.num_rows() < 2) return NanReport();
  return EvaluateAll(split.train, synth, split.holdout, label, DeriveSeed(seed, kEvalStream));
}

std::vector<GeneratorConfig> Replicate(const PipelineConfig& c, size_t n_p) {
  return std::vector<GeneratorConfig>(n_p, c.generators.front());
}

std::string StopName(const DgmOutput& o) { return std::string(JoinStopName(o.stop)); }

}  // namespace

void PipelineConfig::Validate() const {
  if (dataset.holdout_fraction <= 0.0 || dataset.holdout_fraction >= 1.0) {
    throw ConfigError("dataset.holdout_fraction must be in (0, 1)");
  }
  if (!dataset.dummy && (dataset.csv.empty() || dataset.schema.empty())) {
    throw ConfigError("dataset needs csv and schema paths (or a dummy section)");
  }
  if (dataset.dummy) dataset.dummy->Validate();
  if (partition.n_p < 1) throw ConfigError("partition.n_p must be >= 1");
  if (partition.mode == PartitionMode::kCorrelation && partition.n_p != 2) {
    throw ConfigError("partition.mode correlation requires n_p = 2");
  }
  if (partition.mode == PartitionMode::kExplicit &&
      partition.explicit_lists.size() != partition.n_p) {
    throw ConfigError("partition.explicit lists " +
                      std::to_string(partition.explicit_lists.size()) +
                      " partitions but n_p is " + std::to_string(partition.n_p));
  }
  if (generators.size() != partition.n_p) {
    throw ConfigError("generators lists " + std::to_string(generators.size()) +
                      " entries but n_p is " + std::to_string(partition.n_p));
  }
  for (const GeneratorConfig& g : generators) g.Validate();
  join.Validate();
  if (validator.backend != "constant") ParseValidatorBackend(validator.backend);
  HyperparameterGrid::FromName(validator.grid);
  if (!(validator.constant_score >= 0.0 && validator.constant_score <= 1.0)) {
    throw ConfigError("validator.constant_score must be in [0, 1]");
  }
  if (repeats < 1) throw ConfigError("seeds.repeats must be >= 1");
  for (const std::string& b : experiment.backends) {
    if (b != "constant") ParseValidatorBackend(b);
  }
}

PipelineConfig ParsePipelineConfig(const std::string& text, const std::string& base_dir) {
  PipelineConfig c;
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  c.source = j;
  try {
    CheckKeys(j, {"dataset", "partition", "generators", "join", "validator", "eval",
                  "seeds", "experiment"},
              "config");
    if (!j.contains("dataset")) throw ConfigError("config needs a dataset section");
    const ojson& d = j.at("dataset");
    CheckKeys(d, {"csv", "schema", "holdout_fraction", "dummy"}, "dataset");
    c.dataset.csv = ResolvePath(d.value("csv", std::string()), base_dir);
    c.dataset.schema = ResolvePath(d.value("schema", std::string()), base_dir);
    c.dataset.holdout_fraction = d.value("holdout_fraction", 0.2);
    if (d.contains("dummy")) {
      const ojson& dm = d.at("dummy");
      CheckKeys(dm, {"k1", "k2", "n", "gamma", "seed"}, "dataset.dummy");
      DummySpec s;
      s.k1 = dm.value("k1", s.k1);
      s.k2 = dm.value("k2", s.k2);
      s.n = dm.value("n", s.n);
      s.gamma = dm.value("gamma", s.gamma);
      s.base_seed = dm.value("seed", uint64_t{0});
      c.dataset.dummy = s;
    }

    if (j.contains("partition")) {
      const ojson& p = j.at("partition");
      CheckKeys(p, {"mode", "n_p", "explicit"}, "partition");
      const std::string mode = p.value("mode", std::string("random"));
      if (mode == "random") {
        c.partition.mode = PartitionMode::kRandom;
      } else if (mode == "correlation") {
        c.partition.mode = PartitionMode::kCorrelation;
      } else if (mode == "explicit") {
        c.partition.mode = PartitionMode::kExplicit;
      } else {
        throw ConfigError("partition.mode must be random, correlation or explicit");
      }
      if (p.contains("explicit")) {
        for (auto it = p.at("explicit").begin(); it != p.at("explicit").end(); ++it) {
          c.partition.explicit_lists.emplace_back(
              it.key(), it.value().get<std::vector<std::string>>());
        }
      }
      const size_t default_np = c.partition.mode == PartitionMode::kExplicit
                                    ? c.partition.explicit_lists.size()
                                    : (c.partition.mode == PartitionMode::kCorrelation ? 2 : 1);
      c.partition.n_p = p.value("n_p", default_np);
    }

    if (j.contains("generators")) {
      const ojson& g = j.at("generators");
      if (!g.is_array()) throw ConfigError("generators must be a list");
      for (const ojson& e : g) {
        CheckKeys(e, {"kind", "oversample_factor", "seed", "cart", "bn", "dp"},
                  "generators entry");
        c.generators.push_back(GeneratorConfigFromJson(nlohmann::json::parse(e.dump())));
      }
    } else {
      c.generators.assign(c.partition.n_p, GeneratorConfig{});
    }

    if (j.contains("join")) {
      const ojson& jn = j.at("join");
      CheckKeys(jn, {"strategy", "target_size", "theta", "auto_accept_fraction", "decay",
                     "max_iters", "early_stop_rounds"},
                "join");
      const std::string strategy = jn.value("strategy", std::string("validated"));
      if (strategy == "concat") {
        c.join.strategy = JoinStrategy::kConcat;
      } else if (strategy == "validated") {
        c.join.strategy = JoinStrategy::kValidated;
      } else {
        throw ConfigError("join.strategy must be concat or validated");
      }
      c.join.target_size = jn.value("target_size", size_t{0});
      if (jn.contains("theta") && !jn.at("theta").is_null()) {
        c.join.theta = jn.at("theta").get<double>();
      }
      c.join.auto_accept_fraction = jn.value("auto_accept_fraction", c.join.auto_accept_fraction);
      c.join.decay = jn.value("decay", c.join.decay);
      c.join.max_iters = jn.value("max_iters", c.join.max_iters);
      c.join.early_stop_rounds = jn.value("early_stop_rounds", c.join.early_stop_rounds);
    }

    if (j.contains("validator")) {
      const ojson& v = j.at("validator");
      CheckKeys(v, {"backend", "grid", "constant_score"}, "validator");
      c.validator.backend = v.value("backend", c.validator.backend);
      c.validator.grid = v.value("grid", c.validator.grid);
      c.validator.constant_score = v.value("constant_score", c.validator.constant_score);
    }
    if (j.contains("eval")) {
      CheckKeys(j.at("eval"), {"label_column"}, "eval");
      c.label_column = j.at("eval").value("label_column", std::string());
    }
    if (j.contains("seeds")) {
      CheckKeys(j.at("seeds"), {"master", "repeats"}, "seeds");
      c.master_seed = j.at("seeds").value("master", uint64_t{0});
      c.repeats = j.at("seeds").value("repeats", size_t{1});
    }
    if (j.contains("experiment")) {
      const ojson& e = j.at("experiment");
      CheckKeys(e, {"n_p_values", "thetas", "gammas", "dummy_seeds", "backends"},
                "experiment");
      c.experiment.n_p_values = e.value("n_p_values", std::vector<size_t>{});
      c.experiment.thetas = e.value("thetas", std::vector<double>{});
      c.experiment.gammas = e.value("gammas", std::vector<double>{});
      c.experiment.dummy_seeds = e.value("dummy_seeds", size_t{0});
      c.experiment.backends = e.value("backends", std::vector<std::string>{});
    }
  } catch (const ojson::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.dataset.dummy && !j.at("dataset").at("dummy").contains("seed")) {
    c.dataset.dummy->base_seed = c.master_seed;
  }
  c.Validate();
  return c;
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePipelineConfig(ss.str(), fs::path(path).parent_path().string());
}

DataTable LoadDataset(const PipelineConfig& config) {
  if (config.dataset.dummy) return SampleDummy(*config.dataset.dummy).table;
  return LoadCsv(config.dataset.csv, config.dataset.schema);
}

void ValidateAgainstData(const PipelineConfig& config, const DataTable& table) {
  if (config.partition.n_p > table.num_cols()) {
    throw ConfigError("partition.n_p = " + std::to_string(config.partition.n_p) +
                      " exceeds the " + std::to_string(table.num_cols()) + " columns");
  }
  if (!config.label_column.empty() && !table.FindColumn(config.label_column)) {
    throw ConfigError("eval.label_column \"" + config.label_column + "\" is not a column");
  }
  if (config.partition.mode == PartitionMode::kExplicit) {
    std::vector<int> seen(table.num_cols(), 0);
    for (const auto& [name, cols] : config.partition.explicit_lists) {
      for (const std::string& col : cols) {
        const auto idx = table.FindColumn(col);
        if (!idx) throw ConfigError("partition " + name + " names unknown column \"" + col + "\"");
        ++seen[*idx];
      }
    }
    for (size_t j = 0; j < seen.size(); ++j) {
      if (seen[j] != 1) {
        throw ConfigError("column \"" + table.meta(j).name + "\" appears " +
                          std::to_string(seen[j]) + " times in partition.explicit");
      }
    }
  }
}

PartitionSpec BuildPartition(const PipelineConfig& config, const DataTable& train,
                             uint64_t seed) {
  switch (config.partition.mode) {
    case PartitionMode::kRandom:
      return RandomPartition(train.num_cols(), config.partition.n_p,
                             DeriveSeed(seed, kPartitionStream));
    case PartitionMode::kCorrelation:
      return CorrelationPartition(train);
    case PartitionMode::kExplicit: {
      ojson j;
      for (const auto& [name, cols] : config.partition.explicit_lists) j[name] = cols;
      return PartitionFromJson(j.dump(), train.column_names());
    }
  }
  throw ConfigError("bad partition mode");
}

std::unique_ptr<Scorer> TrainJoinValidator(const DataTable& train,
                                           const PartitionSpec& spec,
                                           const ValidatorConfig& config,
                                           uint64_t seed, std::string* choice,
                                           double* selection_auroc) {
  if (config.backend == "constant") {
    if (choice) *choice = "constant=" + FormatNumber(config.constant_score);
    if (selection_auroc) *selection_auroc = 0.5;
    return std::make_unique<ConstantScorer>(config.constant_score);
  }
  const ValidatorTrainingSet ts =
      BuildValidatorTraining(train, spec, DeriveSeed(seed, kValidatorDataStream));
  auto model = std::make_unique<ValidatorModel>(ValidatorModel::Train(
      ts.features, ts.labels, ParseValidatorBackend(config.backend),
      HyperparameterGrid::FromName(config.grid), DeriveSeed(seed, kValidatorTrainStream)));
  if (choice) *choice = model->chosen();
  if (selection_auroc) *selection_auroc = model->selection_auroc();
  return model;
}

namespace {

std::vector<DataTable> GenerateParts(const DataTable& train, const DgmRunOptions& options,
                                     uint64_t seed, size_t jobs, StageTimes* times) {
  const PartitionSpec& spec = options.partition;
  spec.Validate(train.num_cols());
  if (options.generators.size() != spec.num_partitions) {
    throw ConfigError("generator count " + std::to_string(options.generators.size()) +
                      " does not match n_p " + std::to_string(spec.num_partitions));
  }
  const size_t target = options.join.target_size ? options.join.target_size : train.num_rows();
  double factor = 1.0;
  for (const GeneratorConfig& g : options.generators) factor = std::max(factor, g.oversample_factor);
  const auto m = static_cast<size_t>(std::ceil(factor * static_cast<double>(target) - 1e-9));

  std::vector<DataTable> parts(spec.num_partitions);
  std::vector<double> fit_s(parts.size()), sample_s(parts.size());
  ParallelFor(parts.size(), jobs, [&](size_t p) {
    const std::vector<size_t> cols = spec.Columns(p);
    const DataTable slice = train.SelectColumns(cols);
    GeneratorConfig gc = options.generators[p];
    gc.seed = DeriveSeed(DeriveSeed(seed, kFitStream + p), gc.seed);
    auto t0 = Clock::now();
    auto gen = FitGenerator(slice, gc);
    fit_s[p] = Seconds(t0);
    t0 = Clock::now();
    parts[p] = gen->Sample(m, DeriveSeed(seed, kSampleStream + p));
    sample_s[p] = Seconds(t0);
  });
  if (times) {
    for (size_t p = 0; p < parts.size(); ++p) {
      times->fit_seconds += fit_s[p];
      times->sample_seconds += sample_s[p];
    }
  }
  return parts;
}

DgmOutput JoinWithScorer(const DataTable& train, const std::vector<DataTable>& parts,
                         const DgmRunOptions& options, const Scorer* scorer,
                         uint64_t seed) {
  DgmOutput out;
  const size_t target = options.join.target_size ? options.join.target_size : train.num_rows();
  const auto t0 = Clock::now();
  DataTable joined;
  if (options.join.strategy == JoinStrategy::kConcat) {
    joined = ConcatJoin(parts, target, DeriveSeed(seed, kJoinStream));
  } else {
    JoinConfig jc = options.join;
    jc.target_size = target;
    JoinResult r = ValidatedJoin(parts, *scorer, jc, DeriveSeed(seed, kJoinStream));
    joined = std::move(r.table);
    out.trace = std::move(r.trace);
    out.stop = r.stop;
    out.truncated = r.truncated;
  }
  out.times.join_seconds = Seconds(t0);
  out.synthetic = RestoreColumnOrder(joined, options.partition);
  return out;
}

}  // namespace

DgmOutput JoinParts(const DataTable& train, std::vector<DataTable> parts,
                    const DgmRunOptions& options, uint64_t seed) {
  std::unique_ptr<Scorer> scorer;
  std::string choice;
  double auc = 0.0;
  double validator_s = 0.0;
  if (options.join.strategy == JoinStrategy::kValidated) {
    const auto t0 = Clock::now();
    scorer = TrainJoinValidator(train, options.partition, options.validator, seed, &choice, &auc);
    validator_s = Seconds(t0);
  }
  DgmOutput out = JoinWithScorer(train, parts, options, scorer.get(), seed);
  out.times.validator_seconds = validator_s;
  out.validator_choice = choice;
  out.validator_selection_auroc = auc;
  out.parts = std::move(parts);
  return out;
}

DgmOutput RunDgm(const DataTable& train, const DgmRunOptions& options, uint64_t seed,
                 size_t jobs) {
  StageTimes times;
  std::vector<DataTable> parts =
      Stage("generate", [&] { return GenerateParts(train, options, seed, jobs, &times); });
  DgmOutput out = Stage("join", [&] { return JoinParts(train, std::move(parts), options, seed); });
  out.times.fit_seconds = times.fit_seconds;
  out.times.sample_seconds = times.sample_seconds;
  return out;
}

uint64_t Fnv1a(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ConfigHash(const ojson& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a(config.dump())));
  return buf;
}

ojson Manifest::ToJson(const ojson& config) const {
  ojson j;
  j["tool"] = "dgm";
  j["version"] = std::string(kVersion);
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["master_seed"] = master_seed;
  j["config"] = config;
  return j;
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::string CsvLine(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += QuoteCsvField(fields[i]);
  }
  return line + "\n";
}

void WriteManifest(const PipelineConfig& config, const std::string& dir,
                   const std::string& command) {
  Manifest m{ConfigHash(config.source), config.master_seed, command};
  WriteFileAtomic((fs::path(dir) / "manifest.json").string(),
                  m.ToJson(config.source).dump(2) + "\n");
}

DgmRunOptions OptionsFor(const PipelineConfig& config, PartitionSpec spec,
                         std::vector<GeneratorConfig> generators) {
  DgmRunOptions o;
  o.partition = std::move(spec);
  o.generators = std::move(generators);
  o.join = config.join;
  o.validator = config.validator;
  return o;
}

SplitPair SplitFor(const PipelineConfig& config, const DataTable& table, uint64_t seed) {
  return Split(table, config.dataset.holdout_fraction, DeriveSeed(seed, kSplitStream));
}

}  // namespace

void RunSynth(const PipelineConfig& config, const std::string& out_dir, size_t jobs) {
  const DataTable table = Stage("load", [&] { return LoadDataset(config); });
  ValidateAgainstData(config, table);
  for (size_t r = 0; r < config.repeats; ++r) {
    const uint64_t seed = RunSeed(config.master_seed, r);
    std::string dir = out_dir;
    if (config.repeats > 1) {
      char name[32];
      std::snprintf(name, sizeof(name), "run_%03zu", r);
      dir = (fs::path(out_dir) / name).string();
    }
    const SplitPair split = Stage("split", [&] { return SplitFor(config, table, seed); });
    const PartitionSpec spec =
        Stage("partition", [&] { return BuildPartition(config, split.train, seed); });
    const DgmRunOptions options = OptionsFor(config, spec, config.generators);
    const DgmOutput out = RunDgm(split.train, options, seed, jobs);
    if (out.synthetic.num_rows() < 2) {
      throw Error("join stage failed: only " + std::to_string(out.synthetic.num_rows()) +
                  " rows were accepted (" + StopName(out) + ")");
    }
    const MetricsReport report = Stage("evaluate", [&] {
      return EvaluateAll(split.train, out.synthetic, split.holdout, config.label_column,
                         DeriveSeed(seed, kEvalStream));
    });
    Stage("write", [&] {
      const fs::path d(dir);
      std::ostringstream csv;
      WriteCsv(out.synthetic, csv);
      WriteFileAtomic((d / "synthetic.csv").string(), csv.str());
      ojson rep = report.ToJson();
      rep["rows"] = out.synthetic.num_rows();
      rep["truncated"] = out.truncated;
      rep["join_stop"] = StopName(out);
      rep["join_rounds"] = out.trace.rounds.size();
      rep["validator"] = out.validator_choice;
      WriteFileAtomic((d / "report.json").string(), rep.dump(2) + "\n");
      WriteFileAtomic((d / "report.csv").string(),
                      CsvLine(MetricsReport::CsvHeader()) + CsvLine(report.CsvRow()));
      std::ostringstream trace;
      out.trace.WriteCsv(trace);
      WriteFileAtomic((d / "join_trace.csv").string(), trace.str());
      WriteFileAtomic((d / "partition.json").string(),
                      PartitionToJson(spec, split.train.column_names()) + "\n");
      WriteManifest(config, dir, "synth");
      return 0;
    });
  }
}

MetricsReport RunEval(const PipelineConfig& config, const std::string& synthetic_csv,
                      const std::string& out_dir) {
  const DataTable table = Stage("load", [&] { return LoadDataset(config); });
  ValidateAgainstData(config, table);
  const uint64_t seed = RunSeed(config.master_seed, 0);
  const SplitPair split = SplitFor(config, table, seed);
  const DataTable synth = Stage("load", [&] {
    std::vector<SchemaEntry> schema;
    for (const ColumnMeta& m : split.train.schema()) {
      SchemaEntry e;
      e.name = m.name;
      e.kind = m.kind;
      e.categories = m.categories;
      e.has_categories = m.is_categorical();
      schema.push_back(e);
    }
    std::ifstream in(synthetic_csv);
    if (!in) throw DataError("cannot open " + synthetic_csv);
    return ReadCsv(in, schema);
  });
  const MetricsReport report = Stage("evaluate", [&] {
    return EvaluateAll(split.train, synth, split.holdout, config.label_column,
                       DeriveSeed(seed, kEvalStream));
  });
  Stage("write", [&] {
    const fs::path d(out_dir);
    WriteFileAtomic((d / "report.json").string(), report.ToJson().dump(2) + "\n");
    WriteFileAtomic((d / "report.csv").string(),
                    CsvLine(MetricsReport::CsvHeader()) + CsvLine(report.CsvRow()));
    WriteManifest(config, out_dir, "eval");
    return 0;
  });
  return report;
}

void RunDummy(const PipelineConfig* config, uint64_t seed, const std::string& out_dir,
              size_t jobs) {
  DummyPreset preset = DefaultDummyPreset(seed);
  if (config) {
    if (config->dataset.dummy) {
      preset.base.k1 = config->dataset.dummy->k1;
      preset.base.k2 = config->dataset.dummy->k2;
      preset.base.n = config->dataset.dummy->n;
    }
    if (!config->experiment.gammas.empty()) preset.gammas = config->experiment.gammas;
    if (config->experiment.dummy_seeds > 0) {
      preset.seeds.clear();
      for (size_t s = 0; s < config->experiment.dummy_seeds; ++s) {
        preset.seeds.push_back(DeriveSeed(seed, s));
      }
    }
  }
  const auto items = Stage("generate", [&] {
    return RatioSweep(preset.base, preset.gammas, preset.seeds, jobs);
  });
  Stage("write", [&] {
    WriteDummySweep(items, out_dir);
    return 0;
  });
}

std::string_view ExperimentPresetName(ExperimentPreset preset) {
  switch (preset) {
    case ExperimentPreset::kPartitionSweep:
      return "partition_sweep";
    case ExperimentPreset::kJoinCompare:
      return "join_compare";
    case ExperimentPreset::kTiming:
      return "timing";
    case ExperimentPreset::kCorrelationSweep:
      return "correlation_sweep";
    case ExperimentPreset::kValidatorCompare:
      return "validator_compare";
    case ExperimentPreset::kThresholdSweep:
      return "threshold_sweep";
  }
  return "unknown";
}

ExperimentPreset ParseExperimentPreset(std::string_view name) {
  for (auto p : {ExperimentPreset::kPartitionSweep, ExperimentPreset::kJoinCompare,
                 ExperimentPreset::kTiming, ExperimentPreset::kCorrelationSweep,
                 ExperimentPreset::kValidatorCompare, ExperimentPreset::kThresholdSweep}) {
    if (ExperimentPresetName(p) == name) return p;
  }
  throw ConfigError("unknown experiment preset '" + std::string(name) +
                    "' (expected partition_sweep, join_compare, timing, correlation_sweep, "
                    "validator_compare or threshold_sweep)");
}

std::string SweepTable::ToCsv() const {
  std::string s = CsvLine(header);
  for (const auto& r : rows) s += CsvLine(r);
  return s;
}

namespace {

using Row = std::vector<std::string>;

void AppendMetrics(Row& row, const MetricsReport& r) {
  const Row m = r.CsvRow();
  row.insert(row.end(), m.begin(), m.end());
}

std::vector<std::string> Header(std::vector<std::string> lead,
                                std::vector<std::string> tail = {}) {
  const auto m = MetricsReport::CsvHeader();
  lead.insert(lead.end(), m.begin(), m.end());
  lead.insert(lead.end(), tail.begin(), tail.end());
  return lead;
}

Row JoinColumns(const DgmOutput& o) {
  return {std::to_string(o.synthetic.num_rows()), std::to_string(o.trace.rounds.size()),
          o.truncated ? "1" : "0", StopName(o)};
}
const std::vector<std::string> kJoinHeader = {"rows", "rounds", "truncated", "join_stop"};

// Runs `tasks` jobs in parallel; each returns its rows, concatenated in
// task order.
std::vector<Row> Collect(size_t tasks, size_t jobs,
                         const std::function<std::vector<Row>(size_t)>& fn) {
  std::vector<std::vector<Row>> out(tasks);
  ParallelFor(tasks, jobs, [&](size_t i) { out[i] = fn(i); });
  std::vector<Row> rows;
  for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

}  // namespace

SweepTable RunExperiment(ExperimentPreset preset, const PipelineConfig& config,
                         const std::string& out_dir, size_t jobs) {
  SweepTable t;
  const size_t R = config.repeats;
  const std::string& label = config.label_column;

  if (preset == ExperimentPreset::kCorrelationSweep) {
    DummyPreset dp = DefaultDummyPreset(config.master_seed);
    if (config.dataset.dummy) {
      dp.base.k1 = config.dataset.dummy->k1;
      dp.base.k2 = config.dataset.dummy->k2;
      dp.base.n = config.dataset.dummy->n;
    }
    if (!config.experiment.gammas.empty()) dp.gammas = config.experiment.gammas;
    if (config.experiment.dummy_seeds > 0) {
      dp.seeds.clear();
      for (size_t s = 0; s < config.experiment.dummy_seeds; ++s) {
        dp.seeds.push_back(DeriveSeed(config.master_seed, s));
      }
    }
    const auto items = Stage("generate", [&] { return RatioSweep(dp.base, dp.gammas, dp.seeds, jobs); });
    t.header = Header({"seed", "gamma", "achieved_ratio", "strategy"}, kJoinHeader);
    t.rows = Collect(items.size(), jobs, [&](size_t i) {
      const DummySweepItem& it = items[i];
      const uint64_t seed = DeriveSeed(it.seed, 0xc0);
      const SplitPair split = SplitFor(config, it.sample.table, seed);
      DgmRunOptions o = OptionsFor(config, DummyGroups(dp.base), Replicate(config, 2));
      const auto parts = GenerateParts(split.train, o, seed, 1, nullptr);
      std::vector<Row> rows;
      for (JoinStrategy s : {JoinStrategy::kConcat, JoinStrategy::kValidated}) {
        o.join.strategy = s;
        const DgmOutput out = JoinParts(split.train, parts, o, seed);
        Row row = {std::to_string(it.seed), FormatNumber(it.gamma),
                   FormatNumber(it.sample.achieved_ratio),
                   s == JoinStrategy::kConcat ? "concat" : "validated"};
        AppendMetrics(row, Evaluate(split, out.synthetic, label, seed));
        const Row jc = JoinColumns(out);
        row.insert(row.end(), jc.begin(), jc.end());
        rows.push_back(std::move(row));
      }
      return rows;
    });
  } else {
    const DataTable table = Stage("load", [&] { return LoadDataset(config); });
    ValidateAgainstData(config, table);
    const SplitPair split = Stage("split", [&] { return SplitFor(config, table, config.master_seed); });
    const size_t k = split.train.num_cols();

    switch (preset) {
      case ExperimentPreset::kPartitionSweep:
      case ExperimentPreset::kTiming: {
        std::vector<size_t> nps = config.experiment.n_p_values;
        if (nps.empty()) {
          nps = preset == ExperimentPreset::kTiming ? std::vector<size_t>{1, 2, 4}
                                                    : std::vector<size_t>{1, 2, 3, 4, 5, 6};
        }
        std::erase_if(nps, [&](size_t v) { return v < 1 || v > k; });
        if (nps.empty()) throw ConfigError("experiment: no n_p value fits the table");
        const bool timing = preset == ExperimentPreset::kTiming;
        t.header = timing ? Header({"n_p", "repeat"},
                                   {"fit_seconds", "sample_seconds", "validator_seconds",
                                    "join_seconds", "structure_search_cost", "rows",
                                    "rounds", "truncated", "join_stop"})
                          : Header({"n_p", "repeat"}, kJoinHeader);
        t.rows = Collect(nps.size() * R, jobs, [&](size_t i) {
          const size_t np = nps[i / R], r = i % R;
          const uint64_t seed = RunSeed(config.master_seed, r);
          const PartitionSpec spec =
              RandomPartition(k, np, DeriveSeed(seed, kPartitionStream));
          const DgmOutput out =
              RunDgm(split.train, OptionsFor(config, spec, Replicate(config, np)), seed, 1);
          Row row = {std::to_string(np), std::to_string(r)};
          AppendMetrics(row, Evaluate(split, out.synthetic, label, seed));
          if (timing) {
            row.push_back(FormatNumber(out.times.fit_seconds));
            row.push_back(FormatNumber(out.times.sample_seconds));
            row.push_back(FormatNumber(out.times.validator_seconds));
            row.push_back(FormatNumber(out.times.join_seconds));
            row.push_back(std::to_string(
                StructureSearchCost(k, np, config.generators.front().bn.max_parents)));
          }
          const Row jc = JoinColumns(out);
          row.insert(row.end(), jc.begin(), jc.end());
          return std::vector<Row>{row};
        });
        break;
      }
      case ExperimentPreset::kJoinCompare: {
        t.header = Header({"strategy", "repeat"}, kJoinHeader);
        t.rows = Collect(R, jobs, [&](size_t r) {
          const uint64_t seed = RunSeed(config.master_seed, r);
          DgmRunOptions o = OptionsFor(config, BuildPartition(config, split.train, seed),
                                       config.generators);
          const auto parts = GenerateParts(split.train, o, seed, 1, nullptr);
          std::vector<Row> rows;
          for (JoinStrategy s : {JoinStrategy::kConcat, JoinStrategy::kValidated}) {
            o.join.strategy = s;
            const DgmOutput out = JoinParts(split.train, parts, o, seed);
            Row row = {s == JoinStrategy::kConcat ? "concat" : "validated", std::to_string(r)};
            AppendMetrics(row, Evaluate(split, out.synthetic, label, seed));
            const Row jc = JoinColumns(out);
            row.insert(row.end(), jc.begin(), jc.end());
            rows.push_back(std::move(row));
          }
          return rows;
        });
        break;
      }
      case ExperimentPreset::kValidatorCompare: {
        std::vector<std::string> backends = config.experiment.backends;
        if (backends.empty()) backends = {"random_forest", "knn", "one_class_distance"};
        t.header = Header({"backend", "repeat", "chosen", "selection_auroc"}, kJoinHeader);
        t.rows = Collect(R, jobs, [&](size_t r) {
          const uint64_t seed = RunSeed(config.master_seed, r);
          DgmRunOptions o = OptionsFor(config, BuildPartition(config, split.train, seed),
                                       config.generators);
          o.join.strategy = JoinStrategy::kValidated;
          const auto parts = GenerateParts(split.train, o, seed, 1, nullptr);
          std::vector<Row> rows;
          for (const std::string& b : backends) {
            o.validator.backend = b;
            const DgmOutput out = JoinParts(split.train, parts, o, seed);
            Row row = {b, std::to_string(r), out.validator_choice,
                       FormatNumber(out.validator_selection_auroc)};
            AppendMetrics(row, Evaluate(split, out.synthetic, label, seed));
            const Row jc = JoinColumns(out);
            row.insert(row.end(), jc.begin(), jc.end());
            rows.push_back(std::move(row));
          }
          return rows;
        });
        break;
      }
      case ExperimentPreset::kThresholdSweep: {
        std::vector<double> thetas = config.experiment.thetas;
        if (thetas.empty()) {
          for (int i = 1; i <= 9; ++i) thetas.push_back(i / 10.0);
        }
        t.header = Header({"theta", "repeat"}, kJoinHeader);
        t.rows = Collect(R, jobs, [&](size_t r) {
          const uint64_t seed = RunSeed(config.master_seed, r);
          DgmRunOptions o = OptionsFor(config, BuildPartition(config, split.train, seed),
                                       config.generators);
          o.join.strategy = JoinStrategy::kValidated;
          o.join.decay = 0.0;
          const auto parts = GenerateParts(split.train, o, seed, 1, nullptr);
          const auto scorer =
              TrainJoinValidator(split.train, o.partition, o.validator, seed, nullptr, nullptr);
          std::vector<Row> rows;
          for (double th : thetas) {
            o.join.theta = th;
            const DgmOutput out = JoinWithScorer(split.train, parts, o, scorer.get(), seed);
            Row row = {FormatNumber(th), std::to_string(r)};
            AppendMetrics(row, Evaluate(split, out.synthetic, label, seed));
            const Row jc = JoinColumns(out);
            row.insert(row.end(), jc.begin(), jc.end());
            rows.push_back(std::move(row));
          }
          return rows;
        });
        break;
      }
      case ExperimentPreset::kCorrelationSweep:
        break;
    }
  }

  Stage("write", [&] {
    WriteFileAtomic((fs::path(out_dir) / (std::string(ExperimentPresetName(preset)) + ".csv")).string(),
                    t.ToCsv());
    WriteManifest(config, out_dir, "experiment " + std::string(ExperimentPresetName(preset)));
    return 0;
  });
  return t;
}

}  // namespace dgm
