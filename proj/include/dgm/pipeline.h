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

#ifndef DGM_PIPELINE_H_
#define DGM_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgm/dummy.h"
#include "dgm/generator.h"
#include "dgm/joiner.h"
#include "dgm/metrics.h"
#include "dgm/partition.h"
#include "dgm/table.h"
#include "dgm/validator.h"
#include "json.hpp"

namespace dgm {

inline constexpr std::string_view kVersion = "1.0.0";

struct DatasetConfig {
  std::string csv;
  std::string schema;
  // Used instead of csv/schema when set.
  std::optional<DummySpec> dummy;
  double holdout_fraction = 0.2;
};

enum class PartitionMode { kRandom, kCorrelation, kExplicit };

struct PartitionConfig {
  PartitionMode mode = PartitionMode::kRandom;
  size_t n_p = 1;
  // Explicit mode: partition name -> column names, in file order.
  std::vector<std::pair<std::string, std::vector<std::string>>> explicit_lists;
};

struct ValidatorConfig {
  // random_forest | knn | one_class_distance | constant
  std::string backend = "random_forest";
  std::string grid = "full";
  double constant_score = 1.0;
};

// Optional overrides for experiment presets.
struct ExperimentConfig {
  std::vector<size_t> n_p_values;
  std::vector<double> thetas;
  std::vector<double> gammas;
  size_t dummy_seeds = 0;
  std::vector<std::string> backends;
};

struct PipelineConfig {
  DatasetConfig dataset;
  PartitionConfig partition;
  std::vector<GeneratorConfig> generators;
  JoinConfig join;
  ValidatorConfig validator;
  std::string label_column;
  uint64_t master_seed = 0;
  size_t repeats = 1;
  ExperimentConfig experiment;
  // Canonical JSON the config was read from.
  nlohmann::ordered_json source;

  // Structural checks that need no data. Throws ConfigError.
  void Validate() const;
};

// Relative dataset paths are resolved against `base_dir`.
PipelineConfig ParsePipelineConfig(const std::string& text,
                                   const std::string& base_dir = ".");
PipelineConfig LoadPipelineConfig(const std::string& path);

// Loads the dataset (CSV or generated dummy table).
DataTable LoadDataset(const PipelineConfig& config);
// Checks that referenced columns exist and n_p fits the table.
void ValidateAgainstData(const PipelineConfig& config, const DataTable& table);

PartitionSpec BuildPartition(const PipelineConfig& config, const DataTable& train,
                             uint64_t seed);

// Everything RunDgm needs about one run.
struct DgmRunOptions {
  PartitionSpec partition;
  // One per partition.
  std::vector<GeneratorConfig> generators;
  JoinConfig join;  // target_size 0 means the training size
  ValidatorConfig validator;
};

struct StageTimes {
  double fit_seconds = 0.0;
  double sample_seconds = 0.0;
  double validator_seconds = 0.0;
  double join_seconds = 0.0;
};

struct DgmOutput {
  // Joined table in the training table's column order.
  DataTable synthetic;
  // Per-partition generator samples (before joining).
  std::vector<DataTable> parts;
  JoinTrace trace;
  JoinStop stop = JoinStop::kTargetReached;
  bool truncated = false;
  StageTimes times;
  std::string validator_choice;
  double validator_selection_auroc = 0.0;
};

// Partition, fit and sample each partition, then join.
DgmOutput RunDgm(const DataTable& train, const DgmRunOptions& options,
                 uint64_t seed, size_t jobs = 1);

// Joins already generated parts (in partition order) with the configured
// strategy. Used to compare joiners on identical samples.
DgmOutput JoinParts(const DataTable& train, std::vector<DataTable> parts,
                    const DgmRunOptions& options, uint64_t seed);

std::unique_ptr<Scorer> TrainJoinValidator(const DataTable& train,
                                           const PartitionSpec& spec,
                                           const ValidatorConfig& config,
                                           uint64_t seed, std::string* choice,
                                           double* selection_auroc);

struct Manifest {
  std::string config_hash;
  uint64_t master_seed = 0;
  std::string command;
  nlohmann::ordered_json ToJson(const nlohmann::ordered_json& config) const;
};

uint64_t Fnv1a(std::string_view text);
std::string ConfigHash(const nlohmann::ordered_json& config);

// Writes via a temporary file and rename.
void WriteFileAtomic(const std::string& path, const std::string& content);

// synth: writes synthetic.csv, report.json, report.csv, join_trace.csv,
// partition.json and manifest.json into out_dir (run_NNN subdirectories
// when repeats > 1).
void RunSynth(const PipelineConfig& config, const std::string& out_dir, size_t jobs);

// eval: scores an existing synthetic CSV against the configured dataset
// split; writes report.json and report.csv.
MetricsReport RunEval(const PipelineConfig& config, const std::string& synthetic_csv,
                      const std::string& out_dir);

// dummy: writes the ratio-sweep tables and manifest.csv into out_dir.
void RunDummy(const PipelineConfig* config, uint64_t seed, const std::string& out_dir,
              size_t jobs);

enum class ExperimentPreset {
  kPartitionSweep,
  kJoinCompare,
  kTiming,
  kCorrelationSweep,
  kValidatorCompare,
  kThresholdSweep
};

std::string_view ExperimentPresetName(ExperimentPreset preset);
ExperimentPreset ParseExperimentPreset(std::string_view name);

// A sweep result: header plus one row per (parameter point, repeat).
struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string ToCsv() const;
};

// Writes <preset>.csv and manifest.json into out_dir.
SweepTable RunExperiment(ExperimentPreset preset, const PipelineConfig& config,
                         const std::string& out_dir, size_t jobs);

}  // namespace dgm

#endif  // DGM_PIPELINE_H_
