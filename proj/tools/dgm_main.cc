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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dgm/error.h"
#include "dgm/parallel.h"
#include "dgm/pipeline.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  std::optional<size_t> repeats;
  size_t jobs = 0;
};

dgm::PipelineConfig ReadConfig(const CommonArgs& args) {
  std::ifstream in(args.config);
  if (!in) throw dgm::ConfigError("cannot open config file " + args.config);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(ss.str());
  } catch (const nlohmann::ordered_json::exception& e) {
    throw dgm::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (args.seed) j["seeds"]["master"] = *args.seed;
  if (args.repeats) j["seeds"]["repeats"] = *args.repeats;
  return dgm::ParsePipelineConfig(j.dump(),
                                  std::filesystem::path(args.config).parent_path().string());
}

void AddCommon(CLI::App* cmd, CommonArgs& a, bool need_config, bool need_out) {
  auto* c = cmd->add_option("--config", a.config, "Pipeline config (JSON)");
  if (need_config) c->required()->check(CLI::ExistingFile);
  auto* o = cmd->add_option("--out", a.out, "Output directory");
  if (need_out) o->required();
  cmd->add_option("--seed", a.seed, "Override the master seed");
  cmd->add_option("--repeats", a.repeats, "Override the repeat count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", a.jobs, "Worker threads (0 = all cores; DGM_JOBS caps)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disjoint generative models: partitioned synthesis and joining"};
  app.set_version_flag("--version", std::string(dgm::kVersion));
  app.require_subcommand(1);

  CommonArgs synth_args, eval_args, dummy_args, exp_args, check_args;
  std::string synthetic_csv, preset_name;

  auto* synth = app.add_subcommand("synth", "Partition, synthesize, join and evaluate");
  AddCommon(synth, synth_args, true, true);
  auto* eval = app.add_subcommand("eval", "Evaluate a synthetic CSV against the dataset");
  AddCommon(eval, eval_args, true, true);
  eval->add_option("--synthetic", synthetic_csv, "Synthetic CSV to evaluate")
      ->required()
      ->check(CLI::ExistingFile);
  auto* dummy = app.add_subcommand("dummy", "Write the correlated dummy-data sweep");
  AddCommon(dummy, dummy_args, false, true);
  auto* exp = app.add_subcommand("experiment", "Run an experiment preset");
  exp->add_option("preset", preset_name,
                  "partition_sweep | join_compare | timing | correlation_sweep | "
                  "validator_compare | threshold_sweep")
      ->required();
  AddCommon(exp, exp_args, true, true);
  auto* check = app.add_subcommand("validate-config", "Validate a config and its dataset");
  AddCommon(check, check_args, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*synth) {
      const auto cfg = ReadConfig(synth_args);
      dgm::RunSynth(cfg, synth_args.out, dgm::ResolveJobs(synth_args.jobs));
      std::cout << "wrote " << synth_args.out << "\n";
    } else if (*eval) {
      const auto cfg = ReadConfig(eval_args);
      const auto report = dgm::RunEval(cfg, synthetic_csv, eval_args.out);
      std::cout << report.ToJson().dump(2) << "\n";
    } else if (*dummy) {
      std::optional<dgm::PipelineConfig> cfg;
      if (!dummy_args.config.empty()) cfg = ReadConfig(dummy_args);
      const uint64_t seed = dummy_args.seed ? *dummy_args.seed : (cfg ? cfg->master_seed : 0);
      dgm::RunDummy(cfg ? &*cfg : nullptr, seed, dummy_args.out,
                    dgm::ResolveJobs(dummy_args.jobs));
      std::cout << "wrote " << dummy_args.out << "\n";
    } else if (*exp) {
      const auto preset = dgm::ParseExperimentPreset(preset_name);
      const auto cfg = ReadConfig(exp_args);
      const auto table = dgm::RunExperiment(preset, cfg, exp_args.out,
                                            dgm::ResolveJobs(exp_args.jobs));
      std::cout << "wrote " << table.rows.size() << " rows to " << exp_args.out << "\n";
    } else if (*check) {
      const auto cfg = ReadConfig(check_args);
      dgm::ValidateAgainstData(cfg, dgm::LoadDataset(cfg));
      std::cout << "config ok\n";
    }
  } catch (const dgm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
