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

#include "dgm/joiner.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dgm/csv.h"
#include "dgm/error.h"
#include "dgm/rng.h"

namespace dgm {

void JoinConfig::Validate() const {
  if (theta && !(*theta >= 0.0 && *theta <= 1.0)) {
    throw ConfigError("join: theta must be in [0, 1]");
  }
  if (!(auto_accept_fraction > 0.0 && auto_accept_fraction <= 1.0)) {
    throw ConfigError("join: auto_accept_fraction must be in (0, 1]");
  }
  if (!(decay >= 0.0 && decay < 1.0)) {
    throw ConfigError("join: decay must be in [0, 1)");
  }
  if (max_iters < 1) throw ConfigError("join: max_iters must be >= 1");
  if (early_stop_rounds < 1) {
    throw ConfigError("join: early_stop_rounds must be >= 1");
  }
}

void JoinTrace::WriteCsv(std::ostream& out) const {
  out << "round,theta,queries,accepted\n";
  for (const JoinRound& r : rounds) {
    out << r.round << ',' << FormatNumber(r.theta) << ',' << r.queries << ','
        << r.accepted << '\n';
  }
}

std::string_view JoinStopName(JoinStop stop) {
  switch (stop) {
    case JoinStop::kTargetReached:
      return "target_reached";
    case JoinStop::kPoolsExhausted:
      return "pools_exhausted";
    case JoinStop::kMaxIters:
      return "max_iters";
    case JoinStop::kEarlyStop:
      return "early_stop";
  }
  return "unknown";
}

DataTable ConcatJoin(std::span<const DataTable> parts, size_t target_size,
                     uint64_t seed) {
  if (parts.empty()) throw ConfigError("concat_join: no parts");
  std::vector<DataTable> picked;
  picked.reserve(parts.size());
  for (size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].num_rows() < target_size) {
      throw DataError("concat_join: part " + std::to_string(p + 1) + " has " +
                      std::to_string(parts[p].num_rows()) +
                      " rows, fewer than target " + std::to_string(target_size));
    }
    SeededRng rng(seed, p);
    std::vector<size_t> perm = rng.Permutation(parts[p].num_rows());
    perm.resize(target_size);
    picked.push_back(parts[p].SelectRows(perm));
  }
  return DataTable::HConcat(picked);
}

DataTable ReorderToPartitions(const DataTable& table, const PartitionSpec& spec) {
  spec.Validate(table.num_cols());
  std::vector<size_t> order;
  for (size_t p = 0; p < spec.num_partitions; ++p) {
    for (size_t j : spec.Columns(p)) order.push_back(j);
  }
  return table.SelectColumns(order);
}

DataTable RestoreColumnOrder(const DataTable& joined, const PartitionSpec& spec) {
  spec.Validate(joined.num_cols());
  std::vector<size_t> order;
  for (size_t p = 0; p < spec.num_partitions; ++p) {
    for (size_t j : spec.Columns(p)) order.push_back(j);
  }
  // order[pos] = source column stored at position pos.
  std::vector<size_t> inverse(order.size());
  for (size_t pos = 0; pos < order.size(); ++pos) inverse[order[pos]] = pos;
  return joined.SelectColumns(inverse);
}

ValidatorTrainingSet BuildValidatorTraining(const DataTable& table,
                                            const PartitionSpec& spec,
                                            uint64_t seed) {
  if (table.num_rows() == 0) throw DataError("validator training: empty table");
  spec.Validate(table.num_cols());
  const size_t n = table.num_rows();
  std::vector<DataTable> authentic, shuffled;
  for (size_t p = 0; p < spec.num_partitions; ++p) {
    const std::vector<size_t> cols = spec.Columns(p);
    DataTable part = table.SelectColumns(cols);
    SeededRng rng(seed, p);
    shuffled.push_back(part.SelectRows(rng.Permutation(n)));
    authentic.push_back(std::move(part));
  }
  const DataTable real = DataTable::HConcat(authentic);
  const DataTable fake = DataTable::HConcat(shuffled);
  const std::vector<DataTable> both = {real, fake};
  ValidatorTrainingSet out;
  out.features = DataTable::VConcat(both);
  out.labels.assign(n, 1);
  out.labels.resize(2 * n, 0);
  return out;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

JoinResult ValidatedJoin(std::span<const DataTable> parts,
                         const Scorer& validator, const JoinConfig& config,
                         uint64_t seed) {
  config.Validate();
  if (parts.empty()) throw ConfigError("validated_join: no parts");
  const size_t m = parts.front().num_rows();
  for (size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].num_rows() != m) {
      throw DataError("validated_join: parts have unequal row counts");
    }
  }
  if (m < config.target_size) {
    throw DataError("validated_join: parts have " + std::to_string(m) +
                    " rows, fewer than target " +
                    std::to_string(config.target_size));
  }

  const size_t np = parts.size();
  std::vector<SeededRng> streams;
  std::vector<std::vector<size_t>> pools(np);
  for (size_t p = 0; p < np; ++p) {
    streams.emplace_back(seed, p);
    pools[p] = streams[p].Permutation(m);
  }

  JoinResult result;
  result.provenance.assign(np, {});
  double theta0 = config.theta.value_or(0.0);
  double theta = theta0;
  bool theta_ready = config.theta.has_value();
  int stalls = 0;
  int idle_rounds = 0;
  result.stop = JoinStop::kMaxIters;

  for (int round = 1; round <= config.max_iters; ++round) {
    const size_t accepted_so_far = result.provenance[0].size();
    if (accepted_so_far >= config.target_size) {
      result.stop = JoinStop::kTargetReached;
      break;
    }
    if (pools[0].empty()) {
      result.stop = JoinStop::kPoolsExhausted;
      break;
    }
    std::vector<DataTable> aligned;
    aligned.reserve(np);
    for (size_t p = 0; p < np; ++p) aligned.push_back(parts[p].SelectRows(pools[p]));
    const DataTable queries = DataTable::HConcat(aligned);
    const std::vector<double> z = validator.Score(queries);
    if (z.size() != queries.num_rows()) {
      throw Error("validated_join: validator returned wrong number of scores");
    }
    if (!theta_ready) {
      theta0 = Quantile(z, 1.0 - config.auto_accept_fraction);
      theta = theta0;
      theta_ready = true;
    }

    const size_t need = config.target_size - accepted_so_far;
    std::vector<bool> take(z.size(), false);
    size_t accepted = 0;
    for (size_t i = 0; i < z.size() && accepted < need; ++i) {
      if (z[i] >= theta) {
        take[i] = true;
        ++accepted;
      }
    }
    result.trace.rounds.push_back({round, theta, z.size(), accepted});

    if (accepted > 0) {
      idle_rounds = 0;
      for (size_t p = 0; p < np; ++p) {
        std::vector<size_t> keep;
        keep.reserve(pools[p].size() - accepted);
        for (size_t i = 0; i < pools[p].size(); ++i) {
          if (take[i]) {
            result.provenance[p].push_back(pools[p][i]);
          } else {
            keep.push_back(pools[p][i]);
          }
        }
        pools[p] = std::move(keep);
      }
    } else {
      const bool can_decay = config.decay > 0.0 && theta > 0.0;
      if (can_decay) {
        ++stalls;
        theta = theta0 - config.decay * static_cast<double>(stalls);
        if (theta < 1e-12) theta = 0.0;
      } else if (++idle_rounds >= config.early_stop_rounds) {
        result.stop = JoinStop::kEarlyStop;
        break;
      }
    }
    for (size_t p = 0; p < np; ++p) streams[p].Shuffle(pools[p]);

    if (round == config.max_iters) {
      result.stop = result.provenance[0].size() >= config.target_size
                        ? JoinStop::kTargetReached
                        : (pools[0].empty() ? JoinStop::kPoolsExhausted
                                            : JoinStop::kMaxIters);
    }
  }

  std::vector<DataTable> picked;
  picked.reserve(np);
  for (size_t p = 0; p < np; ++p) {
    picked.push_back(parts[p].SelectRows(result.provenance[p]));
  }
  result.table = DataTable::HConcat(picked);
  result.truncated = result.table.num_rows() < config.target_size;
  return result;
}

}  // namespace dgm
