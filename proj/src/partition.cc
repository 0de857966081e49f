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

#include "dgm/partition.h"

#include <cmath>
#include <limits>
#include <map>

#include "dgm/correlation.h"
#include "dgm/error.h"
#include "dgm/rng.h"
#include "json.hpp"

namespace dgm {

std::vector<size_t> PartitionSpec::Columns(size_t p) const {
  std::vector<size_t> out;
  for (size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] == p) out.push_back(j);
  }
  return out;
}

std::vector<size_t> PartitionSpec::Sizes() const {
  std::vector<size_t> sizes(num_partitions, 0);
  for (size_t p : assignment) {
    if (p < num_partitions) ++sizes[p];
  }
  return sizes;
}

void PartitionSpec::Validate(size_t num_columns) const {
  if (num_partitions == 0) throw ConfigError("partition: zero partitions");
  if (assignment.size() != num_columns) {
    throw ConfigError("partition: assignment covers " +
                      std::to_string(assignment.size()) + " columns, table has " +
                      std::to_string(num_columns));
  }
  for (size_t p : assignment) {
    if (p >= num_partitions) {
      throw ConfigError("partition: index out of range");
    }
  }
  for (size_t s : Sizes()) {
    if (s == 0) throw ConfigError("partition: empty partition");
  }
}

PartitionSpec RandomPartition(size_t num_columns, size_t num_partitions,
                              uint64_t seed) {
  if (num_partitions < 1 || num_partitions > num_columns) {
    throw ConfigError("random_partition: need 1 <= n_p <= k (n_p=" +
                      std::to_string(num_partitions) +
                      ", k=" + std::to_string(num_columns) + ")");
  }
  SeededRng rng(seed, 0x9a27);
  std::vector<size_t> order = rng.Permutation(num_columns);
  PartitionSpec spec;
  spec.num_partitions = num_partitions;
  spec.assignment.assign(num_columns, 0);
  const size_t base = num_columns / num_partitions;
  const size_t extra = num_columns % num_partitions;
  size_t pos = 0;
  for (size_t p = 0; p < num_partitions; ++p) {
    const size_t size = base + (p < extra ? 1 : 0);
    for (size_t t = 0; t < size; ++t) spec.assignment[order[pos++]] = p;
  }
  return spec;
}

PartitionSpec CorrelationPartition(const Eigen::MatrixXd& association) {
  const auto k = static_cast<size_t>(association.rows());
  if (k < 2) throw ConfigError("correlation_partition: need at least 2 columns");
  Eigen::MatrixXd m = association.cwiseAbs();
  m.diagonal().setZero();
  std::vector<bool> alive(k, true);
  PartitionSpec spec;
  spec.num_partitions = 2;
  spec.assignment.assign(k, 0);
  size_t remaining = k;
  size_t sizes[2] = {0, 0};
  while (remaining >= 2) {
    double best = -1.0;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < k; ++i) {
      if (!alive[i]) continue;
      for (size_t j = i + 1; j < k; ++j) {
        if (!alive[j]) continue;
        const double v = m(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j));
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    spec.assignment[bi] = 0;
    spec.assignment[bj] = 1;
    ++sizes[0];
    ++sizes[1];
    alive[bi] = alive[bj] = false;
    remaining -= 2;
  }
  for (size_t i = 0; i < k; ++i) {
    if (alive[i]) spec.assignment[i] = sizes[1] < sizes[0] ? 1 : 0;
  }
  return spec;
}

PartitionSpec CorrelationPartition(const DataTable& table) {
  if (table.num_cols() < 2) {
    throw ConfigError("correlation_partition: need at least 2 columns");
  }
  return CorrelationPartition(MixedCorrelation(table));
}

CorrelationRatioReport ExteriorInteriorRatio(const Eigen::MatrixXd& corr,
                                             const PartitionSpec& spec) {
  const auto k = static_cast<size_t>(corr.rows());
  spec.Validate(k);
  double interior = 0.0, exterior = 0.0;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double v =
          corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (spec.assignment[i] == spec.assignment[j]) {
        interior += v * v;
      } else {
        exterior += v * v;
      }
    }
  }
  CorrelationRatioReport report;
  report.interior_norm = std::sqrt(interior);
  report.exterior_norm = std::sqrt(exterior);
  if (report.interior_norm > 0.0) {
    report.ratio = report.exterior_norm / report.interior_norm;
  } else {
    report.ratio = std::numeric_limits<double>::infinity();
    report.degenerate = true;
  }
  return report;
}

std::string PartitionToJson(const PartitionSpec& spec,
                            const std::vector<std::string>& column_names) {
  spec.Validate(column_names.size());
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (size_t p = 0; p < spec.num_partitions; ++p) {
    std::vector<std::string> names;
    for (size_t j : spec.Columns(p)) names.push_back(column_names[j]);
    doc["part" + std::to_string(p + 1)] = names;
  }
  return doc.dump(2) + "\n";
}

PartitionSpec PartitionFromJson(const std::string& text,
                                const std::vector<std::string>& column_names) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("partition file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("partition file: expected an object");
  std::map<std::string, size_t> lookup;
  for (size_t j = 0; j < column_names.size(); ++j) lookup[column_names[j]] = j;
  PartitionSpec spec;
  spec.num_partitions = doc.size();
  constexpr size_t kUnassigned = std::numeric_limits<size_t>::max();
  spec.assignment.assign(column_names.size(), kUnassigned);
  size_t p = 0;
  for (const auto& [part, names] : doc.items()) {
    for (const auto& name : names) {
      const std::string s = name.get<std::string>();
      auto it = lookup.find(s);
      if (it == lookup.end()) {
        throw ConfigError("partition " + part + ": unknown column \"" + s + "\"");
      }
      if (spec.assignment[it->second] != kUnassigned) {
        throw ConfigError("partition: column \"" + s + "\" assigned twice");
      }
      spec.assignment[it->second] = p;
    }
    ++p;
  }
  for (size_t j = 0; j < column_names.size(); ++j) {
    if (spec.assignment[j] == kUnassigned) {
      throw ConfigError("partition: column \"" + column_names[j] +
                        "\" not assigned");
    }
  }
  spec.Validate(column_names.size());
  return spec;
}

}  // namespace dgm
