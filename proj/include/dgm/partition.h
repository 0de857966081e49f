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

#ifndef DGM_PARTITION_H_
#define DGM_PARTITION_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgm/table.h"

namespace dgm {

// Column-to-partition assignment. Partition indices are 0-based in memory;
// the serialized form names them part1..partN.
struct PartitionSpec {
  size_t num_partitions = 0;
  std::vector<size_t> assignment;  // one entry per column

  size_t num_columns() const { return assignment.size(); }
  // Ascending column indices of partition p.
  std::vector<size_t> Columns(size_t p) const;
  std::vector<size_t> Sizes() const;
  // Every column assigned once, every partition non-empty.
  void Validate(size_t num_columns) const;
};

// Sizes differ by at most one; the remainder goes to the lowest-index
// partitions. Columns are dealt to partitions by a seeded shuffle.
PartitionSpec RandomPartition(size_t num_columns, size_t num_partitions,
                              uint64_t seed);

// Two-way split separating strongly associated columns: repeatedly take the
// largest remaining |association| pair (ties: smallest (i, j)), put i in
// partition 0 and j in partition 1, and drop both. A leftover column joins
// the smaller partition (partition 0 on ties).
PartitionSpec CorrelationPartition(const DataTable& table);
PartitionSpec CorrelationPartition(const Eigen::MatrixXd& association);

struct CorrelationRatioReport {
  double exterior_norm = 0.0;
  double interior_norm = 0.0;
  // exterior / interior; +inf with `degenerate` set when interior is 0.
  double ratio = 0.0;
  bool degenerate = false;
};

// Frobenius norms of off-diagonal entries within vs. across partitions.
CorrelationRatioReport ExteriorInteriorRatio(const Eigen::MatrixXd& corr,
                                             const PartitionSpec& spec);

// Serialized as a JSON object {"part1": [names...], "part2": [...], ...}.
std::string PartitionToJson(const PartitionSpec& spec,
                            const std::vector<std::string>& column_names);
PartitionSpec PartitionFromJson(const std::string& text,
                                const std::vector<std::string>& column_names);

}  // namespace dgm

#endif  // DGM_PARTITION_H_
