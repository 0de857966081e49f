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

#ifndef DGM_JOINER_H_
#define DGM_JOINER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgm/partition.h"
#include "dgm/scorer.h"
#include "dgm/table.h"

namespace dgm {

enum class JoinStrategy { kConcat, kValidated };

struct JoinConfig {
  JoinStrategy strategy = JoinStrategy::kValidated;
  size_t target_size = 0;
  // Fixed initial threshold. When unset, the threshold is the
  // (1 - auto_accept_fraction) quantile of the first round's scores.
  std::optional<double> theta;
  double auto_accept_fraction = 0.10;
  // Subtracted from the threshold after a round with no acceptances.
  // 0 keeps the threshold static.
  double decay = 0.02;
  int max_iters = 200;
  // Consecutive empty rounds tolerated once the threshold cannot decay
  // any further.
  int early_stop_rounds = 20;

  void Validate() const;
};

struct JoinRound {
  int round = 0;
  double theta = 0.0;
  size_t queries = 0;
  size_t accepted = 0;
};

struct JoinTrace {
  std::vector<JoinRound> rounds;

  // Columns: round,theta,queries,accepted
  void WriteCsv(std::ostream& out) const;
};

enum class JoinStop { kTargetReached, kPoolsExhausted, kMaxIters, kEarlyStop };

struct JoinResult {
  DataTable table;
  JoinTrace trace;
  JoinStop stop = JoinStop::kTargetReached;
  // Fewer than target_size rows were accepted.
  bool truncated = false;
  // provenance[p][r]: source row of part p used by output row r.
  std::vector<std::vector<size_t>> provenance;
};

std::string_view JoinStopName(JoinStop stop);

// Shuffles each part independently (stream p of `seed`), truncates to
// target_size and concatenates columns in part order.
DataTable ConcatJoin(std::span<const DataTable> parts, size_t target_size,
                     uint64_t seed);

struct ValidatorTrainingSet {
  DataTable features;
  std::vector<int> labels;
};

// First n rows: the table's columns in partition order, label 1. Next n
// rows: the same columns with every partition row-shuffled independently,
// label 0.
ValidatorTrainingSet BuildValidatorTraining(const DataTable& table,
                                            const PartitionSpec& spec,
                                            uint64_t seed);

// Table columns reordered so partitions appear in order.
DataTable ReorderToPartitions(const DataTable& table, const PartitionSpec& spec);
// Inverse of ReorderToPartitions: restores the source column order.
DataTable RestoreColumnOrder(const DataTable& joined, const PartitionSpec& spec);

// Iterative validated joining. Each round aligns the current pools into
// candidate rows, scores them, moves rows scoring >= theta into the output
// (in query order, up to the remaining target) and removes their source
// rows from every pool, then reshuffles each pool independently.
JoinResult ValidatedJoin(std::span<const DataTable> parts,
                         const Scorer& validator, const JoinConfig& config,
                         uint64_t seed);

// Linear-interpolation quantile of `values` at q in [0, 1].
double Quantile(std::vector<double> values, double q);

}  // namespace dgm

#endif  // DGM_JOINER_H_
