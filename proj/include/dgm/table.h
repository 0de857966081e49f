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

#ifndef DGM_TABLE_H_
#define DGM_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgm {

enum class ColumnKind { kCategorical, kNumerical };

std::string_view ColumnKindName(ColumnKind kind);
ColumnKind ParseColumnKind(std::string_view name);

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::kNumerical;
  // Ordered, duplicate-free labels. Categorical only.
  std::vector<std::string> categories;
  // Numerical only.
  double min = 0.0;
  double max = 0.0;

  static ColumnMeta Categorical(std::string name,
                                std::vector<std::string> categories);
  static ColumnMeta Numerical(std::string name, double min, double max);

  bool is_categorical() const { return kind == ColumnKind::kCategorical; }
  size_t num_categories() const { return categories.size(); }
  // Throws DataError when the invariants do not hold.
  void Validate() const;

  friend bool operator==(const ColumnMeta&, const ColumnMeta&) = default;
};

// One column of a table. Categorical cells are indices into
// meta.categories and live in `codes`; numerical cells live in `numbers`.
struct Column {
  ColumnMeta meta;
  std::vector<double> numbers;
  std::vector<int32_t> codes;

  static Column Numerical(std::string name, std::vector<double> values);
  static Column Categorical(std::string name,
                            std::vector<std::string> categories,
                            std::vector<int32_t> codes);

  size_t size() const {
    return meta.is_categorical() ? codes.size() : numbers.size();
  }
  // Numeric view of a cell; categorical cells report their code.
  double value(size_t row) const {
    return meta.is_categorical() ? static_cast<double>(codes[row])
                                 : numbers[row];
  }
  std::vector<double> AsDoubles() const;
};

// Column-major mixed-type table. Immutable after construction.
class DataTable {
 public:
  DataTable() = default;
  // Validates equal lengths, category membership and column metadata.
  explicit DataTable(std::vector<Column> columns);
  static DataTable Empty(std::span<const ColumnMeta> schema);

  size_t num_rows() const { return num_rows_; }
  size_t num_cols() const { return columns_.size(); }
  bool empty() const { return num_rows_ == 0; }

  const Column& column(size_t j) const { return columns_[j]; }
  const ColumnMeta& meta(size_t j) const { return columns_[j].meta; }
  const std::vector<Column>& columns() const { return columns_; }
  std::vector<ColumnMeta> schema() const;
  std::vector<std::string> column_names() const;

  double value(size_t row, size_t col) const {
    return columns_[col].value(row);
  }

  std::optional<size_t> FindColumn(std::string_view name) const;
  // Throws DataError for unknown names.
  size_t ColumnIndex(std::string_view name) const;

  DataTable SelectColumns(std::span<const size_t> indices) const;
  DataTable SelectRows(std::span<const size_t> rows) const;
  DataTable Head(size_t n) const;

  // Concatenates tables column-wise. All inputs need the same row count.
  static DataTable HConcat(std::span<const DataTable> parts);
  // Appends rows; schemas must match.
  static DataTable VConcat(std::span<const DataTable> parts);

 private:
  std::vector<Column> columns_;
  size_t num_rows_ = 0;
};

// Names, kinds and category lists agree column by column.
bool SchemasCompatible(std::span<const ColumnMeta> a,
                       std::span<const ColumnMeta> b);
bool SchemasCompatible(const DataTable& a, const DataTable& b);

}  // namespace dgm

#endif  // DGM_TABLE_H_
