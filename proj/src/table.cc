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

#include "dgm/table.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dgm/error.h"

namespace dgm {

std::string_view ColumnKindName(ColumnKind kind) {
  return kind == ColumnKind::kCategorical ? "categorical" : "numerical";
}

ColumnKind ParseColumnKind(std::string_view name) {
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "numerical") return ColumnKind::kNumerical;
  throw DataError("unknown column kind '" + std::string(name) + "'");
}

ColumnMeta ColumnMeta::Categorical(std::string name,
                                   std::vector<std::string> categories) {
  ColumnMeta meta;
  meta.name = std::move(name);
  meta.kind = ColumnKind::kCategorical;
  meta.categories = std::move(categories);
  return meta;
}

ColumnMeta ColumnMeta::Numerical(std::string name, double min, double max) {
  ColumnMeta meta;
  meta.name = std::move(name);
  meta.kind = ColumnKind::kNumerical;
  meta.min = min;
  meta.max = max;
  return meta;
}

void ColumnMeta::Validate() const {
  if (is_categorical()) {
    if (categories.empty()) {
      throw DataError("column \"" + name + "\": empty category list");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : categories) {
      if (!seen.insert(c).second) {
        throw DataError("column \"" + name + "\": duplicate category '" + c +
                        "'");
      }
    }
  } else if (!(min <= max)) {
    throw DataError("column \"" + name + "\": min > max");
  }
}

Column Column::Numerical(std::string name, std::vector<double> values) {
  Column col;
  double lo = 0.0, hi = 0.0;
  if (!values.empty()) {
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
  }
  col.meta = ColumnMeta::Numerical(std::move(name), lo, hi);
  col.numbers = std::move(values);
  return col;
}

Column Column::Categorical(std::string name,
                           std::vector<std::string> categories,
                           std::vector<int32_t> codes) {
  Column col;
  col.meta = ColumnMeta::Categorical(std::move(name), std::move(categories));
  col.codes = std::move(codes);
  return col;
}

std::vector<double> Column::AsDoubles() const {
  if (!meta.is_categorical()) return numbers;
  return std::vector<double>(codes.begin(), codes.end());
}

DataTable::DataTable(std::vector<Column> columns)
    : columns_(std::move(columns)) {
  num_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::unordered_set<std::string> names;
  for (const Column& col : columns_) {
    col.meta.Validate();
    if (!names.insert(col.meta.name).second) {
      throw DataError("duplicate column name \"" + col.meta.name + "\"");
    }
    if (col.size() != num_rows_) {
      throw DataError("column \"" + col.meta.name + "\" has " +
                      std::to_string(col.size()) + " rows, expected " +
                      std::to_string(num_rows_));
    }
    if (col.meta.is_categorical()) {
      if (!col.numbers.empty()) {
        throw DataError("column \"" + col.meta.name +
                        "\": categorical column carries numeric cells");
      }
      const auto k = static_cast<int32_t>(col.meta.num_categories());
      for (size_t i = 0; i < col.codes.size(); ++i) {
        if (col.codes[i] < 0 || col.codes[i] >= k) {
          throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                          col.meta.name + "\": category index out of range");
        }
      }
    } else if (!col.codes.empty()) {
      throw DataError("column \"" + col.meta.name +
                      "\": numerical column carries category codes");
    }
  }
}

DataTable DataTable::Empty(std::span<const ColumnMeta> schema) {
  std::vector<Column> columns;
  columns.reserve(schema.size());
  for (const ColumnMeta& meta : schema) {
    Column col;
    col.meta = meta;
    columns.push_back(std::move(col));
  }
  return DataTable(std::move(columns));
}

std::vector<ColumnMeta> DataTable::schema() const {
  std::vector<ColumnMeta> out;
  out.reserve(columns_.size());
  for (const Column& col : columns_) out.push_back(col.meta);
  return out;
}

std::vector<std::string> DataTable::column_names() const {
  std::vector<std::string> out;
  for (const Column& col : columns_) out.push_back(col.meta.name);
  return out;
}

std::optional<size_t> DataTable::FindColumn(std::string_view name) const {
  for (size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].meta.name == name) return j;
  }
  return std::nullopt;
}

size_t DataTable::ColumnIndex(std::string_view name) const {
  auto j = FindColumn(name);
  if (!j) throw DataError("unknown column \"" + std::string(name) + "\"");
  return *j;
}

DataTable DataTable::SelectColumns(std::span<const size_t> indices) const {
  std::vector<Column> out;
  out.reserve(indices.size());
  for (size_t j : indices) {
    if (j >= columns_.size()) throw Error("SelectColumns: index out of range");
    out.push_back(columns_[j]);
  }
  return DataTable(std::move(out));
}

DataTable DataTable::SelectRows(std::span<const size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const Column& src : columns_) {
    Column col;
    col.meta = src.meta;
    if (src.meta.is_categorical()) {
      col.codes.reserve(rows.size());
      for (size_t r : rows) col.codes.push_back(src.codes.at(r));
    } else {
      col.numbers.reserve(rows.size());
      for (size_t r : rows) col.numbers.push_back(src.numbers.at(r));
    }
    out.push_back(std::move(col));
  }
  DataTable table;
  table.columns_ = std::move(out);
  table.num_rows_ = rows.size();
  return table;
}

DataTable DataTable::Head(size_t n) const {
  n = std::min(n, num_rows_);
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = i;
  return SelectRows(rows);
}

DataTable DataTable::HConcat(std::span<const DataTable> parts) {
  std::vector<Column> out;
  for (const DataTable& part : parts) {
    if (!parts.empty() && part.num_rows() != parts.front().num_rows()) {
      throw DataError("HConcat: row counts differ");
    }
    for (const Column& col : part.columns_) out.push_back(col);
  }
  DataTable table(std::move(out));
  if (table.columns_.empty() && !parts.empty()) table.num_rows_ = 0;
  return table;
}

DataTable DataTable::VConcat(std::span<const DataTable> parts) {
  if (parts.empty()) return DataTable();
  std::vector<Column> out = parts.front().columns_;
  for (size_t p = 1; p < parts.size(); ++p) {
    if (!SchemasCompatible(parts.front(), parts[p])) {
      throw DataError("VConcat: schemas differ");
    }
    for (size_t j = 0; j < out.size(); ++j) {
      const Column& src = parts[p].columns_[j];
      out[j].numbers.insert(out[j].numbers.end(), src.numbers.begin(),
                            src.numbers.end());
      out[j].codes.insert(out[j].codes.end(), src.codes.begin(),
                          src.codes.end());
    }
  }
  return DataTable(std::move(out));
}

bool SchemasCompatible(std::span<const ColumnMeta> a,
                       std::span<const ColumnMeta> b) {
  if (a.size() != b.size()) return false;
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j].name != b[j].name || a[j].kind != b[j].kind) return false;
    if (a[j].is_categorical() && a[j].categories != b[j].categories) {
      return false;
    }
  }
  return true;
}

bool SchemasCompatible(const DataTable& a, const DataTable& b) {
  return SchemasCompatible(a.schema(), b.schema());
}

}  // namespace dgm
