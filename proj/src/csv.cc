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

#include "dgm/csv.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dgm/error.h"
#include "json.hpp"

namespace dgm {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ParseDouble(const std::string& text, double* out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  if (begin == end) return false;
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

}  // namespace

std::vector<SchemaEntry> ParseSchema(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("schema: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("schema: expected a JSON object");
  std::vector<SchemaEntry> out;
  for (const auto& [name, spec] : doc.items()) {
    SchemaEntry entry;
    entry.name = name;
    if (!spec.is_object() || !spec.contains("kind")) {
      throw DataError("schema: column \"" + name + "\" needs a kind");
    }
    entry.kind = ParseColumnKind(spec.at("kind").get<std::string>());
    if (spec.contains("categories")) {
      entry.categories = spec.at("categories").get<std::vector<std::string>>();
      entry.has_categories = true;
    }
    if (spec.contains("min") || spec.contains("max")) {
      if (!spec.contains("min") || !spec.contains("max")) {
        throw DataError("schema: column \"" + name +
                        "\" declares only one of min/max");
      }
      entry.min = spec.at("min").get<double>();
      entry.max = spec.at("max").get<double>();
      entry.has_range = true;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<SchemaEntry> LoadSchema(const std::string& path) {
  return ParseSchema(ReadFile(path));
}

std::string SchemaToString(const DataTable& table) {
  ordered_json doc = ordered_json::object();
  for (const Column& col : table.columns()) {
    ordered_json spec;
    spec["kind"] = std::string(ColumnKindName(col.meta.kind));
    if (col.meta.is_categorical()) {
      spec["categories"] = col.meta.categories;
    } else {
      spec["min"] = col.meta.min;
      spec["max"] = col.meta.max;
    }
    doc[col.meta.name] = spec;
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> SplitCsvRecord(std::istream& in, bool* ok) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  *ok = true;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else if (c == '\n') {
      break;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) *ok = false;
  if (!any) return {};
  fields.push_back(std::move(field));
  return fields;
}

DataTable ReadCsv(std::istream& in, const std::vector<SchemaEntry>& schema) {
  bool ok = true;
  std::vector<std::string> header = SplitCsvRecord(in, &ok);
  if (header.empty()) throw DataError("csv: missing header row");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0].erase(0, 3);
  }
  std::map<std::string, size_t> schema_index;
  for (size_t i = 0; i < schema.size(); ++i) schema_index[schema[i].name] = i;
  std::vector<size_t> col_entry(header.size());
  std::set<std::string> seen;
  for (size_t j = 0; j < header.size(); ++j) {
    auto it = schema_index.find(header[j]);
    if (it == schema_index.end()) {
      throw DataError("csv: column \"" + header[j] + "\" not in schema");
    }
    if (!seen.insert(header[j]).second) {
      throw DataError("csv: duplicate column \"" + header[j] + "\"");
    }
    col_entry[j] = it->second;
  }
  for (const SchemaEntry& entry : schema) {
    if (!seen.count(entry.name)) {
      throw DataError("csv: missing column \"" + entry.name + "\"");
    }
  }

  const size_t k = header.size();
  std::vector<std::vector<std::string>> raw(k);
  size_t row = 0;
  while (in.peek() != EOF) {
    std::vector<std::string> fields = SplitCsvRecord(in, &ok);
    if (!ok) {
      throw DataError("csv: unterminated quote in row " +
                      std::to_string(row + 1));
    }
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    ++row;
    if (fields.size() != k) {
      throw DataError("csv: row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(k));
    }
    for (size_t j = 0; j < k; ++j) raw[j].push_back(std::move(fields[j]));
  }

  std::vector<Column> columns;
  columns.reserve(k);
  for (size_t j = 0; j < k; ++j) {
    const SchemaEntry& entry = schema[col_entry[j]];
    Column col;
    col.meta.name = entry.name;
    col.meta.kind = entry.kind;
    for (size_t i = 0; i < raw[j].size(); ++i) {
      if (raw[j][i].empty()) {
        throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                        entry.name + "\": empty cell");
      }
    }
    if (entry.kind == ColumnKind::kNumerical) {
      col.numbers.resize(raw[j].size());
      for (size_t i = 0; i < raw[j].size(); ++i) {
        if (!ParseDouble(raw[j][i], &col.numbers[i])) {
          throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                          entry.name + "\": cannot parse '" + raw[j][i] +
                          "' as a number");
        }
      }
      if (entry.has_range) {
        col.meta.min = entry.min;
        col.meta.max = entry.max;
      } else if (!col.numbers.empty()) {
        auto [mn, mx] =
            std::minmax_element(col.numbers.begin(), col.numbers.end());
        col.meta.min = *mn;
        col.meta.max = *mx;
      }
    } else {
      if (entry.has_categories) {
        col.meta.categories = entry.categories;
      } else {
        std::set<std::string> distinct(raw[j].begin(), raw[j].end());
        col.meta.categories.assign(distinct.begin(), distinct.end());
        if (col.meta.categories.empty()) {
          throw DataError("column \"" + entry.name +
                          "\": no categories declared and no data to infer "
                          "them from");
        }
      }
      std::map<std::string, int32_t> lookup;
      for (size_t c = 0; c < col.meta.categories.size(); ++c) {
        lookup[col.meta.categories[c]] = static_cast<int32_t>(c);
      }
      col.codes.resize(raw[j].size());
      for (size_t i = 0; i < raw[j].size(); ++i) {
        auto it = lookup.find(raw[j][i]);
        if (it == lookup.end()) {
          throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                          entry.name + "\": category '" + raw[j][i] +
                          "' not in declared set");
        }
        col.codes[i] = it->second;
      }
    }
    raw[j].clear();
    columns.push_back(std::move(col));
  }
  return DataTable(std::move(columns));
}

DataTable LoadCsv(const std::string& csv_path, const std::string& schema_path) {
  const std::vector<SchemaEntry> schema = LoadSchema(schema_path);
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw DataError("cannot open " + csv_path);
  return ReadCsv(in, schema);
}

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

std::string QuoteCsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteCsv(const DataTable& table, std::ostream& out) {
  for (size_t j = 0; j < table.num_cols(); ++j) {
    if (j) out << ',';
    out << QuoteCsvField(table.meta(j).name);
  }
  out << '\n';
  for (size_t i = 0; i < table.num_rows(); ++i) {
    for (size_t j = 0; j < table.num_cols(); ++j) {
      if (j) out << ',';
      const Column& col = table.column(j);
      if (col.meta.is_categorical()) {
        out << QuoteCsvField(col.meta.categories[col.codes[i]]);
      } else {
        out << FormatNumber(col.numbers[i]);
      }
    }
    out << '\n';
  }
}

void SaveCsv(const DataTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  WriteCsv(table, out);
}

}  // namespace dgm
