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

#ifndef DGM_CSV_H_
#define DGM_CSV_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "dgm/table.h"

namespace dgm {

// One entry of a schema sidecar. Categories and range are optional in the
// file; when absent they are inferred from the data at load time.
struct SchemaEntry {
  std::string name;
  ColumnKind kind = ColumnKind::kNumerical;
  std::vector<std::string> categories;
  bool has_categories = false;
  double min = 0.0;
  double max = 0.0;
  bool has_range = false;
};

// Sidecar format: a JSON object mapping column name to
// {"kind": "categorical"|"numerical", "categories"?: [...], "min"?, "max"?}.
std::vector<SchemaEntry> ParseSchema(const std::string& text);
std::vector<SchemaEntry> LoadSchema(const std::string& path);
std::string SchemaToString(const DataTable& table);

// RFC-4180 reader. The header row must name exactly the schema's columns
// (any order). Empty cells are rejected. Errors name the 1-based data row
// and the column.
DataTable ReadCsv(std::istream& in, const std::vector<SchemaEntry>& schema);
DataTable LoadCsv(const std::string& csv_path, const std::string& schema_path);

// Numbers are written in shortest round-trip form.
void WriteCsv(const DataTable& table, std::ostream& out);
void SaveCsv(const DataTable& table, const std::string& path);

// Splits one CSV record; exposed for reuse by other readers.
std::vector<std::string> SplitCsvRecord(std::istream& in, bool* ok);
std::string FormatNumber(double value);
std::string QuoteCsvField(const std::string& field);

}  // namespace dgm

#endif  // DGM_CSV_H_
