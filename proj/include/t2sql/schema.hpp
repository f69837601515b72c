//
// Copyright 2026 The t2sql Authors
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
//

// Relational catalog model and the commented schema serialization used in
// every prompt. Rendering is pure and safe to call concurrently.

#ifndef T2SQL_SCHEMA_HPP_
#define T2SQL_SCHEMA_HPP_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace t2sql {

enum class ColumnType { kText, kInt, kDate, kDatetime, kReal, kVarchar };

std::string_view ColumnTypeName(ColumnType type);

// Maps an SQLite declared type onto the six-name vocabulary, case-insensitive
// substring match, falling back to text.
ColumnType NormalizeDeclaredType(std::string_view declared);

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::kText;
  std::optional<std::string> description;
  // Present only when the column has between 1 and 5 distinct non-NULL values.
  std::optional<std::vector<std::string>> values;
  bool is_primary_key = false;

  bool operator==(const ColumnSpec&) const = default;
};

struct TableSpec {
  std::string name;
  std::vector<ColumnSpec> columns;

  const ColumnSpec* FindColumn(std::string_view column) const;
  bool operator==(const TableSpec&) const = default;
};

struct ForeignKey {
  std::string table;
  std::string column;
  std::string ref_table;
  std::string ref_column;

  bool operator==(const ForeignKey&) const = default;
};

// Identifies one column of one table. Ordering is lexicographic on
// (table, column) so sets iterate deterministically.
struct ColumnRef {
  std::string table;
  std::string column;

  auto operator<=>(const ColumnRef&) const = default;
};

// Set of retained columns. Tables with no retained column are omitted.
using ColumnFilter = std::set<ColumnRef>;

struct DatabaseCatalog {
  std::string database_id;
  std::vector<TableSpec> tables;
  std::vector<ForeignKey> foreign_keys;

  const TableSpec* FindTable(std::string_view table) const;
  // Case-insensitive lookups, used when matching model output or SQL text.
  const TableSpec* FindTableCi(std::string_view table) const;

  std::vector<ColumnRef> AllColumns() const;
  ColumnFilter AllColumnsFilter() const;
  // Primary-key columns plus both endpoints of every foreign key.
  ColumnFilter KeyColumns() const;

  // Throws InvalidArgument when names collide or an FK endpoint is missing.
  void Validate() const;

  bool operator==(const DatabaseCatalog&) const = default;
};

// Applies the filter: drops unretained columns, empty tables, and FKs with a
// removed endpoint.
DatabaseCatalog FilterCatalog(const DatabaseCatalog& catalog, const ColumnFilter& keep);

enum class SchemaVariant { kCN, kCT, kCD, kCV, kCP, kCVD, kCVDT, kCVDP, kCA };

inline constexpr std::array<SchemaVariant, 9> kAllVariants = {
    SchemaVariant::kCN,  SchemaVariant::kCT,   SchemaVariant::kCD,
    SchemaVariant::kCV,  SchemaVariant::kCP,   SchemaVariant::kCVD,
    SchemaVariant::kCVDT, SchemaVariant::kCVDP, SchemaVariant::kCA};

// "C_N", "C_VDT", ...
std::string_view VariantName(SchemaVariant variant);
SchemaVariant ParseVariant(std::string_view name);

struct VariantElements {
  bool type = false;
  bool description = false;
  bool values = false;
  bool primary_key = false;
};
VariantElements ElementsOf(SchemaVariant variant);

// Renders the commented DATABASE_DEFN block. Each table is
//   # name (
//   #   column: ELEMENTS
//   # )
// followed by "# FOREIGN KEYS:" and one "# t1.c1=t2.c2" line per surviving
// FK. Empty catalog (or empty filtered result) renders as "".
std::string RenderSchema(const DatabaseCatalog& catalog, SchemaVariant variant,
                         const ColumnFilter* keep = nullptr);

// The generic format block describing the variant's column layout.
std::string RenderSchemaFormatHeader(SchemaVariant variant);

// One rendered column line without trailing newline, e.g.
// "#   year: int, (year of release)".
std::string RenderColumnLine(const ColumnSpec& column, SchemaVariant variant);

nlohmann::json CatalogToJson(const DatabaseCatalog& catalog);
DatabaseCatalog CatalogFromJson(const nlohmann::json& j);

}  // namespace t2sql

#endif  // T2SQL_SCHEMA_HPP_
