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

#include "t2sql/schema.hpp"

#include <set>

#include "t2sql/error.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

constexpr std::string_view kPrimaryKeyToken = "PRIMARY_KEY";

std::string FormatValue(std::string_view raw) {
  std::string v = CollapseWhitespace(raw);
  if (v.find(',') == std::string::npos) return v;
  std::string quoted = "\"";
  for (char c : v) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string_view ColumnTypeName(ColumnType type) {
  switch (type) {
    case ColumnType::kText: return "text";
    case ColumnType::kInt: return "int";
    case ColumnType::kDate: return "date";
    case ColumnType::kDatetime: return "datetime";
    case ColumnType::kReal: return "real";
    case ColumnType::kVarchar: return "varchar";
  }
  return "text";
}

ColumnType NormalizeDeclaredType(std::string_view declared) {
  const std::string t = ToLower(declared);
  auto has = [&](std::string_view needle) { return t.find(needle) != std::string::npos; };
  // "datetime" contains "date", so it is tested first.
  if (has("datetime") || has("timestamp")) return ColumnType::kDatetime;
  if (has("date")) return ColumnType::kDate;
  if (has("varchar")) return ColumnType::kVarchar;
  if (has("int")) return ColumnType::kInt;
  if (has("real") || has("float") || has("double") || has("numeric") || has("decimal")) {
    return ColumnType::kReal;
  }
  return ColumnType::kText;
}

const ColumnSpec* TableSpec::FindColumn(std::string_view column) const {
  for (const auto& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

const TableSpec* DatabaseCatalog::FindTable(std::string_view table) const {
  for (const auto& t : tables) {
    if (t.name == table) return &t;
  }
  return nullptr;
}

const TableSpec* DatabaseCatalog::FindTableCi(std::string_view table) const {
  if (const auto* exact = FindTable(table)) return exact;
  for (const auto& t : tables) {
    if (IEquals(t.name, table)) return &t;
  }
  return nullptr;
}

std::vector<ColumnRef> DatabaseCatalog::AllColumns() const {
  std::vector<ColumnRef> out;
  for (const auto& t : tables) {
    for (const auto& c : t.columns) out.push_back({t.name, c.name});
  }
  return out;
}

ColumnFilter DatabaseCatalog::AllColumnsFilter() const {
  const auto all = AllColumns();
  return ColumnFilter(all.begin(), all.end());
}

ColumnFilter DatabaseCatalog::KeyColumns() const {
  ColumnFilter keys;
  for (const auto& t : tables) {
    for (const auto& c : t.columns) {
      if (c.is_primary_key) keys.insert({t.name, c.name});
    }
  }
  for (const auto& fk : foreign_keys) {
    keys.insert({fk.table, fk.column});
    keys.insert({fk.ref_table, fk.ref_column});
  }
  return keys;
}

void DatabaseCatalog::Validate() const {
  std::set<std::string> table_names;
  for (const auto& t : tables) {
    if (t.name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty table name in " + database_id);
    }
    if (!table_names.insert(ToLower(t.name)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate table " + t.name);
    }
    std::set<std::string> column_names;
    for (const auto& c : t.columns) {
      if (!column_names.insert(ToLower(c.name)).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate column " + t.name + "." + c.name);
      }
      if (c.values && (c.values->empty() || c.values->size() > 5)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "VALUES list of " + t.name + "." + c.name + " must hold 1..5 entries");
      }
    }
  }
  for (const auto& fk : foreign_keys) {
    const auto* a = FindTable(fk.table);
    const auto* b = FindTable(fk.ref_table);
    if (!a || !b || !a->FindColumn(fk.column) || !b->FindColumn(fk.ref_column)) {
      throw Error(ErrorCode::kInvalidArgument, "foreign key " + fk.table + "." + fk.column +
                                                   "=" + fk.ref_table + "." + fk.ref_column +
                                                   " references a missing endpoint");
    }
  }
}

DatabaseCatalog FilterCatalog(const DatabaseCatalog& catalog, const ColumnFilter& keep) {
  DatabaseCatalog out;
  out.database_id = catalog.database_id;
  for (const auto& t : catalog.tables) {
    TableSpec kept{t.name, {}};
    for (const auto& c : t.columns) {
      if (keep.count({t.name, c.name})) kept.columns.push_back(c);
    }
    if (!kept.columns.empty()) out.tables.push_back(std::move(kept));
  }
  for (const auto& fk : catalog.foreign_keys) {
    if (keep.count({fk.table, fk.column}) && keep.count({fk.ref_table, fk.ref_column})) {
      out.foreign_keys.push_back(fk);
    }
  }
  return out;
}

std::string_view VariantName(SchemaVariant variant) {
  switch (variant) {
    case SchemaVariant::kCN: return "C_N";
    case SchemaVariant::kCT: return "C_T";
    case SchemaVariant::kCD: return "C_D";
    case SchemaVariant::kCV: return "C_V";
    case SchemaVariant::kCP: return "C_P";
    case SchemaVariant::kCVD: return "C_VD";
    case SchemaVariant::kCVDT: return "C_VDT";
    case SchemaVariant::kCVDP: return "C_VDP";
    case SchemaVariant::kCA: return "C_A";
  }
  return "C_A";
}

SchemaVariant ParseVariant(std::string_view name) {
  std::string n = ToUpper(Trim(name));
  if (n.rfind("C_", 0) != 0 && n.rfind("C", 0) == 0) n.insert(1, "_");
  for (auto v : kAllVariants) {
    if (VariantName(v) == n) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown schema variant '" + std::string(name) + "'");
}

VariantElements ElementsOf(SchemaVariant variant) {
  switch (variant) {
    case SchemaVariant::kCN: return {};
    case SchemaVariant::kCT: return {.type = true};
    case SchemaVariant::kCD: return {.description = true};
    case SchemaVariant::kCV: return {.values = true};
    case SchemaVariant::kCP: return {.primary_key = true};
    case SchemaVariant::kCVD: return {.description = true, .values = true};
    case SchemaVariant::kCVDT: return {.type = true, .description = true, .values = true};
    case SchemaVariant::kCVDP:
      return {.description = true, .values = true, .primary_key = true};
    case SchemaVariant::kCA:
      return {.type = true, .description = true, .values = true, .primary_key = true};
  }
  return {};
}

std::string RenderColumnLine(const ColumnSpec& column, SchemaVariant variant) {
  const VariantElements el = ElementsOf(variant);
  std::vector<std::string> parts;
  if (el.type) parts.emplace_back(ColumnTypeName(column.type));
  if (el.description && column.description) {
    const std::string d = CollapseWhitespace(*column.description);
    if (!d.empty()) parts.push_back("(" + d + ")");
  }
  if (el.values && column.values && !column.values->empty()) {
    std::string v = "(";
    for (size_t i = 0; i < column.values->size(); ++i) {
      if (i) v += ", ";
      v += FormatValue((*column.values)[i]);
    }
    v += ")";
    parts.push_back(std::move(v));
  }
  if (el.primary_key && column.is_primary_key) parts.emplace_back(kPrimaryKeyToken);

  std::string line = "#   " + column.name;
  if (!parts.empty()) {
    line += ": ";
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) line += ", ";
      line += parts[i];
    }
  }
  return line;
}

std::string RenderSchema(const DatabaseCatalog& catalog, SchemaVariant variant,
                         const ColumnFilter* keep) {
  if (keep) {
    for (const auto& ref : *keep) {
      const auto* t = catalog.FindTable(ref.table);
      if (!t || !t->FindColumn(ref.column)) {
        throw Error(ErrorCode::kUnknownColumnInFilter,
                    "filter names unknown column " + ref.table + "." + ref.column);
      }
    }
  }
  auto retained = [&](const std::string& table, const std::string& column) {
    return keep == nullptr || keep->count({table, column}) > 0;
  };

  std::string out;
  bool any_table = false;
  for (const auto& t : catalog.tables) {
    std::string body;
    for (const auto& c : t.columns) {
      if (!retained(t.name, c.name)) continue;
      body += RenderColumnLine(c, variant);
      body += '\n';
    }
    if (body.empty()) continue;
    any_table = true;
    out += "# " + t.name + " (\n";
    out += body;
    out += "# )\n";
  }
  if (!any_table) return "";
  out += "# FOREIGN KEYS:\n";
  for (const auto& fk : catalog.foreign_keys) {
    if (!retained(fk.table, fk.column) || !retained(fk.ref_table, fk.ref_column)) continue;
    out += "# " + fk.table + "." + fk.column + "=" + fk.ref_table + "." + fk.ref_column + "\n";
  }
  return out;
}

std::string RenderSchemaFormatHeader(SchemaVariant variant) {
  std::string lines;
  switch (variant) {
    case SchemaVariant::kCN:
      lines = "# COLUMN_NAME\n";
      break;
    case SchemaVariant::kCT:
      lines = "# COLUMN_NAME: TYPE\n";
      break;
    case SchemaVariant::kCD:
      lines = "# COLUMN_NAME: DESCRIPTION\n";
      break;
    case SchemaVariant::kCV:
      lines = "# COLUMN_NAME: (ENUM_VALUE, ENUM_VALUE2, ...)\n";
      break;
    case SchemaVariant::kCP:
      lines = "# COLUMN_NAME: PRIMARY_KEY\n# COLUMN_NAME:\n";
      break;
    case SchemaVariant::kCVD:
      lines = "# COLUMN_NAME: (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...)\n";
      break;
    case SchemaVariant::kCVDT:
      lines = "# COLUMN_NAME: TYPE, (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...)\n";
      break;
    case SchemaVariant::kCVDP:
      lines =
          "# COLUMN_NAME: (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...), PRIMARY_KEY\n"
          "# COLUMN_NAME: (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...)\n";
      break;
    case SchemaVariant::kCA:
      lines =
          "# COLUMN_NAME: TYPE, (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...), PRIMARY_KEY\n"
          "# COLUMN_NAME: TYPE, (DESCRIPTION), (ENUM_VALUE, ENUM_VALUE2, ...)\n";
      break;
  }
  return "# TABLE_NAME (\n" + lines +
         "# )\n"
         "# FOREIGN KEYS:\n"
         "# TABLE_NAME1.COLUMN_NAME1 = TABLE_NAME2.COLUMN_NAME2\n";
}

nlohmann::json CatalogToJson(const DatabaseCatalog& catalog) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : catalog.tables) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : t.columns) {
      nlohmann::json jc = {{"name", c.name},
                           {"type", ColumnTypeName(c.type)},
                           {"primary_key", c.is_primary_key}};
      jc["description"] = c.description ? nlohmann::json(*c.description) : nlohmann::json();
      jc["values"] = c.values ? nlohmann::json(*c.values) : nlohmann::json();
      cols.push_back(std::move(jc));
    }
    tables.push_back({{"name", t.name}, {"columns", std::move(cols)}});
  }
  nlohmann::json fks = nlohmann::json::array();
  for (const auto& fk : catalog.foreign_keys) {
    fks.push_back({fk.table, fk.column, fk.ref_table, fk.ref_column});
  }
  return {{"database_id", catalog.database_id}, {"tables", tables}, {"foreign_keys", fks}};
}

DatabaseCatalog CatalogFromJson(const nlohmann::json& j) {
  try {
    DatabaseCatalog catalog;
    catalog.database_id = j.at("database_id").get<std::string>();
    for (const auto& jt : j.at("tables")) {
      TableSpec t{jt.at("name").get<std::string>(), {}};
      for (const auto& jc : jt.at("columns")) {
        ColumnSpec c;
        c.name = jc.at("name").get<std::string>();
        c.type = NormalizeDeclaredType(jc.value("type", "text"));
        c.is_primary_key = jc.value("primary_key", false);
        if (jc.contains("description") && !jc["description"].is_null()) {
          c.description = jc["description"].get<std::string>();
        }
        if (jc.contains("values") && !jc["values"].is_null()) {
          c.values = jc["values"].get<std::vector<std::string>>();
        }
        t.columns.push_back(std::move(c));
      }
      catalog.tables.push_back(std::move(t));
    }
    if (j.contains("foreign_keys")) {
      for (const auto& jf : j["foreign_keys"]) {
        catalog.foreign_keys.push_back({jf.at(0).get<std::string>(), jf.at(1).get<std::string>(),
                                        jf.at(2).get<std::string>(),
                                        jf.at(3).get<std::string>()});
      }
    }
    catalog.Validate();
    return catalog;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad catalog JSON: ") + e.what());
  }
}

}  // namespace t2sql
