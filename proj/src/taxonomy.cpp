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


#include "t2sql/taxonomy.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "t2sql/error.hpp"
#include "t2sql/skeleton.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

enum class Clause { kNone, kSelect, kFrom, kOn, kWhere, kGroup, kHaving, kOrder, kLimit };

struct Frame {
  Clause clause = Clause::kNone;
  bool subquery = false;
  bool expect_table = false;
  bool table_just_named = false;
  std::string last_table;
};

struct RawRef {
  std::string qualifier;
  std::string column;
  bool quoted = false;
  Clause clause = Clause::kNone;
};

bool IsPunct(const SqlToken& t, std::string_view p) {
  return t.kind == TokenKind::kPunctuation && t.text == p;
}

bool IsKeyword(const SqlToken& t, std::string_view k) {
  return t.kind == TokenKind::kKeyword && IEquals(t.text, k);
}

// Words SQLite accepts where a column could stand.
bool IsBuiltinWord(std::string_view w) {
  static const std::set<std::string> kWords = {
      "true",   "false", "current_date", "current_time", "current_timestamp", "nocase",
      "rowid",  "oid",   "_rowid_",      "collate",      "escape",            "glob",
      "regexp", "over",  "partition",    "rows",         "range",             "rtrim",
      "binary", "unbounded", "preceding", "following",   "current",           "row",
      "filter", "window", "recursive",   "glob",         "match",             "notnull",
      "isnull", "if"};
  return kWords.count(ToLower(w)) > 0;
}

const ColumnSpec* FindColumnCi(const TableSpec& t, std::string_view c) {
  for (const auto& col : t.columns) {
    if (IEquals(col.name, c)) return &col;
  }
  return nullptr;
}

bool AnyTableHasColumn(const DatabaseCatalog& catalog, std::string_view c) {
  return std::any_of(catalog.tables.begin(), catalog.tables.end(),
                     [&](const TableSpec& t) { return FindColumnCi(t, c) != nullptr; });
}

std::string Join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::string_view CategoryId(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kTablesNotExist: return "tables_not_exist";
    case ErrorCategory::kColumnsNotExist: return "columns_not_exist";
    case ErrorCategory::kWrongTables: return "wrong_tables";
    case ErrorCategory::kWrongColumns: return "wrong_columns";
    case ErrorCategory::kWrongWhere: return "wrong_where";
    case ErrorCategory::kJoinWrongTables: return "join_wrong_tables";
    case ErrorCategory::kJoinWrongColumns: return "join_wrong_columns";
    case ErrorCategory::kSetOperation: return "set_operation";
    case ErrorCategory::kWrongSubquery: return "wrong_subquery";
    case ErrorCategory::kSyntaxError: return "syntax_error";
    case ErrorCategory::kGroupBy: return "group_by";
  }
  return "wrong_where";
}

std::string_view CategoryGroup(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kTablesNotExist:
    case ErrorCategory::kColumnsNotExist:
    case ErrorCategory::kWrongTables:
    case ErrorCategory::kWrongColumns:
    case ErrorCategory::kWrongWhere:
      return "Wrong schema linking";
    case ErrorCategory::kJoinWrongTables:
    case ErrorCategory::kJoinWrongColumns:
      return "Incorrect JOIN operation";
    case ErrorCategory::kSetOperation:
    case ErrorCategory::kWrongSubquery:
      return "Inaccurate nested structure";
    case ErrorCategory::kSyntaxError:
    case ErrorCategory::kGroupBy:
      return "Other";
  }
  return "Other";
}

std::string_view CategoryTitle(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kTablesNotExist: return "Tables not exist";
    case ErrorCategory::kColumnsNotExist: return "Columns not exist";
    case ErrorCategory::kWrongTables:
    case ErrorCategory::kJoinWrongTables: return "Wrong tables";
    case ErrorCategory::kWrongColumns:
    case ErrorCategory::kJoinWrongColumns: return "Wrong columns";
    case ErrorCategory::kWrongWhere: return "Wrong where statement";
    case ErrorCategory::kSetOperation: return "Set operation";
    case ErrorCategory::kWrongSubquery: return "Wrong sub-query";
    case ErrorCategory::kSyntaxError: return "Syntax error";
    case ErrorCategory::kGroupBy: return "Group-by error";
  }
  return "";
}

ErrorCategory ParseCategory(std::string_view id) {
  for (auto c : kAllCategories) {
    if (CategoryId(c) == id) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown error category '" + std::string(id) + "'");
}

nlohmann::json LabelToJson(const ErrorLabel& label) {
  return {{"category", CategoryId(label.category)}, {"detail", label.detail}};
}

SqlShape AnalyzeSql(std::string_view sql, const DatabaseCatalog& catalog) {
  const auto toks = Tokenize(sql);
  SqlShape shape;
  auto at = [&](size_t i) -> const SqlToken* { return i < toks.size() ? &toks[i] : nullptr; };

  // Common table expressions: name AS ( ... ).
  for (size_t i = 0; i + 2 < toks.size(); ++i) {
    if (toks[i].kind == TokenKind::kIdentifier && IsKeyword(toks[i + 1], "AS") &&
        IsPunct(toks[i + 2], "(")) {
      shape.ctes.insert(ToLower(toks[i].text));
    }
  }

  std::vector<Frame> frames(1);
  std::vector<std::string> from_tables;
  std::map<std::string, std::string> aliases;
  std::set<std::string> output_aliases;
  std::vector<RawRef> refs;

  for (size_t i = 0; i < toks.size(); ++i) {
    const SqlToken& tok = toks[i];
    Frame& f = frames.back();
    if (tok.kind == TokenKind::kPunctuation) {
      if (tok.text == "(") {
        const SqlToken* next = at(i + 1);
        const bool sub = next && (IsKeyword(*next, "SELECT") || IsKeyword(*next, "WITH"));
        if (sub) ++shape.subqueries;
        f.table_just_named = false;
        Frame nf;
        nf.clause = sub ? Clause::kNone : f.clause;
        nf.subquery = sub;
        frames.push_back(nf);
      } else if (tok.text == ")") {
        const bool was_sub = frames.back().subquery;
        if (frames.size() > 1) frames.pop_back();
        Frame& outer = frames.back();
        if (was_sub && outer.clause == Clause::kFrom) {
          outer.last_table.clear();  // derived table
          outer.table_just_named = true;
          outer.expect_table = false;
        }
      } else if (tok.text == ",") {
        if (f.clause == Clause::kFrom) {
          f.expect_table = true;
          f.table_just_named = false;
        }
      }
      continue;
    }
    if (tok.kind == TokenKind::kKeyword) {
      const std::string k = ToUpper(tok.text);
      if (k == "SELECT") {
        f.clause = Clause::kSelect;
      } else if (k == "FROM") {
        f.clause = Clause::kFrom;
        f.expect_table = true;
      } else if (k == "JOIN") {
        ++shape.joins;
        f.clause = Clause::kFrom;
        f.expect_table = true;
      } else if (k == "ON" || k == "USING") {
        f.clause = Clause::kOn;
      } else if (k == "WHERE") {
        f.clause = Clause::kWhere;
      } else if (k == "GROUP") {
        f.clause = Clause::kGroup;
      } else if (k == "HAVING") {
        f.clause = Clause::kHaving;
      } else if (k == "ORDER") {
        f.clause = Clause::kOrder;
      } else if (k == "LIMIT" || k == "OFFSET") {
        f.clause = Clause::kLimit;
      } else if (k == "UNION" || k == "INTERSECT" || k == "EXCEPT") {
        const SqlToken* next = at(i + 1);
        shape.set_operations.insert(next && IsKeyword(*next, "ALL") ? k + " ALL" : k);
        f.clause = Clause::kNone;
      }
      if (k != "AS") f.table_just_named = false;
      continue;
    }
    if (tok.kind != TokenKind::kIdentifier) {
      f.table_just_named = false;
      continue;
    }

    const std::string name = ToLower(tok.text);
    const SqlToken* prev = i > 0 ? &toks[i - 1] : nullptr;
    const SqlToken* next = at(i + 1);
    if (next && IsKeyword(*next, "AS") && at(i + 2) && IsPunct(*at(i + 2), "(")) continue;
    if (prev && IsKeyword(*prev, "AS")) {
      if (f.clause == Clause::kFrom && f.table_just_named) {
        aliases[name] = f.last_table;
        f.table_just_named = false;
      } else {
        output_aliases.insert(name);
      }
      continue;
    }
    if (next && IsPunct(*next, "(") && !tok.quoted) continue;  // function call
    if (f.clause == Clause::kFrom && f.expect_table) {
      std::string table = name;
      if (next && IsPunct(*next, ".") && at(i + 2) && at(i + 2)->kind == TokenKind::kIdentifier) {
        table = ToLower(at(i + 2)->text);  // schema-qualified
        i += 2;
      }
      from_tables.push_back(table);
      f.last_table = table;
      f.expect_table = false;
      f.table_just_named = true;
      continue;
    }
    if (f.clause == Clause::kFrom && f.table_just_named) {
      aliases[name] = f.last_table;
      f.table_just_named = false;
      continue;
    }
    if (f.clause == Clause::kLimit) continue;
    if (next && IsPunct(*next, ".") && at(i + 2)) {
      const SqlToken& col = *at(i + 2);
      i += 2;
      refs.push_back({name, col.kind == TokenKind::kIdentifier ? ToLower(col.text) : "*",
                      col.quoted, f.clause});
      continue;
    }
    refs.push_back({"", name, tok.quoted, f.clause});
  }

  // Tables.
  std::vector<const TableSpec*> scope;
  bool opaque_scope = false;  // a CTE or derived table is in FROM
  for (const auto& t : from_tables) {
    if (shape.ctes.count(t)) {
      opaque_scope = true;
      continue;
    }
    if (const auto* spec = catalog.FindTableCi(t)) {
      shape.tables.insert(ToLower(spec->name));
      scope.push_back(spec);
    } else {
      shape.tables.insert(t);
      shape.missing_tables.insert(t);
    }
  }
  for (const auto& [alias, base] : aliases) {
    if (base.empty()) opaque_scope = true;
  }

  // Columns.
  for (const auto& r : refs) {
    std::optional<std::string> resolved;
    if (!r.qualifier.empty()) {
      auto it = aliases.find(r.qualifier);
      const std::string base = it != aliases.end() ? it->second : r.qualifier;
      if (base.empty() || shape.ctes.count(base)) {
        resolved = "?." + r.column;
      } else if (const auto* spec = catalog.FindTableCi(base)) {
        if (r.column != "*" && !FindColumnCi(*spec, r.column)) {
          shape.missing_columns.insert(ToLower(spec->name) + "." + r.column);
        }
        resolved = ToLower(spec->name) + "." + r.column;
      } else {
        shape.missing_tables.insert(base);
        resolved = base + "." + r.column;
      }
    } else {
      if (output_aliases.count(r.column) || aliases.count(r.column)) continue;
      for (const auto* t : scope) {
        if (FindColumnCi(*t, r.column)) {
          resolved = ToLower(t->name) + "." + r.column;
          break;
        }
      }
      if (!resolved) {
        if (AnyTableHasColumn(catalog, r.column)) {
          resolved = "?." + r.column;
        } else if (r.quoted || opaque_scope || IsBuiltinWord(r.column)) {
          continue;  // string literal in double quotes, CTE column, or keyword-ish word
        } else {
          shape.missing_columns.insert(r.column);
          resolved = "?." + r.column;
        }
      }
    }
    switch (r.clause) {
      case Clause::kSelect: shape.select_columns.insert(*resolved); break;
      case Clause::kOn: shape.join_columns.insert(*resolved); break;
      case Clause::kGroup: shape.group_columns.insert(*resolved); break;
      default: break;
    }
  }
  return shape;
}

bool IsSyntaxClassError(std::string_view message) {
  static const char* kMarkers[] = {"syntax error",      "incomplete input",
                                   "unrecognized token", "unterminated",
                                   "no sql produced",    "only one statement",
                                   "no such function",   "wrong number of arguments",
                                   "misuse of",          "empty statement",
                                   "near \""};
  const std::string m = ToLower(message);
  return std::any_of(std::begin(kMarkers), std::end(kMarkers),
                     [&](const char* k) { return m.find(k) != std::string::npos; });
}

ErrorLabel Classify(const std::string& predicted, const std::string& gold,
                    const DatabaseCatalog& catalog, const EvalOutcome& outcome) {
  if (outcome.matched) {
    throw Error(ErrorCode::kInvalidArgument, "matched outcomes carry no error label");
  }
  if (Trim(predicted).empty()) return {ErrorCategory::kSyntaxError, "no SQL produced"};
  if (outcome.predicted_error && IsSyntaxClassError(*outcome.predicted_error)) {
    return {ErrorCategory::kSyntaxError, *outcome.predicted_error};
  }
  SqlShape pred;
  try {
    pred = AnalyzeSql(predicted, catalog);
  } catch (const Error& e) {
    return {ErrorCategory::kSyntaxError, e.what()};
  }
  SqlShape ref;
  try {
    ref = AnalyzeSql(gold, catalog);
  } catch (const Error&) {
  }

  if (!pred.missing_tables.empty()) {
    return {ErrorCategory::kTablesNotExist, Join(pred.missing_tables)};
  }
  if (!pred.missing_columns.empty()) {
    return {ErrorCategory::kColumnsNotExist, Join(pred.missing_columns)};
  }
  const bool any_join = pred.HasJoin() || ref.HasJoin();
  if (any_join && pred.tables != ref.tables) {
    return {ErrorCategory::kJoinWrongTables,
            "joined {" + Join(pred.tables) + "} vs {" + Join(ref.tables) + "}"};
  }
  if (any_join && pred.join_columns != ref.join_columns) {
    return {ErrorCategory::kJoinWrongColumns,
            "join on {" + Join(pred.join_columns) + "} vs {" + Join(ref.join_columns) + "}"};
  }
  if (!ref.set_operations.empty() || ref.subqueries > 0) {
    if (pred.set_operations != ref.set_operations) {
      return {ErrorCategory::kSetOperation, "set operations differ"};
    }
    if (pred.subqueries != ref.subqueries) {
      return {ErrorCategory::kWrongSubquery, std::to_string(pred.subqueries) + " sub-queries vs " +
                                                 std::to_string(ref.subqueries)};
    }
  }
  if (pred.tables != ref.tables) {
    return {ErrorCategory::kWrongTables,
            "tables {" + Join(pred.tables) + "} vs {" + Join(ref.tables) + "}"};
  }
  if (pred.select_columns != ref.select_columns) {
    return {ErrorCategory::kWrongColumns,
            "selected {" + Join(pred.select_columns) + "} vs {" + Join(ref.select_columns) + "}"};
  }
  if (pred.group_columns != ref.group_columns) {
    return {ErrorCategory::kGroupBy,
            "grouped by {" + Join(pred.group_columns) + "} vs {" + Join(ref.group_columns) + "}"};
  }
  return {ErrorCategory::kWrongWhere, outcome.predicted_error.value_or("result rows differ")};
}

std::vector<TaxonomyRow> Tabulate(const std::vector<ErrorLabel>& labels,
                                  std::size_t total_queries) {
  std::map<ErrorCategory, std::size_t> counts;
  for (const auto& l : labels) ++counts[l.category];
  std::vector<TaxonomyRow> rows;
  for (auto c : kAllCategories) {
    TaxonomyRow row{c, counts[c], 0.0};
    if (total_queries > 0) row.percent = 100.0 * row.count / total_queries;
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json TaxonomyToJson(const std::vector<TaxonomyRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"group", CategoryGroup(r.category)},
                   {"category", CategoryId(r.category)},
                   {"label", CategoryTitle(r.category)},
                   {"count", r.count},
                   {"percent", r.percent}});
  }
  return out;
}

}  // namespace t2sql
