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


// Single-label classification of failed predictions into schema-linking,
// JOIN, nesting and other error classes, plus the frequency table.

#ifndef T2SQL_TAXONOMY_HPP_
#define T2SQL_TAXONOMY_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "t2sql/eval.hpp"
#include "t2sql/schema.hpp"

namespace t2sql {

enum class ErrorCategory {
  kTablesNotExist,
  kColumnsNotExist,
  kWrongTables,
  kWrongColumns,
  kWrongWhere,
  kJoinWrongTables,
  kJoinWrongColumns,
  kSetOperation,
  kWrongSubquery,
  kSyntaxError,
  kGroupBy,
};

inline constexpr std::array<ErrorCategory, 11> kAllCategories = {
    ErrorCategory::kTablesNotExist,  ErrorCategory::kColumnsNotExist,
    ErrorCategory::kWrongTables,     ErrorCategory::kWrongColumns,
    ErrorCategory::kWrongWhere,      ErrorCategory::kJoinWrongTables,
    ErrorCategory::kJoinWrongColumns, ErrorCategory::kSetOperation,
    ErrorCategory::kWrongSubquery,   ErrorCategory::kSyntaxError,
    ErrorCategory::kGroupBy};

std::string_view CategoryId(ErrorCategory c);     // "tables_not_exist"
std::string_view CategoryGroup(ErrorCategory c);  // "Wrong schema linking"
std::string_view CategoryTitle(ErrorCategory c);  // "Tables not exist"
ErrorCategory ParseCategory(std::string_view id);

struct ErrorLabel {
  ErrorCategory category = ErrorCategory::kWrongWhere;
  std::string detail;
};

nlohmann::json LabelToJson(const ErrorLabel& label);

// Lightweight structural view of one SQL statement. Names are lower case,
// aliases resolved to base tables; columns are "table.column" ("?.column"
// when no referenced table has the column).
struct SqlShape {
  std::set<std::string> tables;
  std::set<std::string> ctes;
  std::set<std::string> missing_tables;
  std::set<std::string> missing_columns;
  std::set<std::string> select_columns;
  std::set<std::string> join_columns;
  std::set<std::string> group_columns;
  std::multiset<std::string> set_operations;
  std::size_t joins = 0;
  std::size_t subqueries = 0;

  bool HasJoin() const { return joins > 0 || tables.size() > 1; }
};

// Throws UnterminatedString / UnterminatedComment from the tokenizer.
SqlShape AnalyzeSql(std::string_view sql, const DatabaseCatalog& catalog);

// True for error messages that indicate the statement did not parse.
bool IsSyntaxClassError(std::string_view message);

// Applies the ordered cascade; outcome.matched must be false.
ErrorLabel Classify(const std::string& predicted, const std::string& gold,
                    const DatabaseCatalog& catalog, const EvalOutcome& outcome);

struct TaxonomyRow {
  ErrorCategory category;
  std::size_t count = 0;
  double percent = 0;  // count / total queries * 100
};

// One row per category in table order.
std::vector<TaxonomyRow> Tabulate(const std::vector<ErrorLabel>& labels,
                                  std::size_t total_queries);

nlohmann::json TaxonomyToJson(const std::vector<TaxonomyRow>& rows);

}  // namespace t2sql

#endif  // T2SQL_TAXONOMY_HPP_
