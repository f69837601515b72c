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


// Multi-step inference: tables -> columns -> SQL, optionally with a skeleton
// step before the final SQL. PRED modes show later steps only what earlier
// steps predicted; FULL modes always show the whole schema.

#ifndef T2SQL_COT_HPP_
#define T2SQL_COT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "t2sql/bench.hpp"
#include "t2sql/budget.hpp"
#include "t2sql/prompt.hpp"
#include "t2sql/skeleton.hpp"

namespace t2sql {

enum class CotMode { kNone, kCotSpPred, kCotSpFull, kCotSkPred, kCotSkFull };

std::string_view CotModeName(CotMode mode);  // "none", "cot_sp_pred", ...
CotMode ParseCotMode(std::string_view name);

using TableColumns = std::vector<std::pair<std::string, std::vector<std::string>>>;

struct CotTrace {
  CotMode mode = CotMode::kNone;
  std::vector<std::string> predicted_tables;
  TableColumns predicted_columns;
  std::optional<SqlSkeleton> skeleton;
  std::vector<PromptBundle> step_prompts;
  std::vector<std::string> responses;
  std::string final_sql;
  std::vector<std::string> warnings;
};

nlohmann::json TraceToJson(const CotTrace& trace);

// Sends one prompt, returns the raw model text.
using CompleteFn = std::function<std::string(const std::string&)>;

struct CotOptions {
  TokenBudget budget;
  std::uint64_t seed = 0;
  TokenCounter counter = CountTokens;
  // PRED only: restrict the step-2 schema to the predicted tables.
  bool restrict_step2 = true;
};

CotTrace RunCotSp(const TaskInstance& instance, const DatabaseCatalog& catalog,
                  const CompleteFn& complete, CotMode mode, const CotOptions& options);
CotTrace RunCotSk(const TaskInstance& instance, const DatabaseCatalog& catalog,
                  const CompleteFn& complete, CotMode mode, const CotOptions& options);
// Dispatches on mode; kNone is rejected.
CotTrace RunCot(const TaskInstance& instance, const DatabaseCatalog& catalog,
                const CompleteFn& complete, CotMode mode, const CotOptions& options);

// Names inside "Tables: ( ... )", or catalog tables mentioned anywhere when
// no such block exists. Catalog spelling and order, no duplicates. Names
// missing from the catalog are reported through `dropped`.
std::vector<std::string> ParseTableList(std::string_view response, const DatabaseCatalog& catalog,
                                        std::vector<std::string>* dropped = nullptr);

// Entries of "Columns: table: (c1, c2) other: (c3)", or qualified/bare
// mentions of columns of `tables` when no block parses.
TableColumns ParseColumnList(std::string_view response, const DatabaseCatalog& catalog,
                             const std::vector<std::string>& tables,
                             std::vector<std::string>* dropped = nullptr);

std::string FormatTableList(const std::vector<std::string>& tables);
std::string FormatColumnList(const TableColumns& columns);

// Skeleton of the first statement in a skeleton-step response. Throws
// SkeletonParseFailure when no keyword survives.
SqlSkeleton NormalizeSkeletonResponse(std::string_view response);

}  // namespace t2sql

#endif  // T2SQL_COT_HPP_
