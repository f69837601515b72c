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

// Prompt assembly: zero-shot Open Prompt, few-shot prompt with example
// schemas, chain-of-thought step prompts and SFT training pairs.

#ifndef T2SQL_PROMPT_HPP_
#define T2SQL_PROMPT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2sql/bench.hpp"
#include "t2sql/budget.hpp"
#include "t2sql/schema.hpp"

namespace t2sql {

enum class PromptRole { kZeroShot, kFewShot, kCotStep, kSftPair };

std::string_view PromptRoleName(PromptRole role);

struct PromptBundle {
  std::string text;
  std::size_t token_count = 0;
  PromptRole role = PromptRole::kZeroShot;
  int step_index = 0;  // 1-based for kCotStep
  std::optional<TruncationRecord> truncation;
};

nlohmann::json PromptBundleToJson(const PromptBundle& bundle);

// One few-shot example as it will be shown. `keep` restricts its schema.
struct PromptExample {
  const TaskInstance* instance = nullptr;
  const DatabaseCatalog* catalog = nullptr;
  const ColumnFilter* keep = nullptr;
  double similarity = 1.0;
};

inline constexpr std::string_view kCompletionCue = "SELECT";

// Collapses whitespace and ends the text with a period unless it already
// ends with terminal punctuation.
std::string AsSentence(std::string_view text);

std::string RenderOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                             SchemaVariant variant, const ColumnFilter* keep = nullptr);

// Throws EmptyExampleSql when an example has no gold SQL.
std::string RenderFewShotPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                const ColumnFilter* keep,
                                const std::vector<PromptExample>& examples,
                                SchemaVariant variant);

PromptBundle BuildOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                             SchemaVariant variant, const TokenCounter& counter = CountTokens);

PromptBundle BuildFewShotPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                const std::vector<PromptExample>& examples, SchemaVariant variant,
                                const TokenCounter& counter = CountTokens);

// Zero-shot prompt with target column truncation against
// budget.PromptLimit(). The target partition comes from the question.
PromptBundle BuildBudgetedOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                     SchemaVariant variant, const TokenBudget& budget,
                                     std::uint64_t seed, const TokenCounter& counter = CountTokens);

// Few-shot prompt with example column truncation. Example similarities feed
// the truncation plan after clamping. Truncation record sections follow
// the prompt: 0 is the target, i the i-th example.
PromptBundle BuildBudgetedFewShotPrompt(const TaskInstance& instance,
                                        const DatabaseCatalog& catalog,
                                        const std::vector<PromptExample>& examples,
                                        SchemaVariant variant, const TokenBudget& budget,
                                        double temperature, std::uint64_t seed,
                                        const TokenCounter& counter = CountTokens);

// Chain-of-thought step prompts. Step 1 shows a description-only schema;
// later steps show the given schema text under the typed header.
enum class CotFlavor { kSimple, kSkeleton };

struct CotStepInput {
  const TaskInstance* instance = nullptr;
  std::string schema;           // rendered schema block
  std::string tables_related;   // "movies, ratings"
  std::string columns_related;  // "movies: (title, year), ratings: (score)"
  std::string skeleton;         // step 4 of the skeleton flavour
};

std::string RenderCotStep(CotFlavor flavor, int step, const CotStepInput& input);
std::string CotLaterStepHeader();

struct SftPair {
  std::string prompt;
  std::string completion;
};

// Gold SQL without its leading cue keyword, starting with a space.
std::string CompletionFromGold(std::string_view gold_sql);

struct SftEmission {
  SftPair pair;
  TruncationRecord record;
};

// One training pair; prompt + completion fits budget.max_context after
// target truncation driven by the gold SQL. Throws UnsatisfiableBudget.
SftEmission EmitSftPair(const TaskInstance& instance, const DatabaseCatalog& catalog,
                        SchemaVariant variant, const TokenBudget& budget, std::uint64_t seed,
                        const TokenCounter& counter = CountTokens);

// Per-instance seed derived from the run seed, independent of scheduling.
std::uint64_t InstanceSeed(std::uint64_t run_seed, std::int64_t question_id);

}  // namespace t2sql

#endif  // T2SQL_PROMPT_HPP_
