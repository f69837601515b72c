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


#include "t2sql/prompt.hpp"

#include <cctype>

#include "t2sql/error.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

constexpr std::string_view kRuleLine = "### Complete sqlite SQL query only and with no explanation\n";
constexpr std::string_view kFormatLine =
    "### SQLite SQL tables are requested to be represented in the following format.\n";
constexpr std::string_view kTablesLine = "### Here are SQLite SQL tables, with their properties:\n";
constexpr std::string_view kUsedTablesLine =
    "### Here are SQLite SQL tables that will be used, with their properties:\n";
constexpr std::string_view kUsingValidLine =
    "### Using valid SQLite, answer the following questions for the tables provided above.\n";
constexpr std::string_view kStepByStep = "Please generate the SQL script STEP BY STEP.\n";

void AppendQuestionAndNote(std::string& out, const TaskInstance& instance) {
  out += "### Question: " + AsSentence(instance.question) + "\n";
  if (!Trim(instance.external_knowledge).empty()) {
    out += "### Note that: " + AsSentence(instance.external_knowledge) + "\n";
  }
}

std::string PartitionText(const TaskInstance& instance) {
  // Evidence often names the columns a question needs.
  return instance.question + " " + instance.external_knowledge;
}

}  // namespace

std::string_view PromptRoleName(PromptRole role) {
  switch (role) {
    case PromptRole::kZeroShot: return "zero_shot";
    case PromptRole::kFewShot: return "few_shot";
    case PromptRole::kCotStep: return "cot_step";
    case PromptRole::kSftPair: return "sft_pair";
  }
  return "zero_shot";
}

nlohmann::json PromptBundleToJson(const PromptBundle& bundle) {
  nlohmann::json j = {{"role", PromptRoleName(bundle.role)},
                      {"text", bundle.text},
                      {"token_count", bundle.token_count}};
  if (bundle.role == PromptRole::kCotStep) j["step"] = bundle.step_index;
  if (bundle.truncation) {
    nlohmann::json removed = nlohmann::json::array();
    for (const auto& section : bundle.truncation->removed_columns) {
      nlohmann::json cols = nlohmann::json::array();
      for (const auto& ref : section) cols.push_back(ref.table + "." + ref.column);
      removed.push_back(cols);
    }
    j["truncation"] = {{"removed_columns", removed},
                       {"tokens_before", bundle.truncation->tokens_before},
                       {"tokens_after", bundle.truncation->tokens_after}};
  }
  return j;
}

std::string AsSentence(std::string_view text) {
  std::string s = CollapseWhitespace(text);
  if (s.empty()) return s;
  const char last = s.back();
  if (last != '.' && last != '?' && last != '!') s.push_back('.');
  return s;
}

std::string RenderOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                             SchemaVariant variant, const ColumnFilter* keep) {
  std::string out;
  out += kRuleLine;
  out += kFormatLine;
  out += RenderSchemaFormatHeader(variant);
  out += kTablesLine;
  out += RenderSchema(catalog, variant, keep);
  AppendQuestionAndNote(out, instance);
  out += kCompletionCue;
  return out;
}

std::string RenderFewShotPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                const ColumnFilter* keep,
                                const std::vector<PromptExample>& examples,
                                SchemaVariant variant) {
  std::string out;
  out += kRuleLine;
  out += kFormatLine;
  out += RenderSchemaFormatHeader(variant);
  out += "\n";
  for (const auto& ex : examples) {
    const std::string sql = CollapseWhitespace(ex.instance->gold_sql);
    if (sql.empty()) {
      throw Error(ErrorCode::kEmptyExampleSql,
                  "example question " + std::to_string(ex.instance->question_id) +
                      " has no gold SQL");
    }
    out += kTablesLine;
    out += RenderSchema(*ex.catalog, variant, ex.keep);
    AppendQuestionAndNote(out, *ex.instance);
    out += kUsingValidLine;
    out += sql + "\n\n";
  }
  out += kTablesLine;
  out += RenderSchema(catalog, variant, keep);
  out += kUsingValidLine;
  AppendQuestionAndNote(out, instance);
  out += kCompletionCue;
  return out;
}

PromptBundle BuildOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                             SchemaVariant variant, const TokenCounter& counter) {
  PromptBundle b;
  b.text = RenderOpenPrompt(instance, catalog, variant);
  b.token_count = counter(b.text);
  b.role = PromptRole::kZeroShot;
  return b;
}

PromptBundle BuildFewShotPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                const std::vector<PromptExample>& examples, SchemaVariant variant,
                                const TokenCounter& counter) {
  PromptBundle b;
  b.text = RenderFewShotPrompt(instance, catalog, nullptr, examples, variant);
  b.token_count = counter(b.text);
  b.role = PromptRole::kFewShot;
  return b;
}

PromptBundle BuildBudgetedOpenPrompt(const TaskInstance& instance, const DatabaseCatalog& catalog,
                                     SchemaVariant variant, const TokenBudget& budget,
                                     std::uint64_t seed, const TokenCounter& counter) {
  budget.Validate();
  const auto partition = PartitionColumns(catalog, std::nullopt, PartitionText(instance));
  auto measure = [&](const ColumnFilter& keep) {
    return counter(RenderOpenPrompt(instance, catalog, variant, &keep));
  };
  auto fit = TruncateTarget(catalog, partition, catalog.AllColumnsFilter(), measure,
                            budget.PromptLimit(), seed);
  PromptBundle b;
  b.text = RenderOpenPrompt(instance, catalog, variant, &fit.keep);
  b.token_count = counter(b.text);
  b.role = PromptRole::kZeroShot;
  b.truncation = std::move(fit.record);
  return b;
}

PromptBundle BuildBudgetedFewShotPrompt(const TaskInstance& instance,
                                        const DatabaseCatalog& catalog,
                                        const std::vector<PromptExample>& examples,
                                        SchemaVariant variant, const TokenBudget& budget,
                                        double temperature, std::uint64_t seed,
                                        const TokenCounter& counter) {
  budget.Validate();
  std::vector<SchemaSection> sections;
  sections.push_back({&catalog, PartitionColumns(catalog, std::nullopt, PartitionText(instance)),
                      catalog.AllColumnsFilter()});
  std::vector<double> similarities;
  for (const auto& ex : examples) {
    sections.push_back({ex.catalog, PartitionColumns(*ex.catalog, ex.instance->gold_sql, ""),
                        ex.keep ? *ex.keep : ex.catalog->AllColumnsFilter()});
    similarities.push_back(ClampSimilarity(ex.similarity));
  }

  auto render = [&](const std::vector<SchemaSection>& s) {
    std::vector<PromptExample> shown = examples;
    for (size_t i = 0; i < shown.size(); ++i) shown[i].keep = &s[i + 1].keep;
    return RenderFewShotPrompt(instance, catalog, &s[0].keep, shown, variant);
  };
  SectionMeasures measures;
  measures.section = [&](const SchemaSection& s) {
    return counter(RenderSchema(*s.catalog, variant, &s.keep));
  };
  measures.prompt = [&](const std::vector<SchemaSection>& s) { return counter(render(s)); };

  const auto plan = PlanExampleTruncation(similarities, temperature);
  auto record = TruncateExamples(sections, plan, budget.PromptLimit(), seed, measures);

  PromptBundle b;
  b.text = render(sections);
  b.token_count = counter(b.text);
  b.role = PromptRole::kFewShot;
  b.truncation = std::move(record);
  return b;
}

std::string CotLaterStepHeader() {
  return "# TABLE_NAME (\n"
         "# COLUMN_NAME: TYPE, (DESCRIPTION), (VALUE1, VALUE2, ...)\n"
         "# )\n"
         "# FOREIGN KEYS:\n"
         "# TABLE_NAME1.COLUMN_NAME1 = TABLE_NAME2.COLUMN_NAME2\n";
}

std::string RenderCotStep(CotFlavor flavor, int step, const CotStepInput& input) {
  const int last = flavor == CotFlavor::kSimple ? 3 : 4;
  if (step < 1 || step > last || input.instance == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "no such chain-of-thought step " +
                                                 std::to_string(step));
  }
  std::string out;
  out += kFormatLine;
  if (step == 1) {
    out += RenderSchemaFormatHeader(SchemaVariant::kCD);
    out += kTablesLine;
  } else {
    out += CotLaterStepHeader();
    out += kUsedTablesLine;
  }
  out += input.schema;
  AppendQuestionAndNote(out, *input.instance);
  out += kStepByStep;
  if (step == 1) {
    out += "Find the required tables based on the QUESTION.";
  } else if (step == 2) {
    out += "Given the tables:\n" + input.tables_related + ".\n";
    out += "From the given tables, find the required columns based on the QUESTION.";
  } else if (step == 3 && flavor == CotFlavor::kSimple) {
    out += "Given the tables and columns used in the SQL query:\n" + input.columns_related + ".\n";
    out += "### Complete sqlite SQL query based on the given tables and columns\n";
    out += kCompletionCue;
  } else if (step == 3) {
    out += "Given the tables and columns:\n" + input.columns_related + ".\n";
    out += "Based on the given the tables and columns, write the skeleton of the SQL query "
           "corresponding to the question.";
  } else {
    out += "Given the tables and columns:\n" + input.columns_related + ",\n";
    out += "and sql skeleton:\n" + input.skeleton + ".\n";
    out += "### Complete sqlite SQL query based on the given tables, columns and sql_skeleton\n";
    out += kCompletionCue;
  }
  return out;
}

std::string CompletionFromGold(std::string_view gold_sql) {
  std::string_view sql = Trim(gold_sql);
  const std::string_view cue = kCompletionCue;
  if (sql.size() >= cue.size() && IEquals(sql.substr(0, cue.size()), cue) &&
      (sql.size() == cue.size() ||
       (!std::isalnum(static_cast<unsigned char>(sql[cue.size()])) && sql[cue.size()] != '_'))) {
    std::string rest(sql.substr(cue.size()));
    if (rest.empty() || !std::isspace(static_cast<unsigned char>(rest.front()))) {
      rest.insert(rest.begin(), ' ');
    }
    return rest;
  }
  Warn("gold SQL does not start with SELECT; completion repeats it after the cue");
  return " " + std::string(sql);
}

SftEmission EmitSftPair(const TaskInstance& instance, const DatabaseCatalog& catalog,
                        SchemaVariant variant, const TokenBudget& budget, std::uint64_t seed,
                        const TokenCounter& counter) {
  budget.Validate();
  if (budget.max_context < 256) {
    throw Error(ErrorCode::kConfig, "SFT preparation needs max_context >= 256");
  }
  SftEmission out;
  out.pair.completion = CompletionFromGold(instance.gold_sql);
  const std::size_t completion_tokens = counter(out.pair.completion);
  const auto partition = PartitionColumns(catalog, instance.gold_sql, instance.question);
  auto measure = [&](const ColumnFilter& keep) {
    return counter(RenderOpenPrompt(instance, catalog, variant, &keep)) + completion_tokens;
  };
  auto fit = TruncateTarget(catalog, partition, catalog.AllColumnsFilter(), measure,
                            budget.max_context, seed);
  out.pair.prompt = RenderOpenPrompt(instance, catalog, variant, &fit.keep);
  out.record = std::move(fit.record);
  return out;
}

std::uint64_t InstanceSeed(std::uint64_t run_seed, std::int64_t question_id) {
  SeededRng rng(run_seed ^ (static_cast<std::uint64_t>(question_id) * 0xD1B54A32D192ED03ULL));
  return rng.Next();
}

}  // namespace t2sql
