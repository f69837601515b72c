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


#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "t2sql/error.hpp"
#include "t2sql/prompt.hpp"
#include "t2sql/skeleton.hpp"

namespace t2sql {
namespace {

using testing::MakeInstance;
using testing::MovieCatalog;

bool EndsWith(const std::string& s, std::string_view tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

TEST(OpenPrompt, SectionOrderAndCue) {
  const auto catalog = MovieCatalog();
  const auto inst = MakeInstance(1, "movies", "Which movie was released in 1945",
                                 "SELECT movie_title FROM movies",
                                 "Excellence rate = NumGE1500 / NumTstTakr.");
  const auto b = BuildOpenPrompt(inst, catalog, SchemaVariant::kCVDT);
  const std::string expected =
      "### Complete sqlite SQL query only and with no explanation\n"
      "### SQLite SQL tables are requested to be represented in the following format.\n" +
      RenderSchemaFormatHeader(SchemaVariant::kCVDT) +
      "### Here are SQLite SQL tables, with their properties:\n" +
      RenderSchema(catalog, SchemaVariant::kCVDT) +
      "### Question: Which movie was released in 1945.\n"
      "### Note that: Excellence rate = NumGE1500 / NumTstTakr.\n"
      "SELECT";
  EXPECT_EQ(b.text, expected);
  EXPECT_EQ(b.token_count, CountTokens(b.text));
  EXPECT_EQ(b.role, PromptRole::kZeroShot);
  EXPECT_TRUE(EndsWith(b.text, "\nSELECT"));
}

TEST(OpenPrompt, EmptyKnowledgeOmitsNoteLine) {
  const auto inst = MakeInstance(1, "movies", "How many movies?", "SELECT COUNT(*) FROM movies");
  const auto b = BuildOpenPrompt(inst, MovieCatalog(), SchemaVariant::kCN);
  EXPECT_EQ(b.text.find("Note that"), std::string::npos);
  EXPECT_NE(b.text.find("### Question: How many movies?\nSELECT"), std::string::npos);
}

TEST(OpenPrompt, KnowledgeIsSingleLine) {
  const auto inst = MakeInstance(1, "movies", "q", "SELECT 1", "line one\nline  two");
  const auto b = BuildOpenPrompt(inst, MovieCatalog(), SchemaVariant::kCN);
  EXPECT_NE(b.text.find("### Note that: line one line two.\n"), std::string::npos);
}

TEST(FewShot, NoExamplesKeepsZeroShotSections) {
  const auto catalog = MovieCatalog();
  const auto inst = MakeInstance(1, "movies", "How many movies?", "SELECT COUNT(*) FROM movies",
                                 "count rows");
  const auto zero = BuildOpenPrompt(inst, catalog, SchemaVariant::kCVD).text;
  auto few = BuildFewShotPrompt(inst, catalog, {}, SchemaVariant::kCVD).text;
  const std::string using_line =
      "### Using valid SQLite, answer the following questions for the tables provided above.\n";
  auto pos = few.find(using_line);
  ASSERT_NE(pos, std::string::npos);
  few.erase(pos, using_line.size());
  // The few-shot header is followed by a blank line before the first block.
  pos = few.find("\n\n### Here are");
  ASSERT_NE(pos, std::string::npos);
  few.erase(pos, 1);
  EXPECT_EQ(few, zero);
}

TEST(FewShot, ExamplesInGivenOrderBeforeTarget) {
  const auto movies = MovieCatalog();
  const auto world = testing::WorldCatalog();
  const auto target = MakeInstance(1, "movies", "Target question?", "SELECT 1");
  const auto e1 = MakeInstance(10, "world", "First example?", "SELECT COUNT(*)\nFROM continents");
  const auto e2 = MakeInstance(11, "world", "Second example?", "SELECT CountryName FROM countries",
                               "hint two");
  const auto e3 = MakeInstance(12, "world", "Third example?", "SELECT 2");
  const std::vector<PromptExample> examples = {
      {&e1, &world, nullptr, 0.2}, {&e2, &world, nullptr, 0.5}, {&e3, &world, nullptr, 0.9}};
  const auto text = BuildFewShotPrompt(target, movies, examples, SchemaVariant::kCVDT).text;
  const auto p1 = text.find("### Question: First example?");
  const auto p2 = text.find("### Question: Second example?");
  const auto p3 = text.find("### Question: Third example?");
  const auto pt = text.find("### Question: Target question?");
  ASSERT_NE(p1, std::string::npos);
  EXPECT_LT(p1, p2);
  EXPECT_LT(p2, p3);
  EXPECT_LT(p3, pt);
  EXPECT_NE(text.find("SELECT COUNT(*) FROM continents\n\n"), std::string::npos);
  EXPECT_NE(text.find("### Note that: hint two.\n"), std::string::npos);
  // Example blocks without knowledge carry no note line.
  EXPECT_EQ(text.find("### Note that: ", p3), std::string::npos);
  std::size_t blocks = 0;
  for (auto at = text.find("### Here are SQLite SQL tables"); at != std::string::npos;
       at = text.find("### Here are SQLite SQL tables", at + 1)) {
    ++blocks;
  }
  EXPECT_EQ(blocks, 4u);
  EXPECT_TRUE(EndsWith(text, "\nSELECT"));
}

TEST(FewShot, EmptyExampleSqlIsRejected) {
  const auto movies = MovieCatalog();
  const auto target = MakeInstance(1, "movies", "q", "SELECT 1");
  const auto bad = MakeInstance(2, "world", "q2", "  ");
  const auto world = testing::WorldCatalog();
  try {
    BuildFewShotPrompt(target, movies, {{&bad, &world, nullptr, 0.5}}, SchemaVariant::kCN);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyExampleSql);
  }
}

TEST(BudgetedPrompts, FitAndAreDeterministic) {
  const auto wide = testing::WideCatalog(77, 4, 60);
  const auto inst = MakeInstance(5, wide.database_id, "zebra count?", "SELECT 1");
  TokenBudget budget;
  const auto a = BuildBudgetedOpenPrompt(inst, wide, SchemaVariant::kCA, budget, 9);
  const auto b = BuildBudgetedOpenPrompt(inst, wide, SchemaVariant::kCA, budget, 9);
  EXPECT_EQ(a.text, b.text);
  EXPECT_LE(a.token_count, budget.PromptLimit());
  ASSERT_TRUE(a.truncation);
  EXPECT_TRUE(a.truncation->Truncated());
  EXPECT_GT(CountTokens(RenderOpenPrompt(inst, wide, SchemaVariant::kCA)), budget.PromptLimit());

  const auto ex_cat = testing::WideCatalog(78, 3, 30);
  const auto ex = MakeInstance(6, ex_cat.database_id, "example?",
                               "SELECT " + ex_cat.tables[0].columns[1].name + " FROM " +
                                   ex_cat.tables[0].name);
  const std::vector<PromptExample> examples = {{&ex, &ex_cat, nullptr, 0.4}};
  const auto f1 = BuildBudgetedFewShotPrompt(inst, wide, examples, SchemaVariant::kCA, budget,
                                             1.0, 9);
  const auto f2 = BuildBudgetedFewShotPrompt(inst, wide, examples, SchemaVariant::kCA, budget,
                                             1.0, 9);
  EXPECT_EQ(f1.text, f2.text);
  EXPECT_LE(f1.token_count, budget.PromptLimit());
  ASSERT_TRUE(f1.truncation);
  EXPECT_EQ(f1.truncation->removed_columns.size(), 2u);
  // The example's gold SQL column survives.
  EXPECT_NE(f1.text.find("#   " + ex_cat.tables[0].columns[1].name + ":"), std::string::npos);
}

TEST(BudgetedPrompts, NegativeSimilarityIsClamped) {
  testing::CaptureWarnings warnings;
  const auto movies = MovieCatalog();
  const auto world = testing::WorldCatalog();
  const auto inst = MakeInstance(1, "movies", "q?", "SELECT 1");
  const auto ex = MakeInstance(2, "world", "e?", "SELECT 2");
  const auto b = BuildBudgetedFewShotPrompt(inst, movies, {{&ex, &world, nullptr, -0.3}},
                                            SchemaVariant::kCN, TokenBudget{}, 1.0, 1);
  EXPECT_FALSE(b.truncation->Truncated());
  EXPECT_FALSE(warnings.messages().empty());
}

TEST(CotSteps, TemplatesEndWhereExpected) {
  const auto inst = MakeInstance(1, "movies", "Which movie?", "SELECT 1", "hint");
  CotStepInput in;
  in.instance = &inst;
  in.schema = RenderSchema(MovieCatalog(), SchemaVariant::kCD);
  in.tables_related = "movies, ratings";
  in.columns_related = "movies: (movie_title)";
  in.skeleton = "SELECT _ FROM _";
  const auto s1 = RenderCotStep(CotFlavor::kSimple, 1, in);
  EXPECT_TRUE(EndsWith(s1, "Find the required tables based on the QUESTION."));
  EXPECT_NE(s1.find("### Here are SQLite SQL tables, with their properties:\n"),
            std::string::npos);
  const auto s2 = RenderCotStep(CotFlavor::kSimple, 2, in);
  EXPECT_NE(s2.find("Given the tables:\nmovies, ratings.\n"), std::string::npos);
  EXPECT_TRUE(EndsWith(s2, "find the required columns based on the QUESTION."));
  const auto s3 = RenderCotStep(CotFlavor::kSimple, 3, in);
  EXPECT_TRUE(EndsWith(s3, "\nSELECT"));
  const auto k3 = RenderCotStep(CotFlavor::kSkeleton, 3, in);
  EXPECT_NE(k3.find("write the skeleton of the SQL query"), std::string::npos);
  const auto k4 = RenderCotStep(CotFlavor::kSkeleton, 4, in);
  EXPECT_NE(k4.find("and sql skeleton:\nSELECT _ FROM _.\n"), std::string::npos);
  EXPECT_TRUE(EndsWith(k4, "\nSELECT"));
  EXPECT_THROW(RenderCotStep(CotFlavor::kSimple, 4, in), Error);
}

TEST(Sft, CompletionDropsDuplicatedCue) {
  EXPECT_EQ(CompletionFromGold("SELECT a FROM t"), " a FROM t");
  EXPECT_EQ(CompletionFromGold("  select\na FROM t"), "\na FROM t");
  EXPECT_EQ(CompletionFromGold("SELECT(a) FROM t"), " (a) FROM t");
}

TEST(Sft, PairFitsContextAndParsesAsOneStatement) {
  const auto wide = testing::WideCatalog(90, 3, 80);
  const auto& col = wide.tables[1].columns[3].name;
  const auto inst = MakeInstance(3, wide.database_id, "question?",
                                 "SELECT " + col + " FROM " + wide.tables[1].name);
  TokenBudget budget;
  const auto e = EmitSftPair(inst, wide, SchemaVariant::kCVDT, budget, 4);
  EXPECT_LE(CountTokens(e.pair.prompt) + CountTokens(e.pair.completion), budget.max_context);
  EXPECT_TRUE(e.record.Truncated());
  EXPECT_NE(e.pair.prompt.find("#   " + col + ":"), std::string::npos);
  const auto joined = e.pair.prompt.substr(e.pair.prompt.rfind('\n') + 1) + e.pair.completion;
  EXPECT_EQ(joined, inst.gold_sql);
  std::size_t selects = 0;
  for (const auto& t : Tokenize(joined)) selects += t.kind == TokenKind::kKeyword && t.text == "SELECT";
  EXPECT_EQ(selects, 1u);
}

TEST(Sft, SmallContextRejected) {
  const auto inst = MakeInstance(3, "movies", "q?", "SELECT 1");
  EXPECT_THROW(EmitSftPair(inst, MovieCatalog(), SchemaVariant::kCN, {200, 50}, 1), Error);
}

TEST(Seeds, InstanceSeedIndependentOfOrder) {
  EXPECT_EQ(InstanceSeed(5, 10), InstanceSeed(5, 10));
  EXPECT_NE(InstanceSeed(5, 10), InstanceSeed(5, 11));
  EXPECT_NE(InstanceSeed(5, 10), InstanceSeed(6, 10));
}

}  // namespace
}  // namespace t2sql
