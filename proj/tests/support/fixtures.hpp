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


// Shared fixtures for unit and acceptance tests. Everything is generated on
// the fly; nothing here touches the network.

#ifndef T2SQL_TESTS_FIXTURES_HPP_
#define T2SQL_TESTS_FIXTURES_HPP_

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2sql/bench.hpp"
#include "t2sql/gateway.hpp"
#include "t2sql/schema.hpp"
#include "t2sql/taxonomy.hpp"

namespace t2sql::testing {

namespace fs = std::filesystem;

ColumnSpec Col(std::string name, ColumnType type, std::optional<std::string> desc,
               std::optional<std::vector<std::string>> values = std::nullopt, bool pk = false);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

// Runs a script against a writable database file, creating it if needed.
void ExecScript(const std::string& db_path, const std::string& sql);

// Silences Warn() for the lifetime of the object and keeps the messages.
class CaptureWarnings {
 public:
  CaptureWarnings();
  ~CaptureWarnings();
  std::vector<std::string> messages() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> messages_;
};

// movies(movie_id, movie_title, movie_release_year, movie_popularity,
// movie_genre, director_name) and ratings(rating_id, movie_id, rating_score,
// rating_date) with ratings.movie_id -> movies.movie_id.
DatabaseCatalog MovieCatalog();

// continents(ContId, Continent) and countries(CountryId, CountryName,
// Continent) with countries.Continent -> continents.ContId.
DatabaseCatalog WorldCatalog();

// Writes the database file (and description CSVs) for MovieCatalog or
// WorldCatalog under root/databases/<id>/.
void WriteMovieDatabase(const fs::path& root);
void WriteWorldDatabase(const fs::path& root);

void WriteSplit(const fs::path& root, const std::string& split, const nlohmann::json& records);

// Two databases, a 10-question dev split and a 6-question train split.
struct MiniBenchmark {
  fs::path root;
  nlohmann::json dev;
  nlohmann::json train;
};
MiniBenchmark WriteMiniBenchmark(const fs::path& root);

// A catalog with `tables` tables of `columns` columns each, long
// descriptions, random names. Deterministic in seed.
DatabaseCatalog WideCatalog(std::uint64_t seed, int tables, int columns);

TaskInstance MakeInstance(std::int64_t id, const std::string& db, const std::string& question,
                          const std::string& sql, const std::string& evidence = "",
                          Difficulty difficulty = Difficulty::kSimple);

// Bag-of-words feature hashing; never the zero vector.
Embedding HashEmbedding(const std::string& text, std::size_t dim = 16);

// In-process model. `respond` maps a prompt to raw model text; embeddings
// use HashEmbedding. Counts calls and records batch sizes.
class ScriptedBackend : public LlmBackend {
 public:
  using Responder = std::function<std::string(const std::string& prompt)>;

  explicit ScriptedBackend(Responder respond) : respond_(std::move(respond)) {}

  CompletionResult Complete(const LlmEndpoint& endpoint, const std::string& prompt) override;
  std::vector<Embedding> Embed(const LlmEndpoint& endpoint,
                               const std::vector<std::string>& batch) override;

  std::size_t completions() const { return completions_; }
  std::size_t embed_calls() const { return embed_calls_; }
  std::vector<std::size_t> batch_sizes() const;

 private:
  Responder respond_;
  std::atomic<std::size_t> completions_{0};
  std::atomic<std::size_t> embed_calls_{0};
  mutable std::mutex mu_;
  std::vector<std::size_t> batch_sizes_;
};

// Backend that fails every call; proves replay never reaches the wire.
class OfflineBackend : public LlmBackend {
 public:
  CompletionResult Complete(const LlmEndpoint&, const std::string&) override;
  std::vector<Embedding> Embed(const LlmEndpoint&, const std::vector<std::string>&) override;
};

// Text of the last "### Question: " line of a prompt, without the prefix.
std::string QuestionOf(const std::string& prompt);

// Model stand-in for the mini benchmark's dev split. Answers by question:
// the gold SQL after the SELECT cue for six questions, a valid but wrong
// query for ids 3, 5, 8 and 9. Works for every step of every mode because
// step prompts all carry the question line.
ScriptedBackend::Responder MiniBenchmarkResponder(const nlohmann::json& dev);

// badges, comments and posts with comments.PostId -> posts.Id.
DatabaseCatalog CommunityCatalog();

struct TaxonomyCase {
  std::string predicted;
  std::string gold;
  ErrorCategory expected;
  std::string predicted_error;
};

// Two or more predicted/gold pairs per error label over CommunityCatalog.
std::vector<TaxonomyCase> TaxonomyCases();

std::string TestDataDir();

}  // namespace t2sql::testing

#endif  // T2SQL_TESTS_FIXTURES_HPP_
