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


#include "fixtures.hpp"

#include <sqlite3.h>

#include <map>
#include <random>
#include <stdexcept>

#include "t2sql/budget.hpp"
#include "t2sql/error.hpp"
#include "t2sql/prompt.hpp"
#include "t2sql/text.hpp"

namespace t2sql::testing {

namespace {

std::atomic<int> g_counter{0};

void WriteCsv(const fs::path& dir, const std::string& table,
              const std::vector<std::pair<std::string, std::string>>& rows) {
  fs::create_directories(dir);
  std::string out = "original_column_name,column_name,column_description,data_format\n";
  for (const auto& [col, desc] : rows) {
    std::string quoted = "\"";
    for (char c : desc) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += "\"";
    out += col + "," + col + "," + quoted + ",text\n";
  }
  WriteFile((dir / (table + ".csv")).string(), out);
}

}  // namespace

ColumnSpec Col(std::string name, ColumnType type, std::optional<std::string> desc,
               std::optional<std::vector<std::string>> values, bool pk) {
  ColumnSpec c;
  c.name = std::move(name);
  c.type = type;
  c.description = std::move(desc);
  c.values = std::move(values);
  c.is_primary_key = pk;
  return c;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("t2sql-test-" + std::to_string(rd()) + "-" + std::to_string(g_counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void ExecScript(const std::string& db_path, const std::string& sql) {
  sqlite3* db = nullptr;
  if (sqlite3_open(db_path.c_str(), &db) != SQLITE_OK) {
    std::string msg = sqlite3_errmsg(db);
    sqlite3_close(db);
    throw std::runtime_error("open " + db_path + ": " + msg);
  }
  char* err = nullptr;
  const std::string script = "PRAGMA synchronous = OFF; PRAGMA journal_mode = MEMORY; BEGIN; " +
                             sql + "; COMMIT;";
  if (sqlite3_exec(db, script.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "?";
    sqlite3_free(err);
    sqlite3_close(db);
    throw std::runtime_error("exec on " + db_path + ": " + msg);
  }
  sqlite3_close(db);
}

CaptureWarnings::CaptureWarnings() {
  SetWarningSink([this](std::string_view m) {
    std::lock_guard<std::mutex> lock(mu_);
    messages_.emplace_back(m);
  });
}

CaptureWarnings::~CaptureWarnings() { SetWarningSink(nullptr); }

std::vector<std::string> CaptureWarnings::messages() const {
  std::lock_guard<std::mutex> lock(mu_);
  return messages_;
}

DatabaseCatalog MovieCatalog() {
  DatabaseCatalog c;
  c.database_id = "movies";
  TableSpec movies{"movies", {}};
  movies.columns.push_back(
      Col("movie_id", ColumnType::kInt, "id number identifying the movie", std::nullopt, true));
  movies.columns.push_back(Col("movie_title", ColumnType::kText, "name of the movie"));
  movies.columns.push_back(Col("movie_release_year", ColumnType::kInt, "year of release"));
  movies.columns.push_back(
      Col("movie_popularity", ColumnType::kInt, "number of users who rated the movie"));
  movies.columns.push_back(Col("movie_genre", ColumnType::kVarchar, "genre of the movie",
                               std::vector<std::string>{"Drama", "Comedy, Romantic"}));
  movies.columns.push_back(Col("director_name", ColumnType::kText, std::nullopt));
  TableSpec ratings{"ratings", {}};
  ratings.columns.push_back(
      Col("rating_id", ColumnType::kInt, "id of the rating", std::nullopt, true));
  ratings.columns.push_back(Col("movie_id", ColumnType::kInt, "movie id"));
  ratings.columns.push_back(
      Col("rating_score", ColumnType::kInt, "rating score from 1 (lowest) to 5 (highest)",
          std::vector<std::string>{"1", "2", "3", "4", "5"}));
  ratings.columns.push_back(Col("rating_date", ColumnType::kDate, "date of the rating"));
  c.tables = {movies, ratings};
  c.foreign_keys = {{"ratings", "movie_id", "movies", "movie_id"}};
  return c;
}

DatabaseCatalog WorldCatalog() {
  DatabaseCatalog c;
  c.database_id = "world";
  TableSpec continents{"continents", {}};
  continents.columns.push_back(
      Col("ContId", ColumnType::kInt, "continent id",
          std::vector<std::string>{"1", "2", "3", "4", "5"}, true));
  continents.columns.push_back(
      Col("Continent", ColumnType::kText, "continent name",
          std::vector<std::string>{"america", "europe", "asia", "africa", "australia"}));
  TableSpec countries{"countries", {}};
  countries.columns.push_back(
      Col("CountryId", ColumnType::kInt, "country id", std::nullopt, true));
  countries.columns.push_back(Col("CountryName", ColumnType::kText, "country name"));
  countries.columns.push_back(Col("Continent", ColumnType::kInt, "continent id of the country",
                                  std::vector<std::string>{"1", "2", "3", "4", "5"}));
  countries.columns.push_back(Col("Population", ColumnType::kReal, "population in millions"));
  c.tables = {continents, countries};
  c.foreign_keys = {{"countries", "Continent", "continents", "ContId"}};
  return c;
}

void WriteMovieDatabase(const fs::path& root) {
  const fs::path dir = root / "databases" / "movies";
  fs::create_directories(dir);
  ExecScript((dir / "movies.sqlite").string(), R"sql(
    CREATE TABLE movies (
      movie_id INTEGER PRIMARY KEY,
      movie_title TEXT,
      movie_release_year INTEGER,
      movie_popularity INT,
      movie_genre VARCHAR(20),
      director_name TEXT
    );
    CREATE TABLE ratings (
      rating_id INTEGER PRIMARY KEY,
      movie_id INTEGER REFERENCES movies(movie_id),
      rating_score INTEGER,
      rating_date DATE
    );
    INSERT INTO movies VALUES
      (1, 'Casablanca', 1942, 120, 'Drama', 'Michael Curtiz'),
      (2, 'Spellbound', 1945, 85, 'Drama', 'Alfred Hitchcock'),
      (3, 'Brief Encounter', 1945, 40, 'Drama', 'David Lean'),
      (4, 'It Happened One Night', 1934, 95, 'Comedy, Romantic', 'Frank Capra'),
      (5, 'The Philadelphia Story', 1940, 77, 'Comedy, Romantic', 'George Cukor'),
      (6, 'Rebecca', 1940, 66, 'Drama', 'Alfred Hitchcock'),
      (7, 'Notorious', 1946, 101, 'Drama', 'Alfred Hitchcock'),
      (8, 'The Lost Weekend', 1945, 52, 'Drama', 'Billy Wilder'),
      (9, 'Roman Holiday', 1953, 130, 'Comedy, Romantic', 'William Wyler');
    INSERT INTO ratings VALUES
      (1, 1, 1, '2020-01-01'), (2, 1, 2, '2020-01-02'), (3, 2, 3, '2020-01-03'),
      (4, 2, 4, '2020-01-04'), (5, 3, 5, '2020-01-05'), (6, 4, 5, '2020-01-06'),
      (7, 7, 4, '2020-01-07'), (8, 9, 5, '2020-01-08');
  )sql");
  const fs::path desc = dir / "database_description";
  WriteCsv(desc, "movies",
           {{"movie_id", "id number identifying the movie"},
            {"movie_title", "name of the movie"},
            {"movie_release_year", "year of release"},
            {"movie_popularity", "number of users who rated the movie"},
            {"movie_genre", "genre of the movie"},
            {"director_name", ""}});
  WriteCsv(desc, "ratings",
           {{"rating_id", "id of the rating"},
            {"movie_id", "movie id"},
            {"rating_score", "rating score from 1 (lowest) to 5 (highest)"},
            {"rating_date", "date of the rating"}});
}

void WriteWorldDatabase(const fs::path& root) {
  const fs::path dir = root / "databases" / "world";
  fs::create_directories(dir);
  ExecScript((dir / "world.sqlite").string(), R"sql(
    CREATE TABLE continents (ContId INTEGER PRIMARY KEY, Continent TEXT);
    CREATE TABLE countries (
      CountryId INTEGER PRIMARY KEY,
      CountryName TEXT,
      Continent INTEGER,
      Population REAL,
      FOREIGN KEY (Continent) REFERENCES continents(ContId)
    );
    INSERT INTO continents VALUES
      (1, 'america'), (2, 'europe'), (3, 'asia'), (4, 'africa'), (5, 'australia');
    INSERT INTO countries VALUES
      (1, 'usa', 1, 331.9), (2, 'france', 2, 67.8), (3, 'japan', 3, 125.7),
      (4, 'egypt', 4, 109.3), (5, 'germany', 2, 83.2), (6, 'brazil', 1, 214.3),
      (7, 'australia', 5, 25.7);
  )sql");
  const fs::path desc = dir / "database_description";
  WriteCsv(desc, "continents", {{"ContId", "continent id"}, {"Continent", "continent name"}});
  WriteCsv(desc, "countries",
           {{"CountryId", "country id"},
            {"CountryName", "country name"},
            {"Continent", "continent id of the country"},
            {"Population", "population in millions"}});
}

void WriteSplit(const fs::path& root, const std::string& split, const nlohmann::json& records) {
  fs::create_directories(root);
  WriteFile((root / (split + ".json")).string(), records.dump(2));
}

MiniBenchmark WriteMiniBenchmark(const fs::path& root) {
  WriteMovieDatabase(root);
  WriteWorldDatabase(root);
  MiniBenchmark b;
  b.root = root;
  auto rec = [](int id, const char* db, const char* q, const char* sql, const char* ev,
                const char* diff) {
    return nlohmann::json{{"question_id", id}, {"db_id", db},   {"question", q},
                          {"SQL", sql},        {"evidence", ev}, {"difficulty", diff}};
  };
  b.dev = nlohmann::json::array({
      rec(0, "movies", "What is the title of the most popular movie released in 1945?",
          "SELECT movie_title FROM movies WHERE movie_release_year = 1945 ORDER BY "
          "movie_popularity DESC LIMIT 1",
          "most popular refers to MAX(movie_popularity)", "simple"),
      rec(1, "movies", "How many movies did Alfred Hitchcock direct?",
          "SELECT COUNT(*) FROM movies WHERE director_name = 'Alfred Hitchcock'", "", "simple"),
      rec(2, "movies", "List the titles of drama movies released before 1943.",
          "SELECT movie_title FROM movies WHERE movie_genre = 'Drama' AND movie_release_year < "
          "1943",
          "", "simple"),
      rec(3, "movies", "What is the highest rating score given to Casablanca?",
          "SELECT MAX(T2.rating_score) FROM movies AS T1 JOIN ratings AS T2 ON T1.movie_id = "
          "T2.movie_id WHERE T1.movie_title = 'Casablanca'",
          "", "moderate"),
      rec(4, "movies", "Which director has the most movies?",
          "SELECT director_name FROM movies GROUP BY director_name ORDER BY COUNT(*) DESC LIMIT 1",
          "", "moderate"),
      rec(5, "movies", "Average rating score of movies from 1945?",
          "SELECT AVG(T2.rating_score) FROM movies AS T1 JOIN ratings AS T2 ON T1.movie_id = "
          "T2.movie_id WHERE T1.movie_release_year = 1945",
          "", "challenging"),
      rec(6, "world", "How many countries are in europe?",
          "SELECT COUNT(*) FROM countries AS T1 JOIN continents AS T2 ON T1.Continent = "
          "T2.ContId WHERE T2.Continent = 'europe'",
          "", "simple"),
      rec(7, "world", "Name the most populous country.",
          "SELECT CountryName FROM countries ORDER BY Population DESC LIMIT 1", "", "moderate"),
      rec(8, "world", "Which continent has the most countries?",
          "SELECT T2.Continent FROM countries AS T1 JOIN continents AS T2 ON T1.Continent = "
          "T2.ContId GROUP BY T2.Continent ORDER BY COUNT(*) DESC LIMIT 1",
          "", "challenging"),
      rec(9, "world", "List countries with population above 100 million.",
          "SELECT CountryName FROM countries WHERE Population > 100",
          "above 100 million refers to Population > 100", "moderate"),
  });
  b.train = nlohmann::json::array({
      rec(100, "movies", "Which movie has the lowest popularity?",
          "SELECT movie_title FROM movies ORDER BY movie_popularity ASC LIMIT 1", "", "simple"),
      rec(101, "movies", "How many ratings have score 5?",
          "SELECT COUNT(*) FROM ratings WHERE rating_score = 5", "", "simple"),
      rec(102, "movies", "List directors of comedy movies.",
          "SELECT DISTINCT director_name FROM movies WHERE movie_genre = 'Comedy, Romantic'", "",
          "moderate"),
      rec(103, "world", "How many continents are there?", "SELECT COUNT(*) FROM continents", "",
          "simple"),
      rec(104, "world", "What is the population of japan?",
          "SELECT Population FROM countries WHERE CountryName = 'japan'", "", "simple"),
      rec(105, "world", "Name the countries in asia.",
          "SELECT T1.CountryName FROM countries AS T1 JOIN continents AS T2 ON T1.Continent = "
          "T2.ContId WHERE T2.Continent = 'asia'",
          "", "moderate"),
  });
  WriteSplit(root, "dev", b.dev);
  WriteSplit(root, "train", b.train);
  return b;
}

DatabaseCatalog WideCatalog(std::uint64_t seed, int tables, int columns) {
  SeededRng rng(seed);
  static const char* kWords[] = {"alpha", "bravo", "delta", "echo",   "gamma", "hotel", "india",
                                 "kilo",  "lima",  "metro", "nova",   "oscar", "papa",  "quest",
                                 "romeo", "sierra", "tango", "ultra", "vivid", "whisky"};
  auto word = [&] { return std::string(kWords[rng.Below(20)]); };
  DatabaseCatalog c;
  c.database_id = "wide" + std::to_string(seed % 1000);
  for (int t = 0; t < tables; ++t) {
    TableSpec table;
    table.name = "t" + std::to_string(t) + "_" + word();
    table.columns.push_back(Col("id", ColumnType::kInt, "row identifier", std::nullopt, true));
    for (int k = 1; k < columns; ++k) {
      std::string desc = word();
      const int extra = 3 + static_cast<int>(rng.Below(8));
      for (int w = 0; w < extra; ++w) desc += " " + word();
      std::optional<std::vector<std::string>> values;
      if (rng.Below(4) == 0) values = std::vector<std::string>{word(), word() + "_x"};
      table.columns.push_back(Col("c" + std::to_string(k) + "_" + word(),
                                  static_cast<ColumnType>(rng.Below(6)), desc, values));
    }
    c.tables.push_back(std::move(table));
  }
  for (int t = 1; t < tables; ++t) {
    c.foreign_keys.push_back({c.tables[t].name, "id", c.tables[0].name, "id"});
  }
  return c;
}

TaskInstance MakeInstance(std::int64_t id, const std::string& db, const std::string& question,
                          const std::string& sql, const std::string& evidence,
                          Difficulty difficulty) {
  TaskInstance t;
  t.question_id = id;
  t.database_id = db;
  t.question = question;
  t.gold_sql = sql;
  t.external_knowledge = evidence;
  t.difficulty = difficulty;
  return t;
}

Embedding HashEmbedding(const std::string& text, std::size_t dim) {
  Embedding v(dim, 0.0);
  v[0] = 0.5;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : word) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    v[h % dim] += 1.0;
    word.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return v;
}

CompletionResult ScriptedBackend::Complete(const LlmEndpoint&, const std::string& prompt) {
  ++completions_;
  CompletionResult r;
  r.text = respond_(prompt);
  r.usage.prompt_tokens = static_cast<std::int64_t>(CountTokens(prompt));
  r.usage.completion_tokens = static_cast<std::int64_t>(CountTokens(r.text));
  return r;
}

std::vector<Embedding> ScriptedBackend::Embed(const LlmEndpoint&,
                                              const std::vector<std::string>& batch) {
  ++embed_calls_;
  {
    std::lock_guard<std::mutex> lock(mu_);
    batch_sizes_.push_back(batch.size());
  }
  std::vector<Embedding> out;
  for (const auto& t : batch) out.push_back(HashEmbedding(t));
  return out;
}

std::vector<std::size_t> ScriptedBackend::batch_sizes() const {
  std::lock_guard<std::mutex> lock(mu_);
  return batch_sizes_;
}

CompletionResult OfflineBackend::Complete(const LlmEndpoint&, const std::string&) {
  throw Error(ErrorCode::kEndpointUnreachable, "offline backend reached");
}

std::vector<Embedding> OfflineBackend::Embed(const LlmEndpoint&, const std::vector<std::string>&) {
  throw Error(ErrorCode::kEndpointUnreachable, "offline backend reached");
}

std::string QuestionOf(const std::string& prompt) {
  const std::string key = "### Question: ";
  const auto at = prompt.rfind(key);
  if (at == std::string::npos) return "";
  const auto end = prompt.find('\n', at);
  return prompt.substr(at + key.size(), end == std::string::npos ? std::string::npos
                                                                  : end - at - key.size());
}

ScriptedBackend::Responder MiniBenchmarkResponder(const nlohmann::json& dev) {
  static const std::map<int, std::string> kWrong = {
      {3,
       " MIN(T2.rating_score) FROM movies AS T1 JOIN ratings AS T2 ON T1.movie_id = "
       "T2.movie_id WHERE T1.movie_title = 'Casablanca';"},
      {5, " AVG(rating_score) FROM ratings;"},
      {8, " Continent FROM continents WHERE ContId = 3;"},
      {9, " CountryName FROM countries WHERE Population > 1000;"},
  };
  std::map<std::string, std::string> answers;
  for (const auto& r : dev) {
    const std::string q = AsSentence(r.at("question").get<std::string>());
    const int id = r.at("question_id").get<int>();
    const auto wrong = kWrong.find(id);
    answers[q] = wrong != kWrong.end() ? wrong->second
                                       : r.at("SQL").get<std::string>().substr(6) + ";";
  }
  return [answers](const std::string& prompt) {
    const auto it = answers.find(QuestionOf(prompt));
    std::string text = it == answers.end() ? std::string(" 'unknown question';") : it->second;
    // Prompts without the trailing cue get a complete statement.
    const std::string cue = "SELECT";
    if (prompt.size() < cue.size() || prompt.compare(prompt.size() - cue.size(), cue.size(), cue) != 0) {
      text = cue + text;
    }
    return text;
  };
}

DatabaseCatalog CommunityCatalog() {
  DatabaseCatalog c;
  c.database_id = "community";
  c.tables.push_back({"badges",
                      {Col("Id", ColumnType::kInt, "badge id", std::nullopt, true),
                       Col("UserId", ColumnType::kInt, "owner"),
                       Col("Name", ColumnType::kText, "badge name"),
                       Col("Date", ColumnType::kDatetime, "award date")}});
  c.tables.push_back({"comments",
                      {Col("Id", ColumnType::kInt, "comment id", std::nullopt, true),
                       Col("PostId", ColumnType::kInt, "post"),
                       Col("UserId", ColumnType::kInt, "commentator"),
                       Col("Score", ColumnType::kInt, "comment score")}});
  c.tables.push_back({"posts",
                      {Col("Id", ColumnType::kInt, "post id", std::nullopt, true),
                       Col("OwnerUserId", ColumnType::kInt, "author"),
                       Col("Score", ColumnType::kInt, "post score"),
                       Col("Title", ColumnType::kText, "title")}});
  c.foreign_keys.push_back({"comments", "PostId", "posts", "Id"});
  return c;
}

std::vector<TaxonomyCase> TaxonomyCases() {
  return {
      // Non-existent users table where the gold answer reads badges.
      TaxonomyCase{"SELECT Name FROM users WHERE Id = 3", "SELECT Name FROM badges WHERE UserId = 3",
           ErrorCategory::kTablesNotExist, "no such table: users"},
      TaxonomyCase{"SELECT COUNT(*) FROM tags", "SELECT COUNT(*) FROM posts",
           ErrorCategory::kTablesNotExist},
      TaxonomyCase{"SELECT Reputation FROM badges", "SELECT Name FROM badges",
           ErrorCategory::kColumnsNotExist, "no such column: Reputation"},
      TaxonomyCase{"SELECT T1.Title FROM posts AS T1 WHERE T1.ViewCount > 3", "SELECT Title FROM posts",
           ErrorCategory::kColumnsNotExist},
      TaxonomyCase{"SELECT Name FROM badges", "SELECT Title FROM posts", ErrorCategory::kWrongTables},
      TaxonomyCase{"SELECT Score FROM posts WHERE Id = 1", "SELECT Score FROM comments WHERE Id = 1",
           ErrorCategory::kWrongTables},
      TaxonomyCase{"SELECT Name FROM badges WHERE Id = 1", "SELECT Date FROM badges WHERE Id = 1",
           ErrorCategory::kWrongColumns},
      TaxonomyCase{"SELECT Title, Score FROM posts", "SELECT Title FROM posts",
           ErrorCategory::kWrongColumns},
      TaxonomyCase{"SELECT Title FROM posts WHERE Score > 5", "SELECT Title FROM posts WHERE Score > 10",
           ErrorCategory::kWrongWhere},
      TaxonomyCase{"SELECT Name FROM badges WHERE Date > '2010'", "SELECT Name FROM badges",
           ErrorCategory::kWrongWhere},
      TaxonomyCase{"SELECT T1.Title FROM posts T1 JOIN badges T2 ON T1.OwnerUserId = T2.UserId",
           "SELECT T1.Title FROM posts T1 JOIN comments T2 ON T1.Id = T2.PostId",
           ErrorCategory::kJoinWrongTables},
      TaxonomyCase{"SELECT Title FROM posts", "SELECT T1.Title FROM posts T1 JOIN comments T2 ON T1.Id = T2.PostId",
           ErrorCategory::kJoinWrongTables},
      TaxonomyCase{"SELECT T1.Title FROM posts T1 JOIN comments T2 ON T1.OwnerUserId = T2.UserId",
           "SELECT T1.Title FROM posts T1 JOIN comments T2 ON T1.Id = T2.PostId",
           ErrorCategory::kJoinWrongColumns},
      TaxonomyCase{"SELECT posts.Title FROM posts INNER JOIN comments ON posts.Id = comments.Id",
           "SELECT posts.Title FROM posts INNER JOIN comments ON posts.Id = comments.PostId",
           ErrorCategory::kJoinWrongColumns},
      TaxonomyCase{"SELECT Title FROM posts WHERE Score > 1",
           "SELECT Title FROM posts WHERE Score > 1 EXCEPT SELECT Title FROM posts WHERE Id = 2",
           ErrorCategory::kSetOperation},
      TaxonomyCase{"SELECT Score FROM posts UNION SELECT Score FROM posts WHERE Id = 1",
           "SELECT Score FROM posts INTERSECT SELECT Score FROM posts WHERE Id = 1",
           ErrorCategory::kSetOperation},
      TaxonomyCase{"SELECT Title FROM posts WHERE Score > 3",
           "SELECT Title FROM posts WHERE Score > (SELECT AVG(Score) FROM posts)",
           ErrorCategory::kWrongSubquery},
      TaxonomyCase{"SELECT Title FROM posts WHERE Id IN (SELECT Id FROM posts WHERE Score IN (SELECT MAX(Score) FROM posts))",
           "SELECT Title FROM posts WHERE Id IN (SELECT Id FROM posts WHERE Score > 1)",
           ErrorCategory::kWrongSubquery},
      TaxonomyCase{"SELEC Title FROM posts", "SELECT Title FROM posts", ErrorCategory::kSyntaxError,
           "near \"SELEC\": syntax error"},
      TaxonomyCase{"SELECT Title FROM posts WHERE Title = 'abc", "SELECT Title FROM posts",
           ErrorCategory::kSyntaxError},
      TaxonomyCase{"", "SELECT 1", ErrorCategory::kSyntaxError},
      TaxonomyCase{"SELECT Score, COUNT(*) FROM posts GROUP BY Score",
           "SELECT Score, COUNT(*) FROM posts GROUP BY Score, Title", ErrorCategory::kGroupBy},
      TaxonomyCase{"SELECT Name FROM badges", "SELECT Name FROM badges GROUP BY Name",
           ErrorCategory::kGroupBy}};
}

std::string TestDataDir() { return T2SQL_TEST_DATA_DIR; }

}  // namespace t2sql::testing
