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

// BIRD-format benchmark loading.
//
// Layout under a benchmark root:
//   <split>.json                                   question records
//   databases/<db_id>/<db_id>.sqlite               one database per id
//   databases/<db_id>/database_description/<t>.csv optional column docs

#ifndef T2SQL_BENCH_HPP_
#define T2SQL_BENCH_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "t2sql/schema.hpp"

namespace t2sql {

enum class Difficulty { kSimple, kModerate, kChallenging };

std::string_view DifficultyName(Difficulty d);
Difficulty ParseDifficulty(std::string_view label);

struct TaskInstance {
  std::int64_t question_id = 0;
  std::string question;
  std::string external_knowledge;
  std::string gold_sql;
  std::string database_id;
  Difficulty difficulty = Difficulty::kSimple;

  bool operator==(const TaskInstance&) const = default;
};

struct BenchmarkSplit {
  std::string name;
  std::string root;
  std::vector<TaskInstance> instances;
  std::map<std::string, DatabaseCatalog> databases;

  const DatabaseCatalog& Catalog(const std::string& database_id) const;
  const TaskInstance* FindInstance(std::int64_t question_id) const;
  std::string DatabasePath(const std::string& database_id) const;
};

// column name -> description, for one table.
using TableDescriptions = std::map<std::string, std::string>;
// table name -> descriptions.
using DescriptionMetadata = std::map<std::string, TableDescriptions>;

struct IntrospectOptions {
  // Per-column bound on the distinct-value probe; zero is unbounded.
  std::chrono::milliseconds probe_timeout{5000};
};

// Reads every <table>.csv in the directory. Non-UTF-8 bytes are replaced;
// malformed CSV or a missing column header throws MetadataDecodeError.
DescriptionMetadata LoadDescriptionDir(const std::string& dir);

// Parses one description CSV (original_column_name, column_description).
TableDescriptions ParseDescriptionCsv(std::string_view bytes, const std::string& origin);

DatabaseCatalog IntrospectDatabase(const std::string& sqlite_file,
                                   const std::optional<DescriptionMetadata>& descriptions,
                                   const IntrospectOptions& options = {});

std::string DatabaseFilePath(const std::string& root, const std::string& database_id);
std::string DescriptionDirPath(const std::string& root, const std::string& database_id);

// Loads the catalog for one database id under root (with descriptions when
// the directory exists). Throws MissingDatabase when the file is absent.
DatabaseCatalog LoadDatabase(const std::string& root, const std::string& database_id,
                             const IntrospectOptions& options = {});

// Sorted database ids found under root/databases.
std::vector<std::string> ListDatabases(const std::string& root);

// Catalogs referenced by the split are introspected in parallel, one
// connection per worker.
BenchmarkSplit LoadSplit(const std::string& root, const std::string& split_name,
                         const IntrospectOptions& options = {}, unsigned workers = 0);

nlohmann::json InstanceToJson(const TaskInstance& instance);
nlohmann::json SplitToJson(const BenchmarkSplit& split);

}  // namespace t2sql

#endif  // T2SQL_BENCH_HPP_
