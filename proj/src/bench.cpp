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

#include "t2sql/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <set>
#include <thread>

#include "sqlite_db.hpp"
#include "t2sql/error.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace fs = std::filesystem;
using internal::Connection;
using internal::QuoteIdentifier;
using internal::SqliteError;

namespace {

constexpr std::size_t kMaxSampleValues = 5;

std::string QuoteLiteral(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text, const std::string& origin) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kMetadataDecode, origin + ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

const std::string* LookupCi(const std::map<std::string, std::string>& m, std::string_view key) {
  for (const auto& [k, v] : m) {
    if (IEquals(Trim(k), Trim(key))) return &v;
  }
  return nullptr;
}

std::optional<std::vector<std::string>> ProbeValues(Connection& conn, const std::string& table,
                                                    const std::string& column,
                                                    const IntrospectOptions& options,
                                                    const std::string& db_label) {
  const std::string sql = "SELECT DISTINCT " + QuoteIdentifier(column) + " FROM " +
                          QuoteIdentifier(table) + " WHERE " + QuoteIdentifier(column) +
                          " IS NOT NULL LIMIT " + std::to_string(kMaxSampleValues + 1);
  std::vector<internal::SqlRow> rows;
  try {
    rows = conn.Query(sql, options.probe_timeout);
  } catch (const SqliteError& e) {
    if (e.timed_out()) {
      Warn(std::string(ErrorCodeName(ErrorCode::kQueryTimeout)) + ": value probe of " + db_label +
           "." + table + "." + column + " exceeded its timeout; VALUES omitted");
    } else {
      Warn("value probe of " + db_label + "." + table + "." + column + " failed: " + e.what());
    }
    return std::nullopt;
  }
  if (rows.empty() || rows.size() > kMaxSampleValues) return std::nullopt;
  std::vector<std::string> values;
  for (const auto& row : rows) {
    const auto& v = row.at(0);
    if (auto* i = std::get_if<std::int64_t>(&v)) {
      values.push_back(std::to_string(*i));
    } else if (auto* d = std::get_if<double>(&v)) {
      char* s = sqlite3_mprintf("%!.15g", *d);
      values.emplace_back(s);
      sqlite3_free(s);
    } else if (auto* t = std::get_if<std::string>(&v)) {
      values.push_back(LossyUtf8(*t));
    } else {
      return std::nullopt;  // blobs are not categories
    }
  }
  return values;
}

}  // namespace

std::string_view DifficultyName(Difficulty d) {
  switch (d) {
    case Difficulty::kSimple: return "simple";
    case Difficulty::kModerate: return "moderate";
    case Difficulty::kChallenging: return "challenging";
  }
  return "simple";
}

Difficulty ParseDifficulty(std::string_view label) {
  const std::string l = ToLower(Trim(label));
  if (l == "simple") return Difficulty::kSimple;
  if (l == "moderate") return Difficulty::kModerate;
  if (l == "challenging") return Difficulty::kChallenging;
  throw Error(ErrorCode::kMalformedRecord, "unknown difficulty '" + std::string(label) + "'");
}

const DatabaseCatalog& BenchmarkSplit::Catalog(const std::string& database_id) const {
  auto it = databases.find(database_id);
  if (it == databases.end()) {
    throw Error(ErrorCode::kMissingDatabase, "no catalog for database " + database_id);
  }
  return it->second;
}

const TaskInstance* BenchmarkSplit::FindInstance(std::int64_t question_id) const {
  for (const auto& inst : instances) {
    if (inst.question_id == question_id) return &inst;
  }
  return nullptr;
}

std::string BenchmarkSplit::DatabasePath(const std::string& database_id) const {
  return DatabaseFilePath(root, database_id);
}

std::string DatabaseFilePath(const std::string& root, const std::string& database_id) {
  return (fs::path(root) / "databases" / database_id / (database_id + ".sqlite")).string();
}

std::string DescriptionDirPath(const std::string& root, const std::string& database_id) {
  return (fs::path(root) / "databases" / database_id / "database_description").string();
}

TableDescriptions ParseDescriptionCsv(std::string_view bytes, const std::string& origin) {
  std::string text = LossyUtf8(bytes);
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  const auto rows = ParseCsv(text, origin);
  if (rows.empty()) return {};
  int name_idx = -1;
  int desc_idx = -1;
  for (size_t i = 0; i < rows[0].size(); ++i) {
    const std::string h = ToLower(Trim(rows[0][i]));
    if (h == "original_column_name") name_idx = static_cast<int>(i);
    if (h == "column_description") desc_idx = static_cast<int>(i);
  }
  if (name_idx < 0 || desc_idx < 0) {
    throw Error(ErrorCode::kMetadataDecode,
                origin + ": header lacks original_column_name/column_description");
  }
  TableDescriptions out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= static_cast<size_t>(std::max(name_idx, desc_idx))) continue;
    const std::string name(Trim(row[name_idx]));
    const std::string desc = CollapseWhitespace(row[desc_idx]);
    if (!name.empty() && !desc.empty()) out[name] = desc;
  }
  return out;
}

DescriptionMetadata LoadDescriptionDir(const std::string& dir) {
  DescriptionMetadata meta;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return meta;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && ToLower(entry.path().extension().string()) == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    meta[f.stem().string()] = ParseDescriptionCsv(ReadFile(f.string()), f.string());
  }
  return meta;
}

DatabaseCatalog IntrospectDatabase(const std::string& sqlite_file,
                                   const std::optional<DescriptionMetadata>& descriptions,
                                   const IntrospectOptions& options) {
  DatabaseCatalog catalog;
  catalog.database_id = fs::path(sqlite_file).stem().string();
  std::error_code ec;
  if (!fs::is_regular_file(sqlite_file, ec)) {
    throw Error(ErrorCode::kNotADatabase, sqlite_file + " is not a readable file");
  }
  try {
    Connection conn(sqlite_file);
    const auto table_rows = conn.QueryText(
        "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite\\_%' "
        "ESCAPE '\\' ORDER BY rowid");

    for (const auto& tr : table_rows) {
      TableSpec table{*tr.at(0), {}};
      const TableDescriptions* table_docs = nullptr;
      if (descriptions) {
        for (const auto& [name, docs] : *descriptions) {
          if (IEquals(Trim(name), table.name)) table_docs = &docs;
        }
      }
      const auto cols = conn.QueryText("SELECT name, type, pk FROM pragma_table_info(" +
                                       QuoteLiteral(table.name) + ") ORDER BY cid");
      for (const auto& cr : cols) {
        ColumnSpec col;
        col.name = cr.at(0).value_or("");
        col.type = NormalizeDeclaredType(cr.at(1).value_or(""));
        col.is_primary_key = cr.at(2).value_or("0") != "0";
        if (table_docs) {
          if (const auto* d = LookupCi(*table_docs, col.name)) col.description = *d;
        }
        col.values = ProbeValues(conn, table.name, col.name, options, catalog.database_id);
        table.columns.push_back(std::move(col));
      }
      catalog.tables.push_back(std::move(table));
    }

    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
    for (const auto& table : catalog.tables) {
      const auto fks = conn.QueryText(
          "SELECT \"table\", \"from\", \"to\" FROM pragma_foreign_key_list(" +
          QuoteLiteral(table.name) + ") ORDER BY id, seq");
      for (const auto& fr : fks) {
        const std::string ref_table_name = fr.at(0).value_or("");
        const std::string from = fr.at(1).value_or("");
        const auto* ref_table = catalog.FindTableCi(ref_table_name);
        const ColumnSpec* src = nullptr;
        for (const auto& c : table.columns) {
          if (IEquals(c.name, from)) src = &c;
        }
        const ColumnSpec* dst = nullptr;
        if (ref_table) {
          if (fr.at(2)) {
            for (const auto& c : ref_table->columns) {
              if (IEquals(c.name, *fr.at(2))) dst = &c;
            }
          } else {
            for (const auto& c : ref_table->columns) {
              if (c.is_primary_key) {
                dst = &c;
                break;
              }
            }
          }
        }
        if (!src || !ref_table || !dst) {
          Warn("dropping foreign key " + table.name + "." + from + " -> " + ref_table_name +
               " in " + catalog.database_id + ": endpoint not found");
          continue;
        }
        if (seen.emplace(table.name, src->name, ref_table->name, dst->name).second) {
          catalog.foreign_keys.push_back({table.name, src->name, ref_table->name, dst->name});
        }
      }
    }
  } catch (const SqliteError& e) {
    throw Error(ErrorCode::kNotADatabase, sqlite_file + ": " + e.what());
  }
  catalog.Validate();
  return catalog;
}

DatabaseCatalog LoadDatabase(const std::string& root, const std::string& database_id,
                             const IntrospectOptions& options) {
  const std::string path = DatabaseFilePath(root, database_id);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kMissingDatabase, "database file not found: " + path);
  }
  std::optional<DescriptionMetadata> docs;
  const std::string doc_dir = DescriptionDirPath(root, database_id);
  if (fs::is_directory(doc_dir, ec)) docs = LoadDescriptionDir(doc_dir);
  DatabaseCatalog catalog = IntrospectDatabase(path, docs, options);
  catalog.database_id = database_id;
  return catalog;
}

std::vector<std::string> ListDatabases(const std::string& root) {
  std::vector<std::string> ids;
  const fs::path dir = fs::path(root) / "databases";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    const std::string id = entry.path().filename().string();
    if (fs::is_regular_file(entry.path() / (id + ".sqlite"), ec)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

BenchmarkSplit LoadSplit(const std::string& root, const std::string& split_name,
                         const IntrospectOptions& options, unsigned workers) {
  BenchmarkSplit split;
  split.name = split_name;
  split.root = root;
  const std::string question_file = (fs::path(root) / (split_name + ".json")).string();
  nlohmann::json records;
  try {
    records = nlohmann::json::parse(ReadFile(question_file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, question_file + ": " + e.what());
  }
  if (!records.is_array()) {
    throw Error(ErrorCode::kMalformedRecord, question_file + ": expected a JSON array");
  }

  std::set<std::string> db_ids;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = question_file + " record " + std::to_string(i);
    auto required = [&](const char* key) -> std::string {
      if (!r.is_object() || !r.contains(key) || !r[key].is_string()) {
        throw Error(ErrorCode::kMalformedRecord, where + ": missing string field '" + key + "'");
      }
      return r[key].get<std::string>();
    };
    TaskInstance inst;
    inst.question = required("question");
    inst.gold_sql = required("SQL");
    inst.database_id = required("db_id");
    if (Trim(inst.question).empty()) {
      throw Error(ErrorCode::kMalformedRecord, where + ": empty question");
    }
    if (r.contains("question_id") && !r["question_id"].is_null()) {
      if (!r["question_id"].is_number_integer()) {
        throw Error(ErrorCode::kMalformedRecord, where + ": question_id must be an integer");
      }
      inst.question_id = r["question_id"].get<std::int64_t>();
    } else {
      inst.question_id = static_cast<std::int64_t>(i);
    }
    if (r.contains("evidence") && r["evidence"].is_string()) {
      inst.external_knowledge = r["evidence"].get<std::string>();
    }
    if (r.contains("difficulty") && r["difficulty"].is_string()) {
      inst.difficulty = ParseDifficulty(r["difficulty"].get<std::string>());
    }
    db_ids.insert(inst.database_id);
    split.instances.push_back(std::move(inst));
  }

  for (const auto& id : db_ids) {
    std::error_code ec;
    if (!fs::is_regular_file(DatabaseFilePath(root, id), ec)) {
      throw Error(ErrorCode::kMissingDatabase,
                  "question references missing database '" + id + "' (" +
                      DatabaseFilePath(root, id) + ")");
    }
  }

  const std::vector<std::string> ids(db_ids.begin(), db_ids.end());
  std::vector<std::optional<DatabaseCatalog>> catalogs(ids.size());
  std::vector<std::exception_ptr> errors(ids.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < ids.size(); i = next++) {
      try {
        catalogs[i] = LoadDatabase(root, ids[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<size_t>(n, ids.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  if (n > 0) work();
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < ids.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    split.databases.emplace(ids[i], std::move(*catalogs[i]));
  }
  return split;
}

nlohmann::json InstanceToJson(const TaskInstance& inst) {
  return {{"question_id", inst.question_id},
          {"question", inst.question},
          {"evidence", inst.external_knowledge},
          {"SQL", inst.gold_sql},
          {"db_id", inst.database_id},
          {"difficulty", DifficultyName(inst.difficulty)}};
}

nlohmann::json SplitToJson(const BenchmarkSplit& split) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& inst : split.instances) instances.push_back(InstanceToJson(inst));
  nlohmann::json dbs = nlohmann::json::object();
  for (const auto& [id, catalog] : split.databases) dbs[id] = CatalogToJson(catalog);
  return {{"name", split.name}, {"instances", instances}, {"databases", dbs}};
}

}  // namespace t2sql
