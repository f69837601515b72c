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

#include "sqlite_db.hpp"

#include "t2sql/text.hpp"

namespace t2sql::internal {

namespace {

struct StmtDeleter {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using StmtPtr = std::unique_ptr<sqlite3_stmt, StmtDeleter>;

}  // namespace

Connection::Connection(const std::string& path) {
  const int rc = sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX,
                                 nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : sqlite3_errstr(rc);
    sqlite3_close_v2(db_);
    db_ = nullptr;
    throw SqliteError(rc, "cannot open " + path + ": " + msg);
  }
  sqlite3_progress_handler(db_, 1000, &Connection::ProgressHandler, this);
}

Connection::~Connection() {
  if (db_) sqlite3_close_v2(db_);
}

int Connection::ProgressHandler(void* self) {
  auto* conn = static_cast<Connection*>(self);
  return conn->has_deadline_ && std::chrono::steady_clock::now() > conn->deadline_ ? 1 : 0;
}

std::vector<SqlRow> Connection::Query(std::string_view sql, std::chrono::milliseconds timeout,
                                      std::optional<std::size_t> max_rows) {
  has_deadline_ = timeout.count() > 0;
  deadline_ = std::chrono::steady_clock::now() + timeout;
  struct ClearDeadline {
    bool& flag;
    ~ClearDeadline() { flag = false; }
  } clear{has_deadline_};

  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(db_, sql.data(), static_cast<int>(sql.size()), &raw, &tail);
  StmtPtr stmt(raw);
  if (rc != SQLITE_OK) throw SqliteError(rc, sqlite3_errmsg(db_));
  if (!stmt) throw SqliteError(SQLITE_MISUSE, "empty statement");
  if (tail != nullptr) {
    const std::string_view rest(tail, static_cast<size_t>(sql.data() + sql.size() - tail));
    std::string_view r = Trim(rest);
    while (!r.empty() && r.front() == ';') r = Trim(r.substr(1));
    if (!r.empty()) throw SqliteError(SQLITE_MISUSE, "only one statement may be executed");
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    throw SqliteError(SQLITE_READONLY, "attempt to write a readonly database");
  }

  std::vector<SqlRow> rows;
  while (true) {
    rc = sqlite3_step(stmt.get());
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      if (rc == SQLITE_INTERRUPT) throw SqliteError(rc, "timeout");
      throw SqliteError(rc, sqlite3_errmsg(db_));
    }
    const int n = sqlite3_column_count(stmt.get());
    SqlRow row;
    row.reserve(n);
    for (int i = 0; i < n; ++i) {
      switch (sqlite3_column_type(stmt.get(), i)) {
        case SQLITE_NULL:
          row.emplace_back(std::monostate{});
          break;
        case SQLITE_INTEGER:
          row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(stmt.get(), i)));
          break;
        case SQLITE_FLOAT:
          row.emplace_back(sqlite3_column_double(stmt.get(), i));
          break;
        case SQLITE_BLOB: {
          const auto* p = static_cast<const char*>(sqlite3_column_blob(stmt.get(), i));
          const int len = sqlite3_column_bytes(stmt.get(), i);
          row.emplace_back(Blob{std::string(p ? p : "", p ? len : 0)});
          break;
        }
        default: {
          const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), i));
          const int len = sqlite3_column_bytes(stmt.get(), i);
          row.emplace_back(std::string(p ? p : "", p ? len : 0));
        }
      }
    }
    rows.push_back(std::move(row));
    if (max_rows && rows.size() >= *max_rows) break;
  }
  return rows;
}

std::vector<std::vector<std::optional<std::string>>> Connection::QueryText(
    std::string_view sql, std::chrono::milliseconds timeout, std::optional<std::size_t> max_rows) {
  std::vector<std::vector<std::optional<std::string>>> out;
  for (auto& row : Query(sql, timeout, max_rows)) {
    std::vector<std::optional<std::string>> r;
    for (auto& v : row) {
      if (std::holds_alternative<std::monostate>(v)) {
        r.emplace_back(std::nullopt);
      } else if (auto* i = std::get_if<std::int64_t>(&v)) {
        r.emplace_back(std::to_string(*i));
      } else if (auto* d = std::get_if<double>(&v)) {
        // Match SQLite's own text rendering of reals.
        char* s = sqlite3_mprintf("%!.15g", *d);
        r.emplace_back(std::string(s));
        sqlite3_free(s);
      } else if (auto* t = std::get_if<std::string>(&v)) {
        r.emplace_back(std::move(*t));
      } else {
        r.emplace_back(std::get<Blob>(v).bytes);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string QuoteIdentifier(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace t2sql::internal
