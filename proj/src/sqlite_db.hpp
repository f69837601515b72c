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

// Internal RAII wrapper over the sqlite3 C API. One connection per thread.

#ifndef T2SQL_SRC_SQLITE_DB_HPP_
#define T2SQL_SRC_SQLITE_DB_HPP_

#include <sqlite3.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace t2sql::internal {

// Column value as returned by SQLite. Blob bytes are kept in a distinct
// alternative so text 'ab' and blob x'6162' never compare equal.
struct Blob {
  std::string bytes;
  auto operator<=>(const Blob&) const = default;
};
using SqlValue = std::variant<std::monostate, std::int64_t, double, std::string, Blob>;
using SqlRow = std::vector<SqlValue>;

class SqliteError : public std::runtime_error {
 public:
  SqliteError(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }
  bool timed_out() const { return code_ == SQLITE_INTERRUPT; }

 private:
  int code_;
};

class Connection {
 public:
  // Opens read-only. Throws SqliteError.
  explicit Connection(const std::string& path);
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  // Runs exactly one statement and returns every row. A zero timeout means
  // unbounded. Rejects statements that would write and trailing statements.
  std::vector<SqlRow> Query(std::string_view sql, std::chrono::milliseconds timeout,
                            std::optional<std::size_t> max_rows = std::nullopt);

  // Convenience for introspection: each row's values rendered as text
  // (NULL as nullopt).
  std::vector<std::vector<std::optional<std::string>>> QueryText(
      std::string_view sql, std::chrono::milliseconds timeout = {},
      std::optional<std::size_t> max_rows = std::nullopt);

  sqlite3* raw() { return db_; }

 private:
  static int ProgressHandler(void* self);

  sqlite3* db_ = nullptr;
  std::chrono::steady_clock::time_point deadline_{};
  bool has_deadline_ = false;
};

std::string QuoteIdentifier(std::string_view name);

}  // namespace t2sql::internal

#endif  // T2SQL_SRC_SQLITE_DB_HPP_
