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


#include "t2sql/eval.hpp"

#include <cmath>
#include <set>
#include <variant>

#include "sqlite_db.hpp"
#include "t2sql/error.hpp"

namespace t2sql {

namespace {

using internal::Blob;
using internal::SqlValue;

// Reals round to 6 decimals; an integral result becomes an integer so that
// 1 and 1.0 compare equal.
SqlValue Normalize(const SqlValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return *d;
    const double r = std::round(*d * 1e6) / 1e6;
    if (r == std::trunc(r) && std::fabs(r) < 9.2e18) return static_cast<std::int64_t>(r);
    return r;
  }
  return v;
}

using RowSet = std::set<std::vector<SqlValue>>;

RowSet RunQuery(internal::Connection& conn, const std::string& sql,
                std::chrono::milliseconds timeout) {
  RowSet rows;
  for (auto& row : conn.Query(sql, timeout)) {
    std::vector<SqlValue> norm;
    norm.reserve(row.size());
    for (const auto& v : row) norm.push_back(Normalize(v));
    rows.insert(std::move(norm));
  }
  return rows;
}

std::string Describe(const internal::SqliteError& e) {
  return e.timed_out() ? std::string("timeout") : std::string(e.what());
}

}  // namespace

EvalOutcome ExecuteAndCompare(const std::string& predicted, const std::string& gold,
                              const std::string& database_path,
                              std::chrono::milliseconds timeout) {
  const auto start = std::chrono::steady_clock::now();
  EvalOutcome out;
  std::optional<internal::Connection> conn;
  try {
    conn.emplace(database_path);
  } catch (const internal::SqliteError& e) {
    out.predicted_error = e.what();
    out.gold_error = e.what();
    return out;
  }

  std::optional<RowSet> pred_rows, gold_rows;
  try {
    pred_rows = RunQuery(*conn, predicted, timeout);
  } catch (const internal::SqliteError& e) {
    out.predicted_error = Describe(e);
  }
  try {
    gold_rows = RunQuery(*conn, gold, timeout);
  } catch (const internal::SqliteError& e) {
    out.gold_error = Describe(e);
  }
  out.matched = pred_rows && gold_rows && *pred_rows == *gold_rows;
  out.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  return out;
}

EvalReport Aggregate(const std::vector<EvalOutcome>& outcomes,
                     const std::vector<TaskInstance>& instances) {
  if (outcomes.size() != instances.size()) {
    throw Error(ErrorCode::kCountMismatch, std::to_string(outcomes.size()) + " outcomes for " +
                                               std::to_string(instances.size()) + " instances");
  }
  std::map<std::int64_t, Difficulty> difficulty;
  for (const auto& inst : instances) {
    if (!difficulty.emplace(inst.question_id, inst.difficulty).second) {
      throw Error(ErrorCode::kCountMismatch,
                  "duplicate question id " + std::to_string(inst.question_id));
    }
  }
  EvalReport report;
  report.outcomes = outcomes;
  for (const char* b : kBucketOrder) report.counts[b] = {};
  std::set<std::int64_t> seen;
  for (const auto& o : outcomes) {
    auto it = difficulty.find(o.question_id);
    if (it == difficulty.end() || !seen.insert(o.question_id).second) {
      throw Error(ErrorCode::kCountMismatch,
                  "outcome for question " + std::to_string(o.question_id) +
                      " does not match exactly one instance");
    }
    for (const std::string& b : {std::string(DifficultyName(it->second)), std::string("sum")}) {
      auto& c = report.counts[b];
      ++c.total;
      if (o.matched) ++c.matched;
    }
  }
  for (const auto& [bucket, c] : report.counts) {
    report.ex_by_split[bucket] = c.total == 0 ? 0.0 : 100.0 * c.matched / c.total;
  }
  return report;
}

nlohmann::json OutcomeToJson(const EvalOutcome& o) {
  return {{"question_id", o.question_id},
          {"matched", o.matched},
          {"predicted_error", o.predicted_error ? nlohmann::json(*o.predicted_error) : nullptr},
          {"gold_error", o.gold_error ? nlohmann::json(*o.gold_error) : nullptr}};
}

nlohmann::json ExTableToJson(const EvalReport& report) {
  nlohmann::json ex = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
  for (const char* b : kBucketOrder) {
    ex[b] = report.ex_by_split.at(b);
    counts[b] = {{"total", report.counts.at(b).total}, {"matched", report.counts.at(b).matched}};
  }
  return {{"ex", ex}, {"counts", counts}};
}

}  // namespace t2sql
