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


// Execution accuracy: predicted and gold SQL run read-only against the
// instance database and their result rows are compared as sets.

#ifndef T2SQL_EVAL_HPP_
#define T2SQL_EVAL_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2sql/bench.hpp"

namespace t2sql {

struct EvalOutcome {
  std::int64_t question_id = 0;
  bool matched = false;
  std::optional<std::string> predicted_error;
  std::optional<std::string> gold_error;
  std::chrono::microseconds elapsed{0};
};

inline constexpr std::chrono::milliseconds kDefaultQueryTimeout{30000};

// Never throws for SQL problems: predicted failures set predicted_error
// ("timeout" when the deadline passed), gold failures set gold_error.
// Reals are rounded to 6 decimals and integral reals equal integers; NULL
// equals only NULL; column order matters, row order and duplicates do not.
EvalOutcome ExecuteAndCompare(const std::string& predicted, const std::string& gold,
                              const std::string& database_path,
                              std::chrono::milliseconds timeout = kDefaultQueryTimeout);

struct BucketCount {
  std::size_t total = 0;
  std::size_t matched = 0;
};

struct EvalReport {
  std::vector<EvalOutcome> outcomes;
  // "simple", "moderate", "challenging", "sum" -> percentage.
  std::map<std::string, double> ex_by_split;
  std::map<std::string, BucketCount> counts;
};

// Outcomes pair with instances by question id. Throws CountMismatch when
// the two lists do not correspond one to one. Empty buckets score 0.
EvalReport Aggregate(const std::vector<EvalOutcome>& outcomes,
                     const std::vector<TaskInstance>& instances);

inline constexpr const char* kBucketOrder[] = {"simple", "moderate", "challenging", "sum"};

nlohmann::json OutcomeToJson(const EvalOutcome& outcome);
nlohmann::json ExTableToJson(const EvalReport& report);

}  // namespace t2sql

#endif  // T2SQL_EVAL_HPP_
