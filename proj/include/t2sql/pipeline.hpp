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


// Run configuration and the command implementations behind the CLI.

#ifndef T2SQL_PIPELINE_HPP_
#define T2SQL_PIPELINE_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2sql/budget.hpp"
#include "t2sql/cot.hpp"
#include "t2sql/eval.hpp"
#include "t2sql/gateway.hpp"
#include "t2sql/schema.hpp"
#include "t2sql/taxonomy.hpp"

namespace t2sql {

struct RunConfig {
  std::string benchmark_root;
  std::string split = "dev";
  std::string pool_split = "train";
  SchemaVariant variant = SchemaVariant::kCVDT;
  CotMode mode = CotMode::kNone;
  std::size_t shots = 0;
  TokenBudget budget;
  double truncation_temperature = 1.0;
  std::uint64_t truncation_seed = 0;
  LlmEndpoint endpoint;
  LlmEndpoint embedding_endpoint;
  GatewayMode gateway_mode = GatewayMode::kLive;
  std::string replay_store;
  std::string embedding_cache;
  std::string output_dir = "t2sql-out";
  unsigned workers = 4;
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds exec_timeout = kDefaultQueryTimeout;
  std::chrono::milliseconds probe_timeout{5000};
  bool restrict_step2 = true;
  std::optional<std::int64_t> question_id;
  std::optional<std::size_t> limit;

  // Throws ConfigError on inconsistent settings.
  void Validate() const;
};

// Snapshot without credentials.
nlohmann::json ConfigToJson(const RunConfig& config);
// Overlays keys present in `j` onto `base`. Unknown keys throw ConfigError.
RunConfig ConfigFromJson(const nlohmann::json& j, RunConfig base = {});
// Endpoint URLs, model ids and API keys from T2SQL_* environment variables.
void ApplyEnvironment(RunConfig& config);
// defaults < file (when given) < environment.
RunConfig LoadConfig(const std::optional<std::string>& path);
// One flag-level override; dotted keys address nested objects
// ("endpoint.model"). The value is read as JSON when it parses, else as text.
void ApplySetting(RunConfig& config, const std::string& key, const std::string& value);

nlohmann::json CmdIngestCheck(const RunConfig& config);

// Writes <output_dir>/schemas/<db>/<variant>.txt for every database under
// the benchmark root and every variant. Returns the written paths.
std::vector<std::string> CmdSerializeSchema(const RunConfig& config);

// Prompt for config.question_id (first instance when unset). Chain-of-thought
// modes return the first step prompt.
nlohmann::json CmdBuildPrompt(const RunConfig& config,
                              std::shared_ptr<LlmBackend> backend = nullptr);

// Curated examples for config.question_id, or every instance when unset.
nlohmann::json CmdCurate(const RunConfig& config, std::shared_ptr<LlmBackend> backend = nullptr);

struct RunSummary {
  std::string report_path;
  nlohmann::json ex;  // bucket -> percent
  std::size_t instances = 0;
};

// Full pipeline over the split. Writes report.json, traces.jsonl,
// config.json and timings.json under output_dir. Per-instance failures land
// in the report; only run-level failures throw.
RunSummary CmdRun(const RunConfig& config, std::shared_ptr<LlmBackend> backend = nullptr);

struct TruncationStats {
  std::size_t total_queries = 0;
  std::size_t truncated_queries = 0;
  double percent = 0;
  // Mean removed columns over truncated queries only.
  double average_truncated_columns = 0;

  std::string Format() const;
};

TruncationStats ComputeTruncationStats(const std::vector<TruncationRecord>& records);

struct SftSummary {
  std::string sft_path;
  std::string truncation_path;
  std::size_t emitted = 0;
  std::size_t skipped = 0;
  TruncationStats stats;
};

// Writes sft.jsonl and truncation.jsonl; instances whose budget cannot be
// met are skipped with a warning.
SftSummary CmdPrepSft(const RunConfig& config);

// Execution-accuracy and error tables of a report.json as plain text.
std::string CmdReport(const std::string& report_path);

}  // namespace t2sql

#endif  // T2SQL_PIPELINE_HPP_
