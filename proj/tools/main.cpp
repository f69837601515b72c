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


// t2sql command line. Talks to the library through the C interface only.

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "t2sql/t2sql.h"

namespace {

// Owning wrapper for strings handed out by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { t2sql_string_free(p); }
  char** out() { return &p; }
};

struct Failure {
  t2sql_status status;
  std::string message;
};

void Check(t2sql_status s) {
  if (s != T2SQL_OK) throw Failure{s, t2sql_last_error()};
}

// Flags shared by every subcommand that takes a configuration. Each one
// maps onto a config key; only flags given on the command line are applied.
struct Overrides {
  std::optional<std::string> config_path;
  std::vector<std::string> settings;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags;

  void Bind(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    app->add_option("--set", settings, "override one setting, key=value (repeatable)");
    Flag(app, "--benchmark-root", "benchmark_root", "benchmark directory");
    Flag(app, "--split", "split", "question split to evaluate");
    Flag(app, "--pool-split", "pool_split", "split that supplies few-shot examples");
    Flag(app, "--variant", "variant", "column definition variant, C_N .. C_A");
    Flag(app, "--mode", "mode", "none, cot_sp_pred, cot_sp_full, cot_sk_pred or cot_sk_full");
    Flag(app, "--shots", "shots", "number of curated examples");
    Flag(app, "--max-context", "max_context", "model context window in tokens");
    Flag(app, "--response-reserve", "response_reserve", "tokens reserved for the response");
    Flag(app, "--truncation-temperature", "truncation_temperature",
         "softmax temperature for example truncation");
    Flag(app, "--seed", "truncation_seed", "truncation seed");
    Flag(app, "--base-url", "endpoint.base_url", "completion endpoint base URL");
    Flag(app, "--model", "endpoint.model", "completion model id");
    Flag(app, "--sampling-temperature", "endpoint.temperature", "sampling temperature");
    Flag(app, "--max-tokens", "endpoint.max_tokens", "response token cap");
    Flag(app, "--embedding-base-url", "embedding_endpoint.base_url", "embedding endpoint base URL");
    Flag(app, "--embedding-model", "embedding_endpoint.model", "embedding model id");
    Flag(app, "--gateway-mode", "gateway_mode", "live, record or replay");
    Flag(app, "--replay-store", "replay_store", "JSONL replay store");
    Flag(app, "--embedding-cache", "embedding_cache", "JSONL embedding cache");
    Flag(app, "-o,--output-dir", "output_dir", "directory for outputs");
    Flag(app, "-j,--workers", "workers", "worker threads");
    Flag(app, "--max-in-flight", "max_in_flight", "concurrent endpoint requests");
    Flag(app, "--exec-timeout-ms", "exec_timeout_ms", "per-query execution timeout");
    Flag(app, "--probe-timeout-ms", "probe_timeout_ms", "per-column value probe timeout");
    Flag(app, "--restrict-step2", "restrict_step2", "true or false");
    Flag(app, "-q,--question-id", "question_id", "single question id");
    Flag(app, "--limit", "limit", "evaluate only the first N instances");
  }

  void Flag(CLI::App* app, const std::string& name, const std::string& key,
            const std::string& help) {
    flags.emplace_back(key, std::nullopt);
    auto& slot = flags.back().second;
    app->add_option(name, slot, help);
  }

  t2sql_config* Load() const {
    t2sql_config* cfg = nullptr;
    Check(t2sql_config_load(config_path ? config_path->c_str() : nullptr, &cfg));
    try {
      for (const auto& [key, value] : flags) {
        if (value) Check(t2sql_config_set(cfg, key.c_str(), value->c_str()));
      }
      for (const auto& kv : settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Failure{T2SQL_CONFIG, "--set expects key=value, got '" + kv + "'"};
        }
        Check(t2sql_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
      }
    } catch (...) {
      t2sql_config_free(cfg);
      throw;
    }
    return cfg;
  }
};

using ConfigCommand = t2sql_status (*)(const t2sql_config*, char**);

int RunWithConfig(const Overrides& o, ConfigCommand cmd) {
  t2sql_config* cfg = o.Load();
  LibString out;
  const t2sql_status s = cmd(cfg, out.out());
  t2sql_config_free(cfg);
  Check(s);
  std::cout << out.p << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-SQL prompting and execution-accuracy toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", t2sql_version());

  // Flag storage must outlive parsing and have stable addresses.
  std::vector<std::unique_ptr<Overrides>> all;
  auto with_config = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    all.push_back(std::make_unique<Overrides>());
    all.back()->flags.reserve(64);
    all.back()->Bind(sub);
    return std::make_pair(sub, all.back().get());
  };

  auto [ingest, ingest_o] = with_config("ingest-check", "load a split and summarize it");
  auto [serialize, serialize_o] =
      with_config("serialize-schema", "write every schema variant for every database");
  auto [build, build_o] = with_config("build-prompt", "print the prompt for one question");
  auto [curate, curate_o] = with_config("curate", "print curated few-shot examples");
  auto [run, run_o] = with_config("run", "predict, execute and score a split");
  auto [sft, sft_o] = with_config("prep-sft", "write fine-tuning pairs");
  auto* report = app.add_subcommand("report", "print the tables of a run report");
  std::string report_path;
  report->add_option("report", report_path, "report.json from a run")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return RunWithConfig(*ingest_o, t2sql_cmd_ingest_check);
    if (*serialize) return RunWithConfig(*serialize_o, t2sql_cmd_serialize_schema);
    if (*build) return RunWithConfig(*build_o, t2sql_cmd_build_prompt);
    if (*curate) return RunWithConfig(*curate_o, t2sql_cmd_curate);
    if (*run) return RunWithConfig(*run_o, t2sql_cmd_run);
    if (*sft) {
      t2sql_config* cfg = sft_o->Load();
      LibString out;
      const t2sql_status s = t2sql_cmd_prep_sft(cfg, out.out());
      t2sql_config_free(cfg);
      Check(s);
      const auto summary = nlohmann::json::parse(out.p);
      std::cout << "wrote " << summary["emitted"].get<std::size_t>() << " pairs to "
                << summary["sft_path"].get<std::string>() << " ("
                << summary["skipped"].get<std::size_t>() << " skipped)\n"
                << summary["statistics"].get<std::string>();
      return 0;
    }
    if (*report) {
      LibString out;
      Check(t2sql_cmd_report(report_path.c_str(), out.out()));
      std::cout << out.p;
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "t2sql: " << t2sql_status_name(f.status) << ": " << f.message << "\n";
    return 1;
  }
  return 1;
}
