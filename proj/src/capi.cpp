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


#include "t2sql/t2sql.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <string>

#include "json.hpp"
#include "t2sql/bench.hpp"
#include "t2sql/budget.hpp"
#include "t2sql/curation.hpp"
#include "t2sql/error.hpp"
#include "t2sql/eval.hpp"
#include "t2sql/gateway.hpp"
#include "t2sql/pipeline.hpp"
#include "t2sql/schema.hpp"
#include "t2sql/skeleton.hpp"

struct t2sql_config {
  t2sql::RunConfig config;
};

struct t2sql_catalog {
  t2sql::DatabaseCatalog catalog;
};

namespace {

thread_local std::string g_last_error;

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

template <typename Fn>
t2sql_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return T2SQL_OK;
  } catch (const t2sql::Error& e) {
    g_last_error = e.what();
    return static_cast<t2sql_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return T2SQL_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return T2SQL_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return T2SQL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return T2SQL_INTERNAL;
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw t2sql::Error(t2sql::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

void Emit(char** out, const std::string& s) {
  Require(out, "output pointer");
  *out = Dup(s);
  if (!*out) throw std::bad_alloc();
}

}  // namespace

extern "C" {

const char* t2sql_version(void) { return "0.1.0"; }

const char* t2sql_last_error(void) { return g_last_error.c_str(); }

const char* t2sql_status_name(t2sql_status status) {
  static thread_local std::string name;
  name = std::string(t2sql::ErrorCodeName(static_cast<t2sql::ErrorCode>(status)));
  return name.c_str();
}

void t2sql_string_free(char* s) { std::free(s); }

void t2sql_set_warning_callback(t2sql_warning_fn fn, void* user_data) {
  if (!fn) {
    t2sql::SetWarningSink(nullptr);
    return;
  }
  t2sql::SetWarningSink([fn, user_data](std::string_view msg) {
    const std::string copy(msg);
    fn(copy.c_str(), user_data);
  });
}

t2sql_status t2sql_config_load(const char* path, t2sql_config** out) {
  return Guard([&] {
    Require(out, "output pointer");
    auto cfg = std::make_unique<t2sql_config>();
    cfg->config = t2sql::LoadConfig(path ? std::optional<std::string>(path) : std::nullopt);
    *out = cfg.release();
  });
}

t2sql_status t2sql_config_set(t2sql_config* config, const char* key, const char* value) {
  return Guard([&] {
    Require(config, "config");
    Require(key, "key");
    Require(value, "value");
    t2sql::ApplySetting(config->config, key, value);
  });
}

t2sql_status t2sql_config_to_json(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Emit(out_json, t2sql::ConfigToJson(config->config).dump(2));
  });
}

void t2sql_config_free(t2sql_config* config) { delete config; }

t2sql_status t2sql_catalog_load(const char* benchmark_root, const char* database_id,
                                t2sql_catalog** out) {
  return Guard([&] {
    Require(benchmark_root, "benchmark_root");
    Require(database_id, "database_id");
    Require(out, "output pointer");
    auto cat = std::make_unique<t2sql_catalog>();
    cat->catalog = t2sql::LoadDatabase(benchmark_root, database_id);
    *out = cat.release();
  });
}

t2sql_status t2sql_catalog_open(const char* sqlite_path, const char* description_dir,
                                t2sql_catalog** out) {
  return Guard([&] {
    Require(sqlite_path, "sqlite_path");
    Require(out, "output pointer");
    std::optional<t2sql::DescriptionMetadata> meta;
    if (description_dir) meta = t2sql::LoadDescriptionDir(description_dir);
    auto cat = std::make_unique<t2sql_catalog>();
    cat->catalog = t2sql::IntrospectDatabase(sqlite_path, meta);
    *out = cat.release();
  });
}

t2sql_status t2sql_catalog_to_json(const t2sql_catalog* catalog, char** out_json) {
  return Guard([&] {
    Require(catalog, "catalog");
    Emit(out_json, t2sql::CatalogToJson(catalog->catalog).dump(2));
  });
}

t2sql_status t2sql_render_schema(const t2sql_catalog* catalog, const char* variant,
                                 char** out_text) {
  return Guard([&] {
    Require(catalog, "catalog");
    Require(variant, "variant");
    Emit(out_text, t2sql::RenderSchema(catalog->catalog, t2sql::ParseVariant(variant)));
  });
}

void t2sql_catalog_free(t2sql_catalog* catalog) { delete catalog; }

t2sql_status t2sql_skeleton(const char* sql, char** out_text) {
  return Guard([&] {
    Require(sql, "sql");
    Emit(out_text, t2sql::ExtractSkeleton(sql).text);
  });
}

t2sql_status t2sql_count_tokens(const char* text, size_t* out_count) {
  return Guard([&] {
    Require(text, "text");
    Require(out_count, "output pointer");
    *out_count = t2sql::CountTokens(text);
  });
}

t2sql_status t2sql_extract_sql(const char* raw_response, char** out_sql) {
  return Guard([&] {
    Require(raw_response, "raw_response");
    Emit(out_sql, t2sql::ExtractSql(raw_response));
  });
}

t2sql_status t2sql_cosine(const double* a, const double* b, size_t dim, double* out) {
  return Guard([&] {
    Require(a, "a");
    Require(b, "b");
    Require(out, "output pointer");
    *out = t2sql::Cosine(t2sql::Embedding(a, a + dim), t2sql::Embedding(b, b + dim));
  });
}

t2sql_status t2sql_plan_truncation(const double* similarities, size_t count, double temperature,
                                   double* rates) {
  return Guard([&] {
    if (count > 0) Require(similarities, "similarities");
    Require(rates, "rates");
    const auto plan = t2sql::PlanExampleTruncation(
        std::vector<double>(similarities, similarities + count), temperature);
    std::copy(plan.rates.begin(), plan.rates.end(), rates);
  });
}

t2sql_status t2sql_execute_and_compare(const char* predicted_sql, const char* gold_sql,
                                       const char* sqlite_path, int64_t timeout_ms,
                                       int* out_matched, char** out_json) {
  return Guard([&] {
    Require(predicted_sql, "predicted_sql");
    Require(gold_sql, "gold_sql");
    Require(sqlite_path, "sqlite_path");
    const auto outcome = t2sql::ExecuteAndCompare(predicted_sql, gold_sql, sqlite_path,
                                                  std::chrono::milliseconds(timeout_ms));
    if (out_matched) *out_matched = outcome.matched ? 1 : 0;
    if (out_json) Emit(out_json, t2sql::OutcomeToJson(outcome).dump());
  });
}

t2sql_status t2sql_cmd_ingest_check(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Emit(out_json, t2sql::CmdIngestCheck(config->config).dump(2));
  });
}

t2sql_status t2sql_cmd_serialize_schema(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Emit(out_json, nlohmann::json(t2sql::CmdSerializeSchema(config->config)).dump(2));
  });
}

t2sql_status t2sql_cmd_build_prompt(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Emit(out_json, t2sql::CmdBuildPrompt(config->config).dump(2));
  });
}

t2sql_status t2sql_cmd_curate(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Emit(out_json, t2sql::CmdCurate(config->config).dump(2));
  });
}

t2sql_status t2sql_cmd_run(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    const auto s = t2sql::CmdRun(config->config);
    Emit(out_json, nlohmann::json{{"report_path", s.report_path},
                                  {"instances", s.instances},
                                  {"ex", s.ex}}
                       .dump(2));
  });
}

t2sql_status t2sql_cmd_prep_sft(const t2sql_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    const auto s = t2sql::CmdPrepSft(config->config);
    Emit(out_json, nlohmann::json{{"sft_path", s.sft_path},
                                  {"truncation_path", s.truncation_path},
                                  {"emitted", s.emitted},
                                  {"skipped", s.skipped},
                                  {"total_queries", s.stats.total_queries},
                                  {"truncated_queries", s.stats.truncated_queries},
                                  {"percent", s.stats.percent},
                                  {"average_truncated_columns", s.stats.average_truncated_columns},
                                  {"statistics", s.stats.Format()}}
                       .dump(2));
  });
}

t2sql_status t2sql_cmd_report(const char* report_path, char** out_text) {
  return Guard([&] {
    Require(report_path, "report_path");
    Emit(out_text, t2sql::CmdReport(report_path));
  });
}

}  // extern "C"
