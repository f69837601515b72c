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


#include "t2sql/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include "t2sql/bench.hpp"
#include "t2sql/curation.hpp"
#include "t2sql/error.hpp"
#include "t2sql/prompt.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

LlmEndpoint EndpointFromJson(const json& j, LlmEndpoint ep) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "endpoint settings must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "base_url") ep.base_url = v.get<std::string>();
    else if (key == "model") ep.model_id = v.get<std::string>();
    else if (key == "temperature") ep.sampling_temperature = v.get<double>();
    else if (key == "max_tokens") ep.max_response_tokens = v.get<int>();
    else if (key == "timeout_ms") ep.timeout = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (key == "completion_path") ep.completion_path = v.get<std::string>();
    else if (key == "chat_path") ep.chat_path = v.get<std::string>();
    else if (key == "embedding_path") ep.embedding_path = v.get<std::string>();
    else if (key == "chat") ep.chat_style = v.get<bool>();
    else if (key == "max_batch") ep.max_batch = v.get<std::size_t>();
    else if (key == "max_attempts") ep.max_attempts = v.get<int>();
    else if (key == "backoff_ms") ep.backoff = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (key == "api_key") Warn("api_key in a config file is ignored; use the environment");
    else throw Error(ErrorCode::kConfig, "unknown endpoint setting '" + key + "'");
  }
  return ep;
}

std::string Env(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

void WriteJsonLines(const std::string& path, const std::vector<json>& lines) {
  std::string out;
  for (const auto& l : lines) out += l.dump() + "\n";
  WriteFile(path, out);
}

std::vector<TaskInstance> SelectInstances(const BenchmarkSplit& split, const RunConfig& cfg) {
  std::vector<TaskInstance> out = split.instances;
  if (cfg.limit && out.size() > *cfg.limit) out.resize(*cfg.limit);
  return out;
}

const TaskInstance& PickInstance(const BenchmarkSplit& split, const RunConfig& cfg) {
  if (cfg.question_id) {
    const auto* inst = split.FindInstance(*cfg.question_id);
    if (!inst) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no question " + std::to_string(*cfg.question_id) + " in " + split.name);
    }
    return *inst;
  }
  if (split.instances.empty()) throw Error(ErrorCode::kInvalidArgument, "split is empty");
  return split.instances.front();
}

BenchmarkSplit LoadConfiguredSplit(const RunConfig& cfg, const std::string& name) {
  IntrospectOptions opt;
  opt.probe_timeout = cfg.probe_timeout;
  return LoadSplit(cfg.benchmark_root, name, opt, cfg.workers);
}

std::unique_ptr<Gateway> MakeGateway(const RunConfig& cfg, std::shared_ptr<LlmBackend> backend) {
  GatewayOptions o;
  o.completion = cfg.endpoint;
  o.embedding = cfg.embedding_endpoint;
  o.mode = cfg.gateway_mode;
  o.replay_store = cfg.replay_store;
  o.embedding_cache = cfg.embedding_cache.empty()
                          ? (fs::path(cfg.output_dir) / "embeddings.jsonl").string()
                          : cfg.embedding_cache;
  o.max_in_flight = cfg.max_in_flight;
  return std::make_unique<Gateway>(std::move(o), std::move(backend));
}

json RemovedToJson(const TruncationRecord& r) {
  json sections = json::array();
  for (const auto& s : r.removed_columns) {
    json cols = json::array();
    for (const auto& ref : s) cols.push_back(ref.table + "." + ref.column);
    sections.push_back(cols);
  }
  return sections;
}

// Everything one instance needs; shared read-only across workers.
struct RunContext {
  const RunConfig& cfg;
  const BenchmarkSplit& split;
  Gateway& gateway;
  const BenchmarkSplit* pool_split = nullptr;
  const ExamplePool* pool = nullptr;
};

struct InstanceResult {
  EvalOutcome outcome;
  std::string predicted_sql;
  std::optional<ErrorLabel> label;
  std::optional<TruncationRecord> truncation;
  json trace;
};

struct Prediction {
  std::string sql;
  std::optional<TruncationRecord> truncation;
  json trace;
};

Prediction PredictFewShot(const RunContext& ctx, const TaskInstance& inst,
                          const DatabaseCatalog& catalog, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  Prediction p;
  // Draft SQL from a zero-shot pass feeds the SQL similarity.
  const auto draft_prompt =
      BuildBudgetedOpenPrompt(inst, catalog, cfg.variant, cfg.budget, seed);
  const std::string draft_raw = ctx.gateway.Complete(draft_prompt.text);
  std::string draft;
  try {
    draft = ExtractSql(draft_raw);
  } catch (const Error&) {
    draft = std::string(Trim(draft_raw)).empty() ? inst.question : draft_raw;
  }
  const auto triples = ScoreCandidates(inst, catalog, draft, *ctx.pool, cfg.variant,
                                       ctx.gateway.Embedder());
  const auto curated = SelectTopK(triples, cfg.shots);
  std::vector<PromptExample> examples;
  json curated_json = json::array();
  for (const auto& t : curated.examples) {
    const auto& c = ctx.pool->candidates[t.candidate_index];
    examples.push_back({c.instance, c.catalog, nullptr, t.gamma_a});
    auto tj = TripleToJson(t);
    tj["question_id"] = c.instance->question_id;
    tj["db_id"] = c.instance->database_id;
    curated_json.push_back(tj);
  }
  const auto bundle = BuildBudgetedFewShotPrompt(inst, catalog, examples, cfg.variant, cfg.budget,
                                                 cfg.truncation_temperature, seed);
  const std::string raw = ctx.gateway.Complete(bundle.text);
  p.truncation = bundle.truncation;
  p.trace = {{"mode", "none"},
             {"draft", {{"prompt", PromptBundleToJson(draft_prompt)}, {"response", draft_raw}}},
             {"curated", curated_json},
             {"steps", json::array({PromptBundleToJson(bundle)})},
             {"responses", json::array({raw})}};
  p.trace["steps"][0]["response"] = raw;
  p.trace.erase("responses");
  p.sql = ExtractSql(raw);
  p.trace["final_sql"] = p.sql;
  return p;
}

Prediction Predict(const RunContext& ctx, const TaskInstance& inst, const DatabaseCatalog& catalog,
                   std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  if (cfg.mode != CotMode::kNone) {
    CotOptions opt;
    opt.budget = cfg.budget;
    opt.seed = seed;
    opt.restrict_step2 = cfg.restrict_step2;
    Prediction p;
    CotTrace trace;
    try {
      trace = RunCot(inst, catalog, [&](const std::string& s) { return ctx.gateway.Complete(s); },
                     cfg.mode, opt);
    } catch (...) {
      throw;
    }
    for (const auto& step : trace.step_prompts) {
      if (step.truncation && (!p.truncation || step.truncation->TotalRemoved() >
                                                   p.truncation->TotalRemoved())) {
        p.truncation = step.truncation;
      }
    }
    p.sql = trace.final_sql;
    p.trace = TraceToJson(trace);
    return p;
  }
  if (cfg.shots > 0) return PredictFewShot(ctx, inst, catalog, seed);

  Prediction p;
  const auto bundle = BuildBudgetedOpenPrompt(inst, catalog, cfg.variant, cfg.budget, seed);
  const std::string raw = ctx.gateway.Complete(bundle.text);
  p.truncation = bundle.truncation;
  CotTrace trace;
  trace.step_prompts.push_back(bundle);
  trace.responses.push_back(raw);
  p.sql = ExtractSql(raw);
  trace.final_sql = p.sql;
  p.trace = TraceToJson(trace);
  return p;
}

InstanceResult RunOne(const RunContext& ctx, const TaskInstance& inst) {
  const auto& cfg = ctx.cfg;
  const auto& catalog = ctx.split.Catalog(inst.database_id);
  const std::string db_path = ctx.split.DatabasePath(inst.database_id);
  InstanceResult r;
  std::optional<std::string> failure;
  try {
    auto p = Predict(ctx, inst, catalog, InstanceSeed(cfg.truncation_seed, inst.question_id));
    r.predicted_sql = std::move(p.sql);
    r.truncation = std::move(p.truncation);
    r.trace = std::move(p.trace);
  } catch (const Error& e) {
    failure = "no SQL produced: " + std::string(ErrorCodeName(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    failure = std::string("no SQL produced: internal: ") + e.what();
  }
  r.outcome = ExecuteAndCompare(r.predicted_sql, inst.gold_sql, db_path, cfg.exec_timeout);
  r.outcome.question_id = inst.question_id;
  if (failure) {
    r.outcome.matched = false;
    r.outcome.predicted_error = *failure;
    r.trace["error"] = *failure;
  }
  if (!r.outcome.matched) r.label = Classify(r.predicted_sql, inst.gold_sql, catalog, r.outcome);
  return r;
}

template <typename Fn>
void ParallelFor(std::size_t n, unsigned workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  if (n > 0) work();
  for (auto& t : pool) t.join();
}

json TruncationBlock(const std::vector<std::optional<TruncationRecord>>& records) {
  std::size_t truncated = 0, target = 0, examples = 0, total = 0;
  for (const auto& r : records) {
    if (!r || !r->Truncated()) continue;
    ++truncated;
    total += r->TotalRemoved();
    if (!r->removed_columns.empty()) target += r->removed_columns[0].size();
    for (size_t i = 1; i < r->removed_columns.size(); ++i) examples += r->removed_columns[i].size();
  }
  auto avg = [&](std::size_t sum) { return truncated ? static_cast<double>(sum) / truncated : 0.0; };
  return {{"total_queries", records.size()},
          {"queries_with_truncation", truncated},
          {"percent", records.empty() ? 0.0 : 100.0 * truncated / records.size()},
          {"average_truncated_columns", avg(total)},
          {"average_truncated_target_columns", avg(target)},
          {"average_truncated_example_columns", avg(examples)}};
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

void RunConfig::Validate() const {
  if (benchmark_root.empty()) throw Error(ErrorCode::kConfig, "benchmark_root is required");
  budget.Validate();
  if (!(truncation_temperature > 0)) {
    throw Error(ErrorCode::kConfig, "truncation_temperature must be positive");
  }
  if (shots > 0 && pool_split.empty()) {
    throw Error(ErrorCode::kConfig, "few-shot runs need a pool_split");
  }
  if (shots > 0 && mode != CotMode::kNone) {
    throw Error(ErrorCode::kConfig, "chain-of-thought modes run zero-shot; set shots to 0");
  }
  if (gateway_mode != GatewayMode::kLive && replay_store.empty()) {
    throw Error(ErrorCode::kConfig, "record and replay modes need replay_store");
  }
  if (workers == 0) throw Error(ErrorCode::kConfig, "workers must be >= 1");
  endpoint.Validate();
  embedding_endpoint.Validate();
}

json ConfigToJson(const RunConfig& c) {
  return {{"benchmark_root", c.benchmark_root},
          {"split", c.split},
          {"pool_split", c.pool_split},
          {"variant", VariantName(c.variant)},
          {"mode", CotModeName(c.mode)},
          {"shots", c.shots},
          {"max_context", c.budget.max_context},
          {"response_reserve", c.budget.response_reserve},
          {"truncation_temperature", c.truncation_temperature},
          {"truncation_seed", c.truncation_seed},
          {"endpoint", EndpointToJson(c.endpoint)},
          {"embedding_endpoint", EndpointToJson(c.embedding_endpoint)},
          {"gateway_mode", GatewayModeName(c.gateway_mode)},
          {"replay_store", c.replay_store},
          {"embedding_cache", c.embedding_cache},
          {"output_dir", c.output_dir},
          {"workers", c.workers},
          {"max_in_flight", c.max_in_flight},
          {"exec_timeout_ms", c.exec_timeout.count()},
          {"probe_timeout_ms", c.probe_timeout.count()},
          {"restrict_step2", c.restrict_step2},
          {"question_id", c.question_id ? json(*c.question_id) : json(nullptr)},
          {"limit", c.limit ? json(*c.limit) : json(nullptr)}};
}

RunConfig ConfigFromJson(const json& j, RunConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "configuration must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "benchmark_root") c.benchmark_root = v.get<std::string>();
      else if (key == "split") c.split = v.get<std::string>();
      else if (key == "pool_split") c.pool_split = v.get<std::string>();
      else if (key == "variant") c.variant = ParseVariant(v.get<std::string>());
      else if (key == "mode") c.mode = ParseCotMode(v.get<std::string>());
      else if (key == "shots") c.shots = v.get<std::size_t>();
      else if (key == "max_context") c.budget.max_context = v.get<std::size_t>();
      else if (key == "response_reserve") c.budget.response_reserve = v.get<std::size_t>();
      else if (key == "truncation_temperature") c.truncation_temperature = v.get<double>();
      else if (key == "truncation_seed") c.truncation_seed = v.get<std::uint64_t>();
      else if (key == "endpoint") c.endpoint = EndpointFromJson(v, c.endpoint);
      else if (key == "embedding_endpoint") c.embedding_endpoint = EndpointFromJson(v, c.embedding_endpoint);
      else if (key == "gateway_mode") c.gateway_mode = ParseGatewayMode(v.get<std::string>());
      else if (key == "replay_store") c.replay_store = v.get<std::string>();
      else if (key == "embedding_cache") c.embedding_cache = v.get<std::string>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "max_in_flight") c.max_in_flight = v.get<std::size_t>();
      else if (key == "exec_timeout_ms") c.exec_timeout = std::chrono::milliseconds(v.get<std::int64_t>());
      else if (key == "probe_timeout_ms") c.probe_timeout = std::chrono::milliseconds(v.get<std::int64_t>());
      else if (key == "restrict_step2") c.restrict_step2 = v.get<bool>();
      else if (key == "question_id") {
        if (v.is_null()) c.question_id.reset(); else c.question_id = v.get<std::int64_t>();
      } else if (key == "limit") {
        if (v.is_null()) c.limit.reset(); else c.limit = v.get<std::size_t>();
      } else {
        throw Error(ErrorCode::kConfig, "unknown setting '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad setting value: ") + e.what());
  }
  return c;
}

void ApplyEnvironment(RunConfig& c) {
  if (auto v = Env("T2SQL_BASE_URL"); !v.empty()) c.endpoint.base_url = v;
  if (auto v = Env("T2SQL_MODEL"); !v.empty()) c.endpoint.model_id = v;
  if (auto v = Env("T2SQL_API_KEY"); !v.empty()) c.endpoint.api_key = v;
  if (auto v = Env("T2SQL_EMBEDDING_BASE_URL"); !v.empty()) c.embedding_endpoint.base_url = v;
  if (auto v = Env("T2SQL_EMBEDDING_MODEL"); !v.empty()) c.embedding_endpoint.model_id = v;
  if (auto v = Env("T2SQL_EMBEDDING_API_KEY"); !v.empty()) {
    c.embedding_endpoint.api_key = v;
  } else if (c.embedding_endpoint.api_key.empty()) {
    c.embedding_endpoint.api_key = c.endpoint.api_key;
  }
}

RunConfig LoadConfig(const std::optional<std::string>& path) {
  RunConfig c;
  if (path) {
    json j;
    try {
      j = json::parse(ReadFile(*path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfig, *path + ": " + e.what());
    }
    c = ConfigFromJson(j, c);
  }
  ApplyEnvironment(c);
  return c;
}

void ApplySetting(RunConfig& c, const std::string& key, const std::string& value) {
  json v;
  try {
    v = json::parse(value);
  } catch (const json::exception&) {
    v = value;
  }
  json patch = v;
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t dot; (dot = key.find('.', start)) != std::string::npos; start = dot + 1) {
    parts.push_back(key.substr(start, dot - start));
  }
  parts.push_back(key.substr(start));
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  c = ConfigFromJson(patch, c);
}

json CmdIngestCheck(const RunConfig& cfg) {
  const auto split = LoadConfiguredSplit(cfg, cfg.split);
  json dbs = json::object();
  for (const auto& [id, catalog] : split.databases) {
    std::size_t columns = 0, described = 0, valued = 0;
    for (const auto& t : catalog.tables) {
      columns += t.columns.size();
      for (const auto& col : t.columns) {
        if (col.description) ++described;
        if (col.values) ++valued;
      }
    }
    dbs[id] = {{"tables", catalog.tables.size()},
               {"columns", columns},
               {"described_columns", described},
               {"columns_with_values", valued},
               {"foreign_keys", catalog.foreign_keys.size()}};
  }
  json difficulty = {{"simple", 0}, {"moderate", 0}, {"challenging", 0}};
  for (const auto& inst : split.instances) {
    difficulty[std::string(DifficultyName(inst.difficulty))] =
        difficulty[std::string(DifficultyName(inst.difficulty))].get<int>() + 1;
  }
  return {{"split", split.name},
          {"instances", split.instances.size()},
          {"difficulty", difficulty},
          {"databases", dbs}};
}

std::vector<std::string> CmdSerializeSchema(const RunConfig& cfg) {
  if (cfg.benchmark_root.empty()) throw Error(ErrorCode::kConfig, "benchmark_root is required");
  IntrospectOptions opt;
  opt.probe_timeout = cfg.probe_timeout;
  std::vector<std::string> written;
  for (const auto& id : ListDatabases(cfg.benchmark_root)) {
    const auto catalog = LoadDatabase(cfg.benchmark_root, id, opt);
    const fs::path dir = fs::path(cfg.output_dir) / "schemas" / id;
    fs::create_directories(dir);
    for (auto v : kAllVariants) {
      const auto path = (dir / (std::string(VariantName(v)) + ".txt")).string();
      WriteFile(path, RenderSchema(catalog, v));
      written.push_back(path);
    }
  }
  return written;
}

json CmdBuildPrompt(const RunConfig& cfg, std::shared_ptr<LlmBackend> backend) {
  cfg.Validate();
  const auto split = LoadConfiguredSplit(cfg, cfg.split);
  const auto& inst = PickInstance(split, cfg);
  const auto& catalog = split.Catalog(inst.database_id);
  const auto seed = InstanceSeed(cfg.truncation_seed, inst.question_id);
  PromptBundle bundle;
  if (cfg.mode != CotMode::kNone) {
    const CotFlavor flavor = cfg.mode == CotMode::kCotSpPred || cfg.mode == CotMode::kCotSpFull
                                 ? CotFlavor::kSimple
                                 : CotFlavor::kSkeleton;
    CotStepInput in;
    in.instance = &inst;
    const auto partition = PartitionColumns(catalog, std::nullopt,
                                            inst.question + " " + inst.external_knowledge);
    auto measure = [&](const ColumnFilter& keep) {
      in.schema = RenderSchema(catalog, SchemaVariant::kCD, &keep);
      return CountTokens(RenderCotStep(flavor, 1, in));
    };
    auto fit = TruncateTarget(catalog, partition, catalog.AllColumnsFilter(), measure,
                              cfg.budget.PromptLimit(), seed ^ 0x9E3779B97F4A7C15ULL);
    in.schema = RenderSchema(catalog, SchemaVariant::kCD, &fit.keep);
    bundle.text = RenderCotStep(flavor, 1, in);
    bundle.token_count = CountTokens(bundle.text);
    bundle.role = PromptRole::kCotStep;
    bundle.step_index = 1;
    bundle.truncation = fit.record;
  } else if (cfg.shots == 0) {
    bundle = BuildBudgetedOpenPrompt(inst, catalog, cfg.variant, cfg.budget, seed);
  } else {
    auto gateway = MakeGateway(cfg, std::move(backend));
    const auto pool_split = LoadConfiguredSplit(cfg, cfg.pool_split);
    const auto pool = BuildExamplePool(pool_split, cfg.variant, gateway->Embedder());
    RunContext ctx{cfg, split, *gateway, &pool_split, &pool};
    auto p = PredictFewShot(ctx, inst, catalog, seed);
    return {{"question_id", inst.question_id}, {"prompt", p.trace["steps"][0]},
            {"curated", p.trace["curated"]}};
  }
  return {{"question_id", inst.question_id}, {"prompt", PromptBundleToJson(bundle)}};
}

json CmdCurate(const RunConfig& cfg, std::shared_ptr<LlmBackend> backend) {
  RunConfig c = cfg;
  if (c.shots == 0) c.shots = 1;
  c.Validate();
  const auto split = LoadConfiguredSplit(c, c.split);
  const auto pool_split = LoadConfiguredSplit(c, c.pool_split);
  auto gateway = MakeGateway(c, std::move(backend));
  const auto pool = BuildExamplePool(pool_split, c.variant, gateway->Embedder());
  std::vector<const TaskInstance*> targets;
  if (c.question_id) {
    targets.push_back(&PickInstance(split, c));
  } else {
    for (const auto& inst : SelectInstances(split, c)) {
      targets.push_back(split.FindInstance(inst.question_id));
    }
  }
  json out = json::array();
  for (const auto* inst : targets) {
    const auto& catalog = split.Catalog(inst->database_id);
    const auto seed = InstanceSeed(c.truncation_seed, inst->question_id);
    const auto draft_prompt = BuildBudgetedOpenPrompt(*inst, catalog, c.variant, c.budget, seed);
    const std::string raw = gateway->Complete(draft_prompt.text);
    std::string draft;
    try {
      draft = ExtractSql(raw);
    } catch (const Error&) {
      draft = inst->question;
    }
    const auto set = SelectTopK(
        ScoreCandidates(*inst, catalog, draft, pool, c.variant, gateway->Embedder()), c.shots);
    json ex = json::array();
    for (const auto& t : set.examples) {
      auto tj = TripleToJson(t);
      tj["question_id"] = pool.candidates[t.candidate_index].instance->question_id;
      tj["db_id"] = pool.candidates[t.candidate_index].instance->database_id;
      tj["question"] = pool.candidates[t.candidate_index].instance->question;
      ex.push_back(tj);
    }
    out.push_back({{"question_id", inst->question_id}, {"draft_sql", draft}, {"examples", ex}});
  }
  return out;
}

RunSummary CmdRun(const RunConfig& cfg, std::shared_ptr<LlmBackend> backend) {
  cfg.Validate();
  const auto wall_start = std::chrono::steady_clock::now();
  const auto split = LoadConfiguredSplit(cfg, cfg.split);
  const auto instances = SelectInstances(split, cfg);
  fs::create_directories(cfg.output_dir);
  auto gateway = MakeGateway(cfg, std::move(backend));

  std::optional<BenchmarkSplit> pool_split;
  std::optional<ExamplePool> pool;
  if (cfg.shots > 0) {
    pool_split = LoadConfiguredSplit(cfg, cfg.pool_split);
    pool = BuildExamplePool(*pool_split, cfg.variant, gateway->Embedder());
  }
  RunContext ctx{cfg, split, *gateway, pool_split ? &*pool_split : nullptr,
                 pool ? &*pool : nullptr};

  std::vector<InstanceResult> results(instances.size());
  ParallelFor(instances.size(), cfg.workers,
              [&](std::size_t i) { results[i] = RunOne(ctx, instances[i]); });

  std::vector<EvalOutcome> outcomes;
  std::vector<ErrorLabel> labels;
  std::vector<std::optional<TruncationRecord>> truncations;
  json rows = json::array();
  std::vector<json> traces;
  json timings = json::array();
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& inst = instances[i];
    outcomes.push_back(r.outcome);
    truncations.push_back(r.truncation);
    if (r.label) labels.push_back(*r.label);
    auto row = OutcomeToJson(r.outcome);
    row["difficulty"] = DifficultyName(inst.difficulty);
    row["db_id"] = inst.database_id;
    row["predicted_sql"] = r.predicted_sql;
    row["label"] = r.label ? LabelToJson(*r.label) : json(nullptr);
    rows.push_back(row);
    traces.push_back({{"question_id", inst.question_id}, {"trace", r.trace}});
    timings.push_back({{"question_id", inst.question_id},
                       {"elapsed_us", r.outcome.elapsed.count()}});
  }
  const auto report = Aggregate(outcomes, instances);
  json config_block = ConfigToJson(cfg);
  // The report must not depend on where it is written.
  config_block.erase("output_dir");
  config_block.erase("workers");
  config_block.erase("max_in_flight");
  json doc = {{"config", config_block},
              {"comparison",
               "rows compared as sets; reals rounded to 6 decimals; NULL equals only NULL"},
              {"execution_accuracy", ExTableToJson(report)},
              {"taxonomy", TaxonomyToJson(Tabulate(labels, instances.size()))},
              {"truncation", TruncationBlock(truncations)},
              {"outcomes", rows}};

  RunSummary summary;
  summary.report_path = (fs::path(cfg.output_dir) / "report.json").string();
  summary.ex = doc["execution_accuracy"]["ex"];
  summary.instances = instances.size();
  WriteFile(summary.report_path, doc.dump(2) + "\n");
  WriteJsonLines((fs::path(cfg.output_dir) / "traces.jsonl").string(), traces);
  WriteFile((fs::path(cfg.output_dir) / "config.json").string(), ConfigToJson(cfg).dump(2) + "\n");
  const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - wall_start);
  WriteFile((fs::path(cfg.output_dir) / "timings.json").string(),
            json{{"wall_ms", wall.count()}, {"instances", timings}}.dump(2) + "\n");
  return summary;
}

std::string TruncationStats::Format() const {
  return "Queries with column truncation/Total queries: " + Fmt("%.2f", percent) + "% (" +
         std::to_string(truncated_queries) + "/" + std::to_string(total_queries) + ")\n" +
         "Average truncated columns: " + Fmt("%.1f", average_truncated_columns) + "\n";
}

TruncationStats ComputeTruncationStats(const std::vector<TruncationRecord>& records) {
  TruncationStats s;
  s.total_queries = records.size();
  std::size_t removed = 0;
  for (const auto& r : records) {
    if (!r.Truncated()) continue;
    ++s.truncated_queries;
    removed += r.TotalRemoved();
  }
  s.percent = s.total_queries ? 100.0 * s.truncated_queries / s.total_queries : 0.0;
  s.average_truncated_columns =
      s.truncated_queries ? static_cast<double>(removed) / s.truncated_queries : 0.0;
  return s;
}

SftSummary CmdPrepSft(const RunConfig& cfg) {
  if (cfg.benchmark_root.empty()) throw Error(ErrorCode::kConfig, "benchmark_root is required");
  cfg.budget.Validate();
  const auto split = LoadConfiguredSplit(cfg, cfg.split);
  const auto instances = SelectInstances(split, cfg);
  fs::create_directories(cfg.output_dir);
  SftSummary summary;
  summary.sft_path = (fs::path(cfg.output_dir) / "sft.jsonl").string();
  summary.truncation_path = (fs::path(cfg.output_dir) / "truncation.jsonl").string();
  std::vector<json> pairs, records_json;
  std::vector<TruncationRecord> records;
  for (const auto& inst : instances) {
    try {
      auto e = EmitSftPair(inst, split.Catalog(inst.database_id), cfg.variant, cfg.budget,
                           InstanceSeed(cfg.truncation_seed, inst.question_id));
      pairs.push_back({{"prompt", e.pair.prompt}, {"completion", e.pair.completion}});
      records_json.push_back({{"question_id", inst.question_id},
                              {"removed_columns", RemovedToJson(e.record)},
                              {"tokens_before", e.record.tokens_before},
                              {"tokens_after", e.record.tokens_after}});
      records.push_back(std::move(e.record));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsatisfiableBudget) throw;
      Warn("question " + std::to_string(inst.question_id) + " skipped: " + e.what());
      ++summary.skipped;
    }
  }
  WriteJsonLines(summary.sft_path, pairs);
  WriteJsonLines(summary.truncation_path, records_json);
  summary.emitted = pairs.size();
  summary.stats = ComputeTruncationStats(records);
  return summary;
}

std::string CmdReport(const std::string& report_path) {
  json doc;
  try {
    doc = json::parse(ReadFile(report_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, report_path + ": " + e.what());
  }
  std::string out;
  char line[256];
  try {
    const auto& exec = doc.at("execution_accuracy");
    const auto& cfg = doc.at("config");
    out += "Execution accuracy (EX, %)  variant " + cfg.value("variant", std::string("?")) +
           ", mode " + cfg.value("mode", std::string("?")) + ", shots " +
           std::to_string(cfg.value("shots", 0)) + "\n";
    std::snprintf(line, sizeof line, "%-8s %10s %10s %12s %10s\n", "", "simple", "moderate",
                  "challenging", "sum");
    out += line;
    std::snprintf(line, sizeof line, "%-8s %10d %10d %12d %10d\n", "count",
                  exec.at("counts").at("simple").at("total").get<int>(),
                  exec.at("counts").at("moderate").at("total").get<int>(),
                  exec.at("counts").at("challenging").at("total").get<int>(),
                  exec.at("counts").at("sum").at("total").get<int>());
    out += line;
    std::snprintf(line, sizeof line, "%-8s %10.2f %10.2f %12.2f %10.2f\n", "EX",
                  exec.at("ex").at("simple").get<double>(), exec.at("ex").at("moderate").get<double>(),
                  exec.at("ex").at("challenging").get<double>(), exec.at("ex").at("sum").get<double>());
    out += line;
    out += "\nError categories (errors / total queries)\n";
    std::string last_group;
    for (const auto& row : doc.at("taxonomy")) {
      const std::string group = row.at("group").get<std::string>();
      std::snprintf(line, sizeof line, "%-28s %-22s %7.2f%% %6d\n",
                    group == last_group ? "" : group.c_str(),
                    row.at("label").get<std::string>().c_str(), row.at("percent").get<double>(),
                    row.at("count").get<int>());
      out += line;
      last_group = group;
    }
    if (doc.contains("truncation")) {
      const auto& t = doc["truncation"];
      out += "\nQueries with column truncation/Total queries: " +
             Fmt("%.2f", t.at("percent").get<double>()) + "%\n";
      out += "Average truncated columns: " +
             Fmt("%.1f", t.at("average_truncated_columns").get<double>()) + "\n";
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, report_path + " is not a run report: " + e.what());
  }
  return out;
}

}  // namespace t2sql
