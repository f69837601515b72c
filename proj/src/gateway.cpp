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


#include "t2sql/gateway.hpp"

#include "httplib.h"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <regex>
#include <thread>

#include "t2sql/error.hpp"
#include "t2sql/text.hpp"

namespace t2sql {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl ParseBaseUrl(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw Error(ErrorCode::kConfig, "endpoint base URL must be http(s)://host[:port][/path]: " + url);
  }
  SplitUrl out{m[1].str(), m[2].str()};
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::string JoinPath(const std::string& prefix, const std::string& path) {
  // A base URL ending in /v1 is common; do not double it.
  if (prefix.size() >= 3 && prefix.compare(prefix.size() - 3, 3, "/v1") == 0 &&
      path.rfind("/v1/", 0) == 0) {
    return prefix + path.substr(3);
  }
  return prefix + path;
}

class HttpBackend : public LlmBackend {
 public:
  CompletionResult Complete(const LlmEndpoint& ep, const std::string& prompt) override {
    nlohmann::json body = {{"model", ep.model_id},
                           {"temperature", ep.sampling_temperature},
                           {"max_tokens", ep.max_response_tokens}};
    if (ep.chat_style) {
      body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    } else {
      body["prompt"] = prompt;
    }
    const auto reply = Post(ep, ep.chat_style ? ep.chat_path : ep.completion_path, body);
    CompletionResult out;
    try {
      const auto& choice = reply.at("choices").at(0);
      if (ep.chat_style) {
        out.text = choice.at("message").at("content").get<std::string>();
      } else {
        out.text = choice.at("text").get<std::string>();
      }
      if (reply.contains("usage") && reply["usage"].is_object()) {
        out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
        out.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kHttpStatus, std::string("unexpected completion payload: ") + e.what());
    }
    return out;
  }

  std::vector<Embedding> Embed(const LlmEndpoint& ep,
                               const std::vector<std::string>& batch) override {
    const nlohmann::json body = {{"model", ep.model_id}, {"input", batch}};
    const auto reply = Post(ep, ep.embedding_path, body);
    std::vector<Embedding> out(batch.size());
    try {
      const auto& data = reply.at("data");
      if (data.size() != batch.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "server returned " +
                                                       std::to_string(data.size()) +
                                                       " embeddings for " +
                                                       std::to_string(batch.size()) + " inputs");
      }
      for (size_t i = 0; i < data.size(); ++i) {
        const size_t idx = data[i].contains("index") ? data[i]["index"].get<size_t>() : i;
        if (idx >= out.size()) throw Error(ErrorCode::kHttpStatus, "embedding index out of range");
        out[idx] = data[i].at("embedding").get<Embedding>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kHttpStatus, std::string("unexpected embedding payload: ") + e.what());
    }
    return out;
  }

 private:
  nlohmann::json Post(const LlmEndpoint& ep, const std::string& path,
                      const nlohmann::json& body) {
    const auto url = ParseBaseUrl(ep.base_url);
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(ep.timeout);
    cli.set_read_timeout(ep.timeout);
    cli.set_write_timeout(ep.timeout);
    httplib::Headers headers;
    if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);
    const std::string full_path = JoinPath(url.prefix, path);
    const std::string payload = body.dump();

    std::string last_error;
    int last_status = 0;
    const int attempts = std::max(1, ep.max_attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(ep.backoff * (1 << (attempt - 1)));
      auto res = cli.Post(full_path, headers, payload, "application/json");
      if (!res) {
        last_status = 0;
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 200 && res->status < 300) {
        try {
          return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::kHttpStatus, std::string("response is not JSON: ") + e.what());
        }
      }
      last_status = res->status;
      last_error = res->body.substr(0, 300);
      if (res->status != 429 && res->status < 500) break;
    }
    if (last_status == 0) {
      throw Error(ErrorCode::kEndpointUnreachable,
                  ep.base_url + full_path + " unreachable: " + last_error);
    }
    throw Error(ErrorCode::kHttpStatus, "HTTP " + std::to_string(last_status) + " from " +
                                            ep.base_url + full_path + ": " + last_error);
  }
};

void AppendLine(const std::string& path, const std::string& line) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + path);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

template <typename Fn>
void ForEachJsonLine(const std::string& path, Fn fn) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kIo, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

void LlmEndpoint::Validate() const {
  if (!(sampling_temperature >= 0)) {
    throw Error(ErrorCode::kConfig, "sampling temperature must be >= 0");
  }
  if (max_response_tokens <= 0) throw Error(ErrorCode::kConfig, "max_tokens must be > 0");
  if (max_batch == 0) throw Error(ErrorCode::kConfig, "embedding batch size must be > 0");
}

nlohmann::json EndpointToJson(const LlmEndpoint& ep) {
  return {{"base_url", ep.base_url},
          {"model", ep.model_id},
          {"temperature", ep.sampling_temperature},
          {"max_tokens", ep.max_response_tokens},
          {"timeout_ms", ep.timeout.count()},
          {"completion_path", ep.completion_path},
          {"chat_path", ep.chat_path},
          {"embedding_path", ep.embedding_path},
          {"chat", ep.chat_style},
          {"max_batch", ep.max_batch},
          {"max_attempts", ep.max_attempts},
          {"backoff_ms", ep.backoff.count()}};
}

std::shared_ptr<LlmBackend> MakeHttpBackend() { return std::make_shared<HttpBackend>(); }

std::string PromptHash(std::string_view model_id, std::string_view prompt) {
  std::string bytes(model_id);
  bytes.push_back('\0');
  bytes.append(prompt);
  return Sha256Hex(bytes);
}

ReplayStore::ReplayStore(std::string path) : path_(std::move(path)) {
  ForEachJsonLine(path_, [&](const nlohmann::json& j) {
    CompletionRecord r;
    r.hash = j.at("hash").get<std::string>();
    r.model = j.value("model", "");
    r.response = j.at("response").get<std::string>();
    r.usage.prompt_tokens = j.value("prompt_tokens", 0);
    r.usage.completion_tokens = j.value("completion_tokens", 0);
    records_.emplace(r.hash, std::move(r));
  });
}

std::optional<CompletionRecord> ReplayStore::Find(const std::string& hash) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(hash);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

bool ReplayStore::Append(const CompletionRecord& r) {
  std::unique_lock lock(mu_);
  if (records_.count(r.hash)) return false;
  const nlohmann::json j = {{"hash", r.hash},
                            {"model", r.model},
                            {"response", r.response},
                            {"prompt_tokens", r.usage.prompt_tokens},
                            {"completion_tokens", r.usage.completion_tokens}};
  AppendLine(path_, j.dump());
  records_.emplace(r.hash, r);
  return true;
}

std::size_t ReplayStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

EmbeddingCache::EmbeddingCache(std::string path) : path_(std::move(path)) {
  ForEachJsonLine(path_, [&](const nlohmann::json& j) {
    auto v = j.at("vector").get<Embedding>();
    if (j.contains("dim") && j["dim"].get<size_t>() != v.size()) {
      throw Error(ErrorCode::kDimensionMismatch, path_ + ": dim disagrees with vector length");
    }
    vectors_.emplace(j.at("key").get<std::string>(), std::move(v));
  });
}

std::optional<Embedding> EmbeddingCache::Find(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = vectors_.find(key);
  if (it == vectors_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::Put(const std::string& key, const Embedding& vector) {
  std::unique_lock lock(mu_);
  if (vectors_.count(key)) return;
  const nlohmann::json j = {{"key", key}, {"dim", vector.size()}, {"vector", vector}};
  AppendLine(path_, j.dump());
  vectors_.emplace(key, vector);
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mu_);
  return vectors_.size();
}

std::string_view GatewayModeName(GatewayMode mode) {
  switch (mode) {
    case GatewayMode::kLive: return "live";
    case GatewayMode::kRecord: return "record";
    case GatewayMode::kReplay: return "replay";
  }
  return "live";
}

GatewayMode ParseGatewayMode(std::string_view name) {
  const std::string n = ToLower(Trim(name));
  if (n == "live") return GatewayMode::kLive;
  if (n == "record") return GatewayMode::kRecord;
  if (n == "replay") return GatewayMode::kReplay;
  throw Error(ErrorCode::kConfig, "unknown gateway mode '" + std::string(name) + "'");
}

// Bounds concurrent wire calls.
class Gateway::Slot {
 public:
  explicit Slot(Gateway& g) : g_(g) {
    std::unique_lock lock(g_.slot_mu_);
    g_.slot_cv_.wait(lock, [&] { return g_.in_flight_ < std::max<size_t>(1, g_.options_.max_in_flight); });
    ++g_.in_flight_;
    ++g_.wire_calls_;
  }
  ~Slot() {
    {
      std::lock_guard lock(g_.slot_mu_);
      --g_.in_flight_;
    }
    g_.slot_cv_.notify_one();
  }

 private:
  Gateway& g_;
};

Gateway::Gateway(GatewayOptions options, std::shared_ptr<LlmBackend> backend)
    : options_(std::move(options)), backend_(std::move(backend)) {
  options_.completion.Validate();
  options_.embedding.Validate();
  if (!backend_) backend_ = MakeHttpBackend();
  if (options_.mode != GatewayMode::kLive) {
    if (options_.replay_store.empty()) {
      throw Error(ErrorCode::kConfig, std::string(GatewayModeName(options_.mode)) +
                                          " mode requires a replay store path");
    }
  }
  if (!options_.replay_store.empty()) store_ = std::make_unique<ReplayStore>(options_.replay_store);
  if (!options_.embedding_cache.empty()) {
    cache_ = std::make_unique<EmbeddingCache>(options_.embedding_cache);
  }
}

std::string Gateway::Complete(const std::string& prompt) {
  const auto& ep = options_.completion;
  const std::string hash = PromptHash(ep.model_id, prompt);
  if (options_.mode != GatewayMode::kLive) {
    if (auto hit = store_->Find(hash)) return hit->response;
    if (options_.mode == GatewayMode::kReplay) {
      throw Error(ErrorCode::kReplayMiss, "no recorded response for prompt " + hash);
    }
  }
  CompletionResult result;
  {
    Slot slot(*this);
    result = backend_->Complete(ep, prompt);
  }
  if (options_.mode == GatewayMode::kRecord) {
    store_->Append({hash, ep.model_id, result.text, result.usage});
    return store_->Find(hash)->response;
  }
  return result.text;
}

std::vector<Embedding> Gateway::Embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to embed");
  const auto& ep = options_.embedding;
  std::vector<Embedding> out(texts.size());
  std::vector<size_t> missing;
  for (size_t i = 0; i < texts.size(); ++i) {
    if (cache_) {
      if (auto v = cache_->Find(PromptHash(ep.model_id, texts[i]))) {
        out[i] = std::move(*v);
        continue;
      }
    }
    missing.push_back(i);
  }
  if (!missing.empty() && options_.mode == GatewayMode::kReplay) {
    throw Error(ErrorCode::kReplayMiss,
                std::to_string(missing.size()) + " text(s) have no cached embedding");
  }
  for (size_t start = 0; start < missing.size(); start += ep.max_batch) {
    const size_t end = std::min(missing.size(), start + ep.max_batch);
    std::vector<std::string> batch;
    for (size_t j = start; j < end; ++j) batch.push_back(texts[missing[j]]);
    std::vector<Embedding> vectors;
    {
      Slot slot(*this);
      vectors = backend_->Embed(ep, batch);
    }
    if (vectors.size() != batch.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "backend returned the wrong number of vectors");
    }
    for (size_t j = start; j < end; ++j) {
      out[missing[j]] = std::move(vectors[j - start]);
      if (cache_) cache_->Put(PromptHash(ep.model_id, texts[missing[j]]), out[missing[j]]);
    }
  }
  const size_t dim = out.front().size();
  for (const auto& v : out) {
    if (v.size() != dim || dim == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "embeddings have ragged dimensions");
    }
  }
  return out;
}

EmbeddingFn Gateway::Embedder() {
  return [this](const std::vector<std::string>& texts) { return Embed(texts); };
}

std::string ExtractSql(std::string_view raw, std::string_view cue) {
  std::string_view text = raw;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  if (text.substr(0, 3) == "```") {
    const auto nl = text.find('\n');
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
      text.remove_prefix(1);
    }
  }

  std::string body(cue);
  const bool has_cue =
      text.size() >= cue.size() && IEquals(text.substr(0, cue.size()), cue) &&
      (text.size() == cue.size() ||
       !(std::isalnum(static_cast<unsigned char>(text[cue.size()])) || text[cue.size()] == '_'));
  if (has_cue) {
    body.append(text.substr(cue.size()));
  } else {
    body.push_back(' ');
    body.append(text);
  }

  size_t cut = body.size();
  char quote = 0;
  for (size_t i = cue.size(); i < body.size(); ++i) {
    const char c = body[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      quote = c;
    } else if (c == ';') {
      cut = i;
      break;
    } else if (c == '\n') {
      size_t j = i + 1;
      while (j < body.size() && (body[j] == ' ' || body[j] == '\t' || body[j] == '\r')) ++j;
      if (j >= body.size() || body[j] == '\n' || body.compare(j, 3, "```") == 0) {
        cut = i;
        break;
      }
    } else if (body.compare(i, 3, "```") == 0) {
      cut = i;
      break;
    }
  }
  std::string sql = CollapseWhitespace(std::string_view(body).substr(0, cut));
  if (sql.size() <= cue.size()) {
    throw Error(ErrorCode::kEmptyResponse, "response contains no SQL after the cue");
  }
  return sql;
}

}  // namespace t2sql
