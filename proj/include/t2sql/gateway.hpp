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


// Completion and embedding client over an OpenAI-compatible HTTP wire, with
// a record/replay store so whole runs can be repeated offline.

#ifndef T2SQL_GATEWAY_HPP_
#define T2SQL_GATEWAY_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "t2sql/curation.hpp"

namespace t2sql {

struct LlmEndpoint {
  std::string base_url = "http://127.0.0.1:8000";
  std::string model_id;
  double sampling_temperature = 0.001;
  int max_response_tokens = 200;
  std::chrono::milliseconds timeout{60000};
  std::string api_key;  // never serialized
  std::string completion_path = "/v1/completions";
  std::string chat_path = "/v1/chat/completions";
  std::string embedding_path = "/v1/embeddings";
  bool chat_style = false;
  std::size_t max_batch = 32;
  int max_attempts = 3;
  std::chrono::milliseconds backoff{500};

  void Validate() const;
};

nlohmann::json EndpointToJson(const LlmEndpoint& endpoint);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct CompletionResult {
  std::string text;
  Usage usage;
};

// Transport. Implementations must be safe to call from several threads.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual CompletionResult Complete(const LlmEndpoint& endpoint, const std::string& prompt) = 0;
  // One call per batch; batch size never exceeds endpoint.max_batch.
  virtual std::vector<Embedding> Embed(const LlmEndpoint& endpoint,
                                       const std::vector<std::string>& batch) = 0;
};

// JSON over HTTP(S). Retries connection failures, 429 and 5xx with
// exponential backoff; then throws EndpointUnreachable or HttpStatusError.
std::shared_ptr<LlmBackend> MakeHttpBackend();

// Hex SHA-256 over model id, a NUL byte, and the exact prompt bytes.
std::string PromptHash(std::string_view model_id, std::string_view prompt);

struct CompletionRecord {
  std::string hash;
  std::string model;
  std::string response;
  Usage usage;
};

// Append-only JSONL of CompletionRecord. The first record for a hash wins.
class ReplayStore {
 public:
  explicit ReplayStore(std::string path);

  std::optional<CompletionRecord> Find(const std::string& hash) const;
  // Returns false (and writes nothing) when the hash is already present.
  bool Append(const CompletionRecord& record);
  std::size_t size() const;

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, CompletionRecord> records_;
};

// Append-only JSONL of {key, dim, vector}; key = PromptHash(model, text).
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::string path);

  std::optional<Embedding> Find(const std::string& key) const;
  void Put(const std::string& key, const Embedding& vector);
  std::size_t size() const;

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Embedding> vectors_;
};

enum class GatewayMode { kLive, kRecord, kReplay };

std::string_view GatewayModeName(GatewayMode mode);
GatewayMode ParseGatewayMode(std::string_view name);

struct GatewayOptions {
  LlmEndpoint completion;
  LlmEndpoint embedding;
  GatewayMode mode = GatewayMode::kLive;
  std::string replay_store;     // required for record and replay
  std::string embedding_cache;  // required for replay when embedding
  std::size_t max_in_flight = 4;
};

class Gateway {
 public:
  // A null backend selects the HTTP backend.
  explicit Gateway(GatewayOptions options, std::shared_ptr<LlmBackend> backend = nullptr);

  // Raw model text for the prompt. Replay serves only from the store
  // (ReplayMiss otherwise); record serves stored prompts and stores new ones.
  std::string Complete(const std::string& prompt);

  // One vector per text, input order, uniform dimension.
  std::vector<Embedding> Embed(const std::vector<std::string>& texts);
  EmbeddingFn Embedder();

  std::size_t wire_calls() const { return wire_calls_; }
  const GatewayOptions& options() const { return options_; }

 private:
  class Slot;

  GatewayOptions options_;
  std::shared_ptr<LlmBackend> backend_;
  std::unique_ptr<ReplayStore> store_;
  std::unique_ptr<EmbeddingCache> cache_;
  std::mutex slot_mu_;
  std::condition_variable slot_cv_;
  std::size_t in_flight_ = 0;
  std::atomic<std::size_t> wire_calls_{0};
};

// First SQL statement of a model response: leading code fence removed, the
// cue prepended unless already present, cut at the first semicolon outside
// quotes, blank line or closing fence, whitespace collapsed. Throws
// EmptyResponse when nothing follows the cue.
std::string ExtractSql(std::string_view raw, std::string_view cue = "SELECT");

}  // namespace t2sql

#endif  // T2SQL_GATEWAY_HPP_
