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


#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "fixtures.hpp"
#include "httplib.h"
#include "t2sql/error.hpp"
#include "t2sql/gateway.hpp"
#include "t2sql/text.hpp"

namespace t2sql {
namespace {

using testing::ScriptedBackend;
using testing::TempDir;

TEST(ExtractSql, PrependsCueAndCutsAtTerminator) {
  EXPECT_EQ(ExtractSql(" movie_title FROM movies;"), "SELECT movie_title FROM movies");
  EXPECT_EQ(ExtractSql(" a FROM t\n\nThis query selects a."), "SELECT a FROM t");
  EXPECT_EQ(ExtractSql("```sql\nSELECT 1;\n```"), "SELECT 1");
  EXPECT_EQ(ExtractSql(" a\n  FROM   t\nWHERE b = 'x;y';"), "SELECT a FROM t WHERE b = 'x;y'");
  EXPECT_EQ(ExtractSql("select a from t"), "SELECT a from t");
  EXPECT_EQ(ExtractSql(" a FROM t\n```\nmore"), "SELECT a FROM t");
}

TEST(ExtractSql, EmptyResponse) {
  for (const char* raw : {"", "   ", ";", " ;\n\nexplanation", "SELECT ;"}) {
    try {
      ExtractSql(raw);
      FAIL() << raw;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kEmptyResponse) << raw;
    }
  }
}

TEST(ExtractSql, OutputInvariants) {
  for (const char* raw : {" x\nFROM y", "```\n z FROM w\n```", "SELECT\n\tq"}) {
    const auto s = ExtractSql(raw);
    EXPECT_EQ(s.rfind("SELECT", 0), 0u);
    EXPECT_EQ(s.find('\n'), std::string::npos);
  }
}

TEST(PromptHash, DependsOnModelAndBytes) {
  EXPECT_EQ(PromptHash("m", "p"), Sha256Hex(std::string("m\0p", 3)));
  EXPECT_NE(PromptHash("m", "p"), PromptHash("m2", "p"));
  EXPECT_NE(PromptHash("m", "p"), PromptHash("m", "p "));
  EXPECT_EQ(PromptHash("m", "p").size(), 64u);
}

TEST(ReplayStore, FirstRecordWinsAndPersists) {
  TempDir dir;
  const auto path = dir / "store.jsonl";
  {
    ReplayStore s(path);
    EXPECT_TRUE(s.Append({"h1", "m", "first", {1, 2}}));
    EXPECT_FALSE(s.Append({"h1", "m", "second", {1, 2}}));
    EXPECT_EQ(s.size(), 1u);
  }
  ReplayStore again(path);
  ASSERT_TRUE(again.Find("h1"));
  EXPECT_EQ(again.Find("h1")->response, "first");
  EXPECT_EQ(again.Find("h1")->usage.completion_tokens, 2);
  EXPECT_FALSE(again.Find("h2"));
  const auto line = nlohmann::json::parse(ReadFile(path).substr(0, ReadFile(path).find('\n')));
  for (const char* key : {"hash", "model", "response", "prompt_tokens", "completion_tokens"}) {
    EXPECT_TRUE(line.contains(key)) << key;
  }
}

GatewayOptions Options(GatewayMode mode, const std::string& store) {
  GatewayOptions o;
  o.completion.model_id = "test-model";
  o.embedding.model_id = "test-embed";
  o.mode = mode;
  o.replay_store = store;
  return o;
}

TEST(Gateway, ReplayServesStoredText) {
  TempDir dir;
  const auto path = dir / "store.jsonl";
  ReplayStore(path).Append({PromptHash("test-model", "P"), "test-model", "movie_title FROM movies", {}});
  Gateway g(Options(GatewayMode::kReplay, path), std::make_shared<testing::OfflineBackend>());
  EXPECT_EQ(g.Complete("P"), "movie_title FROM movies");
  EXPECT_EQ(g.wire_calls(), 0u);
  try {
    g.Complete("Q");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReplayMiss);
  }
}

TEST(Gateway, RecordCallsWireOncePerPrompt) {
  TempDir dir;
  auto backend = std::make_shared<ScriptedBackend>([](const std::string& p) { return "echo " + p; });
  Gateway g(Options(GatewayMode::kRecord, dir / "s.jsonl"), backend);
  EXPECT_EQ(g.Complete("x"), "echo x");
  EXPECT_EQ(g.Complete("x"), "echo x");
  EXPECT_EQ(backend->completions(), 1u);
  EXPECT_EQ(g.wire_calls(), 1u);
  Gateway replay(Options(GatewayMode::kReplay, dir / "s.jsonl"),
                 std::make_shared<testing::OfflineBackend>());
  EXPECT_EQ(replay.Complete("x"), "echo x");
}

TEST(Gateway, RecordAndReplayNeedAStore) {
  EXPECT_THROW(Gateway(Options(GatewayMode::kReplay, "")), Error);
  EXPECT_THROW(Gateway(Options(GatewayMode::kRecord, "")), Error);
}

TEST(Gateway, EmbedChunksCachesAndKeepsOrder) {
  TempDir dir;
  auto backend = std::make_shared<ScriptedBackend>([](const std::string&) { return ""; });
  auto o = Options(GatewayMode::kLive, "");
  o.embedding.max_batch = 32;
  o.embedding_cache = dir / "emb.jsonl";
  Gateway g(o, backend);
  std::vector<std::string> texts;
  for (int i = 0; i < 100; ++i) texts.push_back("text number " + std::to_string(i));
  const auto v = g.Embed(texts);
  ASSERT_EQ(v.size(), 100u);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[i], testing::HashEmbedding(texts[i]));
  EXPECT_EQ(backend->batch_sizes(), (std::vector<std::size_t>{32, 32, 32, 4}));
  // Served from the cache the second time, also across instances.
  g.Embed(texts);
  EXPECT_EQ(backend->embed_calls(), 4u);
  auto ro = o;
  ro.mode = GatewayMode::kReplay;
  ro.replay_store = dir / "unused.jsonl";
  Gateway replay(ro, std::make_shared<testing::OfflineBackend>());
  EXPECT_EQ(replay.Embed({texts[3], texts[1]})[1], v[1]);
  EXPECT_THROW(replay.Embed({"never seen"}), Error);
}

TEST(Gateway, EmbedRejectsEmptyInput) {
  Gateway g(Options(GatewayMode::kLive, ""),
            std::make_shared<ScriptedBackend>([](const std::string&) { return ""; }));
  try {
    g.Embed({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Gateway, ConcurrencyCapIsRespected) {
  std::atomic<int> now{0};
  std::atomic<int> peak{0};
  auto backend = std::make_shared<ScriptedBackend>([&](const std::string& p) {
    const int n = ++now;
    int prev = peak.load();
    while (n > prev && !peak.compare_exchange_weak(prev, n)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --now;
    return p;
  });
  auto o = Options(GatewayMode::kLive, "");
  o.max_in_flight = 2;
  Gateway g(o, backend);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&, i] { g.Complete(std::to_string(i)); });
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(backend->completions(), 8u);
}

// A local OpenAI-style server.
class MockServer {
 public:
  MockServer() {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      last_completion_ = body;
      if (fail_next_ > 0) {
        --fail_next_;
        res.status = 503;
        return;
      }
      auth_ = req.get_header_value("Authorization");
      res.set_content(nlohmann::json{{"choices", {{{"text", " 1;"}}}},
                                     {"usage", {{"prompt_tokens", 3}, {"completion_tokens", 2}}}}
                          .dump(),
                      "application/json");
    });
    server_.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", " 2"}}}}}}}
              .dump(),
          "application/json");
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      const auto n = body["input"].size();
      {
        std::lock_guard<std::mutex> lock(mu_);
        chunks_.push_back(n);
      }
      if (n > 16) {
        res.status = 400;
        res.set_content("batch too large", "text/plain");
        return;
      }
      nlohmann::json data = nlohmann::json::array();
      // Reverse order with explicit indices.
      for (std::size_t i = n; i-- > 0;) {
        data.push_back({{"index", i}, {"embedding", {1.0, static_cast<double>(i)}}});
      }
      res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    server_.Post("/v1/teapot", [](const httplib::Request&, httplib::Response& res) {
      res.status = 418;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  LlmEndpoint Endpoint() const {
    LlmEndpoint ep;
    ep.base_url = "http://127.0.0.1:" + std::to_string(port_);
    ep.model_id = "mock";
    ep.max_batch = 16;
    ep.backoff = std::chrono::milliseconds(1);
    ep.timeout = std::chrono::milliseconds(2000);
    return ep;
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::size_t> chunks_;
  nlohmann::json last_completion_;
  std::string auth_;
  std::atomic<int> fail_next_{0};
};

TEST(HttpBackend, CompletionWireFormatAndRetry) {
  MockServer server;
  auto ep = server.Endpoint();
  ep.api_key = "sk-test";
  ep.sampling_temperature = 0.001;
  ep.max_response_tokens = 200;
  server.fail_next_ = 2;
  const auto r = MakeHttpBackend()->Complete(ep, "### prompt\nSELECT");
  EXPECT_EQ(r.text, " 1;");
  EXPECT_EQ(r.usage.prompt_tokens, 3);
  EXPECT_EQ(server.last_completion_["model"], "mock");
  EXPECT_EQ(server.last_completion_["prompt"], "### prompt\nSELECT");
  EXPECT_DOUBLE_EQ(server.last_completion_["temperature"].get<double>(), 0.001);
  EXPECT_EQ(server.last_completion_["max_tokens"], 200);
  EXPECT_EQ(server.auth_, "Bearer sk-test");
}

TEST(HttpBackend, BaseUrlWithVersionSuffix) {
  MockServer server;
  auto ep = server.Endpoint();
  ep.base_url += "/v1";
  EXPECT_EQ(MakeHttpBackend()->Complete(ep, "p").text, " 1;");
}

TEST(HttpBackend, ChatStyle) {
  MockServer server;
  auto ep = server.Endpoint();
  ep.chat_style = true;
  EXPECT_EQ(MakeHttpBackend()->Complete(ep, "p").text, " 2");
}

TEST(HttpBackend, RetriesExhaustedAndClientErrors) {
  MockServer server;
  auto ep = server.Endpoint();
  server.fail_next_ = 5;
  try {
    MakeHttpBackend()->Complete(ep, "p");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHttpStatus);
  }
  ep.completion_path = "/v1/teapot";
  try {
    MakeHttpBackend()->Complete(ep, "p");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHttpStatus);
  }
}

TEST(HttpBackend, UnreachableEndpoint) {
  LlmEndpoint ep;
  {
    MockServer server;
    ep = server.Endpoint();
  }
  ep.max_attempts = 2;
  try {
    MakeHttpBackend()->Complete(ep, "p");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnreachable);
  }
}

TEST(HttpBackend, EmbeddingsChunkedToServerLimit) {
  MockServer server;
  GatewayOptions o;
  o.embedding = server.Endpoint();
  o.completion = server.Endpoint();
  Gateway g(o);
  std::vector<std::string> texts(100);
  for (int i = 0; i < 100; ++i) texts[i] = "t" + std::to_string(i);
  const auto v = g.Embed(texts);
  ASSERT_EQ(v.size(), 100u);
  EXPECT_EQ(server.chunks_, (std::vector<std::size_t>{16, 16, 16, 16, 16, 16, 4}));
  // Index field restores input order inside each chunk.
  EXPECT_EQ(v[17], (Embedding{1.0, 1.0}));
  EXPECT_EQ(v[99], (Embedding{1.0, 3.0}));
}

TEST(Modes, ParseAndName) {
  for (auto m : {GatewayMode::kLive, GatewayMode::kRecord, GatewayMode::kReplay}) {
    EXPECT_EQ(ParseGatewayMode(GatewayModeName(m)), m);
  }
  EXPECT_THROW(ParseGatewayMode("offline"), Error);
}

}  // namespace
}  // namespace t2sql
