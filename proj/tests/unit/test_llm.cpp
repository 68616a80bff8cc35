#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "clonebench/chat_client.hpp"
#include "clonebench/error.hpp"
#include "clonebench/evaluation.hpp"
#include "clonebench/llm_detector.hpp"
#include "clonebench/response_cache.hpp"
#include "fixture_corpus.hpp"
#include "stub_chat_server.hpp"

using namespace clonebench;
using fixture::StubChatServer;
using fixture::StubReply;

namespace {

ClonePair pair_of(long long id, std::string a, std::string b, int label) {
  ClonePair p;
  p.pair_id = id;
  p.code1 = {"p1", "s" + std::to_string(2 * id), Language::java(), std::move(a)};
  p.code2 = {label ? "p1" : "p2", "s" + std::to_string(2 * id + 1), Language::java(), std::move(b)};
  p.label = label;
  return p;
}

RetryPolicy fast_retry(int attempts = 4) {
  RetryPolicy r;
  r.max_attempts = attempts;
  r.initial_backoff = std::chrono::milliseconds(5);
  r.max_backoff = std::chrono::milliseconds(50);
  return r;
}

std::shared_ptr<ChatClient> client_for(const StubChatServer& server, RetryPolicy retry = fast_retry(),
                                       std::string key = "test-key") {
  ChatEndpoint e;
  e.base_url = server.base_url();
  e.api_key = std::move(key);
  e.timeout = std::chrono::seconds(5);
  return std::make_shared<ChatClient>(e, retry);
}

LlmDetector detector_for(std::shared_ptr<ChatClient> client, std::shared_ptr<ResponseCache> cache = nullptr,
                         LlmSettings settings = {}) {
  return LlmDetector(DetectorConfig{"llm", {}}, std::move(settings), std::move(client), std::move(cache));
}

// Answers by whether the two sources in the prompt are equal.
StubReply same_text_oracle(const std::string& prompt) {
  const auto first = prompt.find(",\n");
  const auto second = prompt.find(",\n", first + 2);
  const bool same = prompt.substr(0, first) == prompt.substr(first + 2, second - first - 2);
  return StubReply{200, same ? "Yes" : "No.", "", ""};
}

std::vector<ClonePair> small_dataset(std::size_t n) {
  std::vector<ClonePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string a = fixture::java_source(i, 0, 3);
    const bool pos = i % 2 == 0;
    pairs.push_back(pair_of(static_cast<long long>(i), a, pos ? a : fixture::java_source(i + 1, 1, 3), pos ? 1 : 0));
  }
  return pairs;
}

}  // namespace

TEST_CASE("Yes and No replies round-trip to labels") {
  StubChatServer server(same_text_oracle);
  LlmDetector det = detector_for(client_for(server));
  const Verdict yes = det.classify(pair_of(0, "int a;", "int a;", 1));
  CHECK(yes.label == 1);
  CHECK(yes.raw == "Yes");
  const Verdict no = det.classify(pair_of(1, "int a;", "int b;", 0));
  CHECK(no.label == 0);
  CHECK(no.raw == "No.");
  CHECK(server.requests() == 2);
}

TEST_CASE("wire format: bearer token, model, temperature and one user message") {
  StubChatServer server(same_text_oracle);
  LlmSettings s;
  s.model = "gpt-3.5-turbo";
  s.temperature = 0.1;
  LlmDetector det = detector_for(client_for(server), nullptr, s);
  det.classify(pair_of(0, "x", "y", 0));
  REQUIRE(server.bodies().size() == 1);
  CHECK(server.authorization_headers().at(0) == "Bearer test-key");
  const auto body = nlohmann::json::parse(server.bodies().at(0));
  CHECK(body.at("model") == "gpt-3.5-turbo");
  CHECK(body.at("temperature").get<double>() == 0.1);
  REQUIRE(body.at("messages").size() == 1);
  CHECK(body.at("messages").at(0).at("role") == "user");
  CHECK(body.at("messages").at(0).at("content") == render_prompt(pair_of(0, "x", "y", 0), s.prompt).text);
}

TEST_CASE("429, 429, 200 succeeds on the third attempt") {
  StubChatServer server(same_text_oracle);
  server.script({{429, "slow down", "", ""}, {429, "", "0", ""}, {200, "Yes", "", ""}});
  LlmDetector det = detector_for(client_for(server));
  const LlmCallRecord r = det.call_model(render_prompt(pair_of(0, "a", "b", 0), PromptTemplate::prompt2()));
  CHECK(r.attempt_count == 3);
  CHECK(r.response_text == "Yes");
  CHECK(server.requests() == 3);
}

TEST_CASE("5xx is retried; exhausted retries become a pair failure") {
  StubChatServer server([](const std::string&) { return StubReply{503, "", "", ""}; });
  auto client = client_for(server, fast_retry(3));
  LlmDetector det = detector_for(client);
  CHECK_THROWS_AS(det.call_model(render_prompt(pair_of(0, "a", "b", 0), PromptTemplate::prompt2())), TransportError);
  CHECK(server.requests() == 3);
  CHECK_THROWS_AS(det.classify(pair_of(1, "a", "b", 0)), DetectorFailure);
}

TEST_CASE("401 raises AuthError without retrying, and evaluation stops") {
  StubChatServer server([](const std::string&) { return StubReply{401, "bad key", "", ""}; });
  LlmDetector det = detector_for(client_for(server));
  CHECK_THROWS_AS(det.classify(pair_of(0, "a", "b", 0)), AuthError);
  CHECK(server.requests() == 1);
  CHECK_THROWS_AS(evaluate(small_dataset(6), det, 2), AuthError);
}

TEST_CASE("a missing API key fails before any request") {
  StubChatServer server(same_text_oracle);
  LlmDetector det = detector_for(client_for(server, fast_retry(), ""));
  CHECK_THROWS_AS(det.classify(pair_of(0, "a", "b", 0)), AuthError);
  CHECK(server.requests() == 0);
}

TEST_CASE("malformed bodies and ambiguous replies are pair failures") {
  StubChatServer server(same_text_oracle);
  server.script({{200, "", "", "{\"choices\": []}"}, {200, "", "", "not json"}, {200, "Perhaps.", "", ""}});
  LlmDetector det = detector_for(client_for(server));
  for (long long id = 0; id < 3; ++id) {
    try {
      det.classify(pair_of(id, "a", "b", 0));
      FAIL("expected DetectorFailure");
    } catch (const DetectorFailure& e) {
      CHECK(e.pair_id() == id);
    }
  }
  CHECK(server.requests() == 3);
  CHECK_THROWS_AS(det.classify(pair_of(3, "", "b", 0)), DetectorFailure);
  CHECK(server.requests() == 3);
}

TEST_CASE("a warm cache replays a run with zero requests") {
  const auto dir = fixture::scratch_dir("llm-cache");
  const auto pairs = small_dataset(24);
  StubChatServer server(same_text_oracle);
  server.script({{200, "", "", "{}"}});
  std::vector<PredictionRecord> cold;
  {
    LlmDetector det = detector_for(client_for(server), std::make_shared<ResponseCache>(dir / "responses.jsonl"));
    cold = evaluate(pairs, det, 4);
  }
  CHECK(server.requests() == 24);
  std::size_t failed = 0;
  for (const auto& r : cold) failed += r.evaluated() ? 0 : 1;
  CHECK(failed == 1);

  const std::size_t before = server.requests();
  auto cache = std::make_shared<ResponseCache>(dir / "responses.jsonl");
  CHECK(cache->size() == 23);
  // Only the failed pair goes back to the network.
  LlmDetector warm = detector_for(client_for(server), cache);
  const auto again = evaluate(pairs, warm, 4);
  CHECK(server.requests() == before + 1);
  CHECK(warm.cache_hits() == 23);

  const std::size_t settled = server.requests();
  LlmDetector replay = detector_for(client_for(server), std::make_shared<ResponseCache>(dir / "responses.jsonl"));
  const auto third = evaluate(pairs, replay, 4);
  CHECK(server.requests() == settled);
  std::ostringstream a;
  std::ostringstream b;
  write_predictions(a, again);
  write_predictions(b, third);
  CHECK(a.str() == b.str());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (cold[i].evaluated()) CHECK(cold[i] == third[i]);
  }
}

TEST_CASE("request hash separates model, temperature and text") {
  const std::string h = request_hash("gpt-3.5-turbo", 0.3, "hello");
  CHECK(h.size() == 64);
  CHECK(h == request_hash("gpt-3.5-turbo", 0.3, "hello"));
  std::set<std::string> distinct{h};
  distinct.insert(request_hash("gpt-3.5-turbo", 0.1, "hello"));
  distinct.insert(request_hash("gpt-3.5-turbo", 0.5, "hello"));
  distinct.insert(request_hash("gpt-4", 0.3, "hello"));
  distinct.insert(request_hash("gpt-3.5-turbo", 0.3, "hello "));
  distinct.insert(request_hash("gpt-3.5-turbo0.3", 0.0, "hello"));
  CHECK(distinct.size() == 6);
  // sha256('["m",0.5,"t"]')
  CHECK(request_hash("m", 0.5, "t") == "99538e8fd00b92ba035e98d8b8d776f0c97079e9af97d90c8442f2c0cf36cc89");
}

TEST_CASE("cache: first store wins and a truncated tail is skipped") {
  const auto dir = fixture::scratch_dir("llm-cache-file");
  const auto file = dir / "c.jsonl";
  {
    ResponseCache c(file);
    CHECK(c.store(CacheEntry{"h1", "m", 0.3, "Yes", 10}));
    CHECK_FALSE(c.store(CacheEntry{"h1", "m", 0.3, "No", 11}));
    CHECK(c.store(CacheEntry{"h2", "m", 0.3, "No\n\"quoted\"", 12}));
  }
  std::ofstream(file, std::ios::app) << "{\"request_hash\":\"h3\",\"respo";
  ResponseCache c(file);
  CHECK(c.size() == 2);
  CHECK(c.lookup("h1")->response_text == "Yes");
  CHECK(c.lookup("h1")->latency_ms == 10);
  CHECK(c.lookup("h2")->response_text == "No\n\"quoted\"");
  CHECK_FALSE(c.lookup("h3").has_value());
}

TEST_CASE("retry backoff doubles up to the cap") {
  RetryPolicy r;
  r.initial_backoff = std::chrono::milliseconds(500);
  r.max_backoff = std::chrono::milliseconds(3000);
  CHECK(r.backoff_after(1).count() == 500);
  CHECK(r.backoff_after(2).count() == 1000);
  CHECK(r.backoff_after(3).count() == 2000);
  CHECK(r.backoff_after(4).count() == 3000);
  CHECK(r.backoff_after(10).count() == 3000);
}

TEST_CASE("rate limiter spaces acquisitions") {
  RateLimiter limiter(50.0, 1.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire();
  const auto elapsed = std::chrono::steady_clock::now() - start;
  // One token up front, then five at 20 ms each.
  CHECK(elapsed >= std::chrono::milliseconds(90));
  RateLimiter off(0.0, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) off.acquire();
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::milliseconds(50));
}

TEST_CASE("settings from detector config") {
  const LlmSettings d = LlmSettings::from_config(DetectorConfig{"llm", {}});
  CHECK(d.model == "gpt-3.5-turbo");
  CHECK(d.temperature == 0.3);
  CHECK(d.prompt.id() == PromptTemplate::Id::Prompt2);
  CHECK(d.mode == VerdictMode::Strict);

  const LlmSettings s = LlmSettings::from_config(DetectorConfig{
      "llm", {{"model", "m"}, {"temperature", "0.5"}, {"template", "prompt1"}, {"verdict_mode", "fallback"}, {"concurrency", "2"}}});
  CHECK(s.model == "m");
  CHECK(s.temperature == 0.5);
  CHECK(s.prompt.id() == PromptTemplate::Id::Prompt1);
  CHECK(s.mode == VerdictMode::Fallback);
  CHECK(s.max_concurrency == 2);
  CHECK(LlmSettings::from_config(DetectorConfig{"llm", {{"template_body", "<{code1}|{code2}>"}}}).prompt.id() ==
        PromptTemplate::Id::Custom);

  CHECK_THROWS_AS(LlmSettings::from_config(DetectorConfig{"llm", {{"temperature", "2.5"}}}), Error);
  CHECK_THROWS_AS(LlmSettings::from_config(DetectorConfig{"llm", {{"verdict_mode", "lenient"}}}), Error);
  CHECK_THROWS_AS(LlmSettings::from_config(DetectorConfig{"llm", {{"concurrency", "0"}}}), Error);
  CHECK_THROWS_AS(LlmSettings::from_config(DetectorConfig{"llm", {{"template", "prompt9"}}}), TemplateError);
}

TEST_CASE("base URLs need a scheme") {
  ChatEndpoint e;
  e.base_url = "localhost:8080/v1";
  CHECK_THROWS_AS(ChatClient(e, RetryPolicy{}), Error);
}
