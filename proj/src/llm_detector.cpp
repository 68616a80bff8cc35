#include "clonebench/llm_detector.hpp"

#include "clonebench/error.hpp"
#include "clonebench/text.hpp"

namespace clonebench {

LlmSettings LlmSettings::from_config(const DetectorConfig& config) {
  LlmSettings s;
  s.model = config.param("model", s.model);
  s.temperature = config.param_double("temperature", s.temperature);
  if (s.temperature < 0.0 || s.temperature > 2.0) throw Error("temperature must lie in [0, 2]");
  const std::string body = config.param("template_body", "");
  s.prompt = body.empty() ? PromptTemplate::by_name(config.param("template", "prompt2")) : PromptTemplate::custom(body);
  const std::string mode = to_lower_ascii(config.param("verdict_mode", "strict"));
  if (mode == "strict") {
    s.mode = VerdictMode::Strict;
  } else if (mode == "fallback") {
    s.mode = VerdictMode::Fallback;
  } else {
    throw Error("verdict_mode must be strict or fallback, not " + mode);
  }
  const long long concurrency = config.param_int("concurrency", static_cast<long long>(s.max_concurrency));
  if (concurrency < 1) throw Error("concurrency must be at least 1");
  s.max_concurrency = static_cast<std::size_t>(concurrency);
  return s;
}

LlmDetector::LlmDetector(DetectorConfig config, LlmSettings settings, std::shared_ptr<ChatClient> client,
                         std::shared_ptr<ResponseCache> cache)
    : config_(std::move(config)), settings_(std::move(settings)), client_(std::move(client)), cache_(std::move(cache)) {
  if (!client_) throw Error("LlmDetector needs a chat client");
}

LlmCallRecord LlmDetector::call_model(const RenderedPrompt& prompt) {
  LlmCallRecord record;
  record.request_hash = request_hash(settings_.model, settings_.temperature, prompt.text);
  if (cache_) {
    if (const auto hit = cache_->lookup(record.request_hash)) {
      ++cache_hits_;
      record.response_text = hit->response_text;
      record.latency_ms = hit->latency_ms;
      record.attempt_count = 0;
      return record;
    }
  }
  const ChatCompletion done = client_->complete(settings_.model, settings_.temperature, prompt.text);
  record.response_text = done.text;
  record.latency_ms = done.latency_ms;
  record.attempt_count = done.attempts;
  if (cache_) {
    cache_->store(CacheEntry{record.request_hash, settings_.model, settings_.temperature, record.response_text,
                             record.latency_ms});
  }
  return record;
}

Verdict LlmDetector::classify(const ClonePair& pair) {
  if (pair.code1.source.empty() || pair.code2.source.empty()) throw DetectorFailure(pair.pair_id, "empty source");
  const RenderedPrompt prompt = render_prompt(pair, settings_.prompt);
  LlmCallRecord record;
  try {
    record = call_model(prompt);
  } catch (const TransportError& e) {
    throw DetectorFailure(pair.pair_id, e.what());
  }
  try {
    Verdict v = parse_verdict(record.response_text, settings_.mode);
    v.latency_ms = record.latency_ms;
    return v;
  } catch (const AmbiguousResponse& e) {
    throw DetectorFailure(pair.pair_id, e.what());
  }
}

}  // namespace clonebench
