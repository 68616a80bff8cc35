#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "clonebench/chat_client.hpp"
#include "clonebench/detector.hpp"
#include "clonebench/prompt.hpp"
#include "clonebench/response_cache.hpp"

namespace clonebench {

struct LlmSettings {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.3;
  PromptTemplate prompt = PromptTemplate::prompt2();
  VerdictMode mode = VerdictMode::Strict;
  std::size_t max_concurrency = 4;

  /// Reads params "model", "temperature", "template" (prompt1|prompt2),
  /// "template_body" (custom text, overrides "template"), "verdict_mode"
  /// (strict|fallback) and "concurrency".
  static LlmSettings from_config(const DetectorConfig& config);
};

struct LlmCallRecord {
  std::string request_hash;
  std::string response_text;
  std::int64_t latency_ms = 0;
  /// HTTP attempts made; 0 for a cache hit.
  int attempt_count = 0;
};

/// Zero-shot clone detector: renders the pair into a prompt, asks the chat
/// model, and maps its yes/no reply to a label.
class LlmDetector final : public Detector {
 public:
  /// `cache` may be null, in which case every call goes to the network.
  LlmDetector(DetectorConfig config, LlmSettings settings, std::shared_ptr<ChatClient> client,
              std::shared_ptr<ResponseCache> cache);

  const std::string& id() const override { return config_.detector_id; }
  /// AuthError propagates (it affects every pair alike); transport failures
  /// and unparseable replies become DetectorFailure.
  Verdict classify(const ClonePair& pair) override;
  std::size_t max_concurrency() const override { return settings_.max_concurrency; }

  /// Consults the cache, then the network; successful replies are cached.
  LlmCallRecord call_model(const RenderedPrompt& prompt);

  const LlmSettings& settings() const { return settings_; }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  DetectorConfig config_;
  LlmSettings settings_;
  std::shared_ptr<ChatClient> client_;
  std::shared_ptr<ResponseCache> cache_;
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace clonebench
