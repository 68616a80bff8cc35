#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

namespace clonebench {

inline constexpr const char* kApiKeyEnv = "CLONEBENCH_API_KEY";
inline constexpr const char* kBaseUrlEnv = "CLONEBENCH_BASE_URL";
inline constexpr const char* kDefaultBaseUrl = "https://api.openai.com/v1";

struct RetryPolicy {
  /// Total HTTP attempts per request, including the first.
  int max_attempts = 6;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30'000};

  /// Delay before attempt `attempt + 1` (attempt counts from 1).
  std::chrono::milliseconds backoff_after(int attempt) const;
};

struct ChatEndpoint {
  std::string base_url = kDefaultBaseUrl;
  std::string api_key;
  std::chrono::seconds timeout{120};

  /// Reads CLONEBENCH_BASE_URL (falling back to `default_base_url`) and
  /// CLONEBENCH_API_KEY.
  static ChatEndpoint from_environment(const std::string& default_base_url = kDefaultBaseUrl);
};

/// Token bucket: `rate` tokens per second, holding at most `burst`.
/// A non-positive rate disables limiting.
class RateLimiter {
 public:
  RateLimiter(double rate, double burst);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mutex_;
};

struct ChatCompletion {
  std::string text;
  int attempts = 0;
  std::int64_t latency_ms = 0;
};

/// Client for an OpenAI-style `POST {base_url}/chat/completions` endpoint.
///
/// The prompt is sent as a single user message. 429, 408, 5xx and connection
/// failures are retried with exponential backoff (a Retry-After header, when
/// present, is honoured up to the backoff cap). 401/403 raise AuthError at
/// once; other statuses, malformed bodies and exhausted retries raise
/// TransportError. Safe for concurrent use.
class ChatClient {
 public:
  ChatClient(ChatEndpoint endpoint, RetryPolicy retry, std::shared_ptr<RateLimiter> limiter = nullptr);

  ChatCompletion complete(const std::string& model, double temperature, const std::string& user_content);

  /// HTTP requests issued so far, retries included.
  std::size_t requests_sent() const { return requests_.load(); }
  const ChatEndpoint& endpoint() const { return endpoint_; }

 private:
  ChatEndpoint endpoint_;
  RetryPolicy retry_;
  std::shared_ptr<RateLimiter> limiter_;
  std::string origin_;
  std::string path_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace clonebench
