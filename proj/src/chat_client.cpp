#include "clonebench/chat_client.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "clonebench/error.hpp"

using json = nlohmann::ordered_json;

namespace clonebench {

std::chrono::milliseconds RetryPolicy::backoff_after(int attempt) const {
  const double ms = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, attempt - 1);
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::min(ms, static_cast<double>(max_backoff.count()))));
}

ChatEndpoint ChatEndpoint::from_environment(const std::string& default_base_url) {
  ChatEndpoint e;
  const char* base = std::getenv(kBaseUrlEnv);
  e.base_url = (base != nullptr && *base != '\0') ? base : default_base_url;
  const char* key = std::getenv(kApiKeyEnv);
  if (key != nullptr) e.api_key = key;
  return e;
}

RateLimiter::RateLimiter(double rate, double burst)
    : rate_(rate), burst_(std::max(1.0, burst)), tokens_(std::max(1.0, burst)), last_(Clock::now()) {}

void RateLimiter::acquire() {
  if (rate_ <= 0.0) return;
  std::unique_lock lock(mutex_);
  while (true) {
    const auto now = Clock::now();
    tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    lock.unlock();
    std::this_thread::sleep_for(wait);
    lock.lock();
  }
}

ChatClient::ChatClient(ChatEndpoint endpoint, RetryPolicy retry, std::shared_ptr<RateLimiter> limiter)
    : endpoint_(std::move(endpoint)), retry_(retry), limiter_(std::move(limiter)) {
  std::string url = endpoint_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("base URL must include a scheme: " + endpoint_.base_url);
  const std::size_t slash = url.find('/', scheme + 3);
  origin_ = url.substr(0, slash);
  path_ = (slash == std::string::npos ? std::string() : url.substr(slash)) + "/chat/completions";
  if (retry_.max_attempts < 1) throw Error("retry policy needs at least one attempt");
}

namespace {

enum class Outcome { Success, Retry, Auth, Fatal };

}  // namespace

ChatCompletion ChatClient::complete(const std::string& model, double temperature, const std::string& user_content) {
  if (endpoint_.api_key.empty()) throw AuthError(std::string("no API key: set ") + kApiKeyEnv);

  json body;
  body["model"] = model;
  body["temperature"] = temperature;
  body["messages"] = json::array({json{{"role", "user"}, {"content", user_content}}});
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + endpoint_.api_key}};

  const auto started = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (limiter_) limiter_->acquire();
    httplib::Client client(origin_);
    client.set_connection_timeout(endpoint_.timeout);
    client.set_read_timeout(endpoint_.timeout);
    client.set_write_timeout(endpoint_.timeout);
    ++requests_;
    const auto res = client.Post(path_, headers, payload, "application/json");

    Outcome outcome = Outcome::Fatal;
    std::chrono::milliseconds retry_after{-1};
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      outcome = Outcome::Retry;
    } else if (res->status == 200) {
      try {
        const json j = json::parse(res->body);
        ChatCompletion done;
        done.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        done.attempts = attempt;
        done.latency_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
        return done;
      } catch (const json::exception& e) {
        throw TransportError(std::string("malformed chat completion response: ") + e.what());
      }
    } else {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
      if (res->status == 401 || res->status == 403) {
        outcome = Outcome::Auth;
      } else if (res->status == 429 || res->status == 408 || res->status >= 500) {
        outcome = Outcome::Retry;
        if (res->has_header("Retry-After")) {
          try {
            retry_after = std::chrono::milliseconds(
                static_cast<std::int64_t>(std::stod(res->get_header_value("Retry-After")) * 1000.0));
          } catch (const std::exception&) {
          }
        }
      }
    }

    if (outcome == Outcome::Auth) throw AuthError(last_error);
    if (outcome == Outcome::Fatal) throw TransportError(last_error);
    if (attempt == retry_.max_attempts) break;
    auto delay = retry_.backoff_after(attempt);
    if (retry_after.count() >= 0) delay = std::min(std::max(delay, retry_after), retry_.max_backoff);
    std::this_thread::sleep_for(delay);
  }
  throw TransportError("giving up after " + std::to_string(retry_.max_attempts) + " attempts; last error: " +
                       last_error);
}

}  // namespace clonebench
