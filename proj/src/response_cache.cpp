#include "clonebench/response_cache.hpp"

#include <array>
#include <cstdio>
#include <mutex>

#include <nlohmann/json.hpp>
#include <openssl/sha.h>

#include "clonebench/error.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace clonebench {

std::string request_hash(std::string_view model, double temperature, std::string_view text) {
  const std::string canonical = json::array({std::string(model), temperature, std::string(text)}).dump();
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest.data());
  std::string hex;
  hex.reserve(digest.size() * 2);
  char buf[3];
  for (const unsigned char b : digest) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    hex += buf;
  }
  return hex;
}

ResponseCache::ResponseCache(fs::path file) : file_(std::move(file)) {
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
  {
    std::ifstream in(file_, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        continue;  // truncated tail of an interrupted write
      }
      CacheEntry e;
      e.request_hash = j.at("request_hash").get<std::string>();
      e.model = j.value("model", "");
      e.temperature = j.value("temperature", 0.0);
      e.response_text = j.at("response_text").get<std::string>();
      e.latency_ms = j.value("latency_ms", std::int64_t{0});
      entries_.emplace(e.request_hash, std::move(e));
    }
  }
  out_.open(file_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open response cache " + file_.string());
}

std::optional<CacheEntry> ResponseCache::lookup(const std::string& hash) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool ResponseCache::store(const CacheEntry& entry) {
  std::unique_lock lock(mutex_);
  if (!entries_.emplace(entry.request_hash, entry).second) return false;
  json j;
  j["request_hash"] = entry.request_hash;
  j["model"] = entry.model;
  j["temperature"] = entry.temperature;
  j["response_text"] = entry.response_text;
  j["latency_ms"] = entry.latency_ms;
  out_ << j.dump() << '\n';
  out_.flush();
  if (!out_) throw Error("write to response cache " + file_.string() + " failed");
  return true;
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace clonebench
