#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace clonebench {

/// Hex SHA-256 of the canonical JSON array [model, temperature, text].
/// Model and temperature are part of the key so temperature sweeps never
/// share entries.
std::string request_hash(std::string_view model, double temperature, std::string_view text);

struct CacheEntry {
  std::string request_hash;
  std::string model;
  double temperature = 0.0;
  std::string response_text;
  std::int64_t latency_ms = 0;
};

/// Append-only JSON-lines response cache keyed by request hash.
///
/// Readers run concurrently; writers are serialized. The first successful
/// response stored for a hash wins and later stores of the same hash are
/// ignored, so replays are stable. A truncated final line (from an
/// interrupted run) is skipped on load.
class ResponseCache {
 public:
  /// Opens or creates the cache file. Parent directories are created.
  explicit ResponseCache(std::filesystem::path file);

  std::optional<CacheEntry> lookup(const std::string& hash) const;
  /// Returns false when the hash was already present.
  bool store(const CacheEntry& entry);
  std::size_t size() const;
  const std::filesystem::path& path() const { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
  std::ofstream out_;
};

}  // namespace clonebench
