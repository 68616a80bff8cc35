#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "clonebench/sampler.hpp"

namespace clonebench {

/// A detector's decision for one pair. `raw` is the detector's underlying
/// output kept verbatim for audit.
struct Verdict {
  int label = 0;
  std::string raw;
  std::optional<double> confidence;
  /// Detector-reported time spent on the pair. Offline detectors report 0 so
  /// their output stays reproducible; the LLM detector reports the latency of
  /// the (possibly cached) model call.
  std::int64_t latency_ms = 0;
};

struct DetectorConfig {
  std::string detector_id;
  std::map<std::string, std::string> params;

  std::string param(const std::string& key, const std::string& fallback) const;
  double param_double(const std::string& key, double fallback) const;
  long long param_int(const std::string& key, long long fallback) const;
};

class Detector {
 public:
  virtual ~Detector() = default;

  virtual const std::string& id() const = 0;
  /// Throws DetectorFailure when no verdict can be produced.
  virtual Verdict classify(const ClonePair& pair) = 0;
  /// Upper bound on concurrent classify() calls the detector tolerates.
  virtual std::size_t max_concurrency() const { return 1; }
};

/// Offline baseline: label 1 when lexical_similarity(code1, code2) reaches
/// the threshold (param "threshold", default 0.5).
class LexicalDetector final : public Detector {
 public:
  explicit LexicalDetector(DetectorConfig config);

  const std::string& id() const override { return config_.detector_id; }
  Verdict classify(const ClonePair& pair) override;
  std::size_t max_concurrency() const override { return 64; }
  double threshold() const { return threshold_; }

 private:
  DetectorConfig config_;
  double threshold_;
};

/// Replays a fixed answer key. Pairs absent from the key fail.
class ScriptedDetector final : public Detector {
 public:
  ScriptedDetector(DetectorConfig config, std::map<long long, int> answers);

  /// Reads a JSON object `{"<pair_id>": 0|1, ...}`.
  static std::map<long long, int> load_answers(const std::filesystem::path& file);

  const std::string& id() const override { return config_.detector_id; }
  Verdict classify(const ClonePair& pair) override;
  std::size_t max_concurrency() const override { return 64; }

 private:
  DetectorConfig config_;
  std::map<long long, int> answers_;
};

}  // namespace clonebench
