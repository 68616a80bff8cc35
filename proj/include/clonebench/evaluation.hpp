#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clonebench/detector.hpp"

namespace clonebench {

/// Outcome of classifying one pair. A pair the detector failed on has no
/// label and carries the failure cause in `error`.
struct PredictionRecord {
  long long pair_id = 0;
  std::optional<int> label;
  std::string raw;
  std::string detector_id;
  std::int64_t latency_ms = 0;
  std::optional<std::string> error;

  bool evaluated() const { return label.has_value(); }
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Classifies every pair with up to min(concurrency, detector.max_concurrency())
/// calls in flight. Results come back in pair_id order. DetectorFailure marks
/// the pair unevaluated; any other exception stops the run and is rethrown
/// once in-flight calls have finished.
std::vector<PredictionRecord> evaluate(const std::vector<ClonePair>& pairs, Detector& detector,
                                       std::size_t concurrency = 1);

std::string to_json_line(const PredictionRecord& record);
PredictionRecord prediction_from_json_line(const std::string& line);

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records);
void write_predictions(const std::filesystem::path& file, const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file);

}  // namespace clonebench
