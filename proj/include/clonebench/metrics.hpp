#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clonebench/evaluation.hpp"

namespace clonebench {

/// 2x2 tally with label 1 as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Each ratio is 0 when its denominator is 0.
double precision(const ConfusionMatrix& m);
double recall(const ConfusionMatrix& m);
double f1(double precision, double recall);

struct ConfusionTally {
  ConfusionMatrix matrix;
  /// Pairs with a failed prediction or with no prediction at all.
  std::size_t failures = 0;
};

/// Tallies predictions against the dataset labels. Throws UnknownPairId for a
/// prediction whose pair is not in `pairs`, and Error for a pair predicted
/// twice.
ConfusionTally confusion(const std::vector<ClonePair>& pairs, const std::vector<PredictionRecord>& predictions);

struct EvalReport {
  std::string detector_id;
  std::string dataset;
  std::size_t n_pairs = 0;
  ConfusionMatrix confusion;
  std::size_t failures = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  /// Ratios rounded to 3 decimals.
  nlohmann::ordered_json to_json() const;
};

EvalReport make_report(const std::string& detector_id, const std::string& dataset, const std::vector<ClonePair>& pairs,
                       const std::vector<PredictionRecord>& predictions);

}  // namespace clonebench
