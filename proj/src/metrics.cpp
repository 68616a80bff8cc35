#include "clonebench/metrics.hpp"

#include <unordered_map>
#include <unordered_set>

#include "clonebench/error.hpp"
#include "clonebench/text.hpp"

namespace clonebench {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double precision(const ConfusionMatrix& m) { return ratio(m.tp, m.tp + m.fp); }

double recall(const ConfusionMatrix& m) { return ratio(m.tp, m.tp + m.fn); }

double f1(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

ConfusionTally confusion(const std::vector<ClonePair>& pairs, const std::vector<PredictionRecord>& predictions) {
  std::unordered_map<long long, int> truth;
  truth.reserve(pairs.size());
  for (const auto& p : pairs) truth.emplace(p.pair_id, p.label);

  ConfusionTally tally;
  std::unordered_set<long long> seen;
  for (const auto& rec : predictions) {
    const auto it = truth.find(rec.pair_id);
    if (it == truth.end()) throw UnknownPairId(rec.pair_id);
    if (!seen.insert(rec.pair_id).second) throw Error("pair " + std::to_string(rec.pair_id) + " predicted twice");
    if (!rec.label) {
      ++tally.failures;
      continue;
    }
    const bool actual = it->second == 1;
    const bool predicted = *rec.label == 1;
    if (actual && predicted) {
      ++tally.matrix.tp;
    } else if (!actual && predicted) {
      ++tally.matrix.fp;
    } else if (!actual) {
      ++tally.matrix.tn;
    } else {
      ++tally.matrix.fn;
    }
  }
  tally.failures += truth.size() - seen.size();
  return tally;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["detector_id"] = detector_id;
  j["dataset"] = dataset;
  j["n_pairs"] = n_pairs;
  j["precision"] = round_to(precision, 3);
  j["recall"] = round_to(recall, 3);
  j["f1"] = round_to(f1, 3);
  j["confusion"] = {{"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn}, {"fn", confusion.fn}};
  j["failures"] = failures;
  return j;
}

EvalReport make_report(const std::string& detector_id, const std::string& dataset, const std::vector<ClonePair>& pairs,
                       const std::vector<PredictionRecord>& predictions) {
  const ConfusionTally tally = confusion(pairs, predictions);
  EvalReport r;
  r.detector_id = detector_id;
  r.dataset = dataset;
  r.n_pairs = pairs.size();
  r.confusion = tally.matrix;
  r.failures = tally.failures;
  r.precision = precision(tally.matrix);
  r.recall = recall(tally.matrix);
  r.f1 = f1(r.precision, r.recall);
  return r;
}

}  // namespace clonebench
