#include "clonebench/detector.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "clonebench/error.hpp"
#include "clonebench/lexical.hpp"
#include "clonebench/text.hpp"

namespace clonebench {

std::string DetectorConfig::param(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double DetectorConfig::param_double(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error("detector parameter " + key + " is not a number: " + it->second);
  }
}

long long DetectorConfig::param_int(const std::string& key, long long fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error("detector parameter " + key + " is not an integer: " + it->second);
  }
}

namespace {

void require_sources(const ClonePair& pair) {
  if (pair.code1.source.empty() || pair.code2.source.empty()) throw DetectorFailure(pair.pair_id, "empty source");
}

}  // namespace

LexicalDetector::LexicalDetector(DetectorConfig config)
    : config_(std::move(config)), threshold_(config_.param_double("threshold", 0.5)) {
  if (threshold_ < 0.0 || threshold_ > 1.0) throw Error("lexical threshold must lie in [0, 1]");
}

Verdict LexicalDetector::classify(const ClonePair& pair) {
  require_sources(pair);
  const double similarity = lexical_similarity(pair.code1.source, pair.code2.source);
  Verdict v;
  v.label = similarity >= threshold_ ? 1 : 0;
  v.raw = "similarity=" + format_fixed(similarity, 6);
  v.confidence = similarity;
  return v;
}

ScriptedDetector::ScriptedDetector(DetectorConfig config, std::map<long long, int> answers)
    : config_(std::move(config)), answers_(std::move(answers)) {}

std::map<long long, int> ScriptedDetector::load_answers(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open answer file " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("answer file " + file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error("answer file must hold a JSON object of pair_id -> label");
  std::map<long long, int> answers;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1)) {
      throw Error("answer for pair " + key + " must be 0 or 1");
    }
    std::size_t used = 0;
    long long id = 0;
    try {
      id = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != key.size()) throw Error("answer key '" + key + "' is not a pair id");
    answers[id] = value.get<int>();
  }
  return answers;
}

Verdict ScriptedDetector::classify(const ClonePair& pair) {
  require_sources(pair);
  const auto it = answers_.find(pair.pair_id);
  if (it == answers_.end()) throw DetectorFailure(pair.pair_id, "no scripted answer");
  Verdict v;
  v.label = it->second;
  v.raw = std::to_string(it->second);
  return v;
}

}  // namespace clonebench
