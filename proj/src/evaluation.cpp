#include "clonebench/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "clonebench/error.hpp"

using json = nlohmann::ordered_json;

namespace clonebench {

namespace {

PredictionRecord classify_one(const ClonePair& pair, Detector& detector) {
  PredictionRecord rec;
  rec.pair_id = pair.pair_id;
  rec.detector_id = detector.id();
  try {
    Verdict v = detector.classify(pair);
    rec.label = v.label;
    rec.raw = std::move(v.raw);
    rec.latency_ms = v.latency_ms;
  } catch (const DetectorFailure& e) {
    rec.error = e.cause();
  }
  return rec;
}

}  // namespace

std::vector<PredictionRecord> evaluate(const std::vector<ClonePair>& pairs, Detector& detector,
                                       std::size_t concurrency) {
  std::vector<const ClonePair*> order;
  order.reserve(pairs.size());
  for (const auto& p : pairs) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const ClonePair* a, const ClonePair* b) { return a->pair_id < b->pair_id; });

  std::vector<PredictionRecord> out(order.size());
  const std::size_t workers =
      std::min({std::max<std::size_t>(1, concurrency), std::max<std::size_t>(1, detector.max_concurrency()),
                std::max<std::size_t>(1, order.size())});

  if (workers == 1) {
    for (std::size_t i = 0; i < order.size(); ++i) out[i] = classify_one(*order[i], detector);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= order.size()) return;
      try {
        out[i] = classify_one(*order[i], detector);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

std::string to_json_line(const PredictionRecord& record) {
  json j;
  j["pair_id"] = record.pair_id;
  j["detector_id"] = record.detector_id;
  j["label"] = record.label ? json(*record.label) : json(nullptr);
  j["raw"] = record.raw;
  j["latency_ms"] = record.latency_ms;
  j["error"] = record.error ? json(*record.error) : json(nullptr);
  return j.dump();
}

PredictionRecord prediction_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  PredictionRecord rec;
  rec.pair_id = j.at("pair_id").get<long long>();
  rec.detector_id = j.at("detector_id").get<std::string>();
  if (!j.at("label").is_null()) rec.label = j.at("label").get<int>();
  rec.raw = j.at("raw").get<std::string>();
  rec.latency_ms = j.at("latency_ms").get<std::int64_t>();
  if (!j.at("error").is_null()) rec.error = j.at("error").get<std::string>();
  return rec;
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

void write_predictions(const std::filesystem::path& file, const std::vector<PredictionRecord>& records) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  write_predictions(out, records);
  if (!out) throw Error("write failed: " + file.string());
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(prediction_from_json_line(line));
    } catch (const json::exception& e) {
      throw MalformedRow(file.string(), line_no, e.what());
    }
  }
  return out;
}

}  // namespace clonebench
