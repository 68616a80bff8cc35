#include "clonebench/sampler.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <span>

#include <nlohmann/json.hpp>

#include "clonebench/error.hpp"
#include "clonebench/random.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace clonebench {

void SamplingSpec::validate() const {
  if (n_positive < 1 || n_negative < 1) throw InvalidSpec("n_positive and n_negative must be at least 1");
  if (n_problems < 2) throw InvalidSpec("n_problems must be at least 2 (negatives need two problems)");
  if (pinned_problems && pinned_problems->size() != n_problems) {
    throw InvalidSpec("pinned problem set has " + std::to_string(pinned_problems->size()) +
                      " problems but n_problems is " + std::to_string(n_problems));
  }
}

namespace {

bool is_eligible(const Problem& p, const SamplingSpec& spec) {
  if (spec.cross_language()) return p.count_in(spec.lang_a) >= 1 && p.count_in(spec.lang_b) >= 1;
  return p.count_in(spec.lang_a) >= 2;
}

struct Pool {
  std::string problem_id;
  std::vector<const Submission*> side_a;
  std::vector<const Submission*> side_b;
};

using PairKey = std::pair<std::string, std::string>;

std::string submission_key(const Submission& s) { return s.problem_id + '\x1f' + s.submission_id; }

PairKey unordered_key(const Submission& a, const Submission& b) {
  std::string ka = submission_key(a);
  std::string kb = submission_key(b);
  if (kb < ka) std::swap(ka, kb);
  return {std::move(ka), std::move(kb)};
}

struct Draw {
  const Submission* code1;
  const Submission* code2;
  int label;
};

std::size_t positive_capacity(const std::vector<Pool>& pools, bool cross) {
  std::size_t total = 0;
  for (const auto& p : pools) {
    const std::size_t a = p.side_a.size();
    total += cross ? a * p.side_b.size() : a * (a - 1) / 2;
  }
  return total;
}

std::size_t negative_capacity(const std::vector<Pool>& pools, bool cross) {
  std::size_t total_b = 0;
  std::size_t sum_sq = 0;
  for (const auto& p : pools) {
    total_b += p.side_b.size();
    sum_sq += p.side_a.size() * p.side_a.size();
  }
  if (!cross) return (total_b * total_b - sum_sq) / 2;
  std::size_t total = 0;
  for (const auto& p : pools) total += p.side_a.size() * (total_b - p.side_b.size());
  return total;
}

PairSide make_side(const Submission& s, std::map<std::string, SourceText>& sources) {
  const std::string key = submission_key(s);
  auto it = sources.find(key);
  if (it == sources.end()) it = sources.emplace(key, read_source(s)).first;
  return PairSide{s.problem_id, s.submission_id, s.language, it->second.text};
}

}  // namespace

std::vector<std::string> eligible_problems(const Corpus& corpus, const SamplingSpec& spec) {
  std::vector<std::string> out;
  for (const auto& [id, problem] : corpus.problems()) {
    if (is_eligible(problem, spec)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> select_problems(const Corpus& corpus, const SamplingSpec& spec) {
  spec.validate();
  if (spec.pinned_problems) {
    std::vector<std::string> ids = *spec.pinned_problems;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw InvalidSpec("pinned problem set has duplicates");
    for (const auto& id : ids) {
      if (!corpus.contains(id) || !is_eligible(corpus.problem(id), spec)) throw InsufficientSubmissions(id);
    }
    return ids;
  }

  std::vector<std::string> eligible = eligible_problems(corpus, spec);
  if (eligible.size() < spec.n_problems) throw InsufficientProblems(eligible.size(), spec.n_problems);

  PortableRng rng(spec.seed);
  for (std::size_t i = 0; i < spec.n_problems; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(spec.n_problems);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

PairDataset sample_pairs(const Corpus& corpus, const SamplingSpec& spec) {
  PairDataset dataset;
  dataset.spec = spec;
  dataset.problem_ids = select_problems(corpus, spec);

  const bool cross = spec.cross_language();
  std::vector<Pool> pools;
  for (const auto& id : dataset.problem_ids) {
    Pool pool{id, {}, {}};
    for (const auto& s : corpus.problem(id).submissions) {
      if (s.language == spec.lang_a) pool.side_a.push_back(&s);
      if (cross && s.language == spec.lang_b) pool.side_b.push_back(&s);
    }
    if (!cross) pool.side_b = pool.side_a;
    pools.push_back(std::move(pool));
  }

  const std::size_t pos_cap = positive_capacity(pools, cross);
  if (spec.n_positive > pos_cap) throw PairSpaceExhausted("positive", pos_cap, spec.n_positive);
  const std::size_t neg_cap = negative_capacity(pools, cross);
  if (spec.n_negative > neg_cap) throw PairSpaceExhausted("negative", neg_cap, spec.n_negative);

  // Problem selection consumed its own generator; pairs use a second stream
  // derived from the same seed so pinning a problem set does not shift them.
  PortableRng rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
  std::set<PairKey> seen;
  std::vector<Draw> draws;
  draws.reserve(spec.n_positive + spec.n_negative);

  while (draws.size() < spec.n_positive) {
    const Pool& pool = pools[rng.below(pools.size())];
    const Submission* a = nullptr;
    const Submission* b = nullptr;
    if (cross) {
      a = pool.side_a[rng.below(pool.side_a.size())];
      b = pool.side_b[rng.below(pool.side_b.size())];
    } else {
      const std::size_t n = pool.side_a.size();
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      a = pool.side_a[i];
      b = pool.side_a[j];
    }
    if (seen.insert(unordered_key(*a, *b)).second) draws.push_back({a, b, 1});
  }

  while (draws.size() < spec.n_positive + spec.n_negative) {
    const std::size_t p = rng.below(pools.size());
    const std::size_t q = rng.below(pools.size());
    if (p == q) continue;
    const Submission* a = pools[p].side_a[rng.below(pools[p].side_a.size())];
    const Submission* b = pools[q].side_b[rng.below(pools[q].side_b.size())];
    if (seen.insert(unordered_key(*a, *b)).second) draws.push_back({a, b, 0});
  }

  rng.shuffle(std::span<Draw>(draws));

  std::map<std::string, SourceText> sources;
  dataset.pairs.reserve(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    ClonePair pair;
    pair.pair_id = static_cast<long long>(i);
    pair.code1 = make_side(*draws[i].code1, sources);
    pair.code2 = make_side(*draws[i].code2, sources);
    pair.label = draws[i].label;
    dataset.pairs.push_back(std::move(pair));
  }
  for (const auto& [key, text] : sources) {
    if (text.replaced_invalid_utf8) ++dataset.sources_with_replacement;
  }
  return dataset;
}

// serialization ---------------------------------------------------------------

namespace {

json side_to_json(const PairSide& side) {
  json j;
  j["problem_id"] = side.problem_id;
  j["submission_id"] = side.submission_id;
  j["language"] = side.language.name();
  j["source"] = side.source;
  return j;
}

PairSide side_from_json(const json& j) {
  return PairSide{j.at("problem_id").get<std::string>(), j.at("submission_id").get<std::string>(),
                  Language::parse(j.at("language").get<std::string>()), j.at("source").get<std::string>()};
}

}  // namespace

std::string to_json_line(const ClonePair& pair) {
  json j;
  j["pair_id"] = pair.pair_id;
  j["label"] = pair.label;
  j["code1"] = side_to_json(pair.code1);
  j["code2"] = side_to_json(pair.code2);
  return j.dump();
}

ClonePair pair_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  ClonePair pair;
  pair.pair_id = j.at("pair_id").get<long long>();
  pair.label = j.at("label").get<int>();
  if (pair.label != 0 && pair.label != 1) throw Error("pair " + std::to_string(pair.pair_id) + " has label outside {0,1}");
  pair.code1 = side_from_json(j.at("code1"));
  pair.code2 = side_from_json(j.at("code2"));
  return pair;
}

void write_dataset(std::ostream& out, const std::vector<ClonePair>& pairs) {
  for (const auto& pair : pairs) out << to_json_line(pair) << '\n';
}

void write_dataset(const fs::path& file, const std::vector<ClonePair>& pairs) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  write_dataset(out, pairs);
  if (!out) throw Error("write failed for " + file.string());
}

std::vector<ClonePair> read_dataset(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open dataset " + file.string());
  std::vector<ClonePair> pairs;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      pairs.push_back(pair_from_json_line(line));
    } catch (const json::exception& e) {
      throw Error(file.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return pairs;
}

fs::path manifest_path_for(const fs::path& dataset_file) {
  fs::path out = dataset_file;
  out.replace_extension(".manifest.json");
  return out;
}

void write_manifest(const fs::path& file, const PairDataset& dataset) {
  json j;
  j["seed"] = dataset.spec.seed;
  j["n_problems"] = dataset.spec.n_problems;
  j["n_positive"] = dataset.spec.n_positive;
  j["n_negative"] = dataset.spec.n_negative;
  j["lang_a"] = dataset.spec.lang_a.name();
  j["lang_b"] = dataset.spec.lang_b.name();
  j["pinned"] = dataset.spec.pinned_problems.has_value();
  j["problem_ids"] = dataset.problem_ids;
  j["sources_with_replacement"] = dataset.sources_with_replacement;
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::vector<std::string> read_manifest_problems(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open manifest " + file.string());
  return json::parse(in).at("problem_ids").get<std::vector<std::string>>();
}

}  // namespace clonebench
