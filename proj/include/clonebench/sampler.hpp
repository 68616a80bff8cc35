#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clonebench/corpus.hpp"

namespace clonebench {

struct SamplingSpec {
  std::size_t n_problems = 100;
  std::size_t n_positive = 500;
  std::size_t n_negative = 500;
  Language lang_a = Language::java();
  Language lang_b = Language::java();
  std::uint64_t seed = 0;
  /// When set, these problems are used as-is instead of a random selection
  /// (n_problems must equal its size). Lets two datasets share one problem set.
  std::optional<std::vector<std::string>> pinned_problems;

  bool cross_language() const { return lang_a != lang_b; }
  /// Throws InvalidSpec when counts violate the minimums.
  void validate() const;
};

/// One side of a pair, with the source inlined so a dataset is self-contained.
struct PairSide {
  std::string problem_id;
  std::string submission_id;
  Language language = Language::java();
  std::string source;

  friend bool operator==(const PairSide&, const PairSide&) = default;
};

struct ClonePair {
  long long pair_id = 0;
  PairSide code1;
  PairSide code2;
  /// 1 = clone (same problem), 0 = non-clone.
  int label = 0;

  friend bool operator==(const ClonePair&, const ClonePair&) = default;
};

struct PairDataset {
  SamplingSpec spec;
  std::vector<ClonePair> pairs;
  /// Sorted selected problem set.
  std::vector<std::string> problem_ids;
  /// Number of inlined sources that contained invalid UTF-8.
  std::size_t sources_with_replacement = 0;
};

/// Problems eligible under `spec`: at least one retained submission in each
/// language, or at least two when both languages are the same. Sorted.
std::vector<std::string> eligible_problems(const Corpus& corpus, const SamplingSpec& spec);

/// Uniform choice of spec.n_problems eligible problems (or the pinned set).
/// Throws InsufficientProblems or, for pinned sets, InsufficientSubmissions.
std::vector<std::string> select_problems(const Corpus& corpus, const SamplingSpec& spec);

/// Builds a balanced dataset: positives pair two submissions of one problem,
/// negatives pair submissions of two distinct problems. code1 is always in
/// lang_a and code2 in lang_b. No unordered submission pair appears twice.
/// Throws PairSpaceExhausted when the requested counts cannot be met.
PairDataset sample_pairs(const Corpus& corpus, const SamplingSpec& spec);

// JSON-lines serialization ----------------------------------------------------

std::string to_json_line(const ClonePair& pair);
ClonePair pair_from_json_line(const std::string& line);

void write_dataset(std::ostream& out, const std::vector<ClonePair>& pairs);
void write_dataset(const std::filesystem::path& file, const std::vector<ClonePair>& pairs);
std::vector<ClonePair> read_dataset(const std::filesystem::path& file);

/// Sidecar describing how a dataset was built, including the selected
/// problem set (which may contain problems no pair happened to draw).
void write_manifest(const std::filesystem::path& file, const PairDataset& dataset);
std::vector<std::string> read_manifest_problems(const std::filesystem::path& file);

/// `dataset.jsonl` -> `dataset.manifest.json`.
std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_file);

}  // namespace clonebench
