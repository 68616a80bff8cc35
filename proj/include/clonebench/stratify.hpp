#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clonebench/evaluation.hpp"

namespace clonebench {

enum class Stratum { PositiveMisclassified, NegativeMisclassified, SelectedProblems };

std::string stratum_name(Stratum s);

/// How misclassified problem sets from several runs are combined.
enum class CombineMode { Shared, Union };

struct MisclassifiedProblems {
  /// Problems of false-negative pairs.
  std::set<std::string> positive;
  /// Both problems of every false-positive pair.
  std::set<std::string> negative;
};

/// Failed predictions are ignored.
MisclassifiedProblems misclassified_problems(const std::vector<ClonePair>& pairs,
                                             const std::vector<PredictionRecord>& predictions);

struct EvaluatedRun {
  std::vector<ClonePair> pairs;
  std::vector<PredictionRecord> predictions;
};

struct StratifiedDifficulty {
  Stratum group = Stratum::SelectedProblems;
  std::vector<std::string> problem_ids;
  std::optional<double> mean_acceptance_rate;
  std::optional<double> mean_cc;
  std::size_t n_problems = 0;
  /// Problems that contributed to mean_cc.
  std::size_t n_with_cc = 0;
};

/// Splits the selected problems into three disjoint strata: problems
/// misclassified on positive pairs, on negative pairs, and the rest.
///
/// Shared mode keeps a problem in a misclassified stratum only when every run
/// misclassified it that way; Union mode when any run did. A problem that
/// lands in both misclassified strata stays in the positive one. Means are
/// unweighted over problems, summed in problem_id order; a problem missing
/// from `mean_cc` is left out of that stratum's CC mean. An acceptance rate
/// missing for a member problem throws Error.
std::vector<StratifiedDifficulty> stratify_misclassified(const std::vector<EvaluatedRun>& runs,
                                                         const std::vector<std::string>& selected,
                                                         const std::map<std::string, double>& mean_cc,
                                                         const std::map<std::string, double>& acceptance_rates,
                                                         CombineMode mode = CombineMode::Shared);

/// `group,mean_acceptance_rate,mean_cc,n_problems` with %.17g numbers and
/// empty fields for undefined means.
void write_strata_csv(std::ostream& out, const std::vector<StratifiedDifficulty>& strata);
nlohmann::ordered_json strata_to_json(const std::vector<StratifiedDifficulty>& strata);

}  // namespace clonebench
