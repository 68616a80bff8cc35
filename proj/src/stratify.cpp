#include "clonebench/stratify.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <ostream>
#include <unordered_map>

#include "clonebench/error.hpp"

namespace clonebench {

std::string stratum_name(Stratum s) {
  switch (s) {
    case Stratum::PositiveMisclassified:
      return "positive_misclassified";
    case Stratum::NegativeMisclassified:
      return "negative_misclassified";
    case Stratum::SelectedProblems:
      return "selected_problems";
  }
  return "unknown";
}

MisclassifiedProblems misclassified_problems(const std::vector<ClonePair>& pairs,
                                             const std::vector<PredictionRecord>& predictions) {
  std::unordered_map<long long, const ClonePair*> by_id;
  by_id.reserve(pairs.size());
  for (const auto& p : pairs) by_id.emplace(p.pair_id, &p);

  MisclassifiedProblems out;
  for (const auto& rec : predictions) {
    if (!rec.label) continue;
    const auto it = by_id.find(rec.pair_id);
    if (it == by_id.end()) throw UnknownPairId(rec.pair_id);
    const ClonePair& pair = *it->second;
    if (*rec.label == pair.label) continue;
    if (pair.label == 1) {
      out.positive.insert(pair.code1.problem_id);
    } else {
      out.negative.insert(pair.code1.problem_id);
      out.negative.insert(pair.code2.problem_id);
    }
  }
  return out;
}

namespace {

std::set<std::string> combine(const std::vector<std::set<std::string>>& sets, CombineMode mode) {
  if (sets.empty()) return {};
  std::set<std::string> acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    std::set<std::string> next;
    if (mode == CombineMode::Shared) {
      std::set_intersection(acc.begin(), acc.end(), sets[i].begin(), sets[i].end(), std::inserter(next, next.end()));
    } else {
      std::set_union(acc.begin(), acc.end(), sets[i].begin(), sets[i].end(), std::inserter(next, next.end()));
    }
    acc = std::move(next);
  }
  return acc;
}

StratifiedDifficulty summarize(Stratum group, const std::set<std::string>& members,
                               const std::map<std::string, double>& mean_cc,
                               const std::map<std::string, double>& rates) {
  StratifiedDifficulty row;
  row.group = group;
  row.problem_ids.assign(members.begin(), members.end());
  row.n_problems = members.size();
  double rate_sum = 0.0;
  double cc_sum = 0.0;
  for (const auto& pid : row.problem_ids) {
    const auto r = rates.find(pid);
    if (r == rates.end()) throw Error("no acceptance rate for problem " + pid);
    rate_sum += r->second;
    const auto c = mean_cc.find(pid);
    if (c != mean_cc.end()) {
      cc_sum += c->second;
      ++row.n_with_cc;
    }
  }
  if (row.n_problems > 0) row.mean_acceptance_rate = rate_sum / static_cast<double>(row.n_problems);
  if (row.n_with_cc > 0) row.mean_cc = cc_sum / static_cast<double>(row.n_with_cc);
  return row;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json nullable(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::vector<StratifiedDifficulty> stratify_misclassified(const std::vector<EvaluatedRun>& runs,
                                                         const std::vector<std::string>& selected,
                                                         const std::map<std::string, double>& mean_cc,
                                                         const std::map<std::string, double>& acceptance_rates,
                                                         CombineMode mode) {
  const std::set<std::string> selected_set(selected.begin(), selected.end());
  std::vector<std::set<std::string>> pos_sets;
  std::vector<std::set<std::string>> neg_sets;
  for (const auto& run : runs) {
    MisclassifiedProblems m = misclassified_problems(run.pairs, run.predictions);
    pos_sets.push_back(std::move(m.positive));
    neg_sets.push_back(std::move(m.negative));
  }

  std::set<std::string> positive;
  for (const auto& pid : combine(pos_sets, mode)) {
    if (selected_set.count(pid)) positive.insert(pid);
  }
  std::set<std::string> negative;
  for (const auto& pid : combine(neg_sets, mode)) {
    if (selected_set.count(pid) && !positive.count(pid)) negative.insert(pid);
  }
  std::set<std::string> rest;
  for (const auto& pid : selected_set) {
    if (!positive.count(pid) && !negative.count(pid)) rest.insert(pid);
  }

  return {summarize(Stratum::PositiveMisclassified, positive, mean_cc, acceptance_rates),
          summarize(Stratum::NegativeMisclassified, negative, mean_cc, acceptance_rates),
          summarize(Stratum::SelectedProblems, rest, mean_cc, acceptance_rates)};
}

void write_strata_csv(std::ostream& out, const std::vector<StratifiedDifficulty>& strata) {
  out << "group,mean_acceptance_rate,mean_cc,n_problems\n";
  for (const auto& s : strata) {
    out << stratum_name(s.group) << ',' << (s.mean_acceptance_rate ? format_g17(*s.mean_acceptance_rate) : "") << ','
        << (s.mean_cc ? format_g17(*s.mean_cc) : "") << ',' << s.n_problems << '\n';
  }
}

nlohmann::ordered_json strata_to_json(const std::vector<StratifiedDifficulty>& strata) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : strata) {
    nlohmann::ordered_json j;
    j["group"] = stratum_name(s.group);
    j["n_problems"] = s.n_problems;
    j["mean_acceptance_rate"] = nullable(s.mean_acceptance_rate);
    j["mean_cc"] = nullable(s.mean_cc);
    j["n_with_cc"] = s.n_with_cc;
    j["problem_ids"] = s.problem_ids;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace clonebench
