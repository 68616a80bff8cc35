#pragma once

#include <span>
#include <string>
#include <string_view>

#include "clonebench/corpus.hpp"

namespace clonebench {

struct SubmissionRef {
  std::string problem_id;
  std::string submission_id;

  friend bool operator==(const SubmissionRef&, const SubmissionRef&) = default;
};

/// McCabe complexity of one source file: 1 + decision points summed over the
/// whole file (not per method).
///
/// Java decision points: `if`, `for` (classic and enhanced), `while`,
/// `do`-`while`, each `case` label, `catch`, `?:`, `&&`, `||`.
/// Ruby decision points: `if`, `elsif`, `unless`, `while`, `until` (block and
/// modifier forms alike), `for`, `when`, `rescue` (clause or modifier), `?:`,
/// `&&`/`and`, `||`/`or`, and the short-circuit assignments `&&=`/`||=`.
///
/// `parse_ok` is false when the source could not be analysed structurally
/// (unbalanced nesting, a statement of the wrong shape, an unterminated
/// literal). The count is then a token-level classification of the same
/// constructs, or, when not even lexing succeeds, a plain-text scan that
/// strips line comments and counts keywords at word boundaries plus `&&`,
/// `||` and ` ? `. `diagnostics` describes the first problem found.
struct ComplexityResult {
  SubmissionRef submission_ref;
  int cc = 1;
  int decision_points = 0;
  bool parse_ok = true;
  std::string diagnostics;
};

/// Throws std::invalid_argument for languages other than Java and Ruby.
ComplexityResult cyclomatic_complexity(std::string_view source, const Language& language);

/// Convenience overload that reads the submission's source and fills the ref.
ComplexityResult cyclomatic_complexity(const Submission& submission);

struct ProblemComplexity {
  std::string problem_id;
  double mean_cc = 0.0;
  std::size_t n_measured = 0;
};

/// Arithmetic mean of `cc` over results of a single problem. Throws
/// EmptyInput on an empty span and std::invalid_argument on mixed problems.
ProblemComplexity problem_mean_cc(std::span<const ComplexityResult> results);

}  // namespace clonebench
