#include "clonebench/complexity.hpp"

#include <regex>
#include <stdexcept>

#include "clonebench/error.hpp"
#include "complexity/token.hpp"

namespace clonebench {

namespace detail {

int raw_text_decision_points(std::string_view source, bool ruby) {
  std::string text;
  text.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const bool line_comment = ruby ? source[i] == '#' : source.substr(i, 2) == "//";
    if (line_comment) {
      while (i < source.size() && source[i] != '\n') ++i;
      if (i < source.size()) text += '\n';
      continue;
    }
    if (!ruby && source.substr(i, 2) == "/*") {
      const std::size_t end = source.find("*/", i + 2);
      i = end == std::string_view::npos ? source.size() : end + 1;
      text += ' ';
      continue;
    }
    text += source[i];
  }
  static const std::regex kJava(R"(\b(if|for|while|case|catch)\b|&&|\|\||\s\?\s)");
  static const std::regex kRuby(R"(\b(if|unless|elsif|while|until|for|when|rescue|and|or)\b|&&|\|\||\s\?\s)");
  const std::regex& pattern = ruby ? kRuby : kJava;
  return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), pattern), std::sregex_iterator()));
}

}  // namespace detail

ComplexityResult cyclomatic_complexity(std::string_view source, const Language& language) {
  const bool ruby = language.kind() == Language::Kind::Ruby;
  if (!ruby && language.kind() != Language::Kind::Java) {
    throw std::invalid_argument("cyclomatic complexity supports java and ruby, not " + language.name());
  }
  ComplexityResult result;
  const detail::LexResult lexed = ruby ? detail::lex_ruby(source) : detail::lex_java(source);
  if (lexed.error) {
    result.parse_ok = false;
    result.diagnostics = "line " + std::to_string(lexed.error->line) + ": " + lexed.error->message;
    result.decision_points = detail::raw_text_decision_points(source, ruby);
  } else {
    const detail::StructureResult structure = ruby ? detail::analyze_ruby(lexed.tokens) : detail::analyze_java(lexed.tokens);
    result.parse_ok = structure.ok;
    result.diagnostics = structure.diagnostics;
    result.decision_points = structure.decision_points;
  }
  result.cc = result.decision_points + 1;
  return result;
}

ComplexityResult cyclomatic_complexity(const Submission& submission) {
  ComplexityResult result = cyclomatic_complexity(read_source(submission).text, submission.language);
  result.submission_ref = SubmissionRef{submission.problem_id, submission.submission_id};
  return result;
}

ProblemComplexity problem_mean_cc(std::span<const ComplexityResult> results) {
  if (results.empty()) throw EmptyInput("problem_mean_cc needs at least one result");
  ProblemComplexity out;
  out.problem_id = results.front().submission_ref.problem_id;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.submission_ref.problem_id != out.problem_id) {
      throw std::invalid_argument("problem_mean_cc mixes problems " + out.problem_id + " and " +
                                  r.submission_ref.problem_id);
    }
    sum += r.cc;
  }
  out.n_measured = results.size();
  out.mean_cc = sum / static_cast<double>(results.size());
  return out;
}

}  // namespace clonebench
