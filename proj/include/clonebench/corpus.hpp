#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clonebench {

/// Programming language of a submission. Java and Ruby are the studied
/// languages; everything else is carried through as an opaque tag.
class Language {
 public:
  enum class Kind { Java, Ruby, Other };

  static Language java() { return Language(Kind::Java, {}); }
  static Language ruby() { return Language(Kind::Ruby, {}); }
  static Language other(std::string tag) { return Language(Kind::Other, std::move(tag)); }

  /// Case-insensitive: "Java", "java" and "JAVA" all map to Kind::Java.
  static Language parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// Lower-case canonical name ("java", "ruby") or the original tag.
  std::string name() const;

  friend bool operator==(const Language&, const Language&) = default;
  friend auto operator<=>(const Language&, const Language&) = default;

 private:
  Language(Kind kind, std::string tag) : kind_(kind), tag_(std::move(tag)) {}
  Kind kind_;
  std::string tag_;
};

using LanguageSet = std::set<Language>;

/// Parses a comma-separated list such as "java,ruby".
std::vector<Language> parse_language_list(std::string_view text);

class Status {
 public:
  enum class Kind { Accepted, Rejected, Other };

  /// "Accepted" maps to Accepted, the known judge failure verdicts map to
  /// Rejected, anything else is kept as Other(tag).
  static Status parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }
  bool accepted() const { return kind_ == Kind::Accepted; }

  friend bool operator==(const Status&, const Status&) = default;

 private:
  Status(Kind kind, std::string tag) : kind_(kind), tag_(std::move(tag)) {}
  Kind kind_;
  std::string tag_;
};

/// One source file of the corpus. The source text itself is not held in
/// memory; see read_source().
struct Submission {
  std::string problem_id;
  std::string submission_id;
  Language language = Language::java();
  Status status = Status::parse("Accepted");
  std::filesystem::path source_path;
};

struct Problem {
  std::string problem_id;
  /// Retained submissions only (accepted, language in the filter), sorted by
  /// submission_id.
  std::vector<Submission> submissions;
  /// Every metadata row for the problem, regardless of language or status.
  std::size_t total_submissions = 0;
  /// Every Accepted metadata row, regardless of language.
  std::size_t accepted_submissions = 0;

  std::size_t count_in(const Language& language) const;
};

/// Non-fatal findings collected while loading.
struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t other_status_rows = 0;
  /// Retained rows whose source file does not exist; the row is skipped.
  std::vector<std::string> missing_sources;
  /// Retained rows whose source file exists but is zero bytes; skipped.
  std::vector<std::string> empty_sources;
};

class Corpus {
 public:
  Corpus(std::filesystem::path root, LanguageSet filter, std::map<std::string, Problem> problems,
         LoadReport report);

  const std::filesystem::path& root() const { return root_; }
  const LanguageSet& language_filter() const { return filter_; }
  const std::map<std::string, Problem>& problems() const { return problems_; }
  const LoadReport& report() const { return report_; }

  /// Throws std::out_of_range for unknown ids.
  const Problem& problem(const std::string& problem_id) const;
  bool contains(const std::string& problem_id) const { return problems_.count(problem_id) != 0; }

 private:
  std::filesystem::path root_;
  LanguageSet filter_;
  std::map<std::string, Problem> problems_;
  LoadReport report_;
};

/// Loads `<root>/metadata/<problem_id>.csv` tables and validates that the
/// source file of every retained row exists under
/// `<root>/data/<problem_id>/<language>/<submission_id>.<ext>`.
///
/// If `<root>/problem_list.csv` exists its ids define the problem set and a
/// listed problem without a metadata table raises MissingMetadata; otherwise
/// the metadata directory listing is used. Unparseable rows raise
/// MalformedRow. Missing or empty source files are recorded in the report.
Corpus load_corpus(const std::filesystem::path& root, const LanguageSet& languages);

/// C / A for the problem. Throws UndefinedRate when A = 0.
double acceptance_rate(const Problem& problem);

struct SourceText {
  std::string text;
  /// True when invalid UTF-8 sequences were replaced with U+FFFD.
  bool replaced_invalid_utf8 = false;
};

/// Reads a submission's source file. Throws Error if it cannot be read.
SourceText read_source(const Submission& submission);

}  // namespace clonebench
