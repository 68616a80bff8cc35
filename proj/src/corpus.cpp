#include "clonebench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "clonebench/error.hpp"
#include "clonebench/text.hpp"

namespace fs = std::filesystem;

namespace clonebench {

Language Language::parse(std::string_view text) {
  const std::string lower = to_lower_ascii(trim(text));
  if (lower == "java") return java();
  if (lower == "ruby") return ruby();
  return other(std::string(trim(text)));
}

std::string Language::name() const {
  switch (kind_) {
    case Kind::Java:
      return "java";
    case Kind::Ruby:
      return "ruby";
    case Kind::Other:
      break;
  }
  return tag_;
}

std::vector<Language> parse_language_list(std::string_view text) {
  std::vector<Language> out;
  for (const auto& part : split(text, ',')) {
    if (!trim(part).empty()) out.push_back(Language::parse(part));
  }
  return out;
}

Status Status::parse(std::string_view text) {
  static const std::set<std::string, std::less<>> kRejected = {
      "Wrong Answer",          "Runtime Error", "Time Limit Exceeded", "Memory Limit Exceeded",
      "Compile Error",         "Output Limit Exceeded", "Presentation Error",
      "WA: Presentation Error", "Judge Not Available", "Judge System Error"};
  const std::string_view t = trim(text);
  if (t == "Accepted") return Status(Kind::Accepted, std::string(t));
  if (kRejected.count(t) != 0) return Status(Kind::Rejected, std::string(t));
  return Status(Kind::Other, std::string(t));
}

std::size_t Problem::count_in(const Language& language) const {
  return static_cast<std::size_t>(std::count_if(submissions.begin(), submissions.end(),
                                                [&](const Submission& s) { return s.language == language; }));
}

Corpus::Corpus(fs::path root, LanguageSet filter, std::map<std::string, Problem> problems, LoadReport report)
    : root_(std::move(root)), filter_(std::move(filter)), problems_(std::move(problems)), report_(std::move(report)) {}

const Problem& Corpus::problem(const std::string& problem_id) const {
  const auto it = problems_.find(problem_id);
  if (it == problems_.end()) throw std::out_of_range("unknown problem " + problem_id);
  return it->second;
}

namespace {

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> listed_problem_ids(const fs::path& list_file) {
  const auto lines = read_lines(list_file);
  std::vector<std::string> ids;
  if (lines.empty()) return ids;
  std::vector<std::string> header;
  if (!split_csv_record(lines[0], header)) throw MalformedRow(list_file.string(), 1, "unterminated quote");
  std::size_t column = 0;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = to_lower_ascii(trim(header[i]));
    if (h == "id" || h == "problem_id") {
      column = i;
      break;
    }
  }
  std::vector<std::string> fields;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    if (!split_csv_record(lines[n], fields) || fields.size() <= column) {
      throw MalformedRow(list_file.string(), n + 1, "cannot read problem id");
    }
    ids.emplace_back(trim(fields[column]));
  }
  return ids;
}

struct Columns {
  std::size_t submission_id, problem_id, language, status, filename_ext, count;
};

Columns locate_columns(const std::vector<std::string>& header, const fs::path& file) {
  auto find = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw MalformedRow(file.string(), 1, "missing column " + std::string(name));
  };
  return Columns{find("submission_id"), find("problem_id"), find("language"),
                 find("status"),        find("filename_ext"), header.size()};
}

Problem load_problem(const fs::path& root, const std::string& problem_id, const fs::path& table,
                     const LanguageSet& languages, LoadReport& report) {
  Problem problem;
  problem.problem_id = problem_id;
  const auto lines = read_lines(table);
  if (lines.empty()) throw MalformedRow(table.string(), 1, "empty metadata table");

  std::vector<std::string> fields;
  if (!split_csv_record(lines[0], fields)) throw MalformedRow(table.string(), 1, "unterminated quote");
  const Columns cols = locate_columns(fields, table);

  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    if (!split_csv_record(lines[n], fields)) throw MalformedRow(table.string(), n + 1, "unterminated quote");
    if (fields.size() != cols.count) {
      throw MalformedRow(table.string(), n + 1,
                         "expected " + std::to_string(cols.count) + " fields, got " + std::to_string(fields.size()));
    }
    const std::string submission_id(trim(fields[cols.submission_id]));
    if (submission_id.empty()) throw MalformedRow(table.string(), n + 1, "empty submission_id");
    if (trim(fields[cols.problem_id]) != problem_id) {
      throw MalformedRow(table.string(), n + 1, "row belongs to problem " + fields[cols.problem_id]);
    }

    ++report.rows_read;
    ++problem.total_submissions;
    const Status status = Status::parse(fields[cols.status]);
    if (status.kind() == Status::Kind::Other) ++report.other_status_rows;
    if (!status.accepted()) continue;
    ++problem.accepted_submissions;

    const std::string language_dir(trim(fields[cols.language]));
    const Language language = Language::parse(language_dir);
    if (languages.count(language) == 0) continue;

    Submission s;
    s.problem_id = problem_id;
    s.submission_id = submission_id;
    s.language = language;
    s.status = status;
    s.source_path = root / "data" / problem_id / language_dir /
                    (submission_id + "." + std::string(trim(fields[cols.filename_ext])));
    std::error_code ec;
    if (!fs::is_regular_file(s.source_path, ec)) {
      report.missing_sources.push_back(submission_id);
      continue;
    }
    if (fs::file_size(s.source_path, ec) == 0) {
      report.empty_sources.push_back(submission_id);
      continue;
    }
    problem.submissions.push_back(std::move(s));
  }

  std::sort(problem.submissions.begin(), problem.submissions.end(),
            [](const Submission& a, const Submission& b) { return a.submission_id < b.submission_id; });
  for (std::size_t i = 1; i < problem.submissions.size(); ++i) {
    if (problem.submissions[i - 1].submission_id == problem.submissions[i].submission_id) {
      throw MalformedRow(table.string(), 0, "duplicate submission_id " + problem.submissions[i].submission_id);
    }
  }
  return problem;
}

}  // namespace

Corpus load_corpus(const fs::path& root, const LanguageSet& languages) {
  const fs::path metadata = root / "metadata";
  if (!fs::is_directory(metadata)) throw Error("corpus root has no metadata directory: " + root.string());

  std::vector<std::string> ids;
  const fs::path list_file = root / "problem_list.csv";
  const bool listed = fs::is_regular_file(list_file);
  if (listed) {
    ids = listed_problem_ids(list_file);
  } else {
    for (const auto& entry : fs::directory_iterator(metadata)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  LoadReport report;
  std::map<std::string, Problem> problems;
  for (const auto& id : ids) {
    const fs::path table = metadata / (id + ".csv");
    if (!fs::is_regular_file(table)) throw MissingMetadata(id);
    problems.emplace(id, load_problem(root, id, table, languages, report));
  }
  return Corpus(root, languages, std::move(problems), std::move(report));
}

double acceptance_rate(const Problem& problem) {
  if (problem.total_submissions == 0) throw UndefinedRate(problem.problem_id);
  return static_cast<double>(problem.accepted_submissions) / static_cast<double>(problem.total_submissions);
}

SourceText read_source(const Submission& submission) {
  std::ifstream in(submission.source_path, std::ios::binary);
  if (!in) throw Error("cannot read source " + submission.source_path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  SourceText out;
  out.text = sanitize_utf8(buffer.str(), &out.replaced_invalid_utf8);
  return out;
}

}  // namespace clonebench
