#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "clonebench/corpus.hpp"
#include "clonebench/error.hpp"
#include "clonebench/text.hpp"
#include "fixture_corpus.hpp"

namespace fs = std::filesystem;
using namespace clonebench;

namespace {

const char* kHeader = "submission_id,problem_id,language,status,filename_ext\n";

void put(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  std::ofstream(file, std::ios::binary) << text;
}

// Two problems, each with 3 accepted Java rows and 1 rejected one.
fs::path small_corpus(const std::string& name) {
  const fs::path root = fixture::scratch_dir(name);
  for (const std::string pid : {"p1", "p2"}) {
    std::string meta = kHeader;
    for (int i = 0; i < 4; ++i) {
      const std::string sid = pid + "s" + std::to_string(i);
      meta += sid + "," + pid + ",Java," + (i == 3 ? "Wrong Answer" : "Accepted") + ",java\n";
      put(root / "data" / pid / "Java" / (sid + ".java"), "class A { int f() { return " + std::to_string(i) + "; } }");
    }
    put(root / "metadata" / (pid + ".csv"), meta);
  }
  return root;
}

}  // namespace

TEST_CASE("accepted rows are retained and every row is counted") {
  const Corpus c = load_corpus(small_corpus("corpus-small"), {Language::java()});
  REQUIRE(c.problems().size() == 2);
  for (const auto& [pid, p] : c.problems()) {
    CHECK(p.submissions.size() == 3);
    CHECK(p.total_submissions == 4);
    CHECK(p.accepted_submissions == 3);
    CHECK(acceptance_rate(p) == doctest::Approx(0.75));
  }
  CHECK(c.report().rows_read == 8);
}

TEST_CASE("a language filter with no matches keeps the problem listed") {
  const Corpus c = load_corpus(small_corpus("corpus-ruby-filter"), {Language::ruby()});
  REQUIRE(c.problems().size() == 2);
  CHECK(c.problem("p1").submissions.empty());
  CHECK(c.problem("p1").total_submissions == 4);
  CHECK(c.problem("p1").accepted_submissions == 3);
}

TEST_CASE("acceptance rate is C over A") {
  Problem p;
  p.problem_id = "x";
  p.total_submissions = 100;
  p.accepted_submissions = 58;
  CHECK(acceptance_rate(p) == 0.58);
  p.accepted_submissions = 100;
  CHECK(acceptance_rate(p) == 1.0);
  p.total_submissions = 120;
  p.accepted_submissions = 7;
  CHECK(acceptance_rate(p) == doctest::Approx(0.058333333333).epsilon(1e-9));
  p.total_submissions = 0;
  p.accepted_submissions = 0;
  CHECK_THROWS_AS(acceptance_rate(p), UndefinedRate);
}

TEST_CASE("C=7 of A=120 read from disk") {
  const fs::path root = fixture::scratch_dir("corpus-7-of-120");
  std::string meta = kHeader;
  for (int i = 0; i < 120; ++i) {
    const std::string sid = "s" + std::to_string(1000 + i);
    meta += sid + ",p7,Ruby," + (i < 7 ? "Accepted" : "Runtime Error") + ",rb\n";
    put(root / "data" / "p7" / "Ruby" / (sid + ".rb"), "puts 1\n");
  }
  put(root / "metadata" / "p7.csv", meta);
  const Corpus c = load_corpus(root, {Language::ruby()});
  const Problem& p = c.problem("p7");
  CHECK(p.total_submissions == 120);
  CHECK(p.accepted_submissions == 7);
  CHECK(acceptance_rate(p) == 7.0 / 120.0);
}

TEST_CASE("unknown status strings count toward the total but are not retained") {
  const fs::path root = fixture::scratch_dir("corpus-other-status");
  put(root / "metadata" / "p1.csv", std::string(kHeader) + "a,p1,Java,Accepted,java\nb,p1,Java,Queued,java\n");
  put(root / "data/p1/Java/a.java", "class A {}");
  put(root / "data/p1/Java/b.java", "class B {}");
  const Corpus c = load_corpus(root, {Language::java()});
  CHECK(c.problem("p1").total_submissions == 2);
  CHECK(c.problem("p1").accepted_submissions == 1);
  CHECK(c.problem("p1").submissions.size() == 1);
  CHECK(c.report().other_status_rows == 1);
  CHECK(Status::parse("Queued").kind() == Status::Kind::Other);
  CHECK(Status::parse("Wrong Answer").kind() == Status::Kind::Rejected);
}

TEST_CASE("missing and empty sources are skipped and reported") {
  const fs::path root = fixture::scratch_dir("corpus-missing");
  put(root / "metadata" / "p1.csv",
      std::string(kHeader) + "a,p1,Java,Accepted,java\nb,p1,Java,Accepted,java\nc,p1,Java,Accepted,java\n");
  put(root / "data/p1/Java/a.java", "class A {}");
  put(root / "data/p1/Java/c.java", "");
  const Corpus c = load_corpus(root, {Language::java()});
  REQUIRE(c.problem("p1").submissions.size() == 1);
  CHECK(c.problem("p1").submissions[0].submission_id == "a");
  CHECK(c.report().missing_sources == std::vector<std::string>{"b"});
  CHECK(c.report().empty_sources == std::vector<std::string>{"c"});
  CHECK(c.problem("p1").accepted_submissions == 3);
}

TEST_CASE("malformed metadata raises MalformedRow with the line number") {
  const fs::path root = fixture::scratch_dir("corpus-malformed");
  put(root / "metadata" / "p1.csv", std::string(kHeader) + "a,p1,Java,Accepted,java\nb,p1,Java\n");
  put(root / "data/p1/Java/a.java", "class A {}");
  try {
    load_corpus(root, {Language::java()});
    FAIL("expected MalformedRow");
  } catch (const MalformedRow& e) {
    CHECK(e.line() == 3);
  }

  put(root / "metadata" / "p1.csv", std::string(kHeader) + "a,p9,Java,Accepted,java\n");
  CHECK_THROWS_AS(load_corpus(root, {Language::java()}), MalformedRow);

  put(root / "metadata" / "p1.csv", "submission_id,problem_id,status\na,p1,Accepted\n");
  CHECK_THROWS_AS(load_corpus(root, {Language::java()}), MalformedRow);
}

TEST_CASE("a listed problem without a metadata table raises MissingMetadata") {
  const fs::path root = small_corpus("corpus-list");
  put(root / "problem_list.csv", "id,name\np1,a\np2,b\np3,c\n");
  try {
    load_corpus(root, {Language::java()});
    FAIL("expected MissingMetadata");
  } catch (const MissingMetadata& e) {
    CHECK(e.problem_id() == "p3");
  }
  put(root / "problem_list.csv", "id,name\np2,b\n");
  const Corpus c = load_corpus(root, {Language::java()});
  CHECK(c.problems().size() == 1);
  CHECK(c.contains("p2"));
}

TEST_CASE("quoted CSV fields and CRLF line endings are accepted") {
  const fs::path root = fixture::scratch_dir("corpus-quoted");
  put(root / "metadata" / "p1.csv",
      "submission_id,problem_id,language,original_language,status,filename_ext\r\n"
      "a,p1,Java,\"Java (OpenJDK, 11)\",Accepted,java\r\n");
  put(root / "data/p1/Java/a.java", "class A {}");
  const Corpus c = load_corpus(root, {Language::java()});
  CHECK(c.problem("p1").submissions.size() == 1);
}

TEST_CASE("row order in metadata does not change the corpus") {
  const fs::path root = fixture::scratch_dir("corpus-order");
  std::vector<std::string> rows;
  for (int i = 0; i < 12; ++i) {
    const std::string sid = "s" + std::to_string(i);
    rows.push_back(sid + ",p1," + (i % 2 ? "Ruby" : "Java") + "," + (i % 5 ? "Accepted" : "Wrong Answer") + "," +
                   (i % 2 ? "rb" : "java") + "\n");
    put(root / "data/p1" / (i % 2 ? "Ruby" : "Java") / (sid + (i % 2 ? ".rb" : ".java")), "x = " + sid);
  }
  auto load_with = [&](const std::vector<std::string>& order) {
    std::string meta = kHeader;
    for (const auto& r : order) meta += r;
    put(root / "metadata" / "p1.csv", meta);
    return load_corpus(root, {Language::java(), Language::ruby()});
  };
  const Corpus base = load_with(rows);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(rows.begin(), rows.end(), gen);
    const Corpus other = load_with(rows);
    const auto& a = base.problem("p1").submissions;
    const auto& b = other.problem("p1").submissions;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].submission_id == b[i].submission_id);
      CHECK(a[i].language == b[i].language);
    }
  }
}

TEST_CASE("the 100 x 6 fixture loads with counts matching its construction") {
  const fs::path root = fixture::scratch_dir("corpus-100x6");
  fixture::CorpusShape shape;
  shape.n_problems = 100;
  shape.java_per_problem = 3;
  shape.ruby_per_problem = 3;
  shape.max_rejected = 4;
  fixture::write_corpus(root, shape);
  const Corpus c = load_corpus(root, {Language::java(), Language::ruby()});
  REQUIRE(c.problems().size() == 100);
  std::size_t accepted = 0;
  std::size_t index = 0;
  for (const auto& [pid, p] : c.problems()) {
    CHECK(pid == fixture::problem_id(index));
    CHECK(p.submissions.size() == 6);
    CHECK(p.count_in(Language::java()) == 3);
    CHECK(p.total_submissions == 6 + index % 5);
    CHECK(p.accepted_submissions <= p.total_submissions);
    for (const auto& s : p.submissions) CHECK(s.status.accepted());
    accepted += p.accepted_submissions;
    ++index;
  }
  CHECK(accepted == 600);
}

TEST_CASE("invalid UTF-8 in a source is replaced and flagged") {
  const fs::path root = fixture::scratch_dir("corpus-utf8");
  put(root / "metadata" / "p1.csv", std::string(kHeader) + "a,p1,Ruby,Accepted,rb\n");
  put(root / "data/p1/Ruby/a.rb", std::string("puts \"caf\xE9\"\n"));
  const Corpus c = load_corpus(root, {Language::ruby()});
  const SourceText src = read_source(c.problem("p1").submissions[0]);
  CHECK(src.replaced_invalid_utf8);
  CHECK(src.text == "puts \"caf\xEF\xBF\xBD\"\n");
}

TEST_CASE("text helpers") {
  bool replaced = true;
  CHECK(sanitize_utf8("h\xC3\xA9llo", &replaced) == "h\xC3\xA9llo");
  CHECK_FALSE(replaced);
  CHECK(sanitize_utf8("\xC0\xAF", &replaced) == "\xEF\xBF\xBD\xEF\xBF\xBD");
  CHECK(replaced);
  CHECK(sanitize_utf8("\xED\xA0\x80") == "\xEF\xBF\xBD\xEF\xBF\xBD\xEF\xBF\xBD");

  std::vector<std::string> f;
  CHECK(split_csv_record("a,\"b,c\",\"d\"\"e\"", f));
  CHECK(f == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK_FALSE(split_csv_record("a,\"b", f));
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(format_fixed(2.546, 2) == "2.55");
  CHECK(format_fixed(3.0, 3) == "3.000");
  CHECK(round_to(0.8775, 3) == doctest::Approx(0.878));
  CHECK(parse_language_list("Java, ruby") == std::vector<Language>{Language::java(), Language::ruby()});
}
