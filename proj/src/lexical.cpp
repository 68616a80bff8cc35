#include "clonebench/lexical.hpp"

#include <cctype>

#include "clonebench/text.hpp"

namespace clonebench {

namespace {

constexpr std::string_view kMultiCharOperators[] = {
    ">>>=", "<<=", ">>=", ">>>", "**=", "<=>", "===", "...", "&&=", "||=", "->", "=>", "::", "++", "--", "&&", "||",
    "==",   "!=",  "<=",  ">=",  "+=",  "-=",  "*=",  "/=",  "%=",  "&=",  "|=", "^=", "<<", ">>", "**", "..", "=~"};

bool word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool word_char(unsigned char c) { return word_start(c) || std::isdigit(c); }

}  // namespace

std::set<std::string> lexical_tokens(std::string_view s) {
  std::set<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (s.substr(i, 2) == "//" || c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s.substr(i, 2) == "/*") {
      const std::size_t end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < s.size() && s[i] != static_cast<char>(c) && s[i] != '\n') {
        if (s[i] == '\\') ++i;
        ++i;
      }
      ++i;
    } else if (word_start(c)) {
      const std::size_t begin = i;
      while (i < s.size() && word_char(static_cast<unsigned char>(s[i]))) ++i;
      tokens.insert(to_lower_ascii(s.substr(begin, i - begin)));
    } else if (std::isdigit(c)) {
      const std::size_t begin = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                              (s[i] == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))))) {
        ++i;
      }
      tokens.insert(to_lower_ascii(s.substr(begin, i - begin)));
    } else {
      std::size_t len = 1;
      for (const auto op : kMultiCharOperators) {
        if (s.substr(i, op.size()) == op) {
          len = op.size();
          break;
        }
      }
      tokens.emplace(s.substr(i, len));
      i += len;
    }
  }
  return tokens;
}

double lexical_similarity(std::string_view a, std::string_view b) {
  const auto ta = lexical_tokens(a);
  const auto tb = lexical_tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  const std::size_t union_size = ta.size() + tb.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(union_size);
}

}  // namespace clonebench
