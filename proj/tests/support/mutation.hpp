#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixture {

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

inline bool ends_with_char(const std::string& s, char c) {
  const auto last = s.find_last_not_of(" \t");
  return last != std::string::npos && s[last] == c;
}

// Inserts one `if` statement at a random statement boundary inside a method
// body (Java) or at a random line boundary (Ruby). Returns "" when the source
// has no such boundary.
inline std::string insert_if(const std::string& source, bool ruby, std::mt19937& gen) {
  auto lines = lines_of(source);
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (ruby) {
      if (lines[i].find("case ") != 0) slots.push_back(i + 1);
    } else if (lines[i].find("import ") != 0 &&
               (ends_with_char(lines[i], ';') || lines[i].find("for (") != std::string::npos)) {
      slots.push_back(i + 1);
    }
  }
  if (slots.empty()) return "";
  const std::size_t at = slots[std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(gen)];
  const int shape = std::uniform_int_distribution<int>(0, 2)(gen);
  std::string stmt;
  if (ruby) {
    stmt = shape == 0 ? "zz = 1 if zz_flag" : shape == 1 ? "if zz_flag\n  zz = 2\nend" : "if zz_flag then zz = 3 end";
  } else {
    stmt = shape == 0   ? "if (zzFlag) zz = 1;"
           : shape == 1 ? "if (zzFlag) {\n zz = 2;\n}"
                        : "if (zzFlag) { zz = 3; } else { zz = 4; }";
  }
  lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), stmt);
  return join_lines(lines);
}

}  // namespace fixture
