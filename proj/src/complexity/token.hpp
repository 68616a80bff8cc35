#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonebench::detail {

enum class TokKind {
  Identifier,
  Keyword,
  Number,
  String,
  Char,
  Symbol,
  Regex,
  Operator,
  Punct,
  Newline,
  InterpOpen,
  InterpClose,
  Label,
};

struct Token {
  TokKind kind;
  std::string text;
  int line = 0;
  bool space_before = false;

  bool is(TokKind k, std::string_view t) const { return kind == k && text == t; }
  bool keyword(std::string_view t) const { return is(TokKind::Keyword, t); }
  bool punct(std::string_view t) const { return is(TokKind::Punct, t); }
  bool op(std::string_view t) const { return is(TokKind::Operator, t); }
};

struct LexError {
  int line = 0;
  std::string message;
};

struct LexResult {
  std::vector<Token> tokens;
  std::optional<LexError> error;
};

struct StructureResult {
  int decision_points = 0;
  bool ok = true;
  std::string diagnostics;
};

LexResult lex_java(std::string_view source);
LexResult lex_ruby(std::string_view source);

/// Structural pass over a successful lex: validates nesting and the shape of
/// control statements, and counts decision points. When `ok` is false the
/// count comes from token-level classification alone.
StructureResult analyze_java(const std::vector<Token>& tokens);
StructureResult analyze_ruby(const std::vector<Token>& tokens);

/// Count by plain text matching, used only when the source cannot be lexed.
int raw_text_decision_points(std::string_view source, bool ruby);

}  // namespace clonebench::detail
