// Java lexer and structural analyzer for cyclomatic complexity.
//
// Decision points: if, for (both forms), while, do-while, each case label,
// catch, the ternary operator, && and ||. A do-while contributes through its
// trailing `while`; wildcard `?` in generic type arguments is not a ternary.

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "complexity/token.hpp"

namespace clonebench::detail {

namespace {

const std::set<std::string, std::less<>> kJavaKeywords = {
    "abstract", "assert",     "boolean",  "break",     "byte",      "case",     "catch",  "char",
    "class",    "const",      "continue", "default",   "do",        "double",   "else",   "enum",
    "extends",  "final",      "finally",  "float",     "for",       "goto",     "if",     "implements",
    "import",   "instanceof", "int",      "interface", "long",      "native",   "new",    "package",
    "private",  "protected",  "public",   "return",    "short",     "static",   "strictfp",
    "super",    "switch",     "synchronized", "this",  "throw",     "throws",   "transient",
    "try",      "void",       "volatile", "while",     "true",      "false",    "null"};

// Longest first so that maximal munch is a linear scan.
constexpr std::string_view kJavaOperators[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=", "|=", "^=", "<<", ">>", "+",  "-",  "*",  "/",  "%",
    "&",    "|",   "^",   "!",   "~",   "=",  "<",  ">",  "?",  ":",  "@",  ".",  ",",  ";",  "(",
    ")",    "["};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class JavaLexer {
 public:
  explicit JavaLexer(std::string_view src) : src_(src) {}

  LexResult run() {
    LexResult out;
    bool space = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        space = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        space = true;
        continue;
      }
      if (starts("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        space = true;
        continue;
      }
      if (starts("/*")) {
        const int start_line = line_;
        pos_ += 2;
        while (pos_ < src_.size() && !starts("*/")) {
          if (src_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ >= src_.size()) return fail(out, start_line, "unterminated block comment");
        pos_ += 2;
        space = true;
        continue;
      }

      Token tok{TokKind::Punct, {}, line_, space};
      space = false;
      const std::size_t begin = pos_;
      if (starts("\"\"\"")) {
        const int start_line = line_;
        pos_ += 3;
        while (pos_ < src_.size() && !starts("\"\"\"")) {
          if (src_[pos_] == '\\') ++pos_;
          else if (src_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ >= src_.size()) return fail(out, start_line, "unterminated text block");
        pos_ += 3;
        tok.kind = TokKind::String;
      } else if (c == '"' || c == '\'') {
        ++pos_;
        while (pos_ < src_.size() && src_[pos_] != c && src_[pos_] != '\n') {
          if (src_[pos_] == '\\') ++pos_;
          ++pos_;
        }
        if (pos_ >= src_.size() || src_[pos_] != c) {
          return fail(out, line_, c == '"' ? "unterminated string literal" : "unterminated char literal");
        }
        ++pos_;
        tok.kind = c == '"' ? TokKind::String : TokKind::Char;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
        tok.kind = TokKind::Number;
      } else if (ident_start(static_cast<unsigned char>(c))) {
        while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok.kind = kJavaKeywords.count(src_.substr(begin, pos_ - begin)) ? TokKind::Keyword : TokKind::Identifier;
      } else if (c == '{' || c == '}' || c == ']') {
        ++pos_;
      } else {
        bool matched = false;
        for (const auto op : kJavaOperators) {
          if (starts(op)) {
            pos_ += op.size();
            matched = true;
            break;
          }
        }
        if (!matched) return fail(out, line_, std::string("unexpected character '") + c + "'");
        const std::string_view text = src_.substr(begin, pos_ - begin);
        const bool punct = text == "(" || text == ")" || text == "[" || text == ";" || text == "," ||
                           text == "." || text == "@";
        tok.kind = punct ? TokKind::Punct : TokKind::Operator;
      }
      tok.text = std::string(src_.substr(begin, pos_ - begin));
      out.tokens.push_back(std::move(tok));
    }
    return out;
  }

 private:
  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void lex_number() {
    const bool hex = starts("0x") || starts("0X");
    if (hex) pos_ += 2;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      const char prev = pos_ > 0 ? src_[pos_ - 1] : '\0';
      const bool exponent_sign =
          (c == '+' || c == '-') && (hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E'));
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || exponent_sign) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  static LexResult& fail(LexResult& out, int line, std::string message) {
    out.error = LexError{line, std::move(message)};
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

bool is_open(const Token& t) { return t.punct("(") || t.punct("[") || t.punct("{"); }
bool is_close(const Token& t) { return t.punct(")") || t.punct("]") || t.punct("}"); }

char closer_for(const std::string& open) {
  if (open == "(") return ')';
  if (open == "[") return ']';
  return '}';
}

// Wildcard `?` in type arguments: `<?>`, `<? extends T>`, `Map<K, ? super V>`.
bool is_wildcard(const std::vector<Token>& t, std::size_t i) {
  if (i > 0 && (t[i - 1].op("<") || t[i - 1].punct(","))) return true;
  if (i + 1 >= t.size()) return false;
  const Token& next = t[i + 1];
  if (next.op(">") || next.op(">>") || next.op(">>>") || next.punct(",") || next.keyword("extends")) return true;
  if (next.keyword("super")) return !(i + 2 < t.size() && (t[i + 2].punct(".") || t[i + 2].punct("(")));
  return false;
}

class JavaStructure {
 public:
  explicit JavaStructure(const std::vector<Token>& tokens) : t_(tokens), match_(tokens.size(), npos) {}

  StructureResult run() {
    StructureResult out;
    if (!match_brackets()) {
      out.ok = false;
      out.diagnostics = error_;
    } else {
      for (std::size_t i = 0; i < t_.size() && error_.empty(); ++i) check_token(i);
      if (!error_.empty()) {
        out.ok = false;
        out.diagnostics = error_;
      }
    }
    out.decision_points = count();
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool fail(std::size_t i, const std::string& what) {
    if (error_.empty()) {
      const int line = i < t_.size() ? t_[i].line : (t_.empty() ? 0 : t_.back().line);
      error_ = "line " + std::to_string(line) + ": " + what;
    }
    return false;
  }

  bool match_brackets() {
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (is_open(t_[i])) {
        stack.push_back(i);
      } else if (is_close(t_[i])) {
        if (stack.empty()) return fail(i, "unbalanced '" + t_[i].text + "'");
        const std::size_t open = stack.back();
        if (t_[i].text[0] != closer_for(t_[open].text)) {
          return fail(i, "'" + t_[i].text + "' closes '" + t_[open].text + "'");
        }
        match_[open] = i;
        match_[i] = open;
        stack.pop_back();
      }
    }
    if (!stack.empty()) return fail(stack.back(), "unclosed '" + t_[stack.back()].text + "'");
    return true;
  }

  bool at(std::size_t i, std::string_view punct) const { return i < t_.size() && t_[i].punct(punct); }

  // Index just past a parenthesised group starting at i, or npos.
  std::size_t past_parens(std::size_t i) {
    if (!at(i, "(")) {
      fail(i, "expected '('");
      return npos;
    }
    return match_[i] + 1;
  }

  std::size_t past_block(std::size_t i) {
    if (!at(i, "{")) {
      fail(i, "expected '{'");
      return npos;
    }
    return match_[i] + 1;
  }

  // Skips one statement starting at i and returns the index after it. A
  // do-while must end in `while (...);`.
  std::size_t skip_statement(std::size_t i) {
    if (i >= t_.size()) {
      fail(i, "unexpected end of input in statement");
      return npos;
    }
    const Token& tok = t_[i];
    if (tok.punct("{")) return match_[i] + 1;
    if (tok.punct(";")) return i + 1;
    if (tok.keyword("if")) {
      std::size_t j = past_parens(i + 1);
      if (j == npos) return npos;
      j = skip_statement(j);
      if (j == npos) return npos;
      if (j < t_.size() && t_[j].keyword("else")) j = skip_statement(j + 1);
      return j;
    }
    if (tok.keyword("for") || tok.keyword("while")) {
      const std::size_t j = past_parens(i + 1);
      return j == npos ? npos : skip_statement(j);
    }
    if (tok.keyword("switch") || tok.keyword("synchronized")) {
      const std::size_t j = past_parens(i + 1);
      return j == npos ? npos : past_block(j);
    }
    if (tok.keyword("do")) {
      std::size_t j = skip_statement(i + 1);
      if (j == npos) return npos;
      if (j >= t_.size() || !t_[j].keyword("while")) {
        fail(j, "do statement without trailing while");
        return npos;
      }
      j = past_parens(j + 1);
      if (j == npos) return npos;
      if (!at(j, ";")) {
        fail(j, "expected ';' after do-while condition");
        return npos;
      }
      return j + 1;
    }
    if (tok.keyword("try")) {
      std::size_t j = i + 1;
      if (at(j, "(")) j = match_[j] + 1;
      j = past_block(j);
      bool handler = false;
      while (j != npos && j < t_.size() && t_[j].keyword("catch")) {
        j = past_parens(j + 1);
        if (j != npos) j = past_block(j);
        handler = true;
      }
      if (j != npos && j < t_.size() && t_[j].keyword("finally")) {
        j = past_block(j + 1);
        handler = true;
      }
      if (j != npos && !handler && !at(i + 1, "(")) {
        fail(i, "try without catch or finally");
        return npos;
      }
      return j;
    }
    if (tok.kind == TokKind::Identifier && i + 1 < t_.size() && t_[i + 1].op(":")) return skip_statement(i + 2);
    // Local type declaration: runs to the closing brace of its body.
    {
      std::size_t j = i;
      while (j < t_.size()) {
        if (t_[j].keyword("final") || t_[j].keyword("abstract") || t_[j].keyword("static") ||
            t_[j].keyword("strictfp")) {
          ++j;
        } else if (t_[j].punct("@") && j + 1 < t_.size()) {
          j += 2;
          if (at(j, "(")) j = match_[j] + 1;
        } else {
          break;
        }
      }
      const bool type_decl = j < t_.size() && (t_[j].keyword("class") || t_[j].keyword("interface") ||
                                               t_[j].keyword("enum") ||
                                               (t_[j].kind == TokKind::Identifier && t_[j].text == "record" &&
                                                j + 1 < t_.size() && t_[j + 1].kind == TokKind::Identifier));
      if (type_decl) {
        for (std::size_t k = j; k < t_.size(); ++k) {
          if (t_[k].punct("{")) return match_[k] + 1;
        }
      }
    }
    // Expression / declaration statement: up to the next top-level ';'.
    for (std::size_t j = i; j < t_.size(); ++j) {
      if (t_[j].punct(";")) return j + 1;
      if (is_open(t_[j])) {
        j = match_[j];
        continue;
      }
      if (is_close(t_[j])) {
        fail(j, "statement not terminated by ';'");
        return npos;
      }
    }
    fail(t_.size(), "statement not terminated by ';'");
    return npos;
  }

  bool inside_switch_block(std::size_t i) const {
    // Walk outwards to the nearest enclosing '{' and look at what precedes it.
    for (std::size_t j = i; j-- > 0;) {
      if (is_close(t_[j])) {
        j = match_[j];
        continue;
      }
      if (t_[j].punct("{")) {
        if (j == 0 || !t_[j - 1].punct(")")) return false;
        const std::size_t open = match_[j - 1];
        return open > 0 && t_[open - 1].keyword("switch");
      }
    }
    return false;
  }

  void check_token(std::size_t i) {
    const Token& tok = t_[i];
    if (tok.kind != TokKind::Keyword) return;
    if (tok.text == "if" || tok.text == "for" || tok.text == "switch" || tok.text == "catch") {
      if (!at(i + 1, "(")) fail(i + 1, "expected '(' after " + tok.text);
    } else if (tok.text == "while") {
      if (!at(i + 1, "(")) fail(i + 1, "expected '(' after while");
    } else if (tok.text == "do") {
      skip_statement(i);
    } else if (tok.text == "case") {
      if (!inside_switch_block(i)) fail(i, "case label outside switch");
    } else if (tok.text == "else") {
      if (i == 0 || !(t_[i - 1].punct("}") || t_[i - 1].punct(";"))) fail(i, "misplaced else");
    }
  }

  int count() const {
    int n = 0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const Token& tok = t_[i];
      if (tok.kind == TokKind::Keyword) {
        if (tok.text == "if" || tok.text == "for" || tok.text == "case" || tok.text == "catch") ++n;
        if (tok.text == "while") ++n;  // a do-while is counted once, via its trailing while
      } else if (tok.kind == TokKind::Operator) {
        if (tok.text == "&&" || tok.text == "||") ++n;
        if (tok.text == "?" && !is_wildcard(t_, i)) ++n;
      }
    }
    return n;
  }

  const std::vector<Token>& t_;
  std::vector<std::size_t> match_;
  std::string error_;
};

}  // namespace

LexResult lex_java(std::string_view source) { return JavaLexer(source).run(); }

StructureResult analyze_java(const std::vector<Token>& tokens) { return JavaStructure(tokens).run(); }

}  // namespace clonebench::detail
