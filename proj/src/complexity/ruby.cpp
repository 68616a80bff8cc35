// Ruby lexer and structural analyzer for cyclomatic complexity.
//
// Decision points: if, elsif, unless, while, until (block and modifier
// forms), for, when, rescue (clause and modifier), the ternary operator,
// && / and, || / or, and the short-circuit assignments &&= and ||=.
//
// The lexer resolves Ruby's context-dependent tokens (`?` character literals
// vs ternary, `/` regex vs division, `%` literals vs modulo, `<<` heredocs vs
// shift, `:sym` vs `:`) from whether the previous token ends a value. String
// interpolations are lexed as code, so decision points inside `#{...}` count.

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "complexity/token.hpp"

namespace clonebench::detail {

namespace {

const std::set<std::string, std::less<>> kRubyKeywords = {
    "__ENCODING__", "__LINE__", "__FILE__", "__method__", "BEGIN",  "END",   "alias",  "and",    "begin",
    "break",        "case",     "class",    "def",        "defined?", "do",  "else",   "elsif",  "end",
    "ensure",       "false",    "for",      "if",         "in",     "module", "next",  "nil",    "not",
    "or",           "redo",     "rescue",   "retry",      "return", "self",  "super",  "then",   "true",
    "undef",        "unless",   "until",    "when",       "while",  "yield"};

// Keywords that end a value for lexing purposes (`nil ? a : b`, `self / 2`).
const std::set<std::string, std::less<>> kValueKeywords = {"end",      "self",     "nil",        "true",
                                                           "false",    "__FILE__", "__LINE__",   "__method__",
                                                           "__ENCODING__"};

constexpr std::string_view kRubyOperators[] = {
    "**=", "<=>", "===", "...", "<<=", ">>=", "&&=", "||=", "**", "==", "!=", ">=", "<=", "&&", "||", "<<",
    ">>",  "=~",  "!~",  "..",  "::",  "->",  "=>",  "+=",  "-=", "*=", "/=", "%=", "|=", "&=", "^=", "&.",
    "+",   "-",   "*",   "/",   "%",   "=",   "<",   ">",   "!",  "&",  "|",  "^",  "~",  "?",  ":"};

constexpr std::string_view kOperatorSymbols[] = {"[]=", "<=>", "===", "**", "==", "!=", "=~", "!~", ">=", "<=", "<<",
                                                 ">>",  "[]",  "+@",  "-@", "+",  "-",  "*",  "/",  "%",  "<",  ">",
                                                 "!",   "&",   "|",   "^",  "~"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c); }

struct LexFailure {
  int line;
  std::string message;
};

struct Heredoc {
  std::string id;
  bool indented;
  bool interpolates;
  int line;
};

class RubyLexer {
 public:
  explicit RubyLexer(std::string_view src) : src_(src) {}

  LexResult run() {
    LexResult out;
    try {
      lex(false);
      if (!heredocs_.empty()) throw LexFailure{heredocs_.front().line, "unterminated heredoc " + heredocs_.front().id};
    } catch (const LexFailure& f) {
      out.error = LexError{f.line, f.message};
    }
    out.tokens = std::move(tokens_);
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }
  bool at_line_start() const { return pos_ == 0 || src_[pos_ - 1] == '\n'; }

  const Token* last() const { return tokens_.empty() ? nullptr : &tokens_.back(); }

  bool prev_value() const {
    const Token* t = last();
    if (t == nullptr) return false;
    switch (t->kind) {
      case TokKind::Identifier:
      case TokKind::Number:
      case TokKind::String:
      case TokKind::Char:
      case TokKind::Symbol:
      case TokKind::Regex:
        return true;
      case TokKind::Punct:
        return t->text == ")" || t->text == "]" || t->text == "}";
      case TokKind::Keyword:
        return kValueKeywords.count(t->text) != 0;
      default:
        return false;
    }
  }

  // `foo /re/`, `puts %w[a]`, `puts <<~X`: an identifier followed by a space
  // and then a non-space is treated as a command call with an argument.
  bool command_argument_position(bool space_before) const {
    const Token* t = last();
    return t != nullptr && t->kind == TokKind::Identifier && space_before && peek(1) != ' ' && peek(1) != '=';
  }

  bool method_name_context() const {
    const Token* t = last();
    if (t == nullptr) return false;
    return t->punct(".") || t->op("&.") || t->keyword("def") || (t->op("::") && std::islower(static_cast<unsigned char>(peek())));
  }

  void push(TokKind kind, std::size_t begin, int line, bool space) {
    tokens_.push_back(Token{kind, std::string(src_.substr(begin, pos_ - begin)), line, space});
  }

  [[noreturn]] void fail(int line, std::string message) const { throw LexFailure{line, std::move(message)}; }

  bool continues_on_next_line() const {
    const Token* t = last();
    if (t == nullptr || t->kind == TokKind::Newline) return true;
    if (t->kind == TokKind::Operator) return true;
    if (t->punct(",") || t->punct(".") || t->punct("(") || t->punct("[") || t->punct("{")) return true;
    if (t->keyword("and") || t->keyword("or") || t->keyword("not")) return true;
    // Leading-dot method chains.
    std::size_t p = pos_ + 1;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) ++p;
    if (p < src_.size() && src_[p] == '.' && (p + 1 >= src_.size() || src_[p + 1] != '.')) return true;
    if (p + 1 < src_.size() && src_[p] == '&' && src_[p + 1] == '.') return true;
    return false;
  }

  // Lexes until end of input or, inside an interpolation, the closing brace.
  void lex(bool in_interpolation) {
    int brace_depth = 0;
    bool space = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];

      if (c == '\n') {
        if (!in_interpolation && !continues_on_next_line()) {
          tokens_.push_back(Token{TokKind::Newline, "\n", line_, space});
        }
        ++pos_;
        ++line_;
        space = true;
        read_heredoc_bodies();
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {
        pos_ += 2;
        ++line_;
        space = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
        space = true;
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (at_line_start() && starts("=begin") && !ident_char(static_cast<unsigned char>(peek(6)))) {
        skip_block_comment();
        continue;
      }
      if (at_line_start() && starts("__END__") && (peek(7) == '\n' || peek(7) == '\r' || peek(7) == '\0')) {
        pos_ = src_.size();
        break;
      }

      const bool sp = space;
      space = false;
      const int line = line_;
      const std::size_t begin = pos_;

      if (in_interpolation && c == '}' && brace_depth == 0) return;

      if (ident_start(static_cast<unsigned char>(c))) {
        lex_identifier(sp);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number();
        push(TokKind::Number, begin, line, sp);
      } else if (c == '@') {
        ++pos_;
        if (peek() == '@') ++pos_;
        while (ident_char(static_cast<unsigned char>(peek()))) ++pos_;
        push(TokKind::Identifier, begin, line, sp);
      } else if (c == '$') {
        ++pos_;
        if (ident_start(static_cast<unsigned char>(peek()))) {
          while (ident_char(static_cast<unsigned char>(peek()))) ++pos_;
        } else if (peek() == '-' && ident_char(static_cast<unsigned char>(peek(1)))) {
          pos_ += 2;
        } else if (pos_ < src_.size()) {
          ++pos_;
        }
        push(TokKind::Identifier, begin, line, sp);
      } else if (c == '"' || c == '`') {
        ++pos_;
        scan_quoted(c, c, true, line);
        push(TokKind::String, begin, line, sp);
      } else if (c == '\'') {
        ++pos_;
        scan_quoted('\'', '\'', false, line);
        push(TokKind::String, begin, line, sp);
      } else if (c == '?' && !prev_value() && try_char_literal()) {
        push(TokKind::Char, begin, line, sp);
      } else if (c == ':' && peek(1) != ':' && (!prev_value() || (sp && peek(1) != ' ')) && try_symbol(line)) {
        push(TokKind::Symbol, begin, line, sp);
      } else if (c == '/' && (!prev_value() || command_argument_position(sp))) {
        ++pos_;
        scan_regex('/', '/', line);
        push(TokKind::Regex, begin, line, sp);
      } else if (c == '%' && (!prev_value() || command_argument_position(sp)) && try_percent_literal(line)) {
        push(percent_kind_, begin, line, sp);
      } else if (c == '<' && peek(1) == '<' && try_heredoc(sp, line)) {
        push(TokKind::String, begin, line, sp);
      } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == ';' ||
                 (c == '.' && peek(1) != '.')) {
        ++pos_;
        push(TokKind::Punct, begin, line, sp);
      } else if (c == '{') {
        ++pos_;
        ++brace_depth;
        push(TokKind::Punct, begin, line, sp);
      } else if (c == '}') {
        ++pos_;
        --brace_depth;
        push(TokKind::Punct, begin, line, sp);
      } else {
        lex_operator(line, sp);
      }
    }
    if (in_interpolation) fail(line_, "unterminated string interpolation");
  }

  void lex_identifier(bool sp) {
    const std::size_t begin = pos_;
    const int line = line_;
    const bool method_name = method_name_context();
    while (ident_char(static_cast<unsigned char>(peek()))) ++pos_;
    if ((peek() == '?' || peek() == '!') && !(peek(1) == '=' && peek(2) != '=' && peek(2) != '~')) ++pos_;
    const std::string_view word = src_.substr(begin, pos_ - begin);
    if (peek() == ':' && peek(1) != ':' && !method_name) {
      // Hash label `key: value` / keyword argument.
      ++pos_;
      push(TokKind::Label, begin, line, sp);
      return;
    }
    const bool keyword = !method_name && kRubyKeywords.count(word) != 0;
    push(keyword ? TokKind::Keyword : TokKind::Identifier, begin, line, sp);
  }

  void lex_number() {
    if (peek() == '0' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      pos_ += 2;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      return;
    }
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    };
    digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      digits();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      pos_ += 2;
      digits();
    }
    if ((peek() == 'r' || peek() == 'i') && !ident_char(static_cast<unsigned char>(peek(1)))) ++pos_;
  }

  void lex_operator(int line, bool sp) {
    const std::size_t begin = pos_;
    for (const auto op : kRubyOperators) {
      if (!starts(op)) continue;
      pos_ += op.size();
      const Token* prev = last();
      const bool after_block_open = prev != nullptr && (prev->punct("{") || prev->keyword("do"));
      if (op == "|" && (after_block_open || in_block_params_)) {
        in_block_params_ = after_block_open;
        push(TokKind::Punct, begin, line, sp);
      } else if (op == "||" && after_block_open) {
        push(TokKind::Punct, begin, line, sp);
      } else {
        push(TokKind::Operator, begin, line, sp);
      }
      return;
    }
    fail(line, std::string("unexpected character '") + src_[pos_] + "'");
  }

  void skip_block_comment() {
    const int start = line_;
    while (pos_ < src_.size()) {
      const std::size_t eol = src_.find('\n', pos_);
      const bool is_end = starts("=end");
      pos_ = eol == std::string_view::npos ? src_.size() : eol + 1;
      if (eol != std::string_view::npos) ++line_;
      if (is_end) return;
    }
    fail(start, "unterminated =begin comment");
  }

  // Body of a quoted literal after its opening delimiter. `open` != `close`
  // for bracket delimiters, which nest.
  void scan_quoted(char open, char close, bool interpolates, int start_line) {
    int depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        if (peek(1) == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (c == '\n') ++line_;
      if (interpolates && c == '#' && peek(1) == '{') {
        interpolation();
        continue;
      }
      if (open != close && c == open) {
        ++depth;
      } else if (c == close) {
        if (depth == 0) {
          ++pos_;
          return;
        }
        --depth;
      }
      ++pos_;
    }
    fail(start_line, "unterminated string literal");
  }

  void interpolation() {
    const int line = line_;
    const std::size_t begin = pos_;
    pos_ += 2;
    tokens_.push_back(Token{TokKind::InterpOpen, std::string(src_.substr(begin, 2)), line, false});
    const bool saved_params = in_block_params_;
    in_block_params_ = false;
    lex(true);
    in_block_params_ = saved_params;
    tokens_.push_back(Token{TokKind::InterpClose, "}", line_, false});
    ++pos_;  // closing brace
  }

  void scan_regex(char open, char close, int start_line) {
    int depth = 0;
    int class_depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n') ++line_;
      if (c == '#' && peek(1) == '{') {
        interpolation();
        continue;
      }
      if (c == '[') {
        ++class_depth;
      } else if (c == ']' && class_depth > 0) {
        --class_depth;
      } else if (class_depth == 0) {
        if (open != close && c == open) {
          ++depth;
        } else if (c == close) {
          if (depth == 0) {
            ++pos_;
            while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
            return;
          }
          --depth;
        }
      }
      ++pos_;
    }
    fail(start_line, "unterminated regular expression");
  }

  bool try_char_literal() {
    const char next = peek(1);
    if (next == '\0' || std::isspace(static_cast<unsigned char>(next))) return false;
    std::size_t len = 2;
    if (next == '\\') {
      len = 3;
      if (peek(2) == 'u' && peek(3) == '{') {
        while (pos_ + len < src_.size() && src_[pos_ + len - 1] != '}') ++len;
      } else if (peek(2) == 'u') {
        len = 7;
      }
    } else if (static_cast<unsigned char>(next) >= 0x80) {
      while (pos_ + len < src_.size() && (static_cast<unsigned char>(src_[pos_ + len]) & 0xC0) == 0x80) ++len;
    }
    if (pos_ + len < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_ + len])) && next != '\\') {
      return false;
    }
    pos_ += len;
    return true;
  }

  bool try_symbol(int line) {
    const char next = peek(1);
    if (ident_start(static_cast<unsigned char>(next))) {
      ++pos_;
      while (ident_char(static_cast<unsigned char>(peek()))) ++pos_;
      if ((peek() == '?' || peek() == '!') && peek(1) != '=') ++pos_;
      return true;
    }
    if (next == '"' || next == '\'') {
      pos_ += 2;
      scan_quoted(next, next, next == '"', line);
      return true;
    }
    if (next == '@' || next == '$') {
      pos_ += 2;
      if (peek() == '@') ++pos_;
      while (ident_char(static_cast<unsigned char>(peek()))) ++pos_;
      return true;
    }
    for (const auto op : kOperatorSymbols) {
      if (src_.substr(pos_ + 1, op.size()) == op) {
        pos_ += 1 + op.size();
        return true;
      }
    }
    return false;
  }

  bool try_percent_literal(int line) {
    char type = peek(1);
    std::size_t delim_at = 2;
    if (std::isalpha(static_cast<unsigned char>(type))) {
      if (std::string_view("qQwWiIrsx").find(type) == std::string_view::npos) return false;
    } else {
      type = 'Q';
      delim_at = 1;
    }
    const char open = peek(delim_at);
    if (open == '\0' || std::isalnum(static_cast<unsigned char>(open)) || std::isspace(static_cast<unsigned char>(open)) ||
        open == '=') {
      return false;
    }
    char close = open;
    if (open == '(') close = ')';
    if (open == '[') close = ']';
    if (open == '{') close = '}';
    if (open == '<') close = '>';
    pos_ += delim_at + 1;
    if (type == 'r') {
      scan_regex(open, close, line);
      percent_kind_ = TokKind::Regex;
    } else {
      const bool interpolates = std::string_view("QWIx").find(type) != std::string_view::npos;
      scan_quoted(open, close, interpolates, line);
      percent_kind_ = type == 's' ? TokKind::Symbol : TokKind::String;
    }
    return true;
  }

  bool try_heredoc(bool sp, int line) {
    std::size_t p = pos_ + 2;
    bool indented = false;
    if (p < src_.size() && (src_[p] == '~' || src_[p] == '-')) {
      indented = true;
      ++p;
    }
    char quote = '\0';
    if (p < src_.size() && (src_[p] == '"' || src_[p] == '\'' || src_[p] == '`')) quote = src_[p++];
    const std::size_t id_begin = p;
    while (p < src_.size() && ident_char(static_cast<unsigned char>(src_[p]))) ++p;
    if (p == id_begin || !ident_start(static_cast<unsigned char>(src_[id_begin]))) return false;
    if (prev_value()) {
      const bool command_arg = last()->kind == TokKind::Identifier && sp && src_[pos_ + 2] != ' ';
      if (!command_arg) return false;
      if (!indented && quote == '\0' && !std::isupper(static_cast<unsigned char>(src_[id_begin]))) return false;
    }
    std::string id(src_.substr(id_begin, p - id_begin));
    if (quote != '\0') {
      if (p >= src_.size() || src_[p] != quote) return false;
      ++p;
    }
    heredocs_.push_back(Heredoc{std::move(id), indented, quote != '\'', line});
    pos_ = p;
    return true;
  }

  void read_heredoc_bodies() {
    while (!heredocs_.empty()) {
      const Heredoc doc = heredocs_.front();
      heredocs_.erase(heredocs_.begin());
      bool closed = false;
      while (pos_ < src_.size()) {
        std::size_t eol = src_.find('\n', pos_);
        if (eol == std::string_view::npos) eol = src_.size();
        std::string_view text = src_.substr(pos_, eol - pos_);
        if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
        if (doc.indented) {
          while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
        }
        if (text == doc.id) {
          pos_ = eol < src_.size() ? eol + 1 : eol;
          if (eol < src_.size()) ++line_;
          closed = true;
          break;
        }
        // Body line: only interpolations matter.
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          if (doc.interpolates && src_[pos_] == '\\') {
            pos_ += 2;
          } else if (doc.interpolates && src_[pos_] == '#' && peek(1) == '{') {
            interpolation();
          } else {
            ++pos_;
          }
        }
        if (pos_ < src_.size()) {
          ++pos_;
          ++line_;
        }
      }
      if (!closed) fail(doc.line, "unterminated heredoc " + doc.id);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> tokens_;
  std::vector<Heredoc> heredocs_;
  bool in_block_params_ = false;
  TokKind percent_kind_ = TokKind::String;
};

// ---------------------------------------------------------------------------

bool ends_statement(const Token& t) {
  switch (t.kind) {
    case TokKind::Identifier:
    case TokKind::Number:
    case TokKind::String:
    case TokKind::Char:
    case TokKind::Symbol:
    case TokKind::Regex:
      return true;
    case TokKind::Punct:
      return t.text == ")" || t.text == "]" || t.text == "}";
    case TokKind::Keyword: {
      static const std::set<std::string, std::less<>> kEnders = {
          "end",  "self",  "nil",   "true",  "false", "return",   "break",    "next",       "redo",
          "retry", "yield", "super", "__FILE__", "__LINE__", "__method__", "__ENCODING__"};
      return kEnders.count(t.text) != 0;
    }
    default:
      return false;
  }
}

class RubyStructure {
 public:
  explicit RubyStructure(const std::vector<Token>& tokens) : t_(tokens) {}

  StructureResult run() {
    StructureResult out;
    for (std::size_t i = 0; i < t_.size() && error_.empty(); ++i) step(i);
    if (error_.empty() && !stack_.empty()) {
      const Frame& f = stack_.back();
      fail(t_.size(), "'" + f.kind + "' opened on line " + std::to_string(f.line) + " is never closed");
    }
    out.ok = error_.empty();
    out.diagnostics = error_;
    out.decision_points = count();
    return out;
  }

 private:
  struct Frame {
    std::string kind;
    int line;
  };

  void fail(std::size_t i, const std::string& what) {
    if (!error_.empty()) return;
    const int line = i < t_.size() ? t_[i].line : (t_.empty() ? 0 : t_.back().line);
    error_ = "line " + std::to_string(line) + ": " + what;
  }

  bool modifier_position(std::size_t i) const {
    if (i == 0) return false;
    const Token& prev = t_[i - 1];
    if (prev.kind == TokKind::Newline || prev.punct(";")) return false;
    return ends_statement(prev);
  }

  void open(const std::string& kind, std::size_t i) { stack_.push_back(Frame{kind, t_[i].line}); }

  bool top_is(std::initializer_list<std::string_view> kinds) const {
    if (stack_.empty()) return false;
    for (const auto k : kinds) {
      if (stack_.back().kind == k) return true;
    }
    return false;
  }

  void close(std::size_t i, std::string_view expected_open) {
    if (stack_.empty() || stack_.back().kind != expected_open) {
      fail(i, "'" + t_[i].text + "' does not match " +
                  (stack_.empty() ? std::string("anything") : "'" + stack_.back().kind + "'"));
      return;
    }
    stack_.pop_back();
  }

  bool endless_def(std::size_t i) const {
    std::size_t j = i + 1;
    if (j + 1 < t_.size() && (t_[j].keyword("self") || t_[j].kind == TokKind::Identifier) && t_[j + 1].punct(".")) {
      j += 2;
    }
    if (j >= t_.size()) return false;
    ++j;  // method name
    if (j + 1 < t_.size() && t_[j].op("=") && !t_[j].space_before && t_[j + 1].punct("(")) ++j;  // setter
    if (j < t_.size() && t_[j].punct("(")) {
      int depth = 0;
      for (; j < t_.size(); ++j) {
        if (t_[j].punct("(")) ++depth;
        if (t_[j].punct(")") && --depth == 0) break;
      }
      ++j;
    }
    return j < t_.size() && t_[j].op("=");
  }

  void step(std::size_t i) {
    const Token& tok = t_[i];
    if (tok.kind == TokKind::Newline || tok.punct(";")) {
      loop_do_pending_ = false;
      return;
    }
    if (tok.kind == TokKind::Punct) {
      if (tok.text == "(" || tok.text == "[" || tok.text == "{") open(tok.text, i);
      if (tok.text == ")") close(i, "(");
      if (tok.text == "]") close(i, "[");
      if (tok.text == "}") close(i, "{");
      return;
    }
    if (tok.kind == TokKind::InterpOpen) {
      open("#{", i);
      return;
    }
    if (tok.kind == TokKind::InterpClose) {
      close(i, "#{");
      return;
    }
    if (tok.kind != TokKind::Keyword) return;

    const std::string& k = tok.text;
    if (k == "if" || k == "unless") {
      if (!modifier_position(i)) open(k, i);
    } else if (k == "while" || k == "until") {
      if (!modifier_position(i)) {
        open(k, i);
        loop_do_pending_ = true;
      }
    } else if (k == "for") {
      open(k, i);
      loop_do_pending_ = true;
    } else if (k == "do") {
      if (loop_do_pending_) {
        loop_do_pending_ = false;
      } else {
        open(k, i);
      }
    } else if (k == "def") {
      if (!endless_def(i)) open(k, i);
    } else if (k == "class" || k == "module" || k == "case" || k == "begin") {
      open(k, i);
    } else if (k == "end") {
      if (stack_.empty() || stack_.back().kind.size() < 2 || !std::isalpha(static_cast<unsigned char>(stack_.back().kind[0]))) {
        fail(i, "'end' does not close a block" +
                    (stack_.empty() ? std::string() : " (innermost is '" + stack_.back().kind + "')"));
      } else {
        stack_.pop_back();
      }
    } else if (k == "elsif") {
      if (!top_is({"if"})) fail(i, "elsif outside if");
    } else if (k == "when") {
      if (!top_is({"case"})) fail(i, "when outside case");
    } else if (k == "rescue") {
      if (!modifier_position(i) && !top_is({"begin", "def", "do", "class", "module"})) fail(i, "rescue outside a body");
    } else if (k == "ensure") {
      if (!top_is({"begin", "def", "do", "class", "module"})) fail(i, "ensure outside a body");
    } else if (k == "else") {
      if (!top_is({"if", "unless", "case", "begin", "def", "do", "class", "module"})) fail(i, "misplaced else");
    }
  }

  int count() const {
    int n = 0;
    for (const auto& tok : t_) {
      if (tok.kind == TokKind::Keyword) {
        const std::string& k = tok.text;
        if (k == "if" || k == "unless" || k == "elsif" || k == "while" || k == "until" || k == "for" || k == "when" ||
            k == "rescue" || k == "and" || k == "or") {
          ++n;
        }
      } else if (tok.kind == TokKind::Operator) {
        if (tok.text == "?" || tok.text == "&&" || tok.text == "||" || tok.text == "&&=" || tok.text == "||=") ++n;
      }
    }
    return n;
  }

  const std::vector<Token>& t_;
  std::vector<Frame> stack_;
  bool loop_do_pending_ = false;
  std::string error_;
};

}  // namespace

LexResult lex_ruby(std::string_view source) { return RubyLexer(source).run(); }

StructureResult analyze_ruby(const std::vector<Token>& tokens) { return RubyStructure(tokens).run(); }

}  // namespace clonebench::detail
