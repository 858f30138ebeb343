#include "esk/parse.hpp"

#include <cctype>
#include <unordered_set>

namespace esk {
namespace {

enum class Tok {
  End,
  Int,
  Ident,
  Bang,      // !
  Question,  // ?
  Colon,     // :
  Semi,      // ;
  Bar2,      // ||
  Backslash,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Caret,     // ^
  Comma,
  Degree,    // °
  Arrow,     // ↑
  Superset,  // ⊃
  Neg,       // ¬
};

struct Token {
  Tok tok;
  std::string text;
  int value = 0;
  int line = 1, col = 1;
  size_t offset = 0;  // byte offset of the token start
};

const std::unordered_set<std::string> kKeywords = {
    "nothing", "pause", "emit",   "await", "immediate", "not",  "if",
    "then",    "else",  "end",    "suspend", "when",    "loop", "trap",
    "in",      "exit",  "signal", "awimm",  "input",    "output"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(&text) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_->size() &&
           ((*text_)[pos_] == ' ' || (*text_)[pos_] == '\t' || (*text_)[pos_] == '\n' ||
            (*text_)[pos_] == '\r')) {
      if ((*text_)[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    cur_ = Token{Tok::End, "", 0, line_, col_, pos_};
    if (pos_ >= text_->size()) return;
    char c = (*text_)[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_->size() &&
             std::isdigit(static_cast<unsigned char>((*text_)[pos_])))
        take_byte();
      cur_.tok = Tok::Int;
      cur_.text = text_->substr(start, pos_ - start);
      if (cur_.text.size() > 6)
        throw ParseError("integer literal out of range", cur_.line, cur_.col);
      cur_.value = std::stoi(cur_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_->size() &&
             (std::isalnum(static_cast<unsigned char>((*text_)[pos_])) ||
              (*text_)[pos_] == '_' || (*text_)[pos_] == '\''))
        take_byte();
      cur_.tok = Tok::Ident;
      cur_.text = text_->substr(start, pos_ - start);
      return;
    }
    switch (c) {
      case '!': single(Tok::Bang); return;
      case '?': single(Tok::Question); return;
      case ':': single(Tok::Colon); return;
      case ';': single(Tok::Semi); return;
      case '\\': single(Tok::Backslash); return;
      case '{': single(Tok::LBrace); return;
      case '}': single(Tok::RBrace); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '[': single(Tok::LBracket); return;
      case ']': single(Tok::RBracket); return;
      case '^': single(Tok::Caret); return;
      case ',': single(Tok::Comma); return;
      case '|':
        if (pos_ + 1 < text_->size() && (*text_)[pos_ + 1] == '|') {
          take_byte();
          take_byte();
          cur_.tok = Tok::Bar2;
          return;
        }
        break;
      default:
        break;
    }
    if (match_utf8("\xc2\xb0", Tok::Degree)) return;
    if (match_utf8("\xe2\x86\x91", Tok::Arrow)) return;
    if (match_utf8("\xe2\x8a\x83", Tok::Superset)) return;
    if (match_utf8("\xc2\xac", Tok::Neg)) return;
    throw ParseError("unexpected character", line_, col_);
  }

  bool match_utf8(const char* seq, Tok tok) {
    size_t n = std::char_traits<char>::length(seq);
    if (text_->compare(pos_, n, seq) == 0) {
      pos_ += n;
      ++col_;
      cur_.tok = tok;
      return true;
    }
    return false;
  }

  void single(Tok tok) {
    cur_.tok = tok;
    take_byte();
  }

  void take_byte() {
    ++pos_;
    ++col_;
  }

  const std::string* text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.col);
}

void check_signal_name(const Token& t) {
  if (t.tok != Tok::Ident) fail(t, "expected a signal name");
  if (kKeywords.count(t.text)) fail(t, "keyword used as signal name");
}

// ---------------------------------------------------------------------
// Symbolic form.
//
// Precedence, loosest first:  s \ p   <   ||   <   ;   <   s ? p : q
//   <   s ⊃ p   <   ↑p   <   p°   <   primary.
// ; and || associate to the right.

class SymbolicParser {
 public:
  explicit SymbolicParser(const std::string& text) : lx_(text) {}

  StmtPtr parse_all() {
    StmtPtr p = decl();
    if (lx_.peek().tok != Tok::End) fail(lx_.peek(), "trailing input");
    return p;
  }

  StmtPtr decl() {
    if (lx_.peek().tok == Tok::Ident) {
      Lexer save = lx_;
      Token name = lx_.take();
      if (lx_.peek().tok == Tok::Backslash) {
        check_signal_name(name);
        lx_.take();
        return stmt::local(name.text, decl());
      }
      lx_ = save;
    }
    return par();
  }

  StmtPtr par() {
    StmtPtr l = seq();
    if (lx_.peek().tok == Tok::Bar2) {
      lx_.take();
      return stmt::par(l, par());
    }
    return l;
  }

  StmtPtr seq() {
    StmtPtr l = ternary();
    if (lx_.peek().tok == Tok::Semi) {
      lx_.take();
      return stmt::seq(l, seq());
    }
    return l;
  }

  StmtPtr ternary() {
    if (lx_.peek().tok == Tok::Ident && lx_.peek().text != "awimm") {
      Lexer save = lx_;
      Token name = lx_.take();
      if (lx_.peek().tok == Tok::Question) {
        check_signal_name(name);
        lx_.take();
        StmtPtr thn = susp();
        if (lx_.peek().tok != Tok::Colon) fail(lx_.peek(), "expected ':'");
        lx_.take();
        return stmt::test(name.text, thn, ternary());
      }
      lx_ = save;
    }
    return susp();
  }

  StmtPtr susp() {
    if (lx_.peek().tok == Tok::Ident && lx_.peek().text != "awimm") {
      Lexer save = lx_;
      Token name = lx_.take();
      if (lx_.peek().tok == Tok::Superset) {
        check_signal_name(name);
        lx_.take();
        return stmt::suspend(name.text, susp());
      }
      lx_ = save;
    }
    return shift();
  }

  StmtPtr shift() {
    if (lx_.peek().tok == Tok::Arrow) {
      lx_.take();
      return stmt::shift(shift());
    }
    return postfix();
  }

  StmtPtr postfix() {
    StmtPtr p = primary();
    while (lx_.peek().tok == Tok::Degree) {
      lx_.take();
      p = stmt::loop(p);
    }
    return p;
  }

  StmtPtr primary() {
    Token t = lx_.peek();
    switch (t.tok) {
      case Tok::Int:
        lx_.take();
        return stmt::constant(t.value);
      case Tok::Bang: {
        lx_.take();
        Token s = lx_.take();
        check_signal_name(s);
        return stmt::emit(s.text);
      }
      case Tok::LBrace: {
        lx_.take();
        StmtPtr p = decl();
        if (lx_.peek().tok != Tok::RBrace) fail(lx_.peek(), "expected '}'");
        lx_.take();
        return stmt::trap(p);
      }
      case Tok::LParen: {
        lx_.take();
        StmtPtr p = decl();
        if (lx_.peek().tok != Tok::RParen) fail(lx_.peek(), "expected ')'");
        lx_.take();
        return p;
      }
      case Tok::Ident:
        if (t.text == "awimm") {
          lx_.take();
          bool neg = false;
          if (lx_.peek().tok == Tok::Neg) {
            lx_.take();
            neg = true;
          }
          Token s = lx_.take();
          check_signal_name(s);
          return stmt::awimm(s.text, neg);
        }
        fail(t, "unexpected identifier");
      default:
        fail(t, "expected a statement");
    }
  }

  Lexer lx_;
};

// ---------------------------------------------------------------------
// Textual form. Trap names resolve to completion codes at parse time;
// raw `exit K` is accepted for exits no named trap can express.

struct TrapFrame {
  std::string name;  // empty marks a shift escape
};

class TextualParser {
 public:
  explicit TextualParser(const std::string& text) : lx_(text) {}

  StmtPtr parse_all() {
    StmtPtr p = statement();
    if (lx_.peek().tok != Tok::End) fail(lx_.peek(), "trailing input");
    return p;
  }

  StmtPtr statement() { return par(); }

  StmtPtr par() {
    StmtPtr l = seq();
    if (lx_.peek().tok == Tok::Bar2) {
      lx_.take();
      return stmt::par(l, par());
    }
    return l;
  }

  StmtPtr seq() {
    StmtPtr l = atom();
    if (lx_.peek().tok == Tok::Semi) {
      lx_.take();
      return stmt::seq(l, seq());
    }
    return l;
  }

  StmtPtr atom() {
    Token t = lx_.peek();
    if (t.tok == Tok::Arrow) {
      lx_.take();
      frames_.push_back({""});
      StmtPtr body = atom();
      frames_.pop_back();
      return stmt::shift(body);
    }
    if (t.tok == Tok::LBracket) {
      lx_.take();
      StmtPtr p = statement();
      expect(Tok::RBracket, "expected ']'");
      return p;
    }
    if (t.tok != Tok::Ident) fail(t, "expected a statement");
    if (t.text == "nothing") {
      lx_.take();
      return stmt::constant(0);
    }
    if (t.text == "pause") {
      lx_.take();
      return stmt::constant(1);
    }
    if (t.text == "emit") {
      lx_.take();
      Token s = lx_.take();
      check_signal_name(s);
      return stmt::emit(s.text);
    }
    if (t.text == "await") {
      lx_.take();
      expect_keyword("immediate");
      bool neg = false;
      if (lx_.peek().tok == Tok::Ident && lx_.peek().text == "not") {
        lx_.take();
        neg = true;
      }
      Token s = lx_.take();
      check_signal_name(s);
      return stmt::awimm(s.text, neg);
    }
    if (t.text == "if") {
      lx_.take();
      Token s = lx_.take();
      check_signal_name(s);
      expect_keyword("then");
      StmtPtr thn = statement();
      StmtPtr els = stmt::constant(0);
      if (lx_.peek().tok == Tok::Ident && lx_.peek().text == "else") {
        lx_.take();
        els = statement();
      }
      expect_keyword("end");
      return stmt::test(s.text, thn, els);
    }
    if (t.text == "suspend") {
      lx_.take();
      StmtPtr body = atom();
      expect_keyword("when");
      Token s = lx_.take();
      check_signal_name(s);
      return stmt::suspend(s.text, body);
    }
    if (t.text == "loop") {
      lx_.take();
      StmtPtr body = statement();
      expect_keyword("end");
      return stmt::loop(body);
    }
    if (t.text == "trap") {
      lx_.take();
      Token name = lx_.take();
      if (name.tok != Tok::Ident) fail(name, "expected a trap name");
      expect_keyword("in");
      frames_.push_back({name.text});
      StmtPtr body = statement();
      frames_.pop_back();
      expect_keyword("end");
      return stmt::trap(body);
    }
    if (t.text == "exit") {
      lx_.take();
      Token target = lx_.take();
      if (target.tok == Tok::Int) {
        if (target.value < 2) fail(target, "exit code < 2");
        return stmt::constant(target.value);
      }
      if (target.tok != Tok::Ident) fail(target, "expected trap name or code");
      int code = resolve_trap(target);
      if (lx_.peek().tok == Tok::Caret) {
        lx_.take();
        Token k = lx_.take();
        if (k.tok != Tok::Int) fail(k, "expected exit code");
        if (k.value < 2) fail(k, "exit code < 2");
        if (k.value != code)
          fail(k, "exit code does not match trap '" + target.text + "'");
      }
      return stmt::constant(code);
    }
    if (t.text == "signal") {
      lx_.take();
      Token s = lx_.take();
      check_signal_name(s);
      expect_keyword("in");
      StmtPtr body = statement();
      expect_keyword("end");
      return stmt::local(s.text, body);
    }
    fail(t, "expected a statement");
  }

 private:
  int resolve_trap(const Token& name) {
    int crossed = 0;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      if (it->name.empty())
        fail(name, "trap '" + name.text + "' is not reachable across ↑");
      if (it->name == name.text) return crossed + 2;
      ++crossed;
    }
    fail(name, "unbound trap name '" + name.text + "'");
  }

  void expect(Tok tok, const std::string& msg) {
    if (lx_.peek().tok != tok) fail(lx_.peek(), msg);
    lx_.take();
  }

  void expect_keyword(const std::string& kw) {
    Token t = lx_.peek();
    if (t.tok != Tok::Ident || t.text != kw) fail(t, "expected '" + kw + "'");
    lx_.take();
  }

  Lexer lx_;
  std::vector<TrapFrame> frames_;
};

std::vector<std::string> parse_name_list(Lexer& lx) {
  std::vector<std::string> names;
  for (;;) {
    Token t = lx.take();
    check_signal_name(t);
    names.push_back(t.text);
    if (lx.peek().tok == Tok::Comma) {
      lx.take();
      continue;
    }
    break;
  }
  if (lx.peek().tok != Tok::Semi)
    fail(lx.peek(), "expected ';' after interface list");
  lx.take();
  return names;
}

}  // namespace

StmtPtr parse(const std::string& text, Form form) {
  if (form == Form::Symbolic) return SymbolicParser(text).parse_all();
  return TextualParser(text).parse_all();
}

ParsedProgram parse_program(const std::string& text, Form form) {
  // Strip `input ...;` / `output ...;` headers, then parse the body.
  ParsedProgram prog;
  size_t body_start = 0;
  Lexer lx(text);
  while (lx.peek().tok == Tok::Ident &&
         (lx.peek().text == "input" || lx.peek().text == "output")) {
    bool is_input = lx.peek().text == "input";
    lx.take();
    auto names = parse_name_list(lx);
    auto& dst = is_input ? prog.inputs : prog.outputs;
    dst.insert(dst.end(), names.begin(), names.end());
    body_start = lx.peek().offset;
  }
  prog.body = parse(text.substr(body_start), form);
  return prog;
}

ParsedProgram parse_program_auto(const std::string& text) {
  try {
    return parse_program(text, Form::Textual);
  } catch (const ParseError& textual_err) {
    try {
      return parse_program(text, Form::Symbolic);
    } catch (const ParseError& symbolic_err) {
      if (symbolic_err.line > textual_err.line ||
          (symbolic_err.line == textual_err.line &&
           symbolic_err.column > textual_err.column))
        throw symbolic_err;
      throw textual_err;
    }
  }
}

}  // namespace esk
