#include "plans/parse.hpp"

#include <cctype>

namespace plans {

namespace {

struct Lexeme {
  enum class Kind { Ident, Int, LParen, RParen, Colon, Semi, Eof };
  Kind kind;
  std::string text;
  long value = 0;
  size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Lexeme& peek() const { return current_; }

  Lexeme take() {
    Lexeme out = current_;
    advance();
    return out;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Lexeme::Kind::Eof, "", 0, pos_};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Lexeme::Kind::Ident, text_.substr(start, pos_ - start), 0, start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      long v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        if (v > 1000000) v = 1000000;
        ++pos_;
      }
      current_ = {Lexeme::Kind::Int, text_.substr(start, pos_ - start), v, start};
      return;
    }
    size_t start = pos_++;
    switch (c) {
      case '(': current_ = {Lexeme::Kind::LParen, "(", 0, start}; return;
      case ')': current_ = {Lexeme::Kind::RParen, ")", 0, start}; return;
      case ':': current_ = {Lexeme::Kind::Colon, ":", 0, start}; return;
      case ';': current_ = {Lexeme::Kind::Semi, ";", 0, start}; return;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  const std::string& text_;
  Lexeme current_;
  size_t pos_ = 0;
};

bool is_control_keyword(const std::string& s) {
  return s == "while" || s == "repeat" || s == "if" || s == "else" || s == "end";
}

class Parser {
 public:
  Parser(const std::string& text, const DslLimits& limits) : lex_(text), limits_(limits) {}

  Program parse_program() {
    Program p;
    for (;;) {
      const Lexeme& t = lex_.peek();
      if (t.kind == Lexeme::Kind::Ident && t.text == "end") {
        lex_.take();
        expect_eof();
        validate(p, limits_);
        return p;
      }
      p.items.push_back(parse_stmt());
      expect(Lexeme::Kind::Semi, "';'");
    }
  }

 private:
  Stmt parse_stmt() {
    Lexeme t = lex_.take();
    if (t.kind != Lexeme::Kind::Ident) throw ParseError("expected a statement", t.offset);
    if (t.text == "while") {
      Cond c = parse_paren_cond();
      expect(Lexeme::Kind::Colon, "':'");
      return WhileStmt{c, parse_body()};
    }
    if (t.text == "repeat") {
      expect(Lexeme::Kind::LParen, "'('");
      Lexeme n = lex_.take();
      if (n.kind != Lexeme::Kind::Int) throw ParseError("expected a repeat count", n.offset);
      if (n.value < limits_.repeat_min || n.value > limits_.repeat_max)
        throw StructureError("repeat count " + n.text + " out of range [" +
                             std::to_string(limits_.repeat_min) + ", " +
                             std::to_string(limits_.repeat_max) + "]");
      expect(Lexeme::Kind::RParen, "')'");
      expect(Lexeme::Kind::Colon, "':'");
      return RepeatStmt{static_cast<int>(n.value), parse_body()};
    }
    if (t.text == "if") {
      Cond c = parse_paren_cond();
      expect(Lexeme::Kind::Colon, "':'");
      std::vector<Action> then_body = parse_body();
      if (lex_.peek().kind == Lexeme::Kind::Ident && lex_.peek().text == "else") {
        lex_.take();
        expect(Lexeme::Kind::Colon, "':'");
        return IfStmt{c, std::move(then_body), parse_body()};
      }
      return IfStmt{c, std::move(then_body), std::nullopt};
    }
    if (t.text == "else") throw ParseError("'else' without a matching 'if'", t.offset);
    if (auto a = action_from_string(t.text)) {
      if (*a == Action::End) throw StructureError("end is not a statement");
      return ActStmt{*a};
    }
    throw ParseError("unknown statement '" + t.text + "'", t.offset);
  }

  Cond parse_paren_cond() {
    expect(Lexeme::Kind::LParen, "'('");
    Cond c;
    Lexeme t = lex_.take();
    if (t.kind != Lexeme::Kind::Ident) throw ParseError("expected a condition", t.offset);
    if (t.text == "not") {
      c.negated = true;
      t = lex_.take();
      if (t.kind != Lexeme::Kind::Ident) throw ParseError("expected a perception", t.offset);
    }
    auto p = perception_from_string(t.text);
    if (!p) throw ParseError("unknown perception '" + t.text + "'", t.offset);
    c.primitive = *p;
    expect(Lexeme::Kind::RParen, "')'");
    return c;
  }

  std::vector<Action> parse_body() {
    std::vector<Action> body;
    for (;;) {
      const Lexeme& t = lex_.peek();
      if (t.kind != Lexeme::Kind::Ident) break;
      if (t.text == "else" || t.text == "end") break;
      if (is_control_keyword(t.text))
        throw StructureError("nested control flow is not allowed ('" + t.text + "')");
      auto a = action_from_string(t.text);
      if (!a) throw ParseError("unknown action '" + t.text + "'", t.offset);
      if (*a == Action::End) break;
      body.push_back(*a);
      lex_.take();
    }
    if (body.empty()) throw ParseError("expected at least one action", lex_.peek().offset);
    return body;
  }

  void expect(Lexeme::Kind kind, const char* what) {
    Lexeme t = lex_.take();
    if (t.kind != kind) throw ParseError(std::string("expected ") + what, t.offset);
  }

  void expect_eof() {
    const Lexeme& t = lex_.peek();
    if (t.kind != Lexeme::Kind::Eof) throw ParseError("trailing input after 'end'", t.offset);
  }

  Lexer lex_;
  DslLimits limits_;
};

}  // namespace

Program parse(const std::string& text, const DslLimits& limits) {
  return Parser(text, limits).parse_program();
}

std::string pretty(const Cond& c) {
  std::string out;
  if (c.negated) out += "not ";
  out += to_string(c.primitive);
  return out;
}

namespace {

std::string pretty_body(const std::vector<Action>& body) {
  std::string out;
  for (size_t i = 0; i < body.size(); ++i) {
    if (i) out += ' ';
    out += to_string(body[i]);
  }
  return out;
}

}  // namespace

std::string pretty(const Stmt& s) {
  if (const auto* act = std::get_if<ActStmt>(&s)) return to_string(act->action);
  if (const auto* w = std::get_if<WhileStmt>(&s))
    return "while(" + pretty(w->cond) + "): " + pretty_body(w->body);
  if (const auto* r = std::get_if<RepeatStmt>(&s))
    return "repeat(" + std::to_string(r->count) + "): " + pretty_body(r->body);
  const auto& i = std::get<IfStmt>(s);
  std::string out = "if(" + pretty(i.cond) + "): " + pretty_body(i.then_body);
  if (i.else_body) out += " else: " + pretty_body(*i.else_body);
  return out;
}

std::string pretty(const Program& p) {
  std::string out;
  for (const Stmt& s : p.items) out += pretty(s) + " ; ";
  out += "end";
  return out;
}

}  // namespace plans
