#include "lucas/program.hpp"

#include "lucas/syntax.hpp"

#include <cctype>
#include <set>

namespace lucas {
namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
  bool space_before;
};

bool is_keyword(std::string_view w) {
  return is_program_keyword(w) || w == "QUOTE" || w == "o";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token at(std::size_t pos) const {
    std::size_t start = pos;
    while (pos < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos]))) {
        ++pos;
      } else if (text_[pos] == '#') {
        while (pos < text_.size() && text_[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    bool space = pos != start;
    if (pos >= text_.size()) return {Tok::End, "", pos, space};
    char c = text_[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      if (end + 1 < text_.size() && text_[end] == '.' &&
          std::isdigit(static_cast<unsigned char>(text_[end + 1]))) {
        ++end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
      return {Tok::Number, std::string(text_.substr(pos, end - pos)), pos, space};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                    text_[end] == '_' || text_[end] == '\''))
        ++end;
      return {Tok::Ident, std::string(text_.substr(pos, end - pos)), pos, space};
    }
    for (const char* op : {"@@", "::", "<=", ">=", "~="})
      if (text_.substr(pos, 2) == op) return {Tok::Sym, op, pos, space};
    return {Tok::Sym, std::string(1, c), pos, space};
  }

  std::string_view text() const { return text_; }

 private:
  std::string_view text_;
};

PurePtr make_pure(Pure p) { return std::make_shared<const Pure>(std::move(p)); }
ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : lex_(text) { cur_ = lex_.at(0); }

  Program program() {
    expect_word("Program");
    Program p;
    p.name = ident();
    while (is_sym("(")) {
      advance();
      TypedName f;
      f.name = ident();
      expect_sym("::");
      f.type = type_words();
      expect_sym(")");
      p.formals.push_back(f);
    }
    expect_sym("=");
    p.body = expr();
    if (cur_.kind != Tok::End) fail("end of program");
    return p;
  }

 private:
  // ---- token helpers
  void advance() { cur_ = lex_.at(cur_.offset + cur_.text.size()); }
  Token peek_next() const { return lex_.at(cur_.offset + cur_.text.size()); }
  bool is_sym(std::string_view s) const { return cur_.kind == Tok::Sym && cur_.text == s; }
  bool is_word(std::string_view s) const { return cur_.kind == Tok::Ident && cur_.text == s; }

  [[noreturn]] void fail(const std::string& expected) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < cur_.offset && i < lex_.text().size(); ++i) {
      if (lex_.text()[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string found = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw ProgramParseError(line, col,
                            "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                ": expected " + expected + ", found " + found);
  }
  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("'" + std::string(s) + "'");
    advance();
  }
  void expect_word(std::string_view s) {
    if (!is_word(s)) fail("'" + std::string(s) + "'");
    advance();
  }
  std::string ident() {
    if (cur_.kind != Tok::Ident || is_keyword(cur_.text)) fail("identifier");
    std::string s = cur_.text;
    advance();
    return s;
  }
  std::string type_words() {
    std::string out;
    while (cur_.kind == Tok::Ident && !is_keyword(cur_.text)) {
      if (!out.empty()) out += ' ';
      out += cur_.text;
      advance();
    }
    if (out.empty()) fail("type");
    return out;
  }
  std::vector<std::string> path() {
    expect_sym("[");
    std::vector<std::string> out;
    if (!is_sym("]")) {
      out.push_back(ident());
      while (is_sym(",")) {
        advance();
        out.push_back(ident());
      }
    }
    expect_sym("]");
    return out;
  }

  // ---- tactic level
  bool starts_pure_atom() const {
    if (cur_.kind == Tok::Number) return true;
    if (cur_.kind == Tok::Ident) return !is_keyword(cur_.text) || cur_.text == "QUOTE";
    return is_sym("(") || is_sym("[");
  }

  ExprPtr expr() {
    if (is_word("LET")) {
      advance();
      Expr e;
      e.kind = Expr::Kind::Let;
      while (true) {
        e.names.push_back(ident());
        expect_sym("=");
        e.children.push_back(expr());
        if (is_sym(";")) {
          advance();
          if (is_word("IN")) break;
          continue;
        }
        break;
      }
      expect_word("IN");
      e.children.push_back(expr());
      return make_expr(std::move(e));
    }
    if (is_word("IF")) {
      advance();
      Expr e;
      e.kind = Expr::Kind::If;
      e.pure = pure();
      expect_word("THEN");
      e.children.push_back(expr());
      expect_word("ELSE");
      e.children.push_back(expr());
      return make_expr(std::move(e));
    }
    if (is_word("REPEAT")) {
      advance();
      Expr e;
      e.kind = Expr::Kind::Repeat;
      e.children.push_back(expr());
      return make_expr(std::move(e));
    }
    return chain();
  }

  ExprPtr chain() {
    std::vector<ExprPtr> stages{or_expr()};
    while (is_sym("@@")) {
      advance();
      stages.push_back(or_expr());
    }
    ExprPtr body = stages.front();
    if (stages.size() > 1) {
      Expr e;
      e.kind = Expr::Kind::Chain;
      e.children = std::move(stages);
      body = make_expr(std::move(e));
    }
    if (starts_pure_atom()) {
      if (body->kind == Expr::Kind::Pure) {
        // (f x) y is still a pure call
        Pure call;
        call.kind = Pure::Kind::Call;
        call.args = {body->pure, pure()};
        Expr e;
        e.kind = Expr::Kind::Pure;
        e.pure = make_pure(std::move(call));
        return make_expr(std::move(e));
      }
      Expr e;
      e.kind = Expr::Kind::Applied;
      e.children.push_back(body);
      e.pure = pure();
      return make_expr(std::move(e));
    }
    return body;
  }

  ExprPtr or_expr() {
    std::vector<ExprPtr> alts{unary()};
    while (is_word("OR")) {
      advance();
      alts.push_back(unary());
    }
    if (alts.size() == 1) return alts.front();
    Expr e;
    e.kind = Expr::Kind::Or;
    e.children = std::move(alts);
    return make_expr(std::move(e));
  }

  ExprPtr unary() {
    if (is_word("TRY")) {
      advance();
      Expr e;
      e.kind = Expr::Kind::Try;
      e.children.push_back(unary());
      return make_expr(std::move(e));
    }
    return atom();
  }

  ExprPtr atom() {
    if (is_sym("(")) {
      advance();
      ExprPtr inner = expr();
      expect_sym(")");
      return inner;
    }
    if (cur_.kind == Tok::Ident && is_program_keyword(cur_.text)) {
      if (auto kind = parse_tactic_kind(cur_.text)) {
        advance();
        Expr e;
        e.kind = Expr::Kind::Tactic;
        e.tactic = tactic(*kind);
        return make_expr(std::move(e));
      }
      fail("tactic or expression");
    }
    Expr e;
    e.kind = Expr::Kind::Pure;
    e.pure = pure();
    return make_expr(std::move(e));
  }

  ProgTactic tactic(Tactic::Kind kind) {
    ProgTactic t;
    t.kind = kind;
    switch (kind) {
      case Tactic::Kind::Take:
      case Tactic::Kind::Approximate:
        t.arg = pure_atom();
        break;
      case Tactic::Kind::Rewrite:
      case Tactic::Kind::RewriteSet:
        t.name = ident();
        break;
      case Tactic::Kind::RewriteInst:
        expect_sym("[");
        while (!is_sym("]")) {
          expect_sym("(");
          std::string k = ident();
          expect_sym(",");
          t.inst.emplace_back(k, pure());
          expect_sym(")");
          if (!is_sym("]")) expect_sym(",");
        }
        expect_sym("]");
        t.name = ident();
        break;
      case Tactic::Kind::Subproblem:
        expect_sym("(");
        t.theory = ident();
        expect_sym(",");
        t.spec = path();
        expect_sym(",");
        t.name = ident();
        expect_sym(")");
        expect_sym("[");
        if (!is_sym("]")) {
          t.args.push_back(list_item());
          while (is_sym(",")) {
            advance();
            t.args.push_back(list_item());
          }
        }
        expect_sym("]");
        break;
      case Tactic::Kind::CheckPostcond:
        t.spec = path();
        break;
    }
    return t;
  }

  // ---- pure level
  PurePtr pure() {
    PurePtr lhs = sum();
    static const std::set<std::string> rels = {"=", "~=", "<", "<=", ">", ">="};
    if (cur_.kind == Tok::Sym && rels.count(cur_.text)) {
      std::string op = cur_.text;
      advance();
      PurePtr rhs = sum();
      Pure p;
      p.kind = Pure::Kind::Op;
      if (op == ">" || op == ">=") {
        p.name = op == ">" ? "<" : "<=";
        p.args = {rhs, lhs};
      } else {
        p.name = op;
        p.args = {lhs, rhs};
      }
      return make_pure(std::move(p));
    }
    return lhs;
  }

  PurePtr binary(const std::string& op, PurePtr a, PurePtr b) {
    Pure p;
    p.kind = Pure::Kind::Op;
    p.name = op;
    p.args = {std::move(a), std::move(b)};
    return make_pure(std::move(p));
  }

  PurePtr sum() {
    PurePtr lhs = product();
    while (is_sym("+") || is_sym("-")) {
      std::string op = cur_.text;
      advance();
      lhs = binary(op, lhs, product());
    }
    return lhs;
  }

  PurePtr product() {
    PurePtr lhs = negation();
    while (is_sym("*") || is_sym("/")) {
      std::string op = cur_.text;
      advance();
      lhs = binary(op, lhs, negation());
    }
    return lhs;
  }

  PurePtr negation() {
    if (is_sym("-")) {
      Token next = peek_next();
      if (next.kind == Tok::Number) {
        Token after = lex_.at(next.offset + next.text.size());
        if (!(after.kind == Tok::Sym && after.text == "^")) {
          advance();
          Pure p;
          p.kind = Pure::Kind::Num;
          p.literal = Term::numeral(-*parse_decimal(cur_.text));
          advance();
          return make_pure(std::move(p));
        }
      }
      advance();
      Pure p;
      p.kind = Pure::Kind::Op;
      p.name = "neg";
      p.args = {negation()};
      return make_pure(std::move(p));
    }
    PurePtr base = compose();
    if (is_sym("^")) {
      advance();
      return binary("^", base, negation());
    }
    return base;
  }

  PurePtr compose() {
    PurePtr lhs = application();
    while (is_word("o")) {
      advance();
      Pure p;
      p.kind = Pure::Kind::Compose;
      p.args = {lhs, application()};
      lhs = make_pure(std::move(p));
    }
    return lhs;
  }

  PurePtr application() {
    PurePtr fn = pure_atom();
    while (starts_pure_atom()) {
      Pure p;
      p.kind = Pure::Kind::Call;
      p.args = {fn, pure_atom()};
      fn = make_pure(std::move(p));
    }
    return fn;
  }

  PurePtr list_item() {
    PurePtr item = pure();
    if (is_sym("::")) {
      advance();
      Pure annotated = *item;
      annotated.type = type_words();
      item = make_pure(std::move(annotated));
    }
    return item;
  }

  PurePtr pure_atom() {
    if (cur_.kind == Tok::Number) {
      Pure p;
      p.kind = Pure::Kind::Num;
      p.literal = Term::numeral(*parse_decimal(cur_.text));
      advance();
      return make_pure(std::move(p));
    }
    if (is_sym("(")) {
      advance();
      PurePtr inner = pure();
      expect_sym(")");
      return inner;
    }
    if (is_sym("[")) {
      advance();
      Pure p;
      p.kind = Pure::Kind::List;
      if (!is_sym("]")) {
        p.args.push_back(list_item());
        while (is_sym(",")) {
          advance();
          p.args.push_back(list_item());
        }
      }
      expect_sym("]");
      return make_pure(std::move(p));
    }
    if (is_word("QUOTE")) {
      advance();
      if (!is_sym("(")) fail("'('");
      std::size_t pos = cur_.offset + 1;
      Term t = parse_term_at(lex_.text(), pos);
      cur_ = lex_.at(pos);
      expect_sym(")");
      Pure p;
      p.kind = Pure::Kind::Quote;
      p.literal = t;
      return make_pure(std::move(p));
    }
    if (cur_.kind != Tok::Ident || is_keyword(cur_.text)) fail("expression");
    std::string name = cur_.text;
    advance();
    // f(a, b) without a space is a term constructor or combinator call.
    if (is_sym("(") && !cur_.space_before) {
      advance();
      std::vector<PurePtr> args;
      if (!is_sym(")")) {
        args.push_back(pure());
        while (is_sym(",")) {
          advance();
          args.push_back(pure());
        }
      }
      expect_sym(")");
      if (is_combinator(name)) {
        Pure head;
        head.kind = Pure::Kind::Comb;
        head.name = name;
        PurePtr fn = make_pure(std::move(head));
        for (auto& a : args) {
          Pure call;
          call.kind = Pure::Kind::Call;
          call.args = {fn, a};
          fn = make_pure(std::move(call));
        }
        return fn;
      }
      Pure p;
      p.kind = Pure::Kind::Op;
      p.name = name;
      p.args = std::move(args);
      return make_pure(std::move(p));
    }
    Pure p;
    if (is_combinator(name)) {
      p.kind = Pure::Kind::Comb;
    } else if (auto arity = builtin_arity(name); arity && *arity == 0) {
      p.kind = Pure::Kind::Op;
    } else {
      p.kind = Pure::Kind::Var;
    }
    p.name = name;
    return make_pure(std::move(p));
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser(text).program(); }

}  // namespace lucas
