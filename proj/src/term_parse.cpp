#include "lucas/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace lucas {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& what)
    : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}

bool is_program_keyword(std::string_view word) {
  static const std::set<std::string, std::less<>> words = {
      "Program", "LET", "IN", "IF", "THEN", "ELSE", "REPEAT", "TRY", "OR",
      "Take", "Rewrite", "Rewrite_Inst", "Rewrite_Set", "Subproblem",
      "Check_Postcond", "Approximate"};
  return words.count(word) > 0;
}

namespace {

enum class Tok { Number, Ident, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

Token lex_at(std::string_view s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size()) return {Tok::End, "", pos};
  char c = s[pos];
  if (std::isdigit(static_cast<unsigned char>(c))) {
    std::size_t end = pos;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end + 1 < s.size() && s[end] == '.' && std::isdigit(static_cast<unsigned char>(s[end + 1]))) {
      ++end;
      while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    }
    return {Tok::Number, std::string(s.substr(pos, end - pos)), pos};
  }
  if (ident_start(c)) {
    std::size_t end = pos;
    while (end < s.size() && ident_char(s[end])) ++end;
    return {Tok::Ident, std::string(s.substr(pos, end - pos)), pos};
  }
  static const char* two_char[] = {"<=", ">=", "~=", "@@", "::"};
  for (const char* op : two_char)
    if (s.substr(pos, 2) == op) return {Tok::Sym, op, pos};
  return {Tok::Sym, std::string(1, c), pos};
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t pos) : text_(text) { advance_to(pos); }

  Term formula() { return disjunction(); }

  std::size_t position() const { return cur_.offset; }
  bool at_end() const { return cur_.kind == Tok::End; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::ostringstream msg;
    msg << "parse error at offset " << cur_.offset << ": unexpected "
        << (cur_.kind == Tok::End ? std::string("end of input") : "'" + cur_.text + "'")
        << ", expected one of:";
    for (const auto& e : expected) msg << ' ' << e;
    throw ParseError(cur_.offset, std::move(expected), msg.str());
  }

 private:
  void advance_to(std::size_t pos) {
    cur_ = lex_at(text_, pos);
    next_ = cur_.kind == Tok::End ? cur_ : lex_at(text_, cur_.offset + cur_.text.size());
  }
  void advance() { advance_to(cur_.offset + cur_.text.size()); }

  bool is_sym(const Token& t, std::string_view s) const { return t.kind == Tok::Sym && t.text == s; }
  bool is_word(const Token& t, std::string_view s) const { return t.kind == Tok::Ident && t.text == s; }

  void expect_sym(std::string_view s) {
    if (!is_sym(cur_, s)) fail({std::string(s)});
    advance();
  }

  Term disjunction() {
    Term lhs = conjunction();
    while (is_word(cur_, "or")) {
      advance();
      lhs = Term::apply("or", {lhs, conjunction()});
    }
    return lhs;
  }

  Term conjunction() {
    Term lhs = negation();
    while (is_word(cur_, "and")) {
      advance();
      lhs = Term::apply("and", {lhs, negation()});
    }
    return lhs;
  }

  Term negation() {
    if (is_word(cur_, "not")) {
      advance();
      return Term::apply("not", {negation()});
    }
    return relation();
  }

  Term relation() {
    Term lhs = sum();
    static const std::set<std::string> rel_syms = {"=", "~=", "<", "<=", ">", ">="};
    if (cur_.kind == Tok::Sym && rel_syms.count(cur_.text)) {
      std::string op = cur_.text;
      advance();
      Term rhs = sum();
      if (op == ">") return Term::apply("<", {rhs, lhs});
      if (op == ">=") return Term::apply("<=", {rhs, lhs});
      return Term::apply(op, {lhs, rhs});
    }
    if (is_word(cur_, "approx") || is_word(cur_, "in")) {
      std::string op = cur_.text;
      advance();
      return Term::apply(op, {lhs, sum()});
    }
    return lhs;
  }

  Term sum() {
    Term lhs = product();
    while (is_sym(cur_, "+") || is_sym(cur_, "-")) {
      std::string op = cur_.text;
      advance();
      lhs = Term::apply(op, {lhs, product()});
    }
    return lhs;
  }

  Term product() {
    Term lhs = unary();
    while (is_sym(cur_, "*") || is_sym(cur_, "/")) {
      std::string op = cur_.text;
      advance();
      lhs = Term::apply(op, {lhs, unary()});
    }
    return lhs;
  }

  Term unary() {
    if (is_sym(cur_, "-")) {
      // "-3" is a negative numeral unless it is the base of a power.
      if (next_.kind == Tok::Number) {
        Token after = lex_at(text_, next_.offset + next_.text.size());
        if (!is_sym(after, "^")) {
          Rational v = *parse_decimal(next_.text);
          advance();
          advance();
          return Term::numeral(-v);
        }
      }
      advance();
      return Term::apply("neg", {unary()});
    }
    return power();
  }

  Term power() {
    Term base = primary();
    if (is_sym(cur_, "^")) {
      advance();
      return Term::apply("^", {base, unary()});
    }
    return base;
  }

  Term rational_literal() {
    // rat(n, d) with integer literals denotes the numeral n/d.
    std::size_t start = cur_.offset;
    advance();
    expect_sym("(");
    auto signed_int = [&]() {
      bool neg = false;
      if (is_sym(cur_, "-")) {
        neg = true;
        advance();
      }
      if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string::npos) fail({"integer"});
      Integer v(cur_.text);
      advance();
      return neg ? Integer(-v) : v;
    };
    Integer n = signed_int();
    expect_sym(",");
    Integer d = signed_int();
    expect_sym(")");
    if (d == 0) throw ParseError(start, {"nonzero denominator"}, "rat(): zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return Term::numeral(Rational(n, d));
  }

  Term primary() {
    if (cur_.kind == Tok::Number) {
      Rational v = *parse_decimal(cur_.text);
      advance();
      return Term::numeral(v);
    }
    if (cur_.kind == Tok::Ident) {
      static const std::set<std::string> reserved = {"and", "or", "not", "approx", "in"};
      if (reserved.count(cur_.text) || is_program_keyword(cur_.text))
        fail({"number", "identifier", "(", "["});
      if (cur_.text == "rat" && is_sym(next_, "(")) return rational_literal();
      std::string name = cur_.text;
      std::size_t name_offset = cur_.offset;
      advance();
      if (is_sym(cur_, "(")) {
        advance();
        std::vector<Term> args;
        if (!is_sym(cur_, ")")) {
          args.push_back(formula());
          while (is_sym(cur_, ",")) {
            advance();
            args.push_back(formula());
          }
        }
        expect_sym(")");
        if (auto arity = builtin_arity(name); arity && *arity != args.size()) {
          throw ParseError(name_offset, {std::to_string(*arity) + " arguments"},
                           "'" + name + "' takes " + std::to_string(*arity) + " arguments, got " +
                               std::to_string(args.size()));
        }
        return Term::apply(name, std::move(args));
      }
      if (auto arity = builtin_arity(name); arity && *arity == 0) return Term::apply(name);
      if (auto arity = builtin_arity(name); arity && *arity > 0) {
        throw ParseError(name_offset, {"("}, "'" + name + "' must be applied to arguments");
      }
      return Term::variable(name);
    }
    if (is_sym(cur_, "(")) {
      advance();
      Term inner = formula();
      expect_sym(")");
      return inner;
    }
    if (is_sym(cur_, "[")) {
      advance();
      std::vector<Term> items;
      if (!is_sym(cur_, "]")) {
        items.push_back(formula());
        while (is_sym(cur_, ",")) {
          advance();
          items.push_back(formula());
        }
      }
      expect_sym("]");
      return make_list(std::move(items));
    }
    fail({"number", "identifier", "(", "[", "-"});
  }

  std::string_view text_;
  Token cur_;
  Token next_;
};

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(text, 0);
  Term t = p.formula();
  if (!p.at_end()) p.fail({"operator", "end of input"});
  return t;
}

Term parse_term_at(std::string_view text, std::size_t& pos) {
  Parser p(text, pos);
  Term t = p.formula();
  pos = p.position();
  return t;
}

}  // namespace lucas
