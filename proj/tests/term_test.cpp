#include "oracles.hpp"

#include "lucas/poly.hpp"

#include <doctest.h>

using namespace lucas;

namespace {
Term V(const char* n) { return Term::variable(n); }
Term A(const char* h, std::vector<Term> a) { return Term::apply(h, std::move(a)); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse_term("x") == V("x"));
  CHECK(parse_term("d_d(alpha, sin(alpha)^2)") ==
        A("d_d", {V("alpha"), A("^", {A("sin", {V("alpha")}), Term::integer(2)})}));
  Term area = parse_term("2*u*v - u^2");
  CHECK(area == A("-", {A("*", {A("*", {Term::integer(2), V("u")}), V("v")}), A("^", {V("u"), Term::integer(2)})}));
  CHECK(parse_term("rat(6, -4)").value() == Rational(-3, 2));
  CHECK(parse_term("x > y") == A("<", {V("y"), V("x")}));
}

TEST_CASE("numerals are kept in lowest terms") {
  Rational q = parse_term("rat(10, 4)").value();
  CHECK(boost::multiprecision::numerator(q) == 5);
  CHECK(boost::multiprecision::denominator(q) == 2);
  CHECK(parse_term("0.25").value() == Rational(1, 4));
}

TEST_CASE("arity and syntax errors carry an offset") {
  CHECK_THROWS_AS(parse_term("sin(x, y)"), ParseError);
  CHECK_THROWS_AS(parse_term("x +"), ParseError);
  try {
    parse_term("2 * * 3");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(!e.expected().empty());
  }
}

TEST_CASE("rendering") {
  CHECK(to_unicode(parse_term("sin(alpha)^2")) == "(sin α)²");
  CHECK(to_ascii(Term::integer(0)) == "0");
  CHECK(to_ascii(parse_term("a*(-b)")) == "a*(-b)");
  CHECK(to_ascii(parse_term("a - (b - c)")) == "a - (b - c)");
  CHECK(to_unicode(parse_term("d_d(alpha, cos(alpha))")) == "d/dα cos α");
}

TEST_CASE("parse after render is the identity on random terms") {
  oracle::TermGen gen(7);
  for (int i = 0; i < 1000; ++i) {
    Term t = gen.real(4, {"x", "y", "alpha"});
    if (i % 3 == 0) t = A("=", {t, gen.real(2, {"x"})});
    if (i % 5 == 0) t = A("d_d", {V("x"), t});
    std::string text = to_ascii(t);
    INFO(text);
    CHECK(parse_term(text) == t);
  }
}

TEST_CASE("matching") {
  auto s = match_term(parse_term("d_d(alpha, u^n)"), parse_term("d_d(alpha, sin(alpha)^2)"), {"alpha"});
  REQUIRE(s);
  CHECK(s->at("u") == parse_term("sin(alpha)"));
  CHECK(s->at("n") == Term::integer(2));
  Term t = parse_term("a + sin(b)");
  CHECK(match_term(V("x"), t)->at("x") == t);
  Term prod = parse_term("sin(alpha)*cos(alpha)");
  auto m = match_term(parse_term("u*v"), prod);
  REQUIRE(m);
  CHECK(substitute(parse_term("u*v"), *m) == prod);
  CHECK_FALSE(match_term(parse_term("u*u"), prod));
  CHECK_FALSE(match_term(parse_term("d_d(bdv, u)"), parse_term("d_d(alpha, u)"), {"bdv"}));
}

TEST_CASE("substitution") {
  CHECK(substitute(parse_term("u^n"), {{"u", parse_term("sin(alpha)")}, {"n", Term::integer(2)}}) ==
        parse_term("sin(alpha)^2"));
  Term t = parse_term("a*u - b*v");
  CHECK(substitute(t, {}) == t);
  // The diff_sum instance of the first rewrite step.
  auto s = match_term(parse_term("d_d(alpha, a*u - b*v)"),
                      parse_term("d_d(alpha, 8*r^2*(sin(alpha)*cos(alpha)) - 4*r^2*sin(alpha)^2)"), {"alpha"});
  REQUIRE(s);
  CHECK(substitute(parse_term("a*d_d(alpha, u) - b*d_d(alpha, v)"), *s) ==
        parse_term("8*r^2*d_d(alpha, sin(alpha)*cos(alpha)) - 4*r^2*d_d(alpha, sin(alpha)^2)"));
}

TEST_CASE("substitution properties on random terms") {
  oracle::TermGen gen(11);
  for (int i = 0; i < 300; ++i) {
    Term t = gen.real(3, {"x", "y", "z"});
    // Images free of the substituted names: idempotent.
    Substitution s = {{"x", gen.real(2, {"w"})}, {"y", gen.real(1, {"w", "q"})}};
    Term once = substitute(t, s);
    CHECK(substitute(once, s) == once);
    auto fv = free_vars(once);
    std::set<std::string> bound = free_vars(t);
    bound.erase("x");
    bound.erase("y");
    for (const auto& [k, v] : s)
      for (const auto& n : free_vars(v)) bound.insert(n);
    for (const auto& n : fv) CHECK(bound.count(n));
  }
}

TEST_CASE("free variables") {
  CHECK(free_vars(parse_term("2*u*v - u^2")) == std::set<std::string>{"u", "v"});
  CHECK(free_vars(Term::integer(5)).empty());
  CHECK(free_vars(parse_term("sin(pi)")).empty());
}

TEST_CASE("polynomial canonical form agrees numerically and is canonical") {
  oracle::TermGen gen(3);
  for (int i = 0; i < 300; ++i) {
    Term a = gen.poly(3, {"x", "y"});
    Term ca = poly_canonical(a);
    CHECK(poly_canonical(ca) == ca);
    for (int k = 0; k < 3; ++k) {
      std::map<std::string, double> p = {{"x", gen.uniform(-2, 2)}, {"y", gen.uniform(-2, 2)}};
      auto va = oracle::eval_real(a, p);
      auto vc = oracle::eval_real(ca, p);
      if (va && vc) CHECK(oracle::close_enough(*va, *vc, 1e-9));
    }
    // Commuted operands reach the same form.
    Term b = A("+", {gen.poly(2, {"x", "y"}), gen.poly(2, {"x", "y"})});
    Term swapped = A("+", {b.arg(1), b.arg(0)});
    CHECK(poly_canonical(b) == poly_canonical(swapped));
  }
  CHECK(poly_canonical(parse_term("2*v*u - u^2")) == poly_canonical(parse_term("2*u*v - u^2")));
}

TEST_CASE("AC canonical form sorts and flattens sums and products") {
  CHECK(ac_canonical(parse_term("2*u*v - u^2")) == ac_canonical(parse_term("2*v*u - u^2")));
  CHECK(ac_canonical(parse_term("a + (b + c)")) == ac_canonical(parse_term("(c + a) + b")));
  CHECK_FALSE(ac_canonical(parse_term("a - b")) == ac_canonical(parse_term("b - a")));
}
