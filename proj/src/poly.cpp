#include "lucas/poly.hpp"

namespace lucas {
namespace {

constexpr int kMaxExpandedPower = 12;

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

Term monomial_term(const Monomial& m) {
  Term acc;
  bool first = true;
  for (const auto& [atom, e] : m) {
    Term factor = e == 1 ? atom : Term::apply("^", {atom, Term::integer(e)});
    acc = first ? factor : Term::apply("*", {acc, factor});
    first = false;
  }
  return acc;
}

Term scaled_monomial(const Rational& c, const Monomial& m) {
  if (m.empty()) return Term::numeral(c);
  Term body = monomial_term(m);
  if (c == 1) return body;
  if (c == -1) return Term::apply("neg", {body});
  // c*x*y is built as ((c*x)*y) so prefixes stay canonical.
  Term acc = Term::numeral(c);
  for (const auto& [atom, e] : m) {
    Term factor = e == 1 ? atom : Term::apply("^", {atom, Term::integer(e)});
    acc = Term::apply("*", {acc, factor});
  }
  return acc;
}

std::optional<int> small_exponent(const Polynomial& p) {
  if (!p.is_constant()) return std::nullopt;
  Rational v = p.constant_value();
  if (!is_integer(v) || v < 0 || v > kMaxExpandedPower) return std::nullopt;
  return numerator(v).convert_to<int>();
}

Term canonical_atom(const Term& t) {
  if (!t.is_apply() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(poly_canonical(a));
  return Term::apply(t.name(), std::move(args));
}

}  // namespace

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add({}, c);
  return p;
}

Polynomial Polynomial::atom(const Term& a) {
  Polynomial p;
  p.add({{a, 1}}, 1);
  return p;
}

void Polynomial::add(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add(multiply(m1, m2), c1 * c2);
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r;
  for (const auto& [m, k] : terms_) r.add(m, k * c);
  return r;
}

Polynomial Polynomial::pow(int n) const {
  Polynomial r = constant(1);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_value() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

Term Polynomial::to_term() const {
  if (terms_.empty()) return Term::integer(0);
  Term acc;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (first) {
      acc = scaled_monomial(c, m);
      first = false;
    } else if (c < 0) {
      acc = Term::apply("-", {acc, scaled_monomial(-c, m)});
    } else {
      acc = Term::apply("+", {acc, scaled_monomial(c, m)});
    }
  }
  return acc;
}

bool is_arithmetic_head(std::string_view head) {
  return head == "+" || head == "-" || head == "*" || head == "/" || head == "^" || head == "neg";
}

Polynomial to_polynomial(const Term& t) {
  if (t.is_numeral()) return Polynomial::constant(t.value());
  if (!t.is_apply() || !is_arithmetic_head(t.name())) return Polynomial::atom(canonical_atom(t));
  const std::string& h = t.name();
  if (h == "neg") return to_polynomial(t.arg(0)).scaled(-1);
  if (h == "+") return to_polynomial(t.arg(0)) + to_polynomial(t.arg(1));
  if (h == "-") return to_polynomial(t.arg(0)) - to_polynomial(t.arg(1));
  if (h == "*") return to_polynomial(t.arg(0)) * to_polynomial(t.arg(1));
  Polynomial left = to_polynomial(t.arg(0));
  Polynomial right = to_polynomial(t.arg(1));
  if (h == "/") {
    if (right.is_constant() && right.constant_value() != 0)
      return left.scaled(Rational(1) / right.constant_value());
    return Polynomial::atom(Term::apply("/", {left.to_term(), right.to_term()}));
  }
  // "^"
  if (auto n = small_exponent(right)) return left.pow(*n);
  if (left.is_constant() && right.is_constant()) {
    if (auto v = rational_pow(left.constant_value(), right.constant_value()))
      return Polynomial::constant(*v);
  }
  return Polynomial::atom(Term::apply("^", {left.to_term(), right.to_term()}));
}

Term poly_canonical(const Term& t) {
  if (t.is_apply() && is_arithmetic_head(t.name())) return to_polynomial(t).to_term();
  return canonical_atom(t);
}

}  // namespace lucas
