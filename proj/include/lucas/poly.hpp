#pragma once

#include "lucas/term.hpp"

#include <map>
#include <utility>
#include <vector>

namespace lucas {

/// Product of atoms raised to positive integer powers, sorted by atom.
using Monomial = std::vector<std::pair<Term, int>>;

/// Sparse multivariate polynomial with exact rational coefficients over
/// opaque atoms (anything that is not +, -, *, neg, a small integer power,
/// or a division by a numeral).
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial atom(const Term& a);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(int n) const;

  bool is_constant() const;
  Rational constant_value() const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  /// Left-nested sum of monomials in sorted order; later negative
  /// monomials are written with binary minus.
  Term to_term() const;

 private:
  void add(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

bool is_arithmetic_head(std::string_view head);

Polynomial to_polynomial(const Term& t);

/// Canonical polynomial form. Atom arguments are canonicalized recursively,
/// so every arithmetic subterm of the result is its own canonical form.
Term poly_canonical(const Term& t);

}  // namespace lucas
