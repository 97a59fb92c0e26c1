#include "lucas/rational.hpp"

#include <cmath>
#include <cstdio>

namespace lucas {

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  Integer num = 0;
  Integer den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Rational(num, den);
}

std::optional<std::string> exact_decimal(const Rational& q) {
  Integer den = boost::multiprecision::denominator(q);
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return std::nullopt;
  int places = std::max(twos, fives);
  Integer num = boost::multiprecision::numerator(q);
  bool negative = num < 0;
  if (negative) num = -num;
  Integer scale = boost::multiprecision::pow(Integer(10), places);
  Integer scaled = num * scale / boost::multiprecision::denominator(q);
  std::string digits = scaled.str();
  if (places > 0) {
    if (static_cast<int>(digits.size()) <= places)
      digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

std::optional<Rational> rational_pow(const Rational& base, const Rational& exp) {
  if (!is_integer(exp)) return std::nullopt;
  Integer e = boost::multiprecision::numerator(exp);
  if (e > 64 || e < -64) return std::nullopt;
  long n = e.convert_to<long>();
  if (n < 0 && base == 0) return std::nullopt;
  Rational result = 1;
  Rational b = n < 0 ? Rational(1) / base : base;
  for (long i = 0; i < std::labs(n); ++i) result *= b;
  return result;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational round_decimal(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, std::fabs(value));
  auto parsed = parse_decimal(buf);
  Rational r = parsed ? *parsed : Rational(0);
  return value < 0 ? Rational(-r) : r;
}

}  // namespace lucas
