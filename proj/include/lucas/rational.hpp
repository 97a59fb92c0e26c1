#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace lucas {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "12" or "0.25" into an exact rational. No sign, no exponent.
std::optional<Rational> parse_decimal(std::string_view text);

/// Exact decimal rendering if the denominator has only 2 and 5 as factors.
std::optional<std::string> exact_decimal(const Rational& q);

bool is_integer(const Rational& q);

/// base^exp for integer exponents with |exp| <= 64; nullopt otherwise
/// (including 0^negative).
std::optional<Rational> rational_pow(const Rational& base, const Rational& exp);

double to_double(const Rational& q);

/// Nearest rational with `digits` decimal places.
Rational round_decimal(double value, int digits);

}  // namespace lucas
