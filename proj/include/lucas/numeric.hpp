#pragma once

#include "lucas/term.hpp"

#include <map>
#include <optional>
#include <string>

namespace lucas {

using NumericEnv = std::map<std::string, double>;

/// Floating-point value of an arithmetic/trigonometric term, or nullopt when
/// the term has an unbound variable, a non-arithmetic head, or leaves the
/// real domain.
std::optional<double> evaluate(const Term& t, const NumericEnv& env = {});

/// Truth value of a relation between arithmetic terms at a sample point.
std::optional<bool> evaluate_relation(const Term& t, const NumericEnv& env,
                                      double tolerance = 1e-9);

}  // namespace lucas
