#include "lucas/numeric.hpp"

#include <cmath>

namespace lucas {

std::optional<double> evaluate(const Term& t, const NumericEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Numeral:
      return to_double(t.value());
    case Term::Kind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Term::Kind::Apply:
      break;
  }
  const std::string& h = t.name();
  if (t.arity() == 0) {
    if (h == "pi") return M_PI;
    return std::nullopt;
  }
  std::vector<double> xs;
  for (const auto& a : t.args()) {
    auto v = evaluate(a, env);
    if (!v) return std::nullopt;
    xs.push_back(*v);
  }
  double r;
  if (h == "+") r = xs[0] + xs[1];
  else if (h == "-") r = xs[0] - xs[1];
  else if (h == "*") r = xs[0] * xs[1];
  else if (h == "/") {
    if (xs[1] == 0) return std::nullopt;
    r = xs[0] / xs[1];
  } else if (h == "^") r = std::pow(xs[0], xs[1]);
  else if (h == "neg") r = -xs[0];
  else if (h == "sin") r = std::sin(xs[0]);
  else if (h == "cos") r = std::cos(xs[0]);
  else if (h == "tan") r = std::tan(xs[0]);
  else if (h == "arctan") r = std::atan(xs[0]);
  else if (h == "sqrt") r = std::sqrt(xs[0]);
  else if (h == "exp") r = std::exp(xs[0]);
  else if (h == "ln") r = std::log(xs[0]);
  else return std::nullopt;
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

std::optional<bool> evaluate_relation(const Term& t, const NumericEnv& env, double tolerance) {
  if (!t.is_apply() || t.arity() != 2) {
    if (is_true(t)) return true;
    if (is_false(t)) return false;
    return std::nullopt;
  }
  auto a = evaluate(t.arg(0), env);
  auto b = evaluate(t.arg(1), env);
  if (!a || !b) return std::nullopt;
  double scale = std::max({1.0, std::fabs(*a), std::fabs(*b)});
  bool same = std::fabs(*a - *b) <= tolerance * scale;
  const std::string& h = t.name();
  if (h == "=") return same;
  if (h == "~=") return !same;
  if (h == "<") return *a < *b && !same;
  if (h == "<=") return *a <= *b || same;
  return std::nullopt;
}

}  // namespace lucas
