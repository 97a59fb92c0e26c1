#pragma once

// Independent checks used by the unit tests and the acceptance binary.

#include "lucas/calculation.hpp"
#include "lucas/interpreter.hpp"
#include "lucas/knowledge.hpp"
#include "lucas/numeric.hpp"
#include "lucas/syntax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using lucas::Term;

inline const lucas::KnowledgeStore& bundled() {
  static const lucas::KnowledgeStore store = lucas::load_knowledge(LUCAS_TEST_KNOWLEDGE);
  return store;
}

inline lucas::Env example_args(const lucas::Method& m) {
  lucas::Env args;
  for (const auto& [k, v] : m.examples) args[k] = v;
  return args;
}

inline lucas::Session open_example(const std::string& method, const lucas::KnowledgeStore& store = bundled()) {
  const lucas::Method* m = store.method(method);
  return lucas::open_session(store, m->spec, method, example_args(*m), "t");
}

// ---------------------------------------------------------------- dual numbers

struct Dual {
  double v = 0;
  double d = 0;
};

/// Value of t at a point, with d/d`seed` carried in the dual part. d_d(x, f)
/// is evaluated by a fresh forward pass seeded on x; nested derivatives are
/// not supported.
inline std::optional<Dual> eval_dual(const Term& t, const std::map<std::string, double>& point,
                                     const std::string& seed) {
  using std::cos;
  using std::sin;
  if (t.is_numeral()) return Dual{t.value().convert_to<double>(), 0};
  if (t.is_variable()) {
    auto it = point.find(t.name());
    if (it == point.end()) return std::nullopt;
    return Dual{it->second, t.name() == seed ? 1.0 : 0.0};
  }
  const std::string& h = t.name();
  if (h == "pi" && t.arity() == 0) return Dual{M_PI, 0};
  if (h == "d_d" && t.arity() == 2) {
    if (!t.arg(0).is_variable()) return std::nullopt;
    auto inner = eval_dual(t.arg(1), point, t.arg(0).name());
    if (!inner) return std::nullopt;
    return Dual{inner->d, 0};
  }
  std::vector<Dual> a;
  for (const auto& x : t.args()) {
    auto e = eval_dual(x, point, seed);
    if (!e) return std::nullopt;
    a.push_back(*e);
  }
  auto finite = [](Dual r) -> std::optional<Dual> {
    if (!std::isfinite(r.v) || !std::isfinite(r.d)) return std::nullopt;
    return r;
  };
  if (a.size() == 2) {
    Dual x = a[0], y = a[1];
    if (h == "+") return finite({x.v + y.v, x.d + y.d});
    if (h == "-") return finite({x.v - y.v, x.d - y.d});
    if (h == "*") return finite({x.v * y.v, x.d * y.v + x.v * y.d});
    if (h == "/") {
      if (std::abs(y.v) < 1e-12) return std::nullopt;
      return finite({x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)});
    }
    if (h == "^") {
      if (x.v <= 0) {
        // Integral constant exponents only.
        if (y.d != 0 || std::round(y.v) != y.v) return std::nullopt;
        double p = std::pow(x.v, y.v);
        double dp = y.v == 0 ? 0 : y.v * std::pow(x.v, y.v - 1) * x.d;
        return finite({p, dp});
      }
      double p = std::pow(x.v, y.v);
      return finite({p, p * (y.d * std::log(x.v) + y.v * x.d / x.v)});
    }
  }
  if (a.size() == 1) {
    Dual x = a[0];
    if (h == "neg") return Dual{-x.v, -x.d};
    if (h == "sin") return Dual{sin(x.v), cos(x.v) * x.d};
    if (h == "cos") return Dual{cos(x.v), -sin(x.v) * x.d};
    if (h == "tan") return finite({std::tan(x.v), x.d / (cos(x.v) * cos(x.v))});
    if (h == "arctan") return Dual{std::atan(x.v), x.d / (1 + x.v * x.v)};
    if (h == "exp") return finite({std::exp(x.v), std::exp(x.v) * x.d});
    if (h == "ln") {
      if (x.v <= 0) return std::nullopt;
      return Dual{std::log(x.v), x.d / x.v};
    }
    if (h == "sqrt") {
      if (x.v <= 0) return std::nullopt;
      return Dual{std::sqrt(x.v), x.d / (2 * std::sqrt(x.v))};
    }
  }
  return std::nullopt;
}

inline std::optional<double> eval_real(const Term& t, const std::map<std::string, double>& point) {
  auto d = eval_dual(t, point, "");
  if (!d) return std::nullopt;
  return d->v;
}

/// Truth of a boolean term at a point; nullopt when undetermined.
inline std::optional<bool> eval_bool(const Term& t, const std::map<std::string, double>& point) {
  if (lucas::is_true(t)) return true;
  if (lucas::is_false(t)) return false;
  if (t.is_apply("not", 1)) {
    auto a = eval_bool(t.arg(0), point);
    if (!a) return std::nullopt;
    return !*a;
  }
  if (t.is_apply("and", 2) || t.is_apply("or", 2)) {
    auto a = eval_bool(t.arg(0), point);
    auto b = eval_bool(t.arg(1), point);
    if (!a || !b) return std::nullopt;
    return t.name() == "and" ? (*a && *b) : (*a || *b);
  }
  if (t.is_apply("free_of", 2)) {
    if (!t.arg(1).is_variable()) return std::nullopt;
    return !lucas::occurs(t.arg(1).name(), t.arg(0));
  }
  if (t.is_apply() && t.arity() == 2) {
    const std::string& h = t.name();
    if (h != "=" && h != "~=" && h != "<" && h != "<=") return std::nullopt;
    auto x = eval_real(t.arg(0), point);
    auto y = eval_real(t.arg(1), point);
    if (!x || !y) return std::nullopt;
    // Stay away from boundaries where rounding could flip the answer.
    double gap = *x - *y;
    if (std::abs(gap) < 1e-7 * std::max(1.0, std::max(std::abs(*x), std::abs(*y)))) {
      if (h == "=" || h == "<=") return true;
      if (h == "~=" || h == "<") return false;
    }
    if (h == "=") return false;
    if (h == "~=") return true;
    if (h == "<") return gap < 0;
    return gap <= 0;
  }
  return std::nullopt;
}

inline bool close_enough(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------- random terms

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  /// Random real-valued term over `vars`, nesting up to `depth`.
  Term real(int depth, const std::vector<std::string>& vars) {
    int choice = pick(depth <= 0 ? 2 : 9);
    switch (choice) {
      case 0:
        if (!vars.empty()) return Term::variable(vars[pick(static_cast<int>(vars.size()))]);
        [[fallthrough]];
      case 1: {
        static const char* nums[] = {"2", "3", "0.5", "7", "1.25"};
        return lucas::parse_term(nums[pick(5)]);
      }
      case 2:
        return Term::apply("+", {real(depth - 1, vars), real(depth - 1, vars)});
      case 3:
        return Term::apply("-", {real(depth - 1, vars), real(depth - 1, vars)});
      case 4:
        return Term::apply("*", {real(depth - 1, vars), real(depth - 1, vars)});
      case 5:
        return Term::apply("^", {real(depth - 1, vars), Term::integer(pick(3) + 1)});
      case 6:
        return Term::apply("sin", {real(depth - 1, vars)});
      case 7:
        return Term::apply("cos", {real(depth - 1, vars)});
      default:
        return Term::apply("neg", {real(depth - 1, vars)});
    }
  }

  /// Random polynomial expression: +, -, *, ^ and neg over numerals and vars.
  Term poly(int depth, const std::vector<std::string>& vars) {
    int choice = pick(depth <= 0 ? 2 : 7);
    switch (choice) {
      case 0:
        return Term::variable(vars[pick(static_cast<int>(vars.size()))]);
      case 1:
        return Term::integer(pick(7) - 3);
      case 2:
        return Term::apply("+", {poly(depth - 1, vars), poly(depth - 1, vars)});
      case 3:
        return Term::apply("-", {poly(depth - 1, vars), poly(depth - 1, vars)});
      case 4:
        return Term::apply("*", {poly(depth - 1, vars), poly(depth - 1, vars)});
      case 5:
        return Term::apply("^", {poly(depth - 1, vars), Term::integer(pick(3))});
      default:
        return Term::apply("neg", {poly(depth - 1, vars)});
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------- rule sampling

struct SamplingReport {
  std::string rule;
  int points = 0;     // points where both sides were defined and conditions held
  int failures = 0;
  std::string first_failure;
};

inline constexpr int kSamplePoints = 20;
inline constexpr double kSampleTolerance = 1e-9;

/// Instantiates the rule's pattern variables with random terms and compares
/// both sides at points drawn from (0.1, 1.4). Variables appearing in a
/// free_of(_, v) condition are instantiated with terms free of v; the
/// schematic names are bound to the sample variable x.
inline SamplingReport sample_rule(const lucas::Rule& rule, std::uint64_t seed) {
  SamplingReport rep{rule.name};
  TermGen gen(seed);
  std::set<std::string> pattern_vars = lucas::free_vars(rule.lhs);
  for (const auto& v : lucas::free_vars(rule.rhs)) pattern_vars.insert(v);
  std::set<std::string> constant_like;
  for (const auto& c : rule.conditions)
    if (c.is_apply("free_of", 2) && c.arg(0).is_variable()) constant_like.insert(c.arg(0).name());
  bool boolean_rule = lucas::is_boolean(rule.lhs) || lucas::is_boolean(rule.rhs);
  for (int attempt = 0; attempt < 4000 && rep.points < kSamplePoints; ++attempt) {
    lucas::Substitution s;
    for (const auto& v : pattern_vars) {
      if (rule.schematic.count(v)) {
        s[v] = Term::variable("x");
      } else if (constant_like.count(v)) {
        s[v] = gen.real(1, {"y"});
      } else {
        s[v] = gen.real(2, {"x", "y"});
      }
    }
    std::map<std::string, double> point = {{"x", gen.uniform(0.1, 1.4)}, {"y", gen.uniform(0.1, 1.4)}};
    bool conditions_hold = true;
    for (const auto& c : rule.conditions) {
      auto ok = eval_bool(lucas::substitute(c, s), point);
      if (!ok || !*ok) conditions_hold = false;
    }
    if (!conditions_hold) continue;
    Term lhs = lucas::substitute(rule.lhs, s);
    Term rhs = lucas::substitute(rule.rhs, s);
    bool agree;
    if (boolean_rule) {
      auto a = eval_bool(lhs, point);
      auto b = eval_bool(rhs, point);
      if (!a || !b) continue;
      agree = *a == *b;
    } else {
      auto a = eval_real(lhs, point);
      auto b = eval_real(rhs, point);
      if (!a || !b) continue;
      agree = close_enough(*a, *b, kSampleTolerance);
    }
    ++rep.points;
    if (!agree) {
      if (!rep.failures) rep.first_failure = lucas::to_ascii(lhs) + "  vs  " + lucas::to_ascii(rhs);
      ++rep.failures;
    }
  }
  return rep;
}

/// Builtin evaluators are sampled on random arithmetic terms instead: the
/// evaluated term must keep its value.
inline SamplingReport sample_builtin(lucas::Builtin b, std::uint64_t seed) {
  SamplingReport rep{lucas::builtin_name(b)};
  TermGen gen(seed);
  for (int attempt = 0; attempt < 4000 && rep.points < kSamplePoints; ++attempt) {
    std::map<std::string, double> point = {{"x", gen.uniform(0.1, 1.4)}, {"y", gen.uniform(0.1, 1.4)}};
    Term t;
    if (b == lucas::Builtin::CondEval) {
      static const char* rels[] = {"<", "<=", "=", "~="};
      Term cmp = Term::apply(rels[gen.pick(4)], {Term::integer(gen.pick(5)), Term::integer(gen.pick(5))});
      t = gen.pick(2) ? cmp : Term::apply("and", {cmp, Term::apply(gen.pick(2) ? "true" : "false")});
    } else {
      t = gen.poly(3, b == lucas::Builtin::Arith ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"});
      if (b == lucas::Builtin::Arith) t = lucas::substitute(t, {{"x", Term::integer(gen.pick(5))}});
    }
    auto out = lucas::apply_builtin(b, t);
    Term after = out.value_or(t);
    bool agree;
    if (b == lucas::Builtin::CondEval) {
      auto a = eval_bool(t, point);
      auto c = eval_bool(after, point);
      if (!a || !c) continue;
      agree = *a == *c;
    } else {
      auto a = eval_real(t, point);
      auto c = eval_real(after, point);
      if (!a || !c) continue;
      agree = close_enough(*a, *c, kSampleTolerance);
    }
    ++rep.points;
    if (!agree) {
      if (!rep.failures) rep.first_failure = lucas::to_ascii(t) + "  ->  " + lucas::to_ascii(after);
      ++rep.failures;
    }
  }
  return rep;
}

/// Every rule of every theory, builtins included.
inline std::vector<SamplingReport> sample_all_rules(const lucas::KnowledgeStore& store) {
  std::vector<SamplingReport> out;
  std::uint64_t seed = 1;
  for (const auto& [name, th] : store.theories())
    for (const auto& r : th.rules) {
      ++seed;
      out.push_back(r->builtin ? sample_builtin(*r->builtin, seed * 7919) : sample_rule(*r, seed * 7919));
    }
  return out;
}

// ---------------------------------------------------------------- triangular systems

/// Brute force: some permutation of the equations in which no right-hand
/// side mentions its own or a later left-hand side.
inline bool triangular_by_permutation(const lucas::ResultEquations& eqs) {
  std::vector<std::size_t> order(eqs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < order.size() && ok; ++i) {
      auto fv = lucas::free_vars(eqs[order[i]].second);
      for (std::size_t j = i; j < order.size() && ok; ++j)
        if (fv.count(eqs[order[j]].first)) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

inline bool is_triangular(const lucas::ResultEquations& eqs) {
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    auto fv = lucas::free_vars(eqs[i].second);
    for (std::size_t j = i; j < eqs.size(); ++j)
      if (fv.count(eqs[j].first)) return false;
  }
  return true;
}

/// A calculation whose program returned the list of equations `eqs`.
struct RandomSystem {
  lucas::Calculation calc;
  lucas::Term value;
  lucas::ResultEquations eqs;
};

inline RandomSystem random_system(TermGen& gen) {
  RandomSystem sys;
  int n = 1 + gen.pick(5);
  std::vector<std::string> outs;
  for (int i = 0; i < n; ++i) outs.push_back("o" + std::to_string(i));
  std::vector<Term> items;
  for (const auto& o : outs) {
    Term rhs = gen.pick(2) ? Term::variable("p") : Term::integer(gen.pick(9) + 1);
    for (const auto& other : outs)
      if (gen.pick(100) < 22) rhs = Term::apply("+", {rhs, Term::variable(other)});
    sys.eqs.emplace_back(o, rhs);
    items.push_back(lucas::make_eq(Term::variable(o), rhs));
  }
  sys.calc.outputs = outs;
  sys.value = lucas::make_list(items);
  return sys;
}

}  // namespace oracle
