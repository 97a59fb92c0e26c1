#include "lucas/rewrite.hpp"

#include "lucas/poly.hpp"
#include "lucas/syntax.hpp"

#include <algorithm>
#include <unordered_set>

namespace lucas {

struct Rewriter::Guard {
  int depth = 0;
  std::vector<Term> in_progress;
};

namespace {

constexpr int kMaxConditionDepth = 4;
constexpr int kDefaultConditionBudget = 100;

// A rule with Rewrite_Inst applied: pattern variables renamed apart from the
// instantiated names, which become constants.
struct PreparedRule {
  const Rule* rule;
  Term lhs;
  Term rhs;
  std::vector<Term> conditions;
  std::set<std::string> fixed;
};

constexpr char kRenamedPrefix = '?';

PreparedRule prepare(const Rule& rule, const Substitution& inst) {
  PreparedRule p{&rule, rule.lhs, rule.rhs, rule.conditions, {}};
  if (inst.empty() || rule.builtin) return p;
  Substitution sub;
  auto rename_vars = [&](const Term& t) {
    for (const auto& v : free_vars(t))
      if (!rule.schematic.count(v) && !inst.count(v))
        sub.emplace(v, Term::variable(std::string(1, kRenamedPrefix) + v));
  };
  rename_vars(rule.lhs);
  rename_vars(rule.rhs);
  for (const auto& c : rule.conditions) rename_vars(c);
  for (const auto& [k, v] : inst) {
    sub[k] = v;
    for (const auto& name : free_vars(v)) p.fixed.insert(name);
  }
  p.lhs = substitute(rule.lhs, sub);
  p.rhs = substitute(rule.rhs, sub);
  for (auto& c : p.conditions) c = substitute(c, sub);
  return p;
}

Substitution original_names(const Substitution& s) {
  Substitution out;
  for (const auto& [k, v] : s)
    out.emplace(!k.empty() && k[0] == kRenamedPrefix ? k.substr(1) : k, v);
  return out;
}

bool has_unbound(const Term& t) {
  for (const auto& v : free_vars(t))
    if (!v.empty() && v[0] == kRenamedPrefix) return true;
  return false;
}

struct Attempt {
  std::string rule;
  Term replacement;
  Substitution subst;
  std::vector<Term> assumptions;
};

struct Redex {
  TermPath path;
  Attempt attempt;
};

template <class TryNode>
std::optional<Redex> find_redex(const Term& t, TermPath& path, TryNode& try_node,
                                std::unordered_set<Term, TermHash>* normal) {
  if (normal && normal->count(t)) return std::nullopt;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    if (auto r = find_redex(t.arg(i), path, try_node, normal)) return r;
    path.pop_back();
  }
  if (auto a = try_node(t)) return Redex{path, std::move(*a)};
  if (normal) normal->insert(t);
  return std::nullopt;
}

std::optional<Term> fold_arith(const Term& t) {
  if (!t.is_apply()) return std::nullopt;
  const std::string& h = t.name();
  if (h == "neg" && t.arity() == 1 && t.arg(0).is_numeral())
    return Term::numeral(-t.arg(0).value());
  if (t.arity() != 2 || !t.arg(0).is_numeral() || !t.arg(1).is_numeral()) return std::nullopt;
  const Rational& a = t.arg(0).value();
  const Rational& b = t.arg(1).value();
  if (h == "+") return Term::numeral(a + b);
  if (h == "-") return Term::numeral(a - b);
  if (h == "*") return Term::numeral(a * b);
  if (h == "/" && b != 0) return Term::numeral(a / b);
  if (h == "^") {
    if (auto v = rational_pow(a, b)) return Term::numeral(*v);
  }
  return std::nullopt;
}

std::optional<Term> eval_connective(const Term& t) {
  if (!t.is_apply()) return std::nullopt;
  const std::string& h = t.name();
  if (h == "not" && t.arity() == 1) {
    if (is_true(t.arg(0))) return false_term();
    if (is_false(t.arg(0))) return true_term();
    return std::nullopt;
  }
  if ((h != "and" && h != "or") || t.arity() != 2) return std::nullopt;
  const Term& a = t.arg(0);
  const Term& b = t.arg(1);
  bool is_and = h == "and";
  for (const Term* side : {&a, &b}) {
    const Term& other = side == &a ? b : a;
    if (is_true(*side)) return is_and ? other : true_term();
    if (is_false(*side)) return is_and ? false_term() : other;
  }
  return std::nullopt;
}

std::optional<Term> eval_relation(const Term& t) {
  if (!t.is_apply() || t.arity() != 2) return std::nullopt;
  const std::string& h = t.name();
  const Term& a = t.arg(0);
  const Term& b = t.arg(1);
  auto truth = [](bool v) { return v ? true_term() : false_term(); };
  if (h == "free_of") {
    if (b.is_variable()) return truth(!occurs(b.name(), a));
    if (b.is_numeral()) return true_term();
    return std::nullopt;
  }
  if (h != "=" && h != "~=" && h != "<" && h != "<=") return std::nullopt;
  if (a.is_numeral() && b.is_numeral()) {
    const Rational& x = a.value();
    const Rational& y = b.value();
    if (h == "=") return truth(x == y);
    if (h == "~=") return truth(x != y);
    if (h == "<") return truth(x < y);
    return truth(x <= y);
  }
  if (a == b) return truth(h == "=" || h == "<=");
  return std::nullopt;
}

}  // namespace

std::string builtin_name(Builtin b) {
  switch (b) {
    case Builtin::Arith: return "arith";
    case Builtin::Poly: return "poly";
    case Builtin::CondEval: return "cond_eval";
  }
  return "arith";
}

std::optional<Builtin> parse_builtin(std::string_view name) {
  for (auto b : {Builtin::Arith, Builtin::Poly, Builtin::CondEval})
    if (builtin_name(b) == name) return b;
  return std::nullopt;
}

std::string Rule::text() const {
  if (builtin) return "builtin " + builtin_name(*builtin);
  std::string out = to_ascii(lhs) + " = " + to_ascii(rhs);
  for (std::size_t i = 0; i < conditions.size(); ++i)
    out += (i == 0 ? " if " : "; ") + to_ascii(conditions[i]);
  return out;
}

std::vector<Term> RewriteTrace::assumptions() const {
  std::vector<Term> out;
  for (const auto& s : steps)
    for (const auto& a : s.assumptions)
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

Term replay(const RewriteTrace& trace) {
  Term t = trace.start;
  for (const auto& s : trace.steps) t = replace_at(t, s.path, s.replacement);
  return t;
}

std::string truth_name(Truth t) {
  switch (t) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    case Truth::Undecided: return "Undecided";
  }
  return "Undecided";
}

std::string equality_name(Equality e) {
  switch (e) {
    case Equality::Equal: return "Equal";
    case Equality::NotEqual: return "NotEqual";
    case Equality::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<Term> apply_builtin(Builtin b, const Term& t) {
  switch (b) {
    case Builtin::Arith:
      return fold_arith(t);
    case Builtin::Poly: {
      if (!t.is_apply() || !is_arithmetic_head(t.name())) return std::nullopt;
      Term canon = poly_canonical(t);
      if (canon == t) return std::nullopt;
      return canon;
    }
    case Builtin::CondEval: {
      if (auto r = eval_connective(t)) return r;
      return eval_relation(t);
    }
  }
  return std::nullopt;
}

Rewriter::Rewriter(RuleSetPtr conditions) : conditions_(std::move(conditions)) {}

Truth Rewriter::eval_condition(const Context& ctx, const Term& cond) const {
  Guard guard;
  int budget = conditions_ ? conditions_->max_steps : kDefaultConditionBudget;
  return eval_condition(ctx, cond, budget, guard);
}

Truth Rewriter::eval_condition(const Context& ctx, const Term& cond, int budget,
                               Guard& guard) const {
  if (is_true(cond)) return Truth::True;
  if (is_false(cond)) return Truth::False;
  if (guard.depth >= kMaxConditionDepth) return Truth::Undecided;
  if (std::find(guard.in_progress.begin(), guard.in_progress.end(), cond) !=
      guard.in_progress.end())
    return Truth::Undecided;
  static const RuleSet fallback = [] {
    RuleSet rs;
    rs.name = "conditions";
    for (auto b : {Builtin::CondEval, Builtin::Arith}) {
      auto r = std::make_shared<Rule>();
      r->name = builtin_name(b);
      r->builtin = b;
      rs.rules.push_back(r);
    }
    return rs;
  }();
  const RuleSet& rs = conditions_ ? *conditions_ : fallback;
  guard.in_progress.push_back(cond);
  ++guard.depth;
  Rewritten n = normalize(rs, cond, ctx, std::max(budget, 1), true, guard);
  --guard.depth;
  guard.in_progress.pop_back();
  if (is_true(n.term)) return Truth::True;
  if (is_false(n.term)) return Truth::False;
  return Truth::Undecided;
}

std::optional<Rewritten> Rewriter::rewrite_once(const Rule& rule, const Substitution& inst,
                                                const Term& t, const Context& ctx) const {
  PreparedRule p = prepare(rule, inst);
  Guard guard;
  int budget = conditions_ ? conditions_->max_steps : kDefaultConditionBudget;
  auto try_node = [&](const Term& node) -> std::optional<Attempt> {
    if (rule.builtin) {
      if (auto r = apply_builtin(*rule.builtin, node)) return Attempt{rule.name, *r, {}, {}};
      return std::nullopt;
    }
    auto m = match_term(p.lhs, node, p.fixed);
    if (!m) return std::nullopt;
    Attempt a{rule.name, substitute(p.rhs, *m), original_names(*m), {}};
    for (const auto& c : p.conditions) {
      Term cond = substitute(c, *m);
      Truth v = has_unbound(cond) ? Truth::Undecided : eval_condition(ctx, cond, budget, guard);
      if (v == Truth::False) return std::nullopt;
      if (v == Truth::Undecided) a.assumptions.push_back(cond);
    }
    if (has_unbound(a.replacement)) return std::nullopt;
    return a;
  };
  TermPath path;
  auto redex = find_redex(t, path, try_node, nullptr);
  if (!redex) return std::nullopt;
  Rewritten out;
  out.term = replace_at(t, redex->path, redex->attempt.replacement);
  out.assumptions = redex->attempt.assumptions;
  out.trace.start = t;
  out.trace.steps.push_back({redex->path, redex->attempt.rule, redex->attempt.subst,
                             redex->attempt.assumptions, redex->attempt.replacement, out.term});
  return out;
}

Rewritten Rewriter::normalize(const RuleSet& rs, const Term& t, const Context& ctx) const {
  Guard guard;
  return normalize(rs, t, ctx, rs.max_steps, false, guard);
}

Rewritten Rewriter::normalize(const RuleSet& rs, const Term& t, const Context& ctx, int max_steps,
                              bool use_facts, Guard& guard) const {
  const int cond_budget = std::max(1, max_steps / 10);
  auto try_node = [&](const Term& node) -> std::optional<Attempt> {
    if (use_facts && is_boolean(node) && !is_true(node) && !is_false(node) && ctx.contains(node))
      return Attempt{"fact", true_term(), {}, {}};
    for (const auto& rule : rs.rules) {
      if (rule->builtin) {
        if (auto r = apply_builtin(*rule->builtin, node)) return Attempt{rule->name, *r, {}, {}};
        continue;
      }
      auto m = match_term(rule->lhs, node);
      if (!m) continue;
      Attempt a{rule->name, substitute(rule->rhs, *m), *m, {}};
      bool rejected = false;
      for (const auto& c : rule->conditions) {
        Term cond = substitute(c, *m);
        Truth v = eval_condition(ctx, cond, cond_budget, guard);
        // While deciding a condition, only fully discharged rules fire.
        if (v == Truth::False || (use_facts && v == Truth::Undecided)) {
          rejected = true;
          break;
        }
        if (v == Truth::Undecided) a.assumptions.push_back(cond);
      }
      if (!rejected) return a;
    }
    return std::nullopt;
  };

  Rewritten out;
  out.term = t;
  out.trace.start = t;
  std::unordered_set<Term, TermHash> normal;
  int steps = 0;
  while (true) {
    TermPath path;
    auto redex = find_redex(out.term, path, try_node, &normal);
    if (!redex) break;
    if (steps >= max_steps) {
      out.trace.truncated = true;
      break;
    }
    ++steps;
    out.term = replace_at(out.term, redex->path, redex->attempt.replacement);
    for (const auto& a : redex->attempt.assumptions)
      if (std::find(out.assumptions.begin(), out.assumptions.end(), a) == out.assumptions.end())
        out.assumptions.push_back(a);
    out.trace.steps.push_back({redex->path, redex->attempt.rule, redex->attempt.subst,
                               redex->attempt.assumptions, redex->attempt.replacement, out.term});
  }
  return out;
}

Equality Rewriter::equal_modulo(const RuleSet& rs, const Term& a, const Term& b,
                                const Context& ctx) const {
  if (a == b) return Equality::Equal;
  Rewritten na = normalize(rs, a, ctx);
  Rewritten nb = normalize(rs, b, ctx);
  if (na.trace.truncated || nb.trace.truncated) return Equality::Unknown;
  return ac_canonical(na.term) == ac_canonical(nb.term) ? Equality::Equal : Equality::NotEqual;
}

}  // namespace lucas
