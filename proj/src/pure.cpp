#include "lucas/program.hpp"

#include "lucas/syntax.hpp"

#include <functional>
#include <set>

namespace lucas {
namespace {

struct Function;
using Value = std::variant<Term, std::shared_ptr<const Function>>;

// A combinator waiting for arguments, or a composition of two functions.
struct Function {
  std::string combinator;
  std::vector<Value> bound;
  std::shared_ptr<const Function> outer;
  std::shared_ptr<const Function> inner;
};

const std::map<std::string, std::size_t, std::less<>>& combinator_arities() {
  static const std::map<std::string, std::size_t, std::less<>> table = {
      {"HD", 1}, {"LEN", 1}, {"RHS", 1}, {"LHS", 1},
      {"FILTER", 2}, {"FILTER_OUT", 2}, {"contains", 2}, {"ident", 2}};
  return table;
}

const Term& as_term(const Value& v, std::string_view what) {
  if (auto t = std::get_if<Term>(&v)) return *t;
  throw EvalError(std::string(what) + ": expected a term, got a function");
}

std::shared_ptr<const Function> as_function(const Value& v) {
  if (auto f = std::get_if<std::shared_ptr<const Function>>(&v)) return *f;
  throw EvalError("cannot apply the term " + render_term(std::get<Term>(v), RenderStyle::Ascii) +
                  " as a function");
}

std::vector<Term> as_list(const Value& v, std::string_view what) {
  const Term& t = as_term(v, what);
  auto items = list_elements(t);
  if (!items) throw EvalError(std::string(what) + ": not a list: " + render_term(t, RenderStyle::Ascii));
  return *items;
}

Value apply_function(const std::shared_ptr<const Function>& f, const Value& arg);

bool holds(const Value& pred, const Term& item) {
  Term r = as_term(apply_function(as_function(pred), item), "FILTER predicate");
  if (is_true(r)) return true;
  if (is_false(r)) return false;
  throw EvalError("FILTER predicate did not yield true or false");
}

Value run_combinator(const std::string& name, const std::vector<Value>& a) {
  if (name == "HD") {
    auto items = as_list(a[0], "HD");
    if (items.empty()) throw EvalError("HD of empty list");
    return items.front();
  }
  if (name == "LEN") return Term::integer(static_cast<long long>(as_list(a[0], "LEN").size()));
  if (name == "RHS" || name == "LHS") {
    const Term& t = as_term(a[0], name);
    if (!is_equation(t)) throw EvalError(name + " of non-equation " + render_term(t, RenderStyle::Ascii));
    return t.arg(name == "RHS" ? 1 : 0);
  }
  if (name == "FILTER" || name == "FILTER_OUT") {
    bool keep_matches = name == "FILTER";
    std::vector<Term> out;
    for (const auto& item : as_list(a[1], name))
      if (holds(a[0], item) == keep_matches) out.push_back(item);
    return make_list(std::move(out));
  }
  if (name == "contains") {
    const Term& needle = as_term(a[0], "contains");
    const Term& hay = as_term(a[1], "contains");
    bool found = needle.is_variable() ? occurs(needle.name(), hay) : contains_subterm(hay, needle);
    return found ? true_term() : false_term();
  }
  if (name == "ident") return as_term(a[0], "ident") == as_term(a[1], "ident") ? true_term() : false_term();
  throw EvalError("unknown combinator " + name);
}

Value apply_function(const std::shared_ptr<const Function>& f, const Value& arg) {
  if (f->outer) return apply_function(f->outer, apply_function(f->inner, arg));
  auto next = std::make_shared<Function>(*f);
  next->bound.push_back(arg);
  if (next->bound.size() == combinator_arities().find(f->combinator)->second)
    return run_combinator(next->combinator, next->bound);
  return std::shared_ptr<const Function>(next);
}

Value eval_value(const Env& env, const Pure& e) {
  switch (e.kind) {
    case Pure::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw EvalError("unbound identifier " + e.name);
      return it->second;
    }
    case Pure::Kind::Num:
    case Pure::Kind::Quote:
      return e.literal;
    case Pure::Kind::Op: {
      std::vector<Term> args;
      for (const auto& a : e.args) args.push_back(as_term(eval_value(env, *a), e.name));
      return Term::apply(e.name, std::move(args));
    }
    case Pure::Kind::List: {
      std::vector<Term> items;
      for (const auto& a : e.args) items.push_back(as_term(eval_value(env, *a), "list item"));
      return make_list(std::move(items));
    }
    case Pure::Kind::Comb: {
      auto f = std::make_shared<Function>();
      f->combinator = e.name;
      return std::shared_ptr<const Function>(f);
    }
    case Pure::Kind::Call:
      return apply_function(as_function(eval_value(env, *e.args[0])), eval_value(env, *e.args[1]));
    case Pure::Kind::Compose: {
      auto f = std::make_shared<Function>();
      f->outer = as_function(eval_value(env, *e.args[0]));
      f->inner = as_function(eval_value(env, *e.args[1]));
      return std::shared_ptr<const Function>(f);
    }
  }
  throw EvalError("malformed expression");
}

bool same_ptr_list(const std::vector<PurePtr>& a, const std::vector<PurePtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_pure(*a[i], *b[i])) return false;
  return true;
}

bool same_tactic(const ProgTactic& a, const ProgTactic& b) {
  if (a.kind != b.kind || a.name != b.name || a.theory != b.theory || a.spec != b.spec) return false;
  if ((a.arg == nullptr) != (b.arg == nullptr)) return false;
  if (a.arg && !same_pure(*a.arg, *b.arg)) return false;
  if (a.inst.size() != b.inst.size()) return false;
  for (std::size_t i = 0; i < a.inst.size(); ++i)
    if (a.inst[i].first != b.inst[i].first || !same_pure(*a.inst[i].second, *b.inst[i].second))
      return false;
  return same_ptr_list(a.args, b.args);
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.names != b.names || a.children.size() != b.children.size()) return false;
  if ((a.pure == nullptr) != (b.pure == nullptr)) return false;
  if (a.pure && !same_pure(*a.pure, *b.pure)) return false;
  if (a.tactic.has_value() != b.tactic.has_value()) return false;
  if (a.tactic && !same_tactic(*a.tactic, *b.tactic)) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_expr(*a.children[i], *b.children[i])) return false;
  return true;
}

void collect_tactics(const Expr& e, std::vector<const ProgTactic*>& out) {
  if (e.tactic) out.push_back(&*e.tactic);
  for (const auto& c : e.children) collect_tactics(*c, out);
}

}  // namespace

bool is_combinator(std::string_view name) { return combinator_arities().count(name) > 0; }

bool same_pure(const Pure& a, const Pure& b) {
  return a.kind == b.kind && a.name == b.name && a.literal == b.literal && a.type == b.type &&
         same_ptr_list(a.args, b.args);
}

Term eval_pure(const Env& env, const Pure& e) {
  Value v = eval_value(env, e);
  if (auto t = std::get_if<Term>(&v)) return *t;
  throw EvalError("expression " + print_pure(e) + " is a function, not a term");
}

std::string expr_kind_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Let: return "Let";
    case Expr::Kind::If: return "If";
    case Expr::Kind::Repeat: return "Repeat";
    case Expr::Kind::Or: return "Or";
    case Expr::Kind::Try: return "Try";
    case Expr::Kind::Chain: return "Chain";
    case Expr::Kind::Applied: return "Applied";
    case Expr::Kind::Tactic: return "Tactic";
    case Expr::Kind::Pure: return "Pure";
  }
  return "?";
}

bool same_program(const Program& a, const Program& b) {
  return a.name == b.name && a.formals == b.formals && same_expr(*a.body, *b.body);
}

const Expr& node_at(const Program& p, const std::vector<std::size_t>& loc) {
  const Expr* cur = p.body.get();
  for (std::size_t i : loc) {
    if (i >= cur->children.size()) throw std::out_of_range("program location out of range");
    cur = cur->children[i].get();
  }
  return *cur;
}

Tactic instantiate(const ProgTactic& t, const Env& env) {
  Tactic out;
  out.kind = t.kind;
  out.name = t.name;
  out.theory = t.theory;
  out.spec = t.spec;
  if (t.arg) out.term = eval_pure(env, *t.arg);
  for (const auto& [name, value] : t.inst) out.inst[name] = eval_pure(env, *value);
  for (const auto& a : t.args) out.args.push_back(eval_pure(env, *a));
  return out;
}

std::vector<const ProgTactic*> program_tactics(const Program& p) {
  std::vector<const ProgTactic*> out;
  collect_tactics(*p.body, out);
  return out;
}

}  // namespace lucas
