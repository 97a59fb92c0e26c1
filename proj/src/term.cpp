#include "lucas/term.hpp"

#include <algorithm>
#include <functional>

namespace lucas {

struct Term::Node {
  Kind kind;
  Rational value;
  std::string name;
  std::vector<Term> args;
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term::Term() : Term(numeral(0)) {}

Term Term::numeral(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Numeral;
  n->hash = mix(1, std::hash<std::string>{}(value.str()));
  n->value = std::move(value);
  n->size = 1;
  return Term(std::move(n));
}

Term Term::integer(long long value) { return numeral(Rational(value)); }

Term Term::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->size = 1;
  return Term(std::move(n));
}

Term Term::apply(std::string head, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  std::size_t h = mix(3, std::hash<std::string>{}(head));
  std::size_t size = 1;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    size += a.size();
  }
  n->hash = h;
  n->size = size;
  n->name = std::move(head);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }

bool Term::is_apply(std::string_view head) const {
  return node_->kind == Kind::Apply && node_->name == head;
}

bool Term::is_apply(std::string_view head, std::size_t arity) const {
  return is_apply(head) && node_->args.size() == arity;
}

bool Term::is_variable(std::string_view name) const {
  return node_->kind == Kind::Variable && node_->name == name;
}

bool Term::is_numeral(const Rational& v) const {
  return node_->kind == Kind::Numeral && node_->value == v;
}

const Rational& Term::value() const {
  if (node_->kind != Kind::Numeral) throw std::logic_error("value() of non-numeral");
  return node_->value;
}

const std::string& Term::name() const { return node_->name; }

const std::vector<Term>& Term::args() const { return node_->args; }

std::size_t Term::hash() const { return node_->hash; }

std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Term::Kind::Numeral:
      return a.node_->value == b.node_->value;
    case Term::Kind::Variable:
      return a.node_->name == b.node_->name;
    case Term::Kind::Apply:
      return a.node_->name == b.node_->name && a.node_->args == b.node_->args;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  switch (a.node_->kind) {
    case Term::Kind::Numeral:
      if (a.node_->value < b.node_->value) return std::strong_ordering::less;
      if (b.node_->value < a.node_->value) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    case Term::Kind::Variable:
      return a.node_->name <=> b.node_->name;
    case Term::Kind::Apply: {
      if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
      if (auto c = a.node_->args.size() <=> b.node_->args.size(); c != 0) return c;
      for (std::size_t i = 0; i < a.node_->args.size(); ++i)
        if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

const std::map<std::string, std::size_t, std::less<>>& builtin_arities() {
  static const std::map<std::string, std::size_t, std::less<>> table = {
      {"+", 2}, {"-", 2}, {"*", 2}, {"/", 2}, {"^", 2}, {"neg", 1},
      {"=", 2}, {"~=", 2}, {"<", 2}, {"<=", 2}, {"approx", 2}, {"in", 2},
      {"and", 2}, {"or", 2}, {"not", 1},
      {"sin", 1}, {"cos", 1}, {"tan", 1}, {"arctan", 1}, {"sqrt", 1},
      {"exp", 1}, {"ln", 1},
      {"d_d", 2}, {"is_differentiable", 1}, {"is_differentiable_on", 2},
      {"open_interval", 2}, {"free_of", 2},
      {"true", 0}, {"false", 0}, {"nil", 0}, {"pi", 0}, {"cons", 2},
      {"HD", 1}, {"LEN", 1}, {"RHS", 1}, {"LHS", 1},
      {"FILTER", 2}, {"FILTER_OUT", 2}, {"contains", 2}, {"ident", 2},
  };
  return table;
}

std::optional<std::size_t> builtin_arity(std::string_view head) {
  const auto& table = builtin_arities();
  auto it = table.find(head);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const Term& subterm(const Term& t, const TermPath& path) {
  const Term* cur = &t;
  for (std::size_t i : path) cur = &cur->arg(i);
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const TermPath& path, std::size_t depth, Term replacement) {
  if (depth == path.size()) return replacement;
  std::vector<Term> args = t.args();
  args.at(path[depth]) = replace_rec(t.arg(path[depth]), path, depth + 1, std::move(replacement));
  return Term::apply(t.name(), std::move(args));
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      out.insert(t.name());
      break;
    case Term::Kind::Apply:
      for (const auto& a : t.args()) collect_vars(a, out);
      break;
    case Term::Kind::Numeral:
      break;
  }
}

bool match_rec(const Term& p, const Term& t, const std::set<std::string>& fixed,
               Substitution& s) {
  switch (p.kind()) {
    case Term::Kind::Numeral:
      return t.is_numeral() && p.value() == t.value();
    case Term::Kind::Variable: {
      if (fixed.count(p.name())) return t.is_variable(p.name());
      auto [it, inserted] = s.emplace(p.name(), t);
      return inserted || it->second == t;
    }
    case Term::Kind::Apply: {
      if (!t.is_apply() || t.name() != p.name() || t.arity() != p.arity()) return false;
      for (std::size_t i = 0; i < p.arity(); ++i)
        if (!match_rec(p.arg(i), t.arg(i), fixed, s)) return false;
      return true;
    }
  }
  return false;
}

void flatten_into(const Term& t, const std::string& head, std::vector<Term>& out) {
  if (t.is_apply(head, 2)) {
    flatten_into(t.arg(0), head, out);
    flatten_into(t.arg(1), head, out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

Term replace_at(const Term& t, const TermPath& path, Term replacement) {
  return replace_rec(t, path, 0, std::move(replacement));
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

bool occurs(std::string_view name, const Term& t) {
  if (t.is_variable()) return t.name() == name;
  for (const auto& a : t.args())
    if (occurs(name, a)) return true;
  return false;
}

bool contains_subterm(const Term& t, const Term& sub) {
  if (t == sub) return true;
  for (const auto& a : t.args())
    if (contains_subterm(a, sub)) return true;
  return false;
}

Term substitute(const Term& t, const Substitution& s) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Numeral:
      return t;
    case Term::Kind::Variable: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Apply: {
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(substitute(a, s));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::apply(t.name(), std::move(args)) : t;
    }
  }
  return t;
}

std::optional<Substitution> match_term(const Term& pattern, const Term& target,
                                       const std::set<std::string>& fixed) {
  Substitution s;
  if (!match_rec(pattern, target, fixed, s)) return std::nullopt;
  return s;
}

Term ac_canonical(const Term& t) {
  if (!t.is_apply()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(ac_canonical(a));
  if ((t.name() == "+" || t.name() == "*") && args.size() == 2) {
    std::vector<Term> operands;
    for (const auto& a : args) flatten_into(a, t.name(), operands);
    std::sort(operands.begin(), operands.end());
    Term acc = operands.front();
    for (std::size_t i = 1; i < operands.size(); ++i)
      acc = Term::apply(t.name(), {acc, operands[i]});
    return acc;
  }
  return Term::apply(t.name(), std::move(args));
}

Term make_eq(Term lhs, Term rhs) { return Term::apply("=", {std::move(lhs), std::move(rhs)}); }

Term make_list(std::vector<Term> items) {
  Term acc = Term::apply("nil");
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    acc = Term::apply("cons", {*it, acc});
  return acc;
}

std::optional<std::vector<Term>> list_elements(const Term& t) {
  std::vector<Term> out;
  const Term* cur = &t;
  while (cur->is_apply("cons", 2)) {
    out.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  if (!cur->is_apply("nil", 0)) return std::nullopt;
  return out;
}

Term true_term() { return Term::apply("true"); }
Term false_term() { return Term::apply("false"); }
bool is_true(const Term& t) { return t.is_apply("true", 0); }
bool is_false(const Term& t) { return t.is_apply("false", 0); }
bool is_equation(const Term& t) { return t.is_apply("=", 2); }

bool is_boolean_head(std::string_view head) {
  static const std::set<std::string, std::less<>> heads = {
      "=", "~=", "<", "<=", "approx", "in", "and", "or", "not", "true", "false",
      "is_differentiable", "is_differentiable_on", "free_of"};
  return heads.count(head) > 0;
}

bool is_boolean(const Term& t) { return t.is_apply() && is_boolean_head(t.name()); }

}  // namespace lucas
