#include "lucas/calculation.hpp"

#include "lucas/numeric.hpp"
#include "lucas/poly.hpp"
#include "lucas/syntax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lucas {

std::string marker_symbol(Marker m) {
  switch (m) {
    case Marker::Initial: return "⊢";
    case Marker::Equiv: return "≡";
    case Marker::Result: return "…";
    case Marker::Approx: return "≈";
  }
  return "";
}

std::string marker_name(Marker m) {
  switch (m) {
    case Marker::Initial: return "initial";
    case Marker::Equiv: return "equiv";
    case Marker::Result: return "result";
    case Marker::Approx: return "approx";
  }
  return "";
}

std::optional<Marker> parse_marker(std::string_view name) {
  for (auto m : {Marker::Initial, Marker::Equiv, Marker::Result, Marker::Approx})
    if (marker_name(m) == name) return m;
  return std::nullopt;
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Initial: return "initial";
    case Provenance::TacticOutput: return "tactic_output";
    case Provenance::UserDerivation: return "user_derivation";
    case Provenance::SubproblemResult: return "subproblem_result";
  }
  return "";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  for (auto p : {Provenance::Initial, Provenance::TacticOutput, Provenance::UserDerivation,
                 Provenance::SubproblemResult})
    if (provenance_name(p) == name) return p;
  return std::nullopt;
}

Entry Entry::formula(Term t, Marker m, Provenance p, std::size_t ctx_size) {
  Entry e;
  e.kind = Kind::Formula;
  e.term = std::move(t);
  e.marker = m;
  e.provenance = p;
  e.ctx_size = ctx_size;
  return e;
}

Entry Entry::tactic_entry(Tactic t) {
  Entry e;
  e.kind = Kind::Tactic;
  e.tactic = std::move(t);
  return e;
}

namespace {

std::string violated_message(const std::vector<Term>& v) {
  std::string out = "precondition violated:";
  for (const auto& t : v) out += " " + to_ascii(t);
  return out;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  // The type tag of has_type(x, real) is not a variable of the calculation.
  if (t.is_apply("has_type", 2)) {
    for (const auto& v : free_vars(t.arg(0))) out.insert(v);
    return;
  }
  for (const auto& v : free_vars(t)) out.insert(v);
}

void flatten(const Calculation& c, std::vector<const Entry*>& out) {
  for (const auto& e : c.entries) {
    if (e.kind == Entry::Kind::Formula) out.push_back(&e);
    if (e.kind == Entry::Kind::SubCalc) flatten(e.sub.front(), out);
  }
}

void add_value_facts(Context& ctx, const Term& t) {
  if (is_boolean(t)) {
    ctx.add(t, FactOrigin::ValueExport);
    return;
  }
  if (auto items = list_elements(t))
    for (const auto& i : *items)
      if (is_boolean(i)) ctx.add(i, FactOrigin::ValueExport);
}

}  // namespace

PreconditionViolated::PreconditionViolated(std::vector<Term> violated)
    : std::runtime_error(violated_message(violated)), violated_(std::move(violated)) {}

std::set<std::string> known_names(const Calculation& c) {
  std::set<std::string> out;
  for (const auto& f : c.ctx.facts()) collect_names(f.term, out);
  for (const Entry* e : flattened_formulas(c)) collect_names(e->term, out);
  for (const auto& [name, value] : c.inputs) collect_names(value, out);
  return out;
}

Calculation init_calculation(const KnowledgeStore& store, const Specification& spec, const Method& method,
                             const Substitution& inputs, const Calculation* parent,
                             const std::set<std::string>& shared_outputs) {
  Calculation c;
  c.spec = spec.path;
  c.theory = method.theory;
  c.method = method.name;
  c.inputs = inputs;
  c.ctx = parent ? parent->ctx.child() : Context();

  std::set<std::string> used = parent ? known_names(*parent) : std::set<std::string>{};
  for (const auto& o : spec.outputs) {
    std::string name = o.name;
    if (used.count(name) && !shared_outputs.count(name)) {
      int k = 1;
      while (used.count(o.name + "_" + std::to_string(k))) ++k;
      name = o.name + "_" + std::to_string(k);
      c.renamed[o.name] = name;
    }
    c.outputs.push_back(name);
  }

  PreconditionCheck pre = check_precondition(spec, inputs, c.ctx, store.rewriter(c.theory));
  if (pre.status == PreStatus::Violated) throw PreconditionViolated(pre.violated);
  for (const auto& p : pre.instantiated) c.ctx.add(p, FactOrigin::Precondition);
  for (const auto& i : spec.inputs) {
    auto it = inputs.find(i.name);
    if (it != inputs.end() && it->second.is_variable())
      c.ctx.add(type_fact(it->second.name(), i.type), FactOrigin::TypeConstraint);
  }
  for (std::size_t k = 0; k < spec.outputs.size(); ++k)
    c.ctx.add(type_fact(c.outputs[k], spec.outputs[k].type), FactOrigin::TypeConstraint);
  for (const auto& f : store.theory_facts(c.theory)) c.ctx.add(f, FactOrigin::Theory);
  return c;
}

Env bind_formals(const Method& method, const std::vector<Term>& args) {
  const auto& formals = method_formals(method);
  if (formals.size() != args.size())
    throw MissingArgument("method " + method.name + " takes " + std::to_string(formals.size()) +
                          " arguments, got " + std::to_string(args.size()));
  Env env;
  for (std::size_t i = 0; i < args.size(); ++i) env[formals[i].name] = args[i];
  return env;
}

const Entry* last_formula(const Calculation& c) {
  for (auto it = c.entries.rbegin(); it != c.entries.rend(); ++it)
    if (it->kind == Entry::Kind::Formula) return &*it;
  return nullptr;
}

std::vector<const Entry*> flattened_formulas(const Calculation& c) {
  std::vector<const Entry*> out;
  flatten(c, out);
  return out;
}

Applicability tactic_applicable(const KnowledgeStore& store, const Calculation& c, const Tactic& t) {
  auto no = [](std::string why) { return Applicability{false, std::move(why)}; };
  const Entry* last = last_formula(c);
  switch (t.kind) {
    case Tactic::Kind::Take:
      return {true, ""};
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteInst: {
      RulePtr rule = store.rule(c.theory, t.name);
      if (!rule) return no("unknown rule '" + t.name + "' in theory " + c.theory);
      if (!last) return no("no formula to rewrite");
      for (const auto& [k, v] : t.inst)
        if (!rule->schematic.count(k)) return no("'" + k + "' is not schematic in " + t.name);
      if (!store.rewriter(c.theory).rewrite_once(*rule, t.inst, last->term, c.ctx))
        return no("no redex of " + t.name);
      return {true, ""};
    }
    case Tactic::Kind::RewriteSet: {
      RuleSetPtr rs = store.ruleset(c.theory, t.name);
      if (!rs) return no("unknown rule set '" + t.name + "' in theory " + c.theory);
      if (!last) return no("no formula to rewrite");
      if (store.rewriter(c.theory).normalize(*rs, last->term, c.ctx).term == last->term)
        return no(t.name + " does not change the formula");
      return {true, ""};
    }
    case Tactic::Kind::Approximate: {
      if (!last) return no("no formula to approximate");
      auto items = list_elements(last->term).value_or(std::vector<Term>{last->term});
      for (const auto& i : items)
        if (!is_equation(i)) return no("the formula is not a list of equations");
      if (!evaluate(t.term)) return no("error bound is not a number");
      return {true, ""};
    }
    case Tactic::Kind::Subproblem: {
      const Method* m = store.method(t.name);
      const Specification* s = store.spec(t.spec);
      if (!store.theory(t.theory)) return no("unknown theory " + t.theory);
      if (!s) return no("unknown spec " + spec_path_text(t.spec));
      if (!m) return no("unknown method " + t.name);
      if (method_formals(*m).size() != t.args.size()) return no("wrong number of arguments");
      std::set<std::string> known = known_names(c);
      if (const Specification* own = store.spec(c.spec)) known.insert(own->prop_vars.begin(), own->prop_vars.end());
      for (const auto& a : t.args)
        for (const auto& v : free_vars(a))
          if (!known.count(v)) return no("'" + v + "' has not been generated yet");
      try {
        Substitution inputs = spec_inputs_from_formals(*s, *m, bind_formals(*m, t.args));
        PreconditionCheck pre = check_precondition(*s, inputs, c.ctx, store.rewriter(m->theory));
        if (pre.status == PreStatus::Violated) return no(violated_message(pre.violated));
      } catch (const MissingArgument& e) {
        return no(e.what());
      }
      return {true, ""};
    }
    case Tactic::Kind::CheckPostcond: {
      try {
        extract_result(c, std::nullopt);
      } catch (const NotSolved& e) {
        return no(e.what());
      }
      return {true, ""};
    }
  }
  return no("unknown tactic");
}

std::optional<Term> apply_tactic(const KnowledgeStore& store, Calculation& c, const Tactic& t) {
  if (!tactic_applicable(store, c, t).ok) return std::nullopt;
  const Entry* last = last_formula(c);
  Rewriter rw = store.rewriter(c.theory);
  Entry out;
  switch (t.kind) {
    case Tactic::Kind::Take:
      add_value_facts(c.ctx, t.term);
      out = Entry::formula(t.term, Marker::Initial, Provenance::Initial, 0);
      break;
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteInst: {
      auto r = rw.rewrite_once(*store.rule(c.theory, t.name), t.inst, last->term, c.ctx);
      for (const auto& a : r->assumptions) c.ctx.add(a, FactOrigin::Assumption);
      out = Entry::formula(r->term, Marker::Equiv, Provenance::TacticOutput, 0);
      out.trace = std::move(r->trace);
      break;
    }
    case Tactic::Kind::RewriteSet: {
      Rewritten r = rw.normalize(*store.ruleset(c.theory, t.name), last->term, c.ctx);
      for (const auto& a : r.assumptions) c.ctx.add(a, FactOrigin::Assumption);
      out = Entry::formula(r.term, Marker::Equiv, Provenance::TacticOutput, 0);
      out.trace = std::move(r.trace);
      break;
    }
    case Tactic::Kind::Approximate: {
      Term approx = approximate(last->term, c.ctx, t.term);
      add_value_facts(c.ctx, approx);
      out = Entry::formula(approx, Marker::Approx, Provenance::TacticOutput, 0);
      break;
    }
    case Tactic::Kind::Subproblem:
    case Tactic::Kind::CheckPostcond:
      return std::nullopt;
  }
  out.ctx_size = c.ctx.size();
  c.entries.push_back(Entry::tactic_entry(t));
  c.entries.push_back(out);
  return out.term;
}

std::size_t open_subproblem(const KnowledgeStore& store, Calculation& c, const Tactic& t,
                            const std::set<std::string>& shared_outputs) {
  const Method& m = *store.method(t.name);
  const Specification& s = *store.spec(t.spec);
  Substitution inputs = spec_inputs_from_formals(s, m, bind_formals(m, t.args));
  Calculation child = init_calculation(store, s, m, inputs, &c, shared_outputs);
  c.entries.push_back(Entry::tactic_entry(t));
  Entry e;
  e.kind = Entry::Kind::SubCalc;
  e.sub.push_back(std::move(child));
  c.entries.push_back(std::move(e));
  return c.entries.size() - 1;
}

std::optional<ResultEquations> triangularize(const ResultEquations& eqs, std::string* blocking) {
  std::set<std::string> lhs;
  for (const auto& [o, r] : eqs) lhs.insert(o);
  std::vector<bool> placed(eqs.size(), false);
  std::set<std::string> done;
  ResultEquations out;
  while (out.size() < eqs.size()) {
    bool progress = false;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (const auto& v : free_vars(eqs[i].second))
        if (lhs.count(v) && (!done.count(v) || v == eqs[i].first)) ready = false;
      if (!ready) continue;
      placed[i] = true;
      done.insert(eqs[i].first);
      out.push_back(eqs[i]);
      progress = true;
      break;
    }
    if (!progress) {
      for (std::size_t i = 0; i < eqs.size(); ++i)
        if (!placed[i]) {
          if (blocking) *blocking = eqs[i].first;
          break;
        }
      return std::nullopt;
    }
  }
  return out;
}

ResultEquations extract_result(const Calculation& c, const std::optional<Term>& value) {
  std::map<std::string, Term> found;
  auto is_output = [&](const Term& t) {
    return t.is_variable() && std::find(c.outputs.begin(), c.outputs.end(), t.name()) != c.outputs.end();
  };
  if (value) {
    auto items = list_elements(*value);
    if (is_equation(*value) && is_output(value->arg(0))) {
      found.emplace(value->arg(0).name(), value->arg(1));
    } else if (items) {
      for (const auto& i : *items)
        if (is_equation(i) && is_output(i.arg(0))) found.emplace(i.arg(0).name(), i.arg(1));
    } else if (c.outputs.size() == 1 && is_equation(*value)) {
      found.emplace(c.outputs.front(), value->arg(1));
    } else if (c.outputs.size() == 1 && !is_boolean(*value)) {
      found.emplace(c.outputs.front(), *value);
    }
  }
  auto formulas = flattened_formulas(c);
  for (const auto& o : c.outputs) {
    if (found.count(o)) continue;
    for (auto it = formulas.rbegin(); it != formulas.rend() && !found.count(o); ++it) {
      if ((*it)->marker == Marker::Approx) continue;
      auto items = list_elements((*it)->term).value_or(std::vector<Term>{(*it)->term});
      for (const auto& i : items)
        if (is_equation(i) && i.arg(0).is_variable(o)) {
          found.emplace(o, i.arg(1));
          break;
        }
    }
    if (!found.count(o)) throw NotSolved(o, "no equation for output '" + o + "'");
  }
  ResultEquations eqs;
  for (const auto& o : c.outputs) eqs.emplace_back(o, found.at(o));
  std::string blocking;
  auto ordered = triangularize(eqs, &blocking);
  if (!ordered) throw NotSolved(blocking, "output equations are cyclic at '" + blocking + "'");
  return *ordered;
}

Term result_formula(const Calculation& c, const Term& value) {
  if (is_boolean(value) || list_elements(value)) return value;
  if (c.outputs.size() == 1) return make_eq(Term::variable(c.outputs.front()), value);
  return value;
}

void finish_calculation(const KnowledgeStore& store, Calculation& c, const Term& value) {
  c.result = extract_result(c, value);
  c.solved = true;
  Tactic check;
  check.kind = Tactic::Kind::CheckPostcond;
  check.spec = c.spec;
  c.entries.push_back(Entry::tactic_entry(check));
  const Specification* spec = store.spec(c.spec);
  if (spec && spec->postcond) {
    Substitution s = c.inputs;
    for (const auto& [from, to] : c.renamed) s[from] = Term::variable(to);
    c.ctx.add(substitute(*spec->postcond, s), FactOrigin::AssumedPostcondition);
  }
}

Term close_subproblem(const KnowledgeStore& store, Calculation& parent, std::size_t index, const Term& value) {
  Entry& holder = parent.entries.at(index);
  Calculation& child = holder.sub.front();
  finish_calculation(store, child, value);
  for (std::size_t i = child.ctx.inherited(); i < child.ctx.size(); ++i) {
    const Fact& f = child.ctx.facts()[i];
    if (f.origin == FactOrigin::ValueExport || f.origin == FactOrigin::Assumption ||
        f.origin == FactOrigin::AssumedPostcondition)
      parent.ctx.add(f.term, f.origin);
  }
  for (const auto& [o, r] : child.result) parent.ctx.add(make_eq(Term::variable(o), r), FactOrigin::ValueExport);
  if (const Method* m = store.method(child.method))
    for (const auto& e : m->exports) parent.ctx.add(e, FactOrigin::ValueExport);
  holder.collapsed = true;
  Term shown = result_formula(child, value);
  parent.entries.push_back(Entry::formula(shown, Marker::Result, Provenance::SubproblemResult, parent.ctx.size()));
  return shown;
}

Calculation& calc_at(Calculation& root, const Position& pos) {
  Calculation* c = &root;
  for (std::size_t i : pos) {
    if (i >= c->entries.size() || c->entries[i].kind != Entry::Kind::SubCalc)
      throw std::out_of_range("no subcalculation at " + position_text(pos));
    c = &c->entries[i].sub.front();
  }
  return *c;
}

const Calculation& calc_at(const Calculation& root, const Position& pos) {
  return calc_at(const_cast<Calculation&>(root), pos);
}

const Entry& entry_at(const Calculation& root, const Position& pos) {
  if (pos.empty()) throw std::out_of_range("empty position");
  const Calculation& c = calc_at(root, Position(pos.begin(), pos.end() - 1));
  if (pos.back() >= c.entries.size()) throw std::out_of_range("no entry at " + position_text(pos));
  return c.entries[pos.back()];
}

Term approximate(const Term& equations, const Context& ctx, const Term& errbound) {
  double bound = evaluate(errbound).value_or(0.01);
  int digits = bound > 0 ? std::max(0, static_cast<int>(std::ceil(-std::log10(bound) - 1e-12))) : 6;
  std::vector<std::pair<std::string, Term>> values;
  for (const auto& f : ctx.facts()) {
    if (f.origin != FactOrigin::ValueExport || !is_equation(f.term) || !f.term.arg(0).is_variable()) continue;
    const std::string& name = f.term.arg(0).name();
    if (occurs(name, f.term.arg(1))) continue;
    bool seen = false;
    for (const auto& v : values) seen = seen || v.first == name;
    if (!seen) values.emplace_back(name, f.term.arg(1));
  }
  auto items = list_elements(equations).value_or(std::vector<Term>{equations});
  std::vector<Term> out;
  for (const auto& eq : items) {
    Substitution s;
    std::string self = eq.arg(0).is_variable() ? eq.arg(0).name() : "";
    for (const auto& [name, rhs] : values)
      if (name != self) s.emplace(name, rhs);
    Term t = eq.arg(1);
    for (int round = 0; round < 8; ++round) {
      Term next = substitute(t, s);
      if (next == t) break;
      t = next;
    }
    Polynomial acc;
    Polynomial poly = to_polynomial(t);
    for (const auto& [mono, coeff] : poly.terms()) {
      double c = to_double(coeff);
      Polynomial rest = Polynomial::constant(1);
      for (const auto& [atom, power] : mono) {
        std::optional<double> v = free_vars(atom).empty() ? evaluate(atom) : std::nullopt;
        if (v)
          c *= std::pow(*v, power);
        else
          rest = rest * Polynomial::atom(atom).pow(power);
      }
      acc = acc + rest.scaled(round_decimal(c, digits));
    }
    out.push_back(Term::apply("approx", {eq.arg(0), acc.to_term()}));
  }
  return list_elements(equations) ? make_list(out) : out.front();
}

std::string position_text(const Position& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(p[i]);
  }
  return out;
}

Position parse_position(std::string_view text) {
  Position out;
  if (text.empty()) return out;
  std::string part;
  std::istringstream in{std::string(text)};
  while (std::getline(in, part, '.')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad position '" + std::string(text) + "'");
    out.push_back(std::stoul(part));
  }
  return out;
}

}  // namespace lucas
