#include "lucas/json_io.hpp"

#include "lucas/syntax.hpp"

namespace lucas {

Json term_json(const Term& t) { return to_ascii(t); }

Term term_from_json(const Json& j) { return parse_term(j.get<std::string>()); }

namespace {

Json subst_json(const Substitution& s) {
  Json out = Json::object();
  for (const auto& [k, v] : s) out[k] = term_json(v);
  return out;
}

Substitution subst_from_json(const Json& j) {
  Substitution out;
  for (const auto& [k, v] : j.items()) out.emplace(k, term_from_json(v));
  return out;
}

Json terms_json(const std::vector<Term>& ts) {
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(term_json(t));
  return out;
}

std::vector<Term> terms_from_json(const Json& j) {
  std::vector<Term> out;
  for (const auto& t : j) out.push_back(term_from_json(t));
  return out;
}

Json formula_view(const Term& t) { return {{"ascii", to_ascii(t)}, {"unicode", to_unicode(t)}}; }

Json typed_json(const std::vector<TypedName>& names) {
  Json out = Json::array();
  for (const auto& n : names) out.push_back({{"name", n.name}, {"type", n.type}});
  return out;
}

std::string entry_kind_name(Entry::Kind k) {
  switch (k) {
    case Entry::Kind::Formula: return "formula";
    case Entry::Kind::Tactic: return "tactic";
    case Entry::Kind::SubCalc: return "subcalc";
  }
  return "";
}

Json entry_json(const Entry& e) {
  Json j = {{"kind", entry_kind_name(e.kind)}};
  switch (e.kind) {
    case Entry::Kind::Formula: {
      j["term"] = term_json(e.term);
      j["marker"] = marker_name(e.marker);
      j["provenance"] = provenance_name(e.provenance);
      j["ctx_size"] = e.ctx_size;
      j["trace"] = trace_json(e.trace);
      Json d = Json::array();
      for (const auto& sub : e.derivation) d.push_back(entry_json(sub));
      j["derivation"] = d;
      break;
    }
    case Entry::Kind::Tactic:
      j["tactic"] = tactic_json(e.tactic);
      break;
    case Entry::Kind::SubCalc:
      j["collapsed"] = e.collapsed;
      j["calc"] = calc_json(e.sub.front());
      break;
  }
  return j;
}

Entry entry_from_json(const Json& j) {
  Entry e;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "formula") {
    e.kind = Entry::Kind::Formula;
    e.term = term_from_json(j.at("term"));
    auto m = parse_marker(j.at("marker").get<std::string>());
    auto p = parse_provenance(j.at("provenance").get<std::string>());
    if (!m || !p) throw std::invalid_argument("bad marker or provenance");
    e.marker = *m;
    e.provenance = *p;
    e.ctx_size = j.at("ctx_size").get<std::size_t>();
    e.trace = trace_from_json(j.at("trace"));
    for (const auto& d : j.at("derivation")) e.derivation.push_back(entry_from_json(d));
  } else if (kind == "tactic") {
    e.kind = Entry::Kind::Tactic;
    e.tactic = tactic_from_json(j.at("tactic"));
  } else if (kind == "subcalc") {
    e.kind = Entry::Kind::SubCalc;
    e.collapsed = j.at("collapsed").get<bool>();
    e.sub.push_back(calc_from_json(j.at("calc")));
  } else {
    throw std::invalid_argument("bad entry kind '" + kind + "'");
  }
  return e;
}

Json entry_view(const Entry& e, const Position& pos, const std::set<Position>& unfold);

Json calc_view(const Calculation& c, const Position& at, const std::set<Position>& unfold) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    Position p = at;
    p.push_back(i);
    entries.push_back(entry_view(c.entries[i], p, unfold));
  }
  Json outputs = Json::array();
  for (const auto& o : c.outputs) outputs.push_back(o);
  Json renamed = Json::object();
  for (const auto& [k, v] : c.renamed) renamed[k] = v;
  return {{"spec", c.spec},     {"theory", c.theory},   {"method", c.method},
          {"outputs", outputs}, {"renamed", renamed},   {"solved", c.solved},
          {"result", result_json(c.result)}, {"ctx_size", c.ctx.size()}, {"entries", entries}};
}

Json entry_view(const Entry& e, const Position& pos, const std::set<Position>& unfold) {
  Json j = {{"kind", entry_kind_name(e.kind)}, {"pos", position_text(pos)}, {"depth", pos.size() - 1}};
  switch (e.kind) {
    case Entry::Kind::Formula: {
      j["marker"] = marker_name(e.marker);
      j["symbol"] = marker_symbol(e.marker);
      j["formula"] = formula_view(e.term);
      j["provenance"] = provenance_name(e.provenance);
      j["ctx_size"] = e.ctx_size;
      j["trace_steps"] = e.trace.steps.size();
      Json d = Json::array();
      for (std::size_t i = 0; i < e.derivation.size(); ++i) {
        const Entry& sub = e.derivation[i];
        Json item = {{"kind", entry_kind_name(sub.kind)}};
        if (sub.kind == Entry::Kind::Formula) item["formula"] = formula_view(sub.term);
        if (sub.kind == Entry::Kind::Tactic) item["tactic"] = tactic_json(sub.tactic);
        d.push_back(item);
      }
      j["derivation"] = d;
      break;
    }
    case Entry::Kind::Tactic:
      j["tactic"] = tactic_json(e.tactic);
      break;
    case Entry::Kind::SubCalc: {
      const Calculation& c = e.sub.front();
      bool folded = e.collapsed && !unfold.count(pos);
      j["collapsed"] = e.collapsed;
      j["folded"] = folded;
      Json body = calc_view(c, pos, unfold);
      if (folded) body.erase("entries");
      j["calc"] = body;
      break;
    }
  }
  return j;
}

std::string phase_text(ProgState::Phase p) { return phase_name(p); }

ProgState::Phase parse_phase(const std::string& s) {
  for (auto p : {ProgState::Phase::Enter, ProgState::Phase::Ok, ProgState::Phase::Fail})
    if (phase_name(p) == s) return p;
  throw std::invalid_argument("bad phase '" + s + "'");
}

Json loc_map_json(const std::map<ProgLoc, int>& m) {
  Json out = Json::array();
  for (const auto& [loc, n] : m) out.push_back({{"loc", loc}, {"n", n}});
  return out;
}

std::map<ProgLoc, int> loc_map_from_json(const Json& j) {
  std::map<ProgLoc, int> out;
  for (const auto& item : j) out[item.at("loc").get<ProgLoc>()] = item.at("n").get<int>();
  return out;
}

}  // namespace

Json tactic_json(const Tactic& t) {
  Json j = {{"kind", tactic_kind_name(t.kind)}, {"text", tactic_text(t)}, {"unicode", tactic_unicode(t)}};
  switch (t.kind) {
    case Tactic::Kind::Take:
    case Tactic::Kind::Approximate:
      j["term"] = term_json(t.term);
      break;
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteSet:
      j["name"] = t.name;
      break;
    case Tactic::Kind::RewriteInst:
      j["name"] = t.name;
      j["inst"] = subst_json(t.inst);
      break;
    case Tactic::Kind::Subproblem:
      j["theory"] = t.theory;
      j["spec"] = t.spec;
      j["name"] = t.name;
      j["args"] = terms_json(t.args);
      break;
    case Tactic::Kind::CheckPostcond:
      j["spec"] = t.spec;
      break;
  }
  return j;
}

Tactic tactic_from_json(const Json& j) {
  if (j.is_string()) return parse_tactic(j.get<std::string>());
  if (!j.contains("kind")) return parse_tactic(j.at("text").get<std::string>());
  auto kind = parse_tactic_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown tactic kind '" + j.at("kind").get<std::string>() + "'");
  Tactic t;
  t.kind = *kind;
  if (j.contains("term")) t.term = term_from_json(j.at("term"));
  if (j.contains("name")) t.name = j.at("name").get<std::string>();
  if (j.contains("inst")) t.inst = subst_from_json(j.at("inst"));
  if (j.contains("theory")) t.theory = j.at("theory").get<std::string>();
  if (j.contains("spec")) t.spec = j.at("spec").get<std::vector<std::string>>();
  if (j.contains("args")) t.args = terms_from_json(j.at("args"));
  return t;
}

Json trace_json(const RewriteTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"path", s.path},
                     {"rule", s.rule},
                     {"subst", subst_json(s.subst)},
                     {"assumptions", terms_json(s.assumptions)},
                     {"replacement", term_json(s.replacement)},
                     {"result", term_json(s.result)}});
  return {{"start", term_json(t.start)}, {"truncated", t.truncated}, {"steps", steps}};
}

RewriteTrace trace_from_json(const Json& j) {
  RewriteTrace t;
  t.start = term_from_json(j.at("start"));
  t.truncated = j.at("truncated").get<bool>();
  for (const auto& s : j.at("steps"))
    t.steps.push_back(TraceStep{s.at("path").get<TermPath>(), s.at("rule").get<std::string>(),
                                subst_from_json(s.at("subst")), terms_from_json(s.at("assumptions")),
                                term_from_json(s.at("replacement")), term_from_json(s.at("result"))});
  return t;
}

Json facts_json(const std::vector<Fact>& facts) {
  Json out = Json::array();
  for (const auto& f : facts)
    out.push_back({{"term", term_json(f.term)}, {"unicode", to_unicode(f.term)}, {"origin", origin_name(f.origin)}});
  return out;
}

Json context_json(const Context& c) {
  Json facts = Json::array();
  for (const auto& f : c.facts()) facts.push_back({{"term", term_json(f.term)}, {"origin", origin_name(f.origin)}});
  return {{"inherited", c.inherited()}, {"facts", facts}};
}

Context context_from_json(const Json& j) {
  std::vector<Fact> facts;
  for (const auto& f : j.at("facts")) {
    auto origin = parse_origin(f.at("origin").get<std::string>());
    if (!origin) throw std::invalid_argument("bad fact origin");
    facts.push_back({term_from_json(f.at("term")), *origin});
  }
  return Context::restore(facts, j.at("inherited").get<std::size_t>());
}

Json result_json(const ResultEquations& r) {
  Json out = Json::array();
  for (const auto& [o, v] : r)
    out.push_back({{"var", o}, {"value", term_json(v)}, {"unicode", to_unicode(make_eq(Term::variable(o), v))}});
  return out;
}

namespace {

ResultEquations result_from_json(const Json& j) {
  ResultEquations out;
  for (const auto& item : j) out.emplace_back(item.at("var").get<std::string>(), term_from_json(item.at("value")));
  return out;
}

}  // namespace

Json calc_json(const Calculation& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) entries.push_back(entry_json(e));
  Json renamed = Json::object();
  for (const auto& [k, v] : c.renamed) renamed[k] = v;
  return {{"spec", c.spec},         {"theory", c.theory},     {"method", c.method},
          {"inputs", subst_json(c.inputs)}, {"outputs", c.outputs}, {"renamed", renamed},
          {"context", context_json(c.ctx)}, {"entries", entries}, {"solved", c.solved},
          {"result", result_json(c.result)}};
}

Calculation calc_from_json(const Json& j) {
  Calculation c;
  c.spec = j.at("spec").get<SpecPath>();
  c.theory = j.at("theory").get<std::string>();
  c.method = j.at("method").get<std::string>();
  c.inputs = subst_from_json(j.at("inputs"));
  c.outputs = j.at("outputs").get<std::vector<std::string>>();
  for (const auto& [k, v] : j.at("renamed").items()) c.renamed[k] = v.get<std::string>();
  c.ctx = context_from_json(j.at("context"));
  for (const auto& e : j.at("entries")) c.entries.push_back(entry_from_json(e));
  c.solved = j.at("solved").get<bool>();
  c.result = result_from_json(j.at("result"));
  return c;
}

Json calc_view_json(const Calculation& c, const std::set<Position>& unfold) { return calc_view(c, {}, unfold); }

Json state_json(const ProgState& s) {
  Json committed = Json::array();
  for (const auto& loc : s.committed) committed.push_back(loc);
  return {{"loc", s.loc},
          {"phase", phase_text(s.phase)},
          {"value", term_json(s.value)},
          {"current", term_json(s.current)},
          {"env", subst_json(s.env)},
          {"repeat_counts", loc_map_json(s.repeat_counts)},
          {"repeat_marks", loc_map_json(s.repeat_marks)},
          {"committed", committed},
          {"tactics_applied", s.tactics_applied}};
}

ProgState state_from_json(const Json& j) {
  ProgState s;
  s.loc = j.at("loc").get<ProgLoc>();
  s.phase = parse_phase(j.at("phase").get<std::string>());
  s.value = term_from_json(j.at("value"));
  s.current = term_from_json(j.at("current"));
  s.env = subst_from_json(j.at("env"));
  s.repeat_counts = loc_map_from_json(j.at("repeat_counts"));
  s.repeat_marks = loc_map_from_json(j.at("repeat_marks"));
  for (const auto& loc : j.at("committed")) s.committed.insert(loc.get<ProgLoc>());
  s.tactics_applied = j.at("tactics_applied").get<int>();
  return s;
}

Json snapshot_json(const Snapshot& s) {
  Json frames = Json::array();
  for (const auto& f : s.frames)
    frames.push_back({{"method", f.method}, {"calc", f.calc}, {"state", state_json(f.state)}});
  return {{"calc", calc_json(s.calc)},
          {"frames", frames},
          {"detached", s.detached},
          {"finished", s.finished},
          {"result", result_json(s.result)}};
}

Snapshot snapshot_from_json(const Json& j) {
  Snapshot s;
  s.calc = calc_from_json(j.at("calc"));
  for (const auto& f : j.at("frames"))
    s.frames.push_back(Frame{f.at("method").get<std::string>(), state_from_json(f.at("state")),
                             f.at("calc").get<Position>()});
  s.detached = j.at("detached").get<bool>();
  s.finished = j.at("finished").get<bool>();
  s.result = result_from_json(j.at("result"));
  return s;
}

Json outcome_json(const StepOutcome& o) {
  Json j = {{"outcome", outcome_name(o.kind)}};
  if (o.tactic) j["tactic"] = tactic_json(*o.tactic);
  if (o.formula) j["formula"] = formula_view(*o.formula);
  if (!o.position.empty()) j["pos"] = position_text(o.position);
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (o.kind == StepOutcome::Kind::Derived) {
    Json d = Json::array();
    for (const auto& e : o.derivation) {
      Json item = {{"kind", entry_kind_name(e.kind)}};
      if (e.kind == Entry::Kind::Formula) item["formula"] = formula_view(e.term);
      if (e.kind == Entry::Kind::Tactic) item["tactic"] = tactic_json(e.tactic);
      d.push_back(item);
    }
    j["derivation"] = d;
  }
  if (o.kind == StepOutcome::Kind::Finished) j["result"] = result_json(o.result);
  return j;
}

Json spec_json(const Specification& s) {
  return {{"path", s.path},
          {"theory", s.theory},
          {"inputs", typed_json(s.inputs)},
          {"precond", terms_json(s.precond)},
          {"outputs", typed_json(s.outputs)},
          {"postcond", s.postcond ? term_json(*s.postcond) : Json(nullptr)},
          {"props", terms_json(s.props)},
          {"prop_vars", s.prop_vars}};
}

Json theory_json(const KnowledgeStore& store, const Theory& t) {
  Json rules = Json::array();
  for (const auto& r : t.rules) rules.push_back({{"name", r->name}, {"text", r->text()}});
  Json sets = Json::array();
  for (const auto& [name, rs] : t.rulesets) {
    Json names = Json::array();
    for (const auto& r : rs->rules) names.push_back(r->name);
    sets.push_back({{"name", name}, {"rules", names}, {"max_steps", rs->max_steps}});
  }
  return {{"name", t.name},
          {"parent", t.parent.empty() ? Json(nullptr) : Json(t.parent)},
          {"chain", store.theory_chain(t.name)},
          {"facts", terms_json(t.facts)},
          {"schematic", t.schematic},
          {"condition_ruleset", t.condition_ruleset},
          {"rules", rules},
          {"rulesets", sets}};
}

Json method_json(const Method& m) {
  Json examples = Json::object();
  for (const auto& [k, v] : m.examples) examples[k] = term_json(v);
  return {{"name", m.name},
          {"theory", m.theory},
          {"spec", m.spec},
          {"formals", typed_json(m.program->formals)},
          {"program", print_program(*m.program)},
          {"check", m.check_ruleset},
          {"stub", m.is_stub()},
          {"exports", terms_json(m.exports)},
          {"examples", examples}};
}

}  // namespace lucas
