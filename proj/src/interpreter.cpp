#include "lucas/interpreter.hpp"

#include "lucas/syntax.hpp"

namespace lucas {

std::string outcome_name(StepOutcome::Kind k) {
  switch (k) {
    case StepOutcome::Kind::Stepped: return "Stepped";
    case StepOutcome::Kind::Located: return "Located";
    case StepOutcome::Kind::Helpless: return "Helpless";
    case StepOutcome::Kind::Derived: return "Derived";
    case StepOutcome::Kind::NotDerivable: return "NotDerivable";
    case StepOutcome::Kind::Finished: return "Finished";
    case StepOutcome::Kind::Stuck: return "Stuck";
  }
  return "";
}

bool same_step(const Tactic& a, const Tactic& b) { return a == b; }

namespace {

StepOutcome outcome(StepOutcome::Kind k, std::string reason = "") {
  StepOutcome o;
  o.kind = k;
  o.reason = std::move(reason);
  return o;
}

Position child_pos(Position p, std::size_t i) {
  p.push_back(i);
  return p;
}

}  // namespace

Session::Session(const KnowledgeStore& store, std::string id, Calculation calc, std::vector<Frame> frames)
    : store_(&store), id_(std::move(id)), calc_(std::move(calc)), frames_(std::move(frames)) {
  snapshots_.push_back(current());
  log_.push_back({"open", "Opened", 0});
}

Snapshot Session::current() const { return Snapshot{calc_, frames_, detached_, finished_, result_}; }

Session Session::restore(const KnowledgeStore& store, std::string id, Snapshot current, std::size_t at,
                         std::vector<LogEntry> log, std::vector<Snapshot> snapshots) {
  Session s(store, std::move(id), std::move(current.calc), std::move(current.frames));
  s.detached_ = current.detached;
  s.finished_ = current.finished;
  s.result_ = std::move(current.result);
  s.log_ = std::move(log);
  s.snapshots_ = std::move(snapshots);
  s.at_ = at;
  return s;
}

const Program& Session::program(const Frame& f) const {
  const Method* m = store_->method(f.method);
  if (!m || !m->program) throw SessionError("UnknownMethod", "unknown method " + f.method);
  return *m->program;
}

ConditionOracle Session::oracle(const Calculation& c) const {
  const KnowledgeStore* store = store_;
  return [store, &c](const Term& t) { return store->rewriter(c.theory).eval_condition(c.ctx, t); };
}

std::set<std::string> Session::ancestor_outputs(const Position& pos) const {
  std::set<std::string> out;
  const Calculation* c = &calc_;
  out.insert(c->outputs.begin(), c->outputs.end());
  for (std::size_t i : pos) {
    c = &c->entries.at(i).sub.front();
    out.insert(c->outputs.begin(), c->outputs.end());
  }
  return out;
}

void Session::record(std::string trigger, const StepOutcome& out) {
  snapshots_.push_back(current());
  at_ = snapshots_.size() - 1;
  log_.push_back({std::move(trigger), outcome_name(out.kind), at_});
}

StepOutcome Session::step(Scope scope) {
  const ProgState start = frames_.back().state;
  auto stuck = [&](std::string why) {
    frames_.back().state = start;
    return outcome(StepOutcome::Kind::Stuck, std::move(why));
  };
  for (std::size_t guard = 0;; ++guard) {
    if (guard > kScanBudget) return stuck("step budget exhausted");
    Frame& f = frames_.back();
    Calculation& c = calc_at(calc_, f.calc);
    const Program& p = program(f);
    ScanResult r = scan_to_next_tactic(p, f.state, oracle(c));

    if (r.kind == ScanResult::Kind::Stuck) return stuck(r.reason);

    if (r.kind == ScanResult::Kind::Finished) {
      if (scope == Scope::Frame) return stuck("the program of this calculation ends here");
      Tactic check;
      check.kind = Tactic::Kind::CheckPostcond;
      check.spec = c.spec;
      StepOutcome out = outcome(StepOutcome::Kind::Stepped);
      out.tactic = check;
      try {
        if (frames_.size() == 1) {
          finish_calculation(*store_, calc_, r.value);
          Term shown = result_formula(calc_, r.value);
          calc_.entries.push_back(
              Entry::formula(shown, Marker::Result, Provenance::SubproblemResult, calc_.ctx.size()));
          result_ = calc_.result;
          finished_ = true;
          frames_.clear();
          out.kind = StepOutcome::Kind::Finished;
          out.formula = shown;
          out.position = {calc_.entries.size() - 1};
          out.result = result_;
          return out;
        }
        Calculation& parent = calc_at(calc_, Position(f.calc.begin(), f.calc.end() - 1));
        Term shown = close_subproblem(*store_, parent, f.calc.back(), r.value);
        frames_.pop_back();
        Frame& g = frames_.back();
        g.state = advance_after(program(g), g.state, r.value);
        out.formula = shown;
        out.position = child_pos(g.calc, parent.entries.size() - 1);
        return out;
      } catch (const NotSolved& e) {
        return stuck(e.what());
      }
    }

    Applicability a = tactic_applicable(*store_, c, r.tactic);
    if (!a.ok) {
      f.state = fail_at(r.state);
      continue;
    }
    StepOutcome out = outcome(StepOutcome::Kind::Stepped);
    out.tactic = r.tactic;
    if (r.tactic.kind == Tactic::Kind::Subproblem) {
      if (scope == Scope::Frame) return stuck("a subproblem starts here");
      f.state = r.state;
      Position here = f.calc;
      std::size_t idx = open_subproblem(*store_, c, r.tactic, ancestor_outputs(here));
      const Method& m = *store_->method(r.tactic.name);
      frames_.push_back(Frame{m.name, initial_state(*m.program, bind_formals(m, r.tactic.args)), child_pos(here, idx)});
      out.position = child_pos(here, idx);
      return out;
    }
    std::optional<Term> formula = apply_tactic(*store_, c, r.tactic);
    f.state = advance_after(p, r.state, *formula);
    out.formula = formula;
    out.position = child_pos(f.calc, c.entries.size() - 1);
    return out;
  }
}

StepOutcome Session::do_next() {
  if (finished_) throw SessionError("InvalidState", "the calculation is finished");
  if (detached_)
    return outcome(StepOutcome::Kind::Helpless,
                   "the calculation left the program; backtrack or input a derivable formula");
  StepOutcome out = step(Scope::Any);
  if (out.kind != StepOutcome::Kind::Stuck) record("do_next", out);
  return out;
}

StepOutcome Session::input_tactic(const Tactic& t) {
  if (finished_) throw SessionError("InvalidState", "the calculation is finished");
  Frame& f = frames_.back();
  Calculation& c = calc_at(calc_, f.calc);
  Applicability a = tactic_applicable(*store_, c, t);
  if (!a.ok) throw SessionError("NotApplicable", a.reason);
  const Program& p = program(f);
  std::string trigger = "tactic " + tactic_text(t);

  // Search the program for the same step; only the program state moves.
  std::optional<ProgState> found;
  bool ends_here = false;
  if (!detached_) {
    ProgState s = f.state;
    for (std::size_t visits = 0; visits <= kScanBudget; ++visits) {
      ScanResult r = scan_to_next_tactic(p, s, oracle(c));
      if (r.kind == ScanResult::Kind::Finished) ends_here = true;
      if (r.kind != ScanResult::Kind::AtTactic) break;
      if (same_step(r.tactic, t)) {
        found = r.state;
        break;
      }
      s = fail_at(r.state);
    }
  }

  if (t.kind == Tactic::Kind::CheckPostcond || t.kind == Tactic::Kind::Subproblem) {
    bool located = t.kind == Tactic::Kind::CheckPostcond ? ends_here : found.has_value();
    if (!located) return outcome(StepOutcome::Kind::Helpless, "the program does not reach " + trigger.substr(7));
    if (found) f.state = *found;
    StepOutcome out = step(Scope::Any);
    if (out.kind == StepOutcome::Kind::Stuck) return out;
    if (out.kind == StepOutcome::Kind::Stepped) out.kind = StepOutcome::Kind::Located;
    record(trigger, out);
    return out;
  }

  std::optional<Term> formula = apply_tactic(*store_, c, t);
  StepOutcome out = outcome(StepOutcome::Kind::Located);
  out.tactic = t;
  out.formula = formula;
  out.position = child_pos(f.calc, c.entries.size() - 1);
  if (found) {
    f.state = advance_after(p, *found, *formula);
  } else {
    detached_ = true;
    out.kind = StepOutcome::Kind::Helpless;
    out.reason = "the program cannot continue from this step";
  }
  record(trigger, out);
  return out;
}

StepOutcome Session::input_formula(const Term& input) {
  if (finished_) throw SessionError("InvalidState", "the calculation is finished");
  const Frame& f = frames_.back();
  const Calculation& c = calc_at(calc_, f.calc);
  const Method& m = *store_->method(f.method);
  RuleSetPtr check = m.check_ruleset.empty() ? nullptr : store_->ruleset(c.theory, m.check_ruleset);
  Rewriter rw = store_->rewriter(c.theory);
  auto equal = [&](const Term& a, const Calculation& in) {
    if (!check) return ac_canonical(a) == ac_canonical(input);
    return rw.equal_modulo(*check, a, input, in.ctx) == Equality::Equal;
  };
  std::string trigger = "formula " + to_ascii(input);

  StepOutcome out = outcome(StepOutcome::Kind::Derived);
  out.formula = input;
  const Entry* last = last_formula(c);
  if (last && last->term == input) {
    out.position = child_pos(f.calc, c.entries.size() - 1);
    return out;
  }

  // First look for the steps t* the program would take to reach the input.
  Session trial(*store_, id_, calc_, frames_);
  const std::size_t n = c.entries.size();
  for (std::size_t k = 0; k < kScanBudget; ++k) {
    StepOutcome o = trial.step(Scope::Frame);
    if (o.kind != StepOutcome::Kind::Stepped) break;
    Calculation& tc = calc_at(trial.calc_, f.calc);
    if (!o.formula || !equal(*o.formula, tc)) continue;
    Entry derived = Entry::formula(input, Marker::Equiv, Provenance::UserDerivation, tc.ctx.size());
    derived.derivation.assign(tc.entries.begin() + static_cast<std::ptrdiff_t>(n), tc.entries.end());
    tc.entries.resize(n);
    tc.entries.push_back(derived);
    out.derivation = derived.derivation;
    out.position = child_pos(f.calc, tc.entries.size() - 1);
    calc_ = std::move(trial.calc_);
    frames_ = std::move(trial.frames_);
    detached_ = false;
    record(trigger, out);
    return out;
  }

  // A rewording of the last formula needs no program step.
  if (last && equal(last->term, c)) {
    Calculation& mc = calc_at(calc_, f.calc);
    mc.entries.push_back(Entry::formula(input, Marker::Equiv, Provenance::UserDerivation, mc.ctx.size()));
    out.position = child_pos(f.calc, mc.entries.size() - 1);
    record(trigger, out);
    return out;
  }
  return outcome(StepOutcome::Kind::NotDerivable, "the program does not reach a formula equal to the input");
}

StepOutcome Session::auto_complete() {
  for (std::size_t k = 0; k < kScanBudget; ++k) {
    if (finished_) {
      StepOutcome out = outcome(StepOutcome::Kind::Finished);
      out.result = result_;
      return out;
    }
    StepOutcome out = do_next();
    if (out.kind == StepOutcome::Kind::Stuck || out.kind == StepOutcome::Kind::Helpless) return out;
  }
  return outcome(StepOutcome::Kind::Stuck, "auto-completion budget exhausted");
}

void Session::backtrack(std::size_t index) {
  if (index >= snapshots_.size())
    throw SessionError("UnknownPosition", "no step " + std::to_string(index) + " in the step log");
  if (index == at_) return;
  const Snapshot& s = snapshots_[index];
  calc_ = s.calc;
  frames_ = s.frames;
  detached_ = s.detached;
  finished_ = s.finished;
  result_ = s.result;
  at_ = index;
  log_.push_back({"backtrack " + std::to_string(index), "Restored", index});
}

std::vector<Fact> Session::context_at(const Position& pos) const {
  try {
    if (pos.empty()) return calc_at(calc_, cursor()).ctx.facts();
    try {
      return calc_at(calc_, pos).ctx.facts();
    } catch (const std::out_of_range&) {
    }
    const Calculation& c = calc_at(calc_, Position(pos.begin(), pos.end() - 1));
    const Entry& e = entry_at(calc_, pos);
    if (e.kind == Entry::Kind::Formula) return c.ctx.prefix(e.ctx_size).facts();
    return c.ctx.facts();
  } catch (const std::out_of_range&) {
    throw SessionError("UnknownPosition", "no entry at " + position_text(pos));
  }
}

const RewriteTrace& Session::trace_at(const Position& pos) const {
  try {
    const Entry& e = entry_at(calc_, pos);
    if (e.kind != Entry::Kind::Formula)
      throw SessionError("UnknownPosition", "no formula at " + position_text(pos));
    return e.trace;
  } catch (const std::out_of_range&) {
    throw SessionError("UnknownPosition", "no entry at " + position_text(pos));
  }
}

KnowledgeReport Session::knowledge(const Tactic& t) const {
  const std::string& theory = calc_at(calc_, cursor()).theory;
  switch (t.kind) {
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteInst:
      if (RulePtr r = store_->rule(theory, t.name)) return {"rule", r->name, r->theory, r->text()};
      break;
    case Tactic::Kind::RewriteSet:
      if (RuleSetPtr rs = store_->ruleset(theory, t.name)) {
        std::string text;
        for (const auto& r : rs->rules) text += r->text() + "\n";
        return {"ruleset", rs->name, rs->theory, text};
      }
      break;
    case Tactic::Kind::Subproblem:
      if (const Method* m = store_->method(t.name))
        return {"method", m->name, m->theory, "spec [" + join_path(m->spec) + "]\n" + print_program(*m->program)};
      break;
    case Tactic::Kind::CheckPostcond:
      if (const Specification* s = store_->spec(t.spec))
        return {"spec", spec_path_text(s->path), s->theory,
                s->postcond ? "postcondition " + to_ascii(*s->postcond) : "no postcondition"};
      break;
    case Tactic::Kind::Take:
    case Tactic::Kind::Approximate:
      return {"none", tactic_kind_name(t.kind), theory, "no knowledge item behind this tactic"};
  }
  throw SessionError("UnknownPosition", "no knowledge item for " + tactic_text(t));
}

Session open_session(const KnowledgeStore& store, const SpecPath& spec, const std::string& method, const Env& args,
                     std::string id) {
  const Method* m = store.method(method);
  if (!m) throw SessionError("UnknownMethod", "unknown method " + method);
  const Specification* s = store.spec(spec);
  if (!s) throw SessionError("UnknownSpec", "unknown spec " + spec_path_text(spec));
  if (m->spec != spec)
    throw SessionError("UnknownMethod", "method " + method + " solves " + spec_path_text(m->spec) + ", not " +
                                            spec_path_text(spec));
  const auto& formals = method_formals(*m);
  Env env;
  for (const auto& fm : formals) {
    auto it = args.find(fm.name);
    if (it == args.end()) throw SessionError("UnboundFormal", "no argument for formal '" + fm.name + "'");
    env[fm.name] = it->second;
  }
  for (const auto& [name, value] : args)
    if (!env.count(name)) throw SessionError("UnboundFormal", "method " + method + " has no formal '" + name + "'");
  Substitution inputs;
  try {
    inputs = spec_inputs_from_formals(*s, *m, env);
  } catch (const MissingArgument& e) {
    throw SessionError("UnboundFormal", e.what());
  }
  Calculation calc = init_calculation(store, *s, *m, inputs);
  std::vector<Frame> frames{Frame{m->name, initial_state(*m->program, env), {}}};
  return Session(store, std::move(id), std::move(calc), std::move(frames));
}

}  // namespace lucas
