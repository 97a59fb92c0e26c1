#include "lucas/machine.hpp"

#include "lucas/syntax.hpp"

namespace lucas {

std::string phase_name(ProgState::Phase p) {
  switch (p) {
    case ProgState::Phase::Enter: return "enter";
    case ProgState::Phase::Ok: return "ok";
    case ProgState::Phase::Fail: return "fail";
  }
  return "?";
}

ProgState initial_state(const Program&, Env formals) {
  ProgState s;
  s.env = std::move(formals);
  return s;
}

namespace {

ProgLoc child_loc(const ProgLoc& loc, std::size_t i) {
  ProgLoc out = loc;
  out.push_back(i);
  return out;
}

void enter(ProgState& s, ProgLoc loc) {
  s.loc = std::move(loc);
  s.phase = ProgState::Phase::Enter;
}

void succeed(ProgState& s, Term value) {
  s.phase = ProgState::Phase::Ok;
  s.value = std::move(value);
}

void fail(ProgState& s) { s.phase = ProgState::Phase::Fail; }

}  // namespace

ScanResult scan_to_next_tactic(const Program& p, const ProgState& start, const ConditionOracle& decide,
                               std::size_t budget) {
  ScanResult r;
  ProgState s = start;
  auto stuck = [&](std::string why) {
    r.kind = ScanResult::Kind::Stuck;
    r.reason = std::move(why);
    r.state = s;
    return r;
  };

  while (true) {
    if (++r.visits > budget) return stuck("scan budget of " + std::to_string(budget) + " node visits exhausted");
    const Expr& node = node_at(p, s.loc);

    if (s.phase == ProgState::Phase::Enter) {
      try {
        switch (node.kind) {
          case Expr::Kind::Tactic:
            r.kind = ScanResult::Kind::AtTactic;
            r.tactic = instantiate(*node.tactic, s.env);
            r.state = s;
            return r;
          case Expr::Kind::Pure:
            succeed(s, eval_pure(s.env, *node.pure));
            break;
          case Expr::Kind::Applied:
            s.current = eval_pure(s.env, *node.pure);
            enter(s, child_loc(s.loc, 0));
            break;
          case Expr::Kind::If: {
            Term cond = eval_pure(s.env, *node.pure);
            Truth t = decide(cond);
            if (t == Truth::Undecided)
              return stuck("IF condition undecided: " + render_term(cond, RenderStyle::Ascii));
            enter(s, child_loc(s.loc, t == Truth::True ? 0 : 1));
            break;
          }
          case Expr::Kind::Repeat:
            s.repeat_counts[s.loc] = 0;
            s.repeat_marks[s.loc] = s.tactics_applied;
            enter(s, child_loc(s.loc, 0));
            break;
          case Expr::Kind::Or:
            s.committed.erase(s.loc);
            enter(s, child_loc(s.loc, 0));
            break;
          case Expr::Kind::Let:
          case Expr::Kind::Try:
          case Expr::Kind::Chain:
            enter(s, child_loc(s.loc, 0));
            break;
        }
      } catch (const EvalError& e) {
        return stuck(std::string("evaluation error: ") + e.what());
      }
      continue;
    }

    // Returning from the node at s.loc.
    if (s.loc.empty()) {
      if (s.phase == ProgState::Phase::Fail) return stuck("no applicable tactic where one is required");
      r.kind = ScanResult::Kind::Finished;
      r.value = s.value;
      r.state = s;
      return r;
    }
    const bool ok = s.phase == ProgState::Phase::Ok;
    const std::size_t i = s.loc.back();
    ProgLoc parent_loc(s.loc.begin(), s.loc.end() - 1);
    const Expr& parent = node_at(p, parent_loc);
    s.loc = parent_loc;

    switch (parent.kind) {
      case Expr::Kind::Let:
        if (ok && i + 1 < parent.children.size()) {
          s.env[parent.names[i]] = s.value;
          s.current = s.value;
          enter(s, child_loc(parent_loc, i + 1));
        }
        break;
      case Expr::Kind::If:
      case Expr::Kind::Applied:
        break;
      case Expr::Kind::Repeat:
        if (!ok) {
          succeed(s, s.current);
          s.repeat_counts.erase(parent_loc);
          s.repeat_marks.erase(parent_loc);
        } else if (s.tactics_applied == s.repeat_marks[parent_loc]) {
          s.repeat_counts.erase(parent_loc);
          s.repeat_marks.erase(parent_loc);
        } else if (++s.repeat_counts[parent_loc] >= kRepeatLimit) {
          return stuck("REPEAT exceeded " + std::to_string(kRepeatLimit) + " iterations");
        } else {
          s.current = s.value;
          s.repeat_marks[parent_loc] = s.tactics_applied;
          enter(s, child_loc(parent_loc, 0));
        }
        break;
      case Expr::Kind::Or:
        if (!ok && !s.committed.count(parent_loc) && i + 1 < parent.children.size())
          enter(s, child_loc(parent_loc, i + 1));
        else
          s.committed.erase(parent_loc);
        break;
      case Expr::Kind::Try:
        if (!ok) succeed(s, s.current);
        break;
      case Expr::Kind::Chain:
        if (ok && i + 1 < parent.children.size()) {
          s.current = s.value;
          enter(s, child_loc(parent_loc, i + 1));
        }
        break;
      case Expr::Kind::Tactic:
      case Expr::Kind::Pure:
        break;
    }
  }
}

ProgState advance_after(const Program& p, const ProgState& s, const Term& value) {
  ProgState out = s;
  for (std::size_t n = 0; n < s.loc.size(); ++n) {
    ProgLoc prefix(s.loc.begin(), s.loc.begin() + static_cast<std::ptrdiff_t>(n));
    if (node_at(p, prefix).kind == Expr::Kind::Or) out.committed.insert(prefix);
  }
  out.current = value;
  out.tactics_applied += 1;
  succeed(out, value);
  return out;
}

ProgState fail_at(const ProgState& s) {
  ProgState out = s;
  fail(out);
  return out;
}

}  // namespace lucas
