#pragma once

#include "lucas/program.hpp"
#include "lucas/rewrite.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lucas {

using ProgLoc = std::vector<std::size_t>;

/// Program state: where the interpreter stands in the AST, the variable
/// bindings, and the bookkeeping of the tacticals on the way there.
struct ProgState {
  enum class Phase { Enter, Ok, Fail };

  ProgLoc loc;
  Phase phase = Phase::Enter;
  Term value;    // value being returned when phase is Ok
  Term current;  // value flowing through @@ chains
  Env env;
  std::map<ProgLoc, int> repeat_counts;
  std::map<ProgLoc, int> repeat_marks;
  std::set<ProgLoc> committed;  // Or nodes whose current branch generated a step
  int tactics_applied = 0;

  bool operator==(const ProgState&) const = default;
};

std::string phase_name(ProgState::Phase p);

/// Initial state: program root with the formals bound.
ProgState initial_state(const Program& p, Env formals);

struct ScanResult {
  enum class Kind { AtTactic, Finished, Stuck };
  Kind kind = Kind::Stuck;
  ProgState state;
  Tactic tactic;      // AtTactic: the instantiated tactic
  Term value;         // Finished: the program's return value
  std::string reason; // Stuck
  std::size_t visits = 0;
};

/// Decides IF conditions; the caller binds it to a context.
using ConditionOracle = std::function<Truth(const Term&)>;

inline constexpr std::size_t kScanBudget = 100000;
inline constexpr int kRepeatLimit = 500;

/// Walks non-generating statements until the next tactic, the end of the
/// program, or a failure. Never touches a calculation.
ScanResult scan_to_next_tactic(const Program& p, const ProgState& s, const ConditionOracle& decide,
                               std::size_t budget = kScanBudget);

/// The tactic at `s.loc` generated a step with result `value`.
ProgState advance_after(const Program& p, const ProgState& s, const Term& value);

/// The tactic at `s.loc` was not applicable.
ProgState fail_at(const ProgState& s);

}  // namespace lucas
