#pragma once

#include "lucas/calculation.hpp"
#include "lucas/knowledge.hpp"
#include "lucas/machine.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lucas {

/// Engine errors reported to callers by code: NotApplicable, InvalidState,
/// UnknownPosition, UnboundFormal, UnknownMethod, UnknownSpec.
class SessionError : public std::runtime_error {
 public:
  SessionError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct StepOutcome {
  enum class Kind { Stepped, Located, Helpless, Derived, NotDerivable, Finished, Stuck };
  Kind kind = Kind::Stuck;
  std::optional<Tactic> tactic;
  std::optional<Term> formula;
  Position position;
  std::vector<Entry> derivation;  // Derived: the internal steps t*
  ResultEquations result;         // Finished
  std::string reason;
};

std::string outcome_name(StepOutcome::Kind k);

/// One running program: the method, its state, and where its calculation
/// sits in the tree.
struct Frame {
  std::string method;
  ProgState state;
  Position calc;
  bool operator==(const Frame&) const = default;
};

struct Snapshot {
  Calculation calc;
  std::vector<Frame> frames;
  bool detached = false;
  bool finished = false;
  ResultEquations result;
};

struct LogEntry {
  std::string trigger;
  std::string outcome;
  std::optional<std::size_t> snapshot;
  bool operator==(const LogEntry&) const = default;
};

struct KnowledgeReport {
  std::string kind;  // rule, ruleset, method
  std::string name;
  std::string theory;
  std::string text;
};

class Session {
 public:
  Session(const KnowledgeStore& store, std::string id, Calculation calc, std::vector<Frame> frames);

  const std::string& id() const { return id_; }
  const KnowledgeStore& store() const { return *store_; }
  const Calculation& calc() const { return calc_; }
  const std::vector<Frame>& frames() const { return frames_; }
  bool detached() const { return detached_; }
  bool finished() const { return finished_; }
  const ResultEquations& result() const { return result_; }
  const std::vector<LogEntry>& step_log() const { return log_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  /// Position of the calculation the innermost frame works on.
  Position cursor() const { return frames_.empty() ? Position{} : frames_.back().calc; }

  StepOutcome do_next();
  StepOutcome input_tactic(const Tactic& t);
  StepOutcome input_formula(const Term& f);
  StepOutcome auto_complete();
  /// Restores snapshot `index`; later snapshots stay in the log.
  void backtrack(std::size_t index);

  /// Facts visible at a position: a calculation, a formula (as it was when
  /// the formula was added) or, for the empty position, the cursor.
  std::vector<Fact> context_at(const Position& pos) const;
  const RewriteTrace& trace_at(const Position& pos) const;
  KnowledgeReport knowledge(const Tactic& t) const;

  /// Rebuilds a session from persisted parts.
  static Session restore(const KnowledgeStore& store, std::string id, Snapshot current, std::size_t at,
                         std::vector<LogEntry> log, std::vector<Snapshot> snapshots);
  Snapshot current() const;
  /// Index of the snapshot the session currently stands on.
  std::size_t at() const { return at_; }

 private:
  enum class Scope { Any, Frame };
  StepOutcome step(Scope scope);
  ConditionOracle oracle(const Calculation& c) const;
  const Program& program(const Frame& f) const;
  std::set<std::string> ancestor_outputs(const Position& pos) const;
  void record(std::string trigger, const StepOutcome& out);

  const KnowledgeStore* store_;
  std::string id_;
  Calculation calc_;
  std::vector<Frame> frames_;
  bool detached_ = false;
  bool finished_ = false;
  ResultEquations result_;
  std::vector<LogEntry> log_;
  std::vector<Snapshot> snapshots_;
  std::size_t at_ = 0;
};

/// Starts a session of `method` on `spec`; `args` bind the program formals.
Session open_session(const KnowledgeStore& store, const SpecPath& spec, const std::string& method,
                     const Env& args, std::string id = "");

/// True when two tactics denote the same step.
bool same_step(const Tactic& a, const Tactic& b);

}  // namespace lucas
