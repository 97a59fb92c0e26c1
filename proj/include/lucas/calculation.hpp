#pragma once

#include "lucas/context.hpp"
#include "lucas/knowledge.hpp"
#include "lucas/rewrite.hpp"
#include "lucas/tactic.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lucas {

/// ⊢ initial formula, ≡ equivalence step, … collapsed result, ≈ approximation.
enum class Marker { Initial, Equiv, Result, Approx };
std::string marker_symbol(Marker m);
std::string marker_name(Marker m);
std::optional<Marker> parse_marker(std::string_view name);

enum class Provenance { Initial, TacticOutput, UserDerivation, SubproblemResult };
std::string provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

struct Calculation;

struct Entry {
  enum class Kind { Formula, Tactic, SubCalc };
  Kind kind = Kind::Formula;

  // Formula
  Term term;
  Marker marker = Marker::Initial;
  Provenance provenance = Provenance::Initial;
  RewriteTrace trace;
  std::vector<Entry> derivation;  // internal steps behind a user formula
  std::size_t ctx_size = 0;       // facts in the context when the formula was added

  // Tactic
  Tactic tactic;

  // SubCalc: exactly one element
  std::vector<Calculation> sub;
  bool collapsed = false;

  static Entry formula(Term t, Marker m, Provenance p, std::size_t ctx_size);
  static Entry tactic_entry(Tactic t);
};

using Position = std::vector<std::size_t>;
using ResultEquations = std::vector<std::pair<std::string, Term>>;

struct Calculation {
  SpecPath spec;
  std::string theory;
  std::string method;
  Substitution inputs;
  std::vector<std::string> outputs;
  /// Spec output name -> name used in this calculation.
  std::map<std::string, std::string> renamed;
  Context ctx;
  std::vector<Entry> entries;
  bool solved = false;
  ResultEquations result;
};

class PreconditionViolated : public std::runtime_error {
 public:
  PreconditionViolated(std::vector<Term> violated);
  const std::vector<Term>& violated() const { return violated_; }

 private:
  std::vector<Term> violated_;
};

class NotSolved : public std::runtime_error {
 public:
  NotSolved(std::string variable, const std::string& message)
      : std::runtime_error(message), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

/// x0 = instantiated preconditions, type constraints for inputs and
/// outputs, and the theory facts; stacked on `parent` when given. Output
/// names that already occur in the parent context are renamed apart,
/// except names in `shared_outputs`.
Calculation init_calculation(const KnowledgeStore& store, const Specification& spec, const Method& method,
                             const Substitution& inputs, const Calculation* parent = nullptr,
                             const std::set<std::string>& shared_outputs = {});

/// Binds a Subproblem's arguments to the method's formals, in order.
Env bind_formals(const Method& method, const std::vector<Term>& args);

/// Appends the Subproblem tactic and a fresh subcalculation; returns the
/// index of the subcalculation entry.
std::size_t open_subproblem(const KnowledgeStore& store, Calculation& c, const Tactic& t,
                            const std::set<std::string>& shared_outputs);

/// Records the result of a calculation whose program returned `value`,
/// appends Check_Postcond, and assumes the instantiated postcondition.
void finish_calculation(const KnowledgeStore& store, Calculation& c, const Term& value);

struct Applicability {
  bool ok = false;
  std::string reason;
};

/// Last formula of the calculation itself (not of subcalculations).
const Entry* last_formula(const Calculation& c);

/// Names known in the calculation: free variables of context facts,
/// formulas and input values.
std::set<std::string> known_names(const Calculation& c);

Applicability tactic_applicable(const KnowledgeStore& store, const Calculation& c, const Tactic& t);

/// Applies a formula-producing tactic (everything except Subproblem and
/// Check_Postcond): appends the tactic and its formula, extends the
/// context, and returns the new formula. nullopt when not applicable.
std::optional<Term> apply_tactic(const KnowledgeStore& store, Calculation& c, const Tactic& t);

/// Kahn ordering of output equations: every o_i is absent from r_1..r_i.
/// nullopt when some set of equations is cyclic; `blocking` names a
/// variable on a cycle.
std::optional<ResultEquations> triangularize(const ResultEquations& eqs, std::string* blocking = nullptr);

/// Result of a calculation whose program returned `value`.
ResultEquations extract_result(const Calculation& c, const std::optional<Term>& value);

/// Finishes the subcalculation at entries[index], appends the … formula to
/// `parent`, and exports value facts, assumptions and the assumed
/// postcondition into the parent context.
Term close_subproblem(const KnowledgeStore& store, Calculation& parent, std::size_t index, const Term& value);

/// Formula shown for a finished calculation.
Term result_formula(const Calculation& c, const Term& value);

Calculation& calc_at(Calculation& root, const Position& pos);
const Calculation& calc_at(const Calculation& root, const Position& pos);
/// Entry addressed by a position: every index but the last selects a
/// subcalculation.
const Entry& entry_at(const Calculation& root, const Position& pos);

/// Every formula of the calculation, subcalculations included, in order.
std::vector<const Entry*> flattened_formulas(const Calculation& c);

/// The numeric approximation of equations under the context's values.
Term approximate(const Term& equations, const Context& ctx, const Term& errbound);

std::string position_text(const Position& p);
Position parse_position(std::string_view text);

}  // namespace lucas
