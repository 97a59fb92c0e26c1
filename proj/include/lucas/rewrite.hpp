#pragma once

#include "lucas/context.hpp"
#include "lucas/term.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lucas {

/// Evaluators that can stand in a rule set next to ordinary rules.
enum class Builtin {
  Arith,     // folds operations on numerals
  Poly,      // canonical polynomial form of arithmetic nodes
  CondEval,  // numeral comparisons, free_of, connectives over true/false
};

std::string builtin_name(Builtin b);
std::optional<Builtin> parse_builtin(std::string_view name);

struct Rule {
  std::string name;
  std::string theory;
  Term lhs;
  Term rhs;
  std::vector<Term> conditions;
  /// Names that Rewrite_Inst instantiates; inside a rule set they behave
  /// like ordinary pattern variables.
  std::set<std::string> schematic;
  std::optional<Builtin> builtin;

  std::string text() const;
};

using RulePtr = std::shared_ptr<const Rule>;

struct RuleSet {
  std::string name;
  std::string theory;
  std::vector<RulePtr> rules;
  int max_steps = 1000;
};

using RuleSetPtr = std::shared_ptr<const RuleSet>;

struct TraceStep {
  TermPath path;
  std::string rule;
  Substitution subst;
  std::vector<Term> assumptions;
  Term replacement;
  Term result;
};

struct RewriteTrace {
  Term start;
  std::vector<TraceStep> steps;
  bool truncated = false;

  const Term& final_term() const { return steps.empty() ? start : steps.back().result; }
  std::vector<Term> assumptions() const;
};

/// Re-applies every recorded replacement to the start term.
Term replay(const RewriteTrace& trace);

struct Rewritten {
  Term term;
  std::vector<Term> assumptions;
  RewriteTrace trace;
};

enum class Truth { True, False, Undecided };
enum class Equality { Equal, NotEqual, Unknown };

std::string truth_name(Truth t);
std::string equality_name(Equality e);

/// Conditional rewriting with a fixed leftmost-innermost strategy. The
/// condition rule set decides rule conditions and preconditions; context
/// facts count as rewrite rules `fact -> true` while conditions are decided.
class Rewriter {
 public:
  explicit Rewriter(RuleSetPtr conditions = nullptr);

  /// Rewrites the leftmost-innermost redex of `rule` after instantiating
  /// its schematic names by `inst`. Conditions that are not decided become
  /// assumptions; a False condition disqualifies the redex.
  std::optional<Rewritten> rewrite_once(const Rule& rule, const Substitution& inst, const Term& t,
                                        const Context& ctx) const;

  Rewritten normalize(const RuleSet& rs, const Term& t, const Context& ctx) const;

  Equality equal_modulo(const RuleSet& rs, const Term& a, const Term& b, const Context& ctx) const;

  Truth eval_condition(const Context& ctx, const Term& cond) const;

  const RuleSetPtr& condition_rules() const { return conditions_; }

  struct Guard;

 private:
  Truth eval_condition(const Context& ctx, const Term& cond, int budget, Guard& guard) const;
  Rewritten normalize(const RuleSet& rs, const Term& t, const Context& ctx, int max_steps,
                      bool use_facts, Guard& guard) const;

  RuleSetPtr conditions_;
};

/// Applies a builtin evaluator at the root of `t`; nullopt when it does
/// not change the term.
std::optional<Term> apply_builtin(Builtin b, const Term& t);

}  // namespace lucas
