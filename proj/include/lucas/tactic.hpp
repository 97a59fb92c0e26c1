#pragma once

#include "lucas/term.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lucas {

/// A step-generating action as it appears in a calculation. Program tactics
/// instantiate to these by evaluating their arguments.
struct Tactic {
  enum class Kind { Take, Rewrite, RewriteInst, RewriteSet, Subproblem, CheckPostcond, Approximate };

  Kind kind = Kind::Take;
  Term term;                      // Take: the formula; Approximate: the error bound
  std::string name;               // rule, rule set or method
  Substitution inst;              // Rewrite_Inst
  std::string theory;             // Subproblem
  std::vector<std::string> spec;  // Subproblem, Check_Postcond
  std::vector<Term> args;         // Subproblem

  bool operator==(const Tactic&) const = default;
};

std::string tactic_kind_name(Tactic::Kind k);
std::optional<Tactic::Kind> parse_tactic_kind(std::string_view name);
const std::vector<Tactic::Kind>& all_tactic_kinds();

/// Ascii text in the same syntax as program tactics, with terms for
/// arguments, e.g. "Rewrite_Inst [(bdv, alpha)] diff_sin".
std::string tactic_text(const Tactic& t);
std::string tactic_unicode(const Tactic& t);
Tactic parse_tactic(std::string_view text);

std::string join_path(const std::vector<std::string>& path, std::string_view sep = ", ");

}  // namespace lucas
