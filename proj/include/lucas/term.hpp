#pragma once

#include "lucas/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lucas {

/// Immutable first-order term: exact rational numerals, variables, and
/// applications of a head symbol to an ordered argument list. Copies share
/// structure, so terms are cheap to pass around and safe across threads.
class Term {
 public:
  enum class Kind : std::uint8_t { Numeral, Variable, Apply };

  Term();  // the numeral 0

  static Term numeral(Rational value);
  static Term integer(long long value);
  static Term variable(std::string name);
  static Term apply(std::string head, std::vector<Term> args = {});

  Kind kind() const;
  bool is_numeral() const { return kind() == Kind::Numeral; }
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_apply() const { return kind() == Kind::Apply; }
  bool is_apply(std::string_view head) const;
  bool is_apply(std::string_view head, std::size_t arity) const;
  bool is_variable(std::string_view name) const;
  bool is_numeral(const Rational& v) const;

  const Rational& value() const;
  /// Variable name, or the head symbol of an application.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Term& arg(std::size_t i) const { return args().at(i); }
  std::size_t arity() const { return args().size(); }

  std::size_t hash() const;
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using Substitution = std::map<std::string, Term>;
/// Child-index path from the root of a term.
using TermPath = std::vector<std::size_t>;

/// Declared arities of the built-in heads. Heads not listed here are
/// uninterpreted function symbols whose arity is their use.
const std::map<std::string, std::size_t, std::less<>>& builtin_arities();
std::optional<std::size_t> builtin_arity(std::string_view head);

const Term& subterm(const Term& t, const TermPath& path);
Term replace_at(const Term& t, const TermPath& path, Term replacement);

std::set<std::string> free_vars(const Term& t);
bool occurs(std::string_view name, const Term& t);
bool contains_subterm(const Term& t, const Term& sub);

Term substitute(const Term& t, const Substitution& s);

/// First-order syntactic matching. Names in `fixed` are constants and only
/// match themselves. Returns nullopt on NoMatch.
std::optional<Substitution> match_term(const Term& pattern, const Term& target,
                                       const std::set<std::string>& fixed = {});

/// Flattens nested `+` / `*` chains, sorts the operands by the total term
/// order and rebuilds them as left-nested binary applications.
Term ac_canonical(const Term& t);

// Construction helpers.
Term make_eq(Term lhs, Term rhs);
Term make_list(std::vector<Term> items);
std::optional<std::vector<Term>> list_elements(const Term& t);
Term true_term();
Term false_term();
bool is_true(const Term& t);
bool is_false(const Term& t);
bool is_equation(const Term& t);
/// Heads whose value is a truth value (relations and connectives).
bool is_boolean_head(std::string_view head);
bool is_boolean(const Term& t);

}  // namespace lucas
