#pragma once

#include "lucas/tactic.hpp"
#include "lucas/term.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lucas {

// ---- pure expressions -----------------------------------------------------

struct Pure;
using PurePtr = std::shared_ptr<const Pure>;

/// Side-effect free expression: terms built from program variables plus the
/// list combinators HD, LEN, RHS, LHS, FILTER, FILTER_OUT, contains, ident.
struct Pure {
  enum class Kind {
    Var,      // program variable
    Num,      // numeral literal
    Op,       // term constructor: head applied to argument expressions
    Comb,     // bare combinator, a function value
    Compose,  // f o g
    Call,     // juxtaposition: args = {function, argument}
    List,     // [a, b, ...]
    Quote,    // literal term, variables are not looked up
  };
  Kind kind = Kind::Var;
  std::string name;
  Term literal;
  std::vector<PurePtr> args;
  std::string type;  // inert annotation such as "real list"
};

bool same_pure(const Pure& a, const Pure& b);
bool is_combinator(std::string_view name);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Env = std::map<std::string, Term>;

/// Evaluates to a term; function-valued results are an EvalError.
Term eval_pure(const Env& env, const Pure& e);

// ---- tactic programs -------------------------------------------------------

struct ProgTactic {
  Tactic::Kind kind = Tactic::Kind::Take;
  PurePtr arg;  // Take, Approximate
  std::string name;
  std::vector<std::pair<std::string, PurePtr>> inst;
  std::string theory;
  std::vector<std::string> spec;
  std::vector<PurePtr> args;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Let, If, Repeat, Or, Try, Chain, Applied, Tactic, Pure };
  Kind kind = Kind::Pure;
  std::vector<std::string> names;  // Let: one per bound child
  std::vector<ExprPtr> children;   // Let: bindings then body; If: then, else
  PurePtr pure;                    // If: condition; Applied: argument; Pure
  std::optional<ProgTactic> tactic;
};

struct TypedName {
  std::string name;
  std::string type;
  bool operator==(const TypedName&) const = default;
};

struct Program {
  std::string name;
  std::vector<TypedName> formals;
  ExprPtr body;
};

using ProgramPtr = std::shared_ptr<const Program>;

std::string expr_kind_name(Expr::Kind k);

/// Syntax error in program text, with 1-based line and column.
class ProgramParseError : public std::runtime_error {
 public:
  ProgramParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Program parse_program(std::string_view text);

/// Canonical formatting; parse_program(print_program(p)) equals p.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);
std::string print_pure(const Pure& e);

bool same_program(const Program& a, const Program& b);

const Expr& node_at(const Program& p, const std::vector<std::size_t>& loc);

/// Instantiates a program tactic under an environment.
Tactic instantiate(const ProgTactic& t, const Env& env);

/// Every tactic node of the program in pre-order.
std::vector<const ProgTactic*> program_tactics(const Program& p);

}  // namespace lucas
