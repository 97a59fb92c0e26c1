#pragma once

#include "lucas/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lucas {

enum class FactOrigin {
  Precondition,
  TypeConstraint,
  Theory,
  Assumption,
  ValueExport,
  AssumedPostcondition,
};

std::string origin_name(FactOrigin origin);
std::optional<FactOrigin> parse_origin(std::string_view name);

struct Fact {
  Term term;
  FactOrigin origin;
  bool operator==(const Fact&) const = default;
};

/// Logical context x of a (sub)calculation. Facts only ever accumulate; a
/// subcalculation starts from a copy of its parent's facts, and `inherited`
/// counts that prefix.
class Context {
 public:
  /// Adds the fact unless an AC-equal fact is already present. Returns
  /// whether it was added.
  bool add(const Term& term, FactOrigin origin);

  bool contains(const Term& term) const;
  const std::vector<Fact>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  /// The first `n` facts, i.e. the context as it was when it had n facts.
  Context prefix(std::size_t n) const;

  std::size_t inherited() const { return inherited_; }
  Context child() const;
  /// Rebuilds a context from its serialized fact list.
  static Context restore(const std::vector<Fact>& facts, std::size_t inherited);

  /// True when every fact of `earlier` is also a fact here.
  bool extends(const Context& earlier) const;

  bool operator==(const Context&) const = default;

 private:
  std::vector<Fact> facts_;
  std::vector<Term> canonical_;
  std::size_t inherited_ = 0;
};

/// The type-constraint fact for a typed name, e.g. has_type(r, real).
Term type_fact(const std::string& name, const std::string& type);

}  // namespace lucas
