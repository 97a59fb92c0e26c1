#include "lucas/context.hpp"

#include <algorithm>

namespace lucas {

std::string origin_name(FactOrigin origin) {
  switch (origin) {
    case FactOrigin::Precondition: return "precondition";
    case FactOrigin::TypeConstraint: return "type_constraint";
    case FactOrigin::Theory: return "theory";
    case FactOrigin::Assumption: return "assumption";
    case FactOrigin::ValueExport: return "value_export";
    case FactOrigin::AssumedPostcondition: return "assumed_postcondition";
  }
  return "assumption";
}

std::optional<FactOrigin> parse_origin(std::string_view name) {
  for (auto o : {FactOrigin::Precondition, FactOrigin::TypeConstraint, FactOrigin::Theory,
                 FactOrigin::Assumption, FactOrigin::ValueExport,
                 FactOrigin::AssumedPostcondition})
    if (origin_name(o) == name) return o;
  return std::nullopt;
}

bool Context::add(const Term& term, FactOrigin origin) {
  Term canon = ac_canonical(term);
  if (std::find(canonical_.begin(), canonical_.end(), canon) != canonical_.end()) return false;
  facts_.push_back({term, origin});
  canonical_.push_back(std::move(canon));
  return true;
}

bool Context::contains(const Term& term) const {
  Term canon = ac_canonical(term);
  return std::find(canonical_.begin(), canonical_.end(), canon) != canonical_.end();
}

Context Context::prefix(std::size_t n) const {
  Context c;
  n = std::min(n, facts_.size());
  c.facts_.assign(facts_.begin(), facts_.begin() + n);
  c.canonical_.assign(canonical_.begin(), canonical_.begin() + n);
  c.inherited_ = std::min(inherited_, n);
  return c;
}

Context Context::child() const {
  Context c = *this;
  c.inherited_ = facts_.size();
  return c;
}

Context Context::restore(const std::vector<Fact>& facts, std::size_t inherited) {
  Context c;
  for (const auto& f : facts) {
    c.facts_.push_back(f);
    c.canonical_.push_back(ac_canonical(f.term));
  }
  c.inherited_ = inherited;
  return c;
}

bool Context::extends(const Context& earlier) const {
  for (const auto& f : earlier.canonical_)
    if (std::find(canonical_.begin(), canonical_.end(), f) == canonical_.end()) return false;
  return true;
}

Term type_fact(const std::string& name, const std::string& type) {
  std::string tag;
  for (char c : type) tag += c == ' ' ? '_' : c;
  return Term::apply("has_type", {Term::variable(name), Term::variable(tag)});
}

}  // namespace lucas
