#pragma once

#include "lucas/interpreter.hpp"

#include <json.hpp>

#include <set>

namespace lucas {

using Json = nlohmann::json;

/// Terms travel as ascii strings; parse errors surface as ParseError.
Json term_json(const Term& t);
Term term_from_json(const Json& j);

Json tactic_json(const Tactic& t);
/// Accepts {"text": "..."} or the structured form written by tactic_json.
Tactic tactic_from_json(const Json& j);

Json trace_json(const RewriteTrace& t);
RewriteTrace trace_from_json(const Json& j);

Json context_json(const Context& c);
Context context_from_json(const Json& j);
Json facts_json(const std::vector<Fact>& facts);

/// Complete form, used for persistence: contexts, traces and every entry.
Json calc_json(const Calculation& c);
Calculation calc_from_json(const Json& j);

/// View form for clients: positions, markers and both renderings. The
/// entries of collapsed subcalculations are listed only when their
/// position is in `unfold`.
Json calc_view_json(const Calculation& c, const std::set<Position>& unfold = {});

Json state_json(const ProgState& s);
ProgState state_from_json(const Json& j);

Json snapshot_json(const Snapshot& s);
Snapshot snapshot_from_json(const Json& j);

Json outcome_json(const StepOutcome& o);
Json result_json(const ResultEquations& r);

Json spec_json(const Specification& s);
Json theory_json(const KnowledgeStore& store, const Theory& t);
Json method_json(const Method& m);

}  // namespace lucas
