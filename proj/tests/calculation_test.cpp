#include "oracles.hpp"

#include <doctest.h>

using namespace lucas;
using oracle::bundled;

namespace {

bool has_fact(const Context& ctx, const std::string& text, FactOrigin origin) {
  Term t = ac_canonical(parse_term(text));
  for (const auto& f : ctx.facts())
    if (f.origin == origin && ac_canonical(f.term) == t) return true;
  return false;
}

Calculation fresh(const std::string& method) {
  const Method* m = bundled().method(method);
  const Specification* spec = bundled().spec(m->spec);
  Env args = oracle::example_args(*m);
  return init_calculation(bundled(), *spec, *m, spec_inputs_from_formals(*spec, *m, args));
}

Tactic tac(const std::string& text) { return parse_tactic(text); }

}  // namespace

TEST_CASE("initial context of the maximum problem") {
  Calculation c = fresh("Max");
  CHECK(has_fact(c.ctx, "0 < r", FactOrigin::Precondition));
  for (const char* v : {"r", "A", "u", "v"})
    CHECK(has_fact(c.ctx, to_ascii(type_fact(v, "real")), FactOrigin::TypeConstraint));
  CHECK(has_fact(c.ctx, "0 < pi", FactOrigin::Theory));
  CHECK(c.entries.empty());
}

TEST_CASE("a violated precondition blocks the calculation") {
  const Method* m = bundled().method("Max");
  const Specification* spec = bundled().spec(m->spec);
  Calculation parent;
  parent.theory = "Reals";
  parent.ctx.add(parse_term("r < 0"), FactOrigin::Assumption);
  Env args = oracle::example_args(*m);
  CHECK_THROWS_AS(init_calculation(bundled(), *spec, *m, spec_inputs_from_formals(*spec, *m, args), &parent),
                  PreconditionViolated);
}

TEST_CASE("a spec without preconditions starts with types and theory facts") {
  const Method* m = bundled().method("make_fun");
  const Specification* spec = bundled().spec(m->spec);
  REQUIRE(spec->precond.empty());
  Calculation c = fresh("make_fun");
  for (const auto& f : c.ctx.facts())
    CHECK((f.origin == FactOrigin::TypeConstraint || f.origin == FactOrigin::Theory));
}

TEST_CASE("applicability and application of rewrite tactics") {
  Calculation c = fresh("Differentiate");
  Tactic take = tac("Take (d_d(alpha, 8*r^2*(sin(alpha)*cos(alpha)) - 4*r^2*sin(alpha)^2))");
  CHECK(tactic_applicable(bundled(), c, take).ok);
  REQUIRE(apply_tactic(bundled(), c, take));
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries[1].marker == Marker::Initial);
  CHECK(c.entries[1].trace.steps.empty());

  CHECK(tactic_applicable(bundled(), c, tac("Rewrite_Inst [(bdv, alpha)] diff_sum")).ok);
  CHECK_FALSE(tactic_applicable(bundled(), c, tac("Rewrite_Inst [(bdv, alpha)] diff_fraction")).ok);
  CHECK_FALSE(tactic_applicable(bundled(), c, tac("Rewrite no_such_rule")).ok);
  auto line9 = apply_tactic(bundled(), c, tac("Rewrite_Inst [(bdv, alpha)] diff_sum"));
  REQUIRE(line9);
  CHECK(*line9 == parse_term("8*r^2*d_d(alpha, sin(alpha)*cos(alpha)) - 4*r^2*d_d(alpha, sin(alpha)^2)"));
  CHECK(c.entries.back().marker == Marker::Equiv);
  CHECK(c.entries.back().provenance == Provenance::TacticOutput);
  CHECK(replay(c.entries.back().trace) == *line9);
}

TEST_CASE("subproblem applicability needs its inputs") {
  Calculation c = fresh("Max");
  Tactic find;
  find.kind = Tactic::Kind::Subproblem;
  find.theory = "Reals";
  find.spec = {"tool", "find_values"};
  find.name = "find_values";
  const Method* m = bundled().method("find_values");
  for (const auto& [k, v] : m->examples) find.args.push_back(v);
  auto a = tactic_applicable(bundled(), c, find);
  CHECK_FALSE(a.ok);
  CHECK_FALSE(a.reason.empty());
}

TEST_CASE("the simplifier collapses the derivative and keeps its trace") {
  Session s = oracle::open_example("Differentiate");
  StepOutcome out;
  std::optional<Entry> simplified;
  for (int i = 0; i < 20; ++i) {
    out = s.do_next();
    if (out.tactic && out.tactic->kind == Tactic::Kind::RewriteSet) simplified = s.calc().entries.back();
    if (out.kind != StepOutcome::Kind::Stepped) break;
  }
  REQUIRE(simplified);
  CHECK(simplified->trace.steps.size() > 1);
  CHECK(replay(simplified->trace) == simplified->term);
  REQUIRE(out.kind == StepOutcome::Kind::Finished);
  CHECK(out.result.front().second == simplified->term);
}

TEST_CASE("closing subproblems exports facts to the parent") {
  Session s = oracle::open_example("maximum_on_interval");
  s.auto_complete();
  REQUIRE(s.finished());
  const Context& ctx = s.calc().ctx;
  CHECK(has_fact(ctx, "f' = -8*r^2*cos(alpha)*sin(alpha) + 8*r^2*cos(alpha)^2 - 8*r^2*sin(alpha)^2",
                 FactOrigin::ValueExport));
  CHECK(has_fact(ctx, "alpha_hat = arctan(-1 + sqrt(2))", FactOrigin::ValueExport));
  CHECK(has_fact(ctx, "A_tilde'(alpha_hat) = 0", FactOrigin::ValueExport));
  CHECK(has_fact(ctx, "unique_root_on(A_tilde'(alpha), open_interval(0, pi/2), alpha_hat)", FactOrigin::ValueExport));
  bool collapsed = false;
  for (const auto& e : s.calc().entries)
    if (e.kind == Entry::Kind::SubCalc) collapsed = e.collapsed;
  CHECK(collapsed);
}

TEST_CASE("result extraction") {
  Calculation c;
  c.outputs = {"o"};
  auto r = extract_result(c, parse_term("o = 5"));
  REQUIRE(r.size() == 1);
  CHECK(r[0].second == Term::integer(5));
  c.outputs = {"a", "b"};
  CHECK_THROWS_AS(extract_result(c, parse_term("[a = b + 1, b = a + 1]")), NotSolved);
  auto ordered = extract_result(c, parse_term("[a = b + 1, b = 2]"));
  CHECK(ordered[0].first == "b");
  CHECK(ordered[1].first == "a");
  Calculation none;
  none.outputs = {"x"};
  CHECK_THROWS_AS(extract_result(none, parse_term("true")), NotSolved);
}

TEST_CASE("result ordering agrees with permutation search") {
  oracle::TermGen gen(42);
  for (int i = 0; i < 200; ++i) {
    auto sys = oracle::random_system(gen);
    bool brute = oracle::triangular_by_permutation(sys.eqs);
    bool engine = true;
    try {
      auto out = extract_result(sys.calc, sys.value);
      CHECK(oracle::is_triangular(out));
      CHECK(out.size() == sys.eqs.size());
    } catch (const NotSolved&) {
      engine = false;
    }
    CHECK(engine == brute);
  }
}

TEST_CASE("the maximum problem ends with ordered values") {
  Session s = oracle::open_example("Max");
  auto out = s.auto_complete();
  REQUIRE(out.kind == StepOutcome::Kind::Finished);
  CHECK(oracle::is_triangular(s.result()));
  std::vector<std::string> names;
  for (const auto& [o, v] : s.result()) names.push_back(o);
  CHECK(names == std::vector<std::string>{"u", "v", "A"});
}

TEST_CASE("contexts only grow and every formula is justified") {
  Session s = oracle::open_example("Max");
  Context prev = s.calc().ctx;
  for (int i = 0; i < 100 && !s.finished(); ++i) {
    auto o = s.do_next();
    CHECK(s.calc().ctx.extends(prev));
    prev = s.calc().ctx;
    if (o.kind != StepOutcome::Kind::Stepped && o.kind != StepOutcome::Kind::Finished) break;
  }
  std::function<void(const Calculation&)> check = [&](const Calculation& c) {
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
      const Entry& e = c.entries[i];
      if (e.kind == Entry::Kind::SubCalc) check(e.sub.front());
      if (e.kind != Entry::Kind::Formula) continue;
      if (e.provenance == Provenance::UserDerivation) continue;
      REQUIRE(i > 0);
      const Entry& before = c.entries[i - 1];
      CHECK((before.kind == Entry::Kind::Tactic || before.kind == Entry::Kind::SubCalc));
    }
    for (const char* v : {"r"})
      if (c.inputs.count(v)) CHECK(c.ctx.contains(type_fact(v, "real")));
  };
  check(s.calc());
}

TEST_CASE("approximation follows the error bound") {
  Context ctx;
  ctx.add(parse_term("alpha_hat = arctan(-1 + sqrt(2))"), FactOrigin::ValueExport);
  Term a = approximate(parse_term("[u = 2*r*sin(alpha_hat), v = 2*r*cos(alpha_hat)]"), ctx, parse_term("0.01"));
  auto items = list_elements(a);
  REQUIRE(items);
  REQUIRE(items->size() == 2);
  CHECK((*items)[0] == parse_term("u approx 0.77*r"));
  CHECK((*items)[1] == parse_term("v approx 1.85*r"));
  double alpha = std::atan(std::sqrt(2.0) - 1);
  CHECK(std::abs(2 * std::sin(alpha) - 0.77) < 0.01);
  CHECK(std::abs(2 * std::cos(alpha) - 1.85) < 0.01);
}

TEST_CASE("positions") {
  CHECK(parse_position("3.1.4") == Position{3, 1, 4});
  CHECK(position_text({3, 1, 4}) == "3.1.4");
  CHECK(parse_position("").empty());
  CHECK_THROWS(parse_position("a.b"));
}
