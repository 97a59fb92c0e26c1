#include "oracles.hpp"

#include <doctest.h>

using namespace lucas;
using oracle::bundled;

namespace {

const Rule& rule(const std::string& name) { return *bundled().rule("Real_Algebra", name); }
const RuleSet& ruleset(const std::string& name) { return *bundled().ruleset("Real_Algebra", name); }
Rewriter rewriter() { return bundled().rewriter("Real_Algebra"); }

const char* kLine11 =
    "8*r^2*(sin(alpha)*d_d(alpha, cos(alpha)) + d_d(alpha, sin(alpha))*cos(alpha)) - "
    "4*r^2*(2*sin(alpha)^(2 - 1)*d_d(alpha, sin(alpha)))";
const char* kVariantA =
    "8*r^2*(sin(alpha)*(-sin(alpha)) + cos(alpha)*cos(alpha)) - 4*r^2*2*sin(alpha)^(2-1)*d_d(alpha, sin(alpha))";
const char* kVariantB =
    "8*r^2*(sin(alpha)*d_d(alpha, cos(alpha)) + d_d(alpha, sin(alpha))*cos(alpha)) - 4*r^2*2*sin(alpha)^1*cos(alpha)";

}  // namespace

TEST_CASE("single rewrites") {
  Context ctx;
  Substitution inst = {{"bdv", parse_term("alpha")}};
  auto r = rewriter().rewrite_once(rule("diff_sin"), inst, parse_term("d_d(alpha, sin(alpha))"), ctx);
  REQUIRE(r);
  CHECK(r->term == parse_term("cos(alpha)"));
  CHECK(r->assumptions.empty());
  CHECK_FALSE(rewriter().rewrite_once(rule("diff_sin"), inst, parse_term("cos(alpha)"), ctx));
}

TEST_CASE("undecided conditions become assumptions") {
  Rule cancel;
  cancel.name = "cancel";
  cancel.lhs = parse_term("x/x");
  cancel.rhs = Term::integer(1);
  cancel.conditions = {parse_term("x ~= 0")};
  Context ctx;
  auto r = rewriter().rewrite_once(cancel, {}, parse_term("u/u"), ctx);
  REQUIRE(r);
  CHECK(r->term == Term::integer(1));
  REQUIRE(r->assumptions.size() == 1);
  CHECK(r->assumptions[0] == parse_term("u ~= 0"));
  // A false condition disqualifies the redex.
  CHECK_FALSE(rewriter().rewrite_once(cancel, {}, parse_term("0/0"), ctx));
}

TEST_CASE("rule set normalization") {
  Context ctx;
  Rewriter rw = rewriter();
  auto seven = rw.normalize(ruleset("simplifier"), Term::integer(7), ctx);
  CHECK(seven.term == Term::integer(7));
  CHECK(seven.trace.steps.empty());
  auto s = rw.normalize(ruleset("simplifier"), parse_term("2*sin(alpha)^1*cos(alpha)"), ctx);
  CHECK(rw.normalize(ruleset("simplifier"), parse_term("2*sin(alpha)*cos(alpha)"), ctx).term == s.term);
  CHECK(replay(s.trace) == s.term);
  // Variants (a) and (b) share a normal form with the finished derivative.
  Term z = rw.normalize(ruleset("simplifier"), parse_term(kLine11), ctx).term;
  CHECK(rw.normalize(ruleset("simplifier"), parse_term(kVariantA), ctx).term == z);
  CHECK(rw.normalize(ruleset("simplifier"), parse_term(kVariantB), ctx).term == z);
  auto pd = oracle::eval_real(z, {{"alpha", 0.7}, {"r", 1.3}});
  auto truth = oracle::eval_real(parse_term("d_d(alpha, 8*r^2*(sin(alpha)*cos(alpha)) - 4*r^2*sin(alpha)^2)"),
                                 {{"alpha", 0.7}, {"r", 1.3}});
  REQUIRE(pd);
  REQUIRE(truth);
  CHECK(oracle::close_enough(*pd, *truth, 1e-9));
}

TEST_CASE("traces replay to their final term") {
  Context ctx;
  Rewriter rw = rewriter();
  oracle::TermGen gen(5);
  for (int i = 0; i < 100; ++i) {
    Term t = Term::apply("d_d", {Term::variable("x"), gen.real(3, {"x", "y"})});
    auto out = rw.normalize(ruleset("simplifier"), t, ctx);
    CHECK(replay(out.trace) == out.term);
    CHECK(out.trace.start == t);
  }
}

TEST_CASE("equality modulo a rule set") {
  Context ctx;
  Rewriter rw = rewriter();
  CHECK(rw.equal_modulo(ruleset("simplifier"), parse_term("2*u*v - u^2"), parse_term("2*v*u - u^2"), ctx) ==
        Equality::Equal);
  Term t = parse_term("sin(alpha) + r");
  CHECK(rw.equal_modulo(ruleset("simplifier"), t, t, ctx) == Equality::Equal);
  Term line13 = rw.normalize(ruleset("simplifier"), parse_term(kLine11), ctx).term;
  CHECK(rw.equal_modulo(ruleset("simplifier"), parse_term(kVariantA), line13, ctx) == Equality::Equal);
  CHECK(rw.equal_modulo(ruleset("simplifier"), parse_term("x + 1"), parse_term("x + 2"), ctx) != Equality::Equal);
}

TEST_CASE("condition evaluation") {
  Rewriter rw = rewriter();
  Context ctx;
  ctx.add(parse_term("0 < r"), FactOrigin::Precondition);
  CHECK(rw.eval_condition(ctx, parse_term("0 < r")) == Truth::True);
  CHECK(rw.eval_condition(ctx, parse_term("r ~= 0")) == Truth::True);
  CHECK(rw.eval_condition(ctx, parse_term("r < 0")) == Truth::False);
  CHECK(rw.eval_condition(Context{}, parse_term("true")) == Truth::True);
  CHECK(rw.eval_condition(Context{}, parse_term("u ~= 0")) == Truth::Undecided);
  CHECK(rw.eval_condition(Context{}, parse_term("free_of(r, alpha)")) == Truth::True);
  CHECK(rw.eval_condition(Context{}, parse_term("free_of(sin(alpha), alpha)")) == Truth::False);
}

TEST_CASE("bundled rules are well formed") {
  for (const auto& [name, th] : bundled().theories()) {
    std::set<std::string> names;
    for (const auto& r : th.rules) {
      CHECK(names.insert(r->name).second);
      if (r->builtin) continue;
      std::set<std::string> allowed = free_vars(r->lhs);
      allowed.insert(r->schematic.begin(), r->schematic.end());
      std::set<std::string> used = free_vars(r->rhs);
      for (const auto& c : r->conditions)
        for (const auto& v : free_vars(c)) used.insert(v);
      for (const auto& v : used) CHECK_MESSAGE(allowed.count(v), r->name << " introduces " << v);
    }
  }
}

TEST_CASE("bundled rules pass numeric sampling") {
  for (const auto& rep : oracle::sample_all_rules(bundled())) {
    INFO(rep.rule << ": " << rep.first_failure);
    CHECK(rep.points == oracle::kSamplePoints);
    CHECK(rep.failures == 0);
  }
}

TEST_CASE("the sampling oracle rejects unsound rules") {
  Rule wrong;
  wrong.name = "wrong_product";
  wrong.lhs = parse_term("d_d(bdv, u*v)");
  wrong.rhs = parse_term("d_d(bdv, u)*d_d(bdv, v)");
  wrong.schematic = {"bdv"};
  auto rep = oracle::sample_rule(wrong, 17);
  CHECK(rep.failures > 0);
  Rule wrong_sign = *bundled().rule("Diff", "diff_cos");
  wrong_sign.rhs = parse_term("sin(bdv)");
  CHECK(oracle::sample_rule(wrong_sign, 3).failures > 0);
}

TEST_CASE("normalization terminates on the bundled examples") {
  Rewriter rw = rewriter();
  for (const auto& [name, m] : bundled().methods())
    for (const auto& [formal, value] : m.examples)
      for (const char* rs : {"simplifier", "cleanup"}) {
        auto out = rw.normalize(ruleset(rs), value, Context{});
        CHECK_FALSE(out.trace.truncated);
      }
}
