#include "oracles.hpp"

#include "lucas/repl.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace lucas;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run(Session& s, const std::string& script, bool unicode = false) {
  std::istringstream in(script);
  std::ostringstream out;
  ReplOptions opt;
  opt.unicode = unicode;
  opt.echo = true;
  CHECK(run_repl(s, in, out, opt) == 0);
  return out.str();
}

}  // namespace

TEST_CASE("next on a fresh session prints the Take line") {
  Session s = oracle::open_example("Differentiate");
  std::string out = run(s, "next\n");
  CHECK(out.find("[Take (d_d(alpha, 8*r^2*(sin(alpha)*cos(alpha)) - 4*r^2*sin(alpha)^2))]") != std::string::npos);
  CHECK(out.find("initial d_d(alpha,") != std::string::npos);
}

TEST_CASE("the current formula is derived in zero steps") {
  Session s = oracle::open_example("Differentiate");
  s.do_next();
  std::string out = run(s, "formula " + to_ascii(s.calc().entries.back().term) + "\n");
  CHECK(out.find("derived (0 steps)") != std::string::npos);
}

TEST_CASE("unknown commands print usage and the loop exits cleanly") {
  Session s = oracle::open_example("Differentiate");
  std::string out = run(s, "frobnicate\n");
  CHECK(out.find("unknown command 'frobnicate'") != std::string::npos);
  CHECK(out.find("commands:") != std::string::npos);
}

TEST_CASE("engine errors are shown inline") {
  Session s = oracle::open_example("Differentiate");
  std::string out = run(s, "next\ntactic Rewrite_Inst [(bdv, alpha)] diff_fraction\nformula 1 +\nback 77\n");
  CHECK(out.find("error NotApplicable") != std::string::npos);
  CHECK(out.find("error ParseError") != std::string::npos);
  CHECK(out.find("error UnknownPosition") != std::string::npos);
}

TEST_CASE("two-margin layout with folding") {
  Session s = oracle::open_example("Max");
  s.auto_complete();
  ReplOptions opt;
  auto lines = layout_calc(s.calc(), {}, opt);
  std::size_t folded = 0;
  for (const auto& l : lines) {
    if (l.find("• Problem [") != std::string::npos) {
      CHECK(l.find("…") != std::string::npos);
      ++folded;
    }
    // tactic lines are padded out to the right margin
    if (l.find("   [") != std::string::npos && l.find("Problem") == std::string::npos && l.back() == ']')
      CHECK(l.size() >= opt.width);
  }
  CHECK(folded == 3);
  std::set<Position> unfold;
  for (std::size_t i = 0; i < s.calc().entries.size(); ++i)
    if (s.calc().entries[i].kind == Entry::Kind::SubCalc) unfold.insert({i});
  CHECK(layout_calc(s.calc(), unfold, opt).size() > lines.size());
  Session empty = oracle::open_example("Differentiate");
  CHECK(layout_calc(empty.calc(), {}, opt).empty());
}

TEST_CASE("golden transcript of the derivative dialogue") {
  const std::string dir = LUCAS_TEST_GOLDEN;
  Session s = oracle::open_example("Differentiate");
  std::string out = run(s, slurp(dir + "/differentiate.script"));
  if (std::getenv("LUCAS_UPDATE_GOLDEN")) std::ofstream(dir + "/differentiate.out") << out;
  CHECK(out == slurp(dir + "/differentiate.out"));
}
