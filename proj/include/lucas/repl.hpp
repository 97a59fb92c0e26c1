#pragma once

#include "lucas/interpreter.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace lucas {

struct ReplOptions {
  bool unicode = true;
  std::size_t width = 78;
  /// Echo each command after the prompt; useful when input is a script.
  bool echo = false;
};

/// Two-margin layout: formulas left, indented by depth, tactics
/// right-aligned. Collapsed subcalculations show only their header unless
/// their position is in `unfold`.
std::vector<std::string> layout_calc(const Calculation& c, const std::set<Position>& unfold,
                                     const ReplOptions& opt);

/// Reads commands until quit or end of input. Returns the exit code.
int run_repl(Session& session, std::istream& in, std::ostream& out, const ReplOptions& opt = {});

std::string repl_usage();

}  // namespace lucas
