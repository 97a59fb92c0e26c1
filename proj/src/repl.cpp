#include "lucas/repl.hpp"

#include "lucas/syntax.hpp"

#include <iostream>
#include <sstream>

namespace lucas {

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

class Layout {
 public:
  Layout(const std::set<Position>& unfold, const ReplOptions& opt) : unfold_(unfold), opt_(opt) {}

  void calc(const Calculation& c, const Position& at, std::size_t depth) {
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
      const Entry& e = c.entries[i];
      Position pos = at;
      pos.push_back(i);
      std::string indent(depth * 2, ' ');
      switch (e.kind) {
        case Entry::Kind::Formula: {
          std::string text = opt_.unicode ? to_unicode(e.term) : to_ascii(e.term);
          std::string mark = opt_.unicode ? marker_symbol(e.marker) : marker_name(e.marker);
          if (e.provenance == Provenance::UserDerivation) mark += opt_.unicode ? "·" : "*";
          lines_.push_back(label(pos) + indent + mark + " " + text);
          break;
        }
        case Entry::Kind::Tactic: {
          std::string text = "[" + (opt_.unicode ? tactic_unicode(e.tactic) : tactic_text(e.tactic)) + "]";
          std::string lead = label(pos);
          std::size_t used = display_width(lead) + display_width(text);
          std::size_t pad = used < opt_.width ? opt_.width - used : 1;
          lines_.push_back(lead + std::string(pad, ' ') + text);
          break;
        }
        case Entry::Kind::SubCalc: {
          const Calculation& sub = e.sub.front();
          bool folded = e.collapsed && !unfold_.count(pos);
          std::string bullet = opt_.unicode ? "• " : "* ";
          lines_.push_back(label(pos) + indent + bullet + "Problem [" + join_path(sub.spec) + "]" +
                           (folded ? (opt_.unicode ? " …" : " ...") : ""));
          if (!folded) calc(sub, pos, depth + 1);
          break;
        }
      }
    }
  }

  std::vector<std::string> take() { return std::move(lines_); }

 private:
  static std::string label(const Position& pos) {
    std::string p = position_text(pos);
    if (p.size() < 8) p += std::string(8 - p.size(), ' ');
    return p + " ";
  }

  const std::set<Position>& unfold_;
  const ReplOptions& opt_;
  std::vector<std::string> lines_;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Repl {
 public:
  Repl(Session& s, std::ostream& out, const ReplOptions& opt) : s_(s), out_(out), opt_(opt) {
    shown_ = layout_calc(s_.calc(), unfold_, opt_);
  }

  /// False on quit.
  bool command(const std::string& line) {
    std::string cmd = line, arg;
    if (auto sp = line.find(' '); sp != std::string::npos) {
      cmd = line.substr(0, sp);
      arg = trim(line.substr(sp + 1));
    }
    try {
      if (cmd == "quit" || cmd == "exit") return false;
      if (cmd == "help") {
        out_ << repl_usage();
      } else if (cmd == "next") {
        report(s_.do_next());
      } else if (cmd == "auto") {
        report(s_.auto_complete());
      } else if (cmd == "formula") {
        report(s_.input_formula(parse_term(arg)));
      } else if (cmd == "tactic") {
        report(s_.input_tactic(parse_tactic(arg)));
      } else if (cmd == "back") {
        s_.backtrack(std::stoul(arg));
        out_ << "restored snapshot " << s_.at() << "\n";
        refresh(true);
      } else if (cmd == "log") {
        for (std::size_t i = 0; i < s_.step_log().size(); ++i) {
          const LogEntry& e = s_.step_log()[i];
          out_ << "  " << (e.snapshot ? std::to_string(*e.snapshot) : "-") << "  " << e.trigger << " -> "
               << e.outcome << "\n";
        }
      } else if (cmd == "ctx") {
        for (const Fact& f : s_.context_at(parse_position(arg)))
          out_ << "  " << origin_name(f.origin) << ": " << term_text(f.term) << "\n";
      } else if (cmd == "trace") {
        const RewriteTrace& tr = s_.trace_at(parse_position(arg));
        if (tr.steps.empty()) out_ << "  (no rewrite steps)\n";
        for (const TraceStep& st : tr.steps)
          out_ << "  " << st.rule << " at " << path_text(st.path) << ": " << term_text(st.result) << "\n";
      } else if (cmd == "unfold" || cmd == "fold") {
        Position p = parse_position(arg);
        const Entry& e = entry_at(s_.calc(), p);
        if (e.kind != Entry::Kind::SubCalc) throw std::invalid_argument("no subproblem at " + arg);
        if (cmd == "unfold") unfold_.insert(p);
        else unfold_.erase(p);
        refresh(true);
      } else if (cmd == "show") {
        refresh(true);
      } else if (cmd == "result") {
        if (!s_.finished()) {
          out_ << "not finished\n";
        } else {
          for (const auto& [o, v] : s_.result()) out_ << "  " << o << " = " << term_text(v) << "\n";
        }
      } else {
        out_ << "unknown command '" << cmd << "'\n" << repl_usage();
      }
    } catch (const SessionError& e) {
      out_ << "error " << e.code() << ": " << e.what() << "\n";
    } catch (const ParseError& e) {
      out_ << "error ParseError: " << e.what() << "\n";
    } catch (const std::exception& e) {
      out_ << "error: " << e.what() << "\n";
    }
    return true;
  }

  void refresh(bool full) {
    std::vector<std::string> now = layout_calc(s_.calc(), unfold_, opt_);
    bool extends = !full && now.size() >= shown_.size() &&
                   std::equal(shown_.begin(), shown_.end(), now.begin());
    for (std::size_t i = extends ? shown_.size() : 0; i < now.size(); ++i) out_ << now[i] << "\n";
    shown_ = std::move(now);
  }

 private:
  std::string term_text(const Term& t) const { return opt_.unicode ? to_unicode(t) : to_ascii(t); }

  static std::string path_text(const TermPath& p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + std::to_string(p[i]);
    return out + "]";
  }

  void report(const StepOutcome& o) {
    using K = StepOutcome::Kind;
    switch (o.kind) {
      case K::Derived:
        out_ << "derived (" << o.derivation.size() / 2 << " steps)\n";
        break;
      case K::NotDerivable:
        out_ << "not derivable" << (o.reason.empty() ? "" : ": " + o.reason) << "\n";
        break;
      case K::Located:
        out_ << "located " << (o.tactic ? tactic_text(*o.tactic) : "") << "\n";
        break;
      case K::Helpless:
        out_ << "helpless" << (o.reason.empty() ? "" : ": " + o.reason)
             << "; 'back <n>' returns to snapshot n, 'log' lists them\n";
        break;
      case K::Stuck:
        out_ << "stuck" << (o.reason.empty() ? "" : ": " + o.reason) << "\n";
        break;
      case K::Finished:
      case K::Stepped:
        break;
    }
    refresh(false);
    if (o.kind == K::Finished) {
      out_ << "finished\n";
      for (const auto& [v, r] : o.result) out_ << "  " << v << " = " << term_text(r) << "\n";
    }
  }

  Session& s_;
  std::ostream& out_;
  const ReplOptions& opt_;
  std::set<Position> unfold_;
  std::vector<std::string> shown_;
};

}  // namespace

std::vector<std::string> layout_calc(const Calculation& c, const std::set<Position>& unfold, const ReplOptions& opt) {
  Layout l(unfold, opt);
  l.calc(c, {}, 0);
  return l.take();
}

std::string repl_usage() {
  return "commands:\n"
         "  next              let the system do the next step\n"
         "  auto              run to the end\n"
         "  formula <term>    input a formula\n"
         "  tactic <tactic>   input a tactic, e.g. Rewrite diff_sin\n"
         "  back <n>          restore snapshot n (see log)\n"
         "  log               list the step log\n"
         "  ctx [pos]         context at a position (default: cursor)\n"
         "  trace <pos>       rewrite trace of a formula\n"
         "  unfold <pos>      show a collapsed subproblem; fold hides it again\n"
         "  show              print the whole calculation\n"
         "  result            result of a finished calculation\n"
         "  quit\n";
}

int run_repl(Session& session, std::istream& in, std::ostream& out, const ReplOptions& opt) {
  Repl repl(session, out, opt);
  out << "• Problem [" << join_path(session.calc().spec) << "]  method " << session.calc().method << "\n";
  repl.refresh(true);
  std::string line;
  for (;;) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) {
      out << "\n";
      break;
    }
    line = trim(line);
    if (opt.echo) out << line << "\n";
    if (line.empty() || line[0] == '#') continue;
    if (!repl.command(line)) break;
  }
  return 0;
}

}  // namespace lucas
