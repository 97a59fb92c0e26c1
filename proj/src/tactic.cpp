#include "lucas/tactic.hpp"

#include "lucas/syntax.hpp"

#include <cctype>

namespace lucas {

const std::vector<Tactic::Kind>& all_tactic_kinds() {
  static const std::vector<Tactic::Kind> kinds = {
      Tactic::Kind::Take, Tactic::Kind::Rewrite, Tactic::Kind::RewriteInst,
      Tactic::Kind::RewriteSet, Tactic::Kind::Subproblem, Tactic::Kind::CheckPostcond,
      Tactic::Kind::Approximate};
  return kinds;
}

std::string tactic_kind_name(Tactic::Kind k) {
  switch (k) {
    case Tactic::Kind::Take: return "Take";
    case Tactic::Kind::Rewrite: return "Rewrite";
    case Tactic::Kind::RewriteInst: return "Rewrite_Inst";
    case Tactic::Kind::RewriteSet: return "Rewrite_Set";
    case Tactic::Kind::Subproblem: return "Subproblem";
    case Tactic::Kind::CheckPostcond: return "Check_Postcond";
    case Tactic::Kind::Approximate: return "Approximate";
  }
  return "Take";
}

std::optional<Tactic::Kind> parse_tactic_kind(std::string_view name) {
  for (auto k : all_tactic_kinds())
    if (tactic_kind_name(k) == name) return k;
  return std::nullopt;
}

std::string join_path(const std::vector<std::string>& path, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += sep;
    out += path[i];
  }
  return out;
}

namespace {

std::string render_tactic(const Tactic& t, RenderStyle style) {
  std::string out = tactic_kind_name(t.kind);
  auto term = [&](const Term& x) { return render_term(x, style); };
  switch (t.kind) {
    case Tactic::Kind::Take:
    case Tactic::Kind::Approximate:
      return out + " (" + term(t.term) + ")";
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteSet:
      return out + " " + t.name;
    case Tactic::Kind::RewriteInst: {
      out += " [";
      bool first = true;
      for (const auto& [k, v] : t.inst) {
        if (!first) out += ", ";
        first = false;
        out += "(" + k + ", " + term(v) + ")";
      }
      return out + "] " + t.name;
    }
    case Tactic::Kind::Subproblem: {
      out += " (" + t.theory + ", [" + join_path(t.spec) + "], " + t.name + ") [";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += term(t.args[i]);
      }
      return out + "]";
    }
    case Tactic::Kind::CheckPostcond:
      return out + " [" + join_path(t.spec) + "]";
  }
  return out;
}

class TacticReader {
 public:
  explicit TacticReader(std::string_view text) : text_(text) {}

  Tactic read() {
    std::string word = ident();
    auto kind = parse_tactic_kind(word);
    if (!kind) throw ParseError(0, {"tactic name"}, "unknown tactic '" + word + "'");
    Tactic t;
    t.kind = *kind;
    switch (t.kind) {
      case Tactic::Kind::Take:
      case Tactic::Kind::Approximate:
        t.term = term();
        break;
      case Tactic::Kind::Rewrite:
      case Tactic::Kind::RewriteSet:
        t.name = ident();
        break;
      case Tactic::Kind::RewriteInst:
        expect('[');
        while (!peek(']')) {
          expect('(');
          std::string k = ident();
          expect(',');
          t.inst[k] = term();
          expect(')');
          if (!peek(']')) expect(',');
        }
        expect(']');
        t.name = ident();
        break;
      case Tactic::Kind::Subproblem:
        expect('(');
        t.theory = ident();
        expect(',');
        t.spec = path();
        expect(',');
        t.name = ident();
        expect(')');
        expect('[');
        while (!peek(']')) {
          t.args.push_back(term());
          if (!peek(']')) expect(',');
        }
        expect(']');
        break;
      case Tactic::Kind::CheckPostcond:
        t.spec = path();
        break;
    }
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, {expected}, "tactic parse error at offset " + std::to_string(pos_) +
                                           ": expected " + expected);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string(1, c));
    ++pos_;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '\''))
      ++pos_;
    if (start == pos_) fail("identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::vector<std::string> path() {
    expect('[');
    std::vector<std::string> out;
    while (!peek(']')) {
      out.push_back(ident());
      if (!peek(']')) expect(',');
    }
    expect(']');
    return out;
  }
  Term term() {
    skip_ws();
    return parse_term_at(text_, pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string tactic_text(const Tactic& t) { return render_tactic(t, RenderStyle::Ascii); }
std::string tactic_unicode(const Tactic& t) { return render_tactic(t, RenderStyle::Unicode); }

Tactic parse_tactic(std::string_view text) { return TacticReader(text).read(); }

}  // namespace lucas
