#include "lucas/syntax.hpp"

#include <map>
#include <set>

namespace lucas {
namespace {

// Binding strength; an operand whose level is below the slot's minimum is
// parenthesized.
enum Level : int {
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kRel = 4,
  kSum = 5,
  kProd = 6,
  kUnary = 7,
  kPower = 8,
  kAtom = 9,
};

const std::map<std::string, std::string>& relation_symbols(RenderStyle style) {
  static const std::map<std::string, std::string> ascii = {
      {"=", " = "}, {"~=", " ~= "}, {"<", " < "}, {"<=", " <= "},
      {"approx", " approx "}, {"in", " in "}};
  static const std::map<std::string, std::string> unicode = {
      {"=", " = "}, {"~=", " ≠ "}, {"<", " < "}, {"<=", " ≤ "},
      {"approx", " ≈ "}, {"in", " ∈ "}};
  return style == RenderStyle::Ascii ? ascii : unicode;
}

std::string greek(const std::string& name) {
  static const std::map<std::string, std::string> letters = {
      {"alpha", "α"}, {"beta", "β"}, {"gamma", "γ"}, {"delta", "δ"},
      {"epsilon", "ε"}, {"theta", "θ"}, {"lambda", "λ"}, {"mu", "μ"},
      {"phi", "φ"}, {"omega", "ω"}};
  std::size_t stem = name.find('\'');
  std::string base = name.substr(0, stem);
  std::string primes = stem == std::string::npos ? "" : name.substr(stem);
  auto it = letters.find(base);
  return it == letters.end() ? name : it->second + primes;
}

std::string superscript(const Rational& q) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string text = boost::multiprecision::numerator(q).str();
  std::string out;
  for (char c : text) out += c == '-' ? std::string("⁻") : std::string(digits[c - '0']);
  return out;
}

std::string numeral_text(const Rational& q) {
  if (auto dec = exact_decimal(q)) return *dec;
  return "rat(" + boost::multiprecision::numerator(q).str() + ", " +
         boost::multiprecision::denominator(q).str() + ")";
}

class Renderer {
 public:
  explicit Renderer(RenderStyle style) : style_(style) {}

  std::string render(const Term& t, int min_level) {
    auto [text, level] = render_with_level(t);
    if (level < min_level) return "(" + text + ")";
    return text;
  }

 private:
  bool unicode() const { return style_ == RenderStyle::Unicode; }

  static bool is_simple(const Term& t) {
    return t.is_variable() || (t.is_numeral() && t.value() >= 0) ||
           (t.is_apply() && t.arity() == 0);
  }

  std::pair<std::string, int> render_with_level(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Numeral: {
        std::string text = numeral_text(t.value());
        if (t.value() < 0) return {text, kUnary};
        return {text, text.rfind("rat(", 0) == 0 ? kAtom : kAtom};
      }
      case Term::Kind::Variable:
        return {unicode() ? greek(t.name()) : t.name(), kAtom};
      case Term::Kind::Apply:
        return render_apply(t);
    }
    return {"", kAtom};
  }

  std::pair<std::string, int> binary(const Term& t, const std::string& op, int level,
                                     bool left_assoc = true) {
    int left_min = left_assoc ? level : level + 1;
    int right_min = left_assoc ? level + 1 : level;
    return {render(t.arg(0), left_min) + op + render(t.arg(1), right_min), level};
  }

  std::pair<std::string, int> render_apply(const Term& t) {
    const std::string& h = t.name();
    const std::size_t n = t.arity();

    if (n == 2 && (h == "or" || h == "and")) {
      std::string op = unicode() ? (h == "or" ? " ∨ " : " ∧ ") : " " + h + " ";
      return binary(t, op, h == "or" ? kOr : kAnd);
    }
    if (n == 1 && h == "not") {
      return {(unicode() ? "¬" : "not ") + render(t.arg(0), kNot), kNot};
    }
    if (n == 2) {
      const auto& rels = relation_symbols(style_);
      if (auto it = rels.find(h); it != rels.end())
        return {render(t.arg(0), kRel + 1) + it->second + render(t.arg(1), kRel + 1), kRel};
    }
    if (n == 2 && (h == "+" || h == "-")) return binary(t, " " + h + " ", kSum);
    if (n == 2 && h == "*") return binary(t, unicode() ? "·" : "*", kProd);
    if (n == 2 && h == "/") return binary(t, "/", kProd);
    if (n == 1 && h == "neg") {
      const Term& a = t.arg(0);
      // Rendered at sum level so that a*(-b) keeps its parentheses.
      if (a.is_numeral() && a.value() >= 0) return {"-(" + render(a, 0) + ")", kSum};
      return {"-" + render(a, kUnary), kSum};
    }
    if (n == 2 && h == "^") {
      const Term& e = t.arg(1);
      if (unicode() && e.is_numeral() && is_integer(e.value()))
        return {render(t.arg(0), kAtom) + superscript(e.value()), kPower};
      return {render(t.arg(0), kAtom) + "^" + render(e, kUnary), kPower};
    }
    if (h == "cons" || h == "nil") {
      if (auto items = list_elements(t)) {
        std::string out = "[";
        for (std::size_t i = 0; i < items->size(); ++i) {
          if (i) out += ", ";
          out += render((*items)[i], 0);
        }
        return {out + "]", kAtom};
      }
    }
    if (unicode()) {
      if (auto special = render_unicode_special(t)) return *special;
    }
    if (n == 0) return {h, kAtom};
    std::string out = h + "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ", ";
      out += render(t.arg(i), 0);
    }
    return {out + ")", kAtom};
  }

  std::optional<std::pair<std::string, int>> render_unicode_special(const Term& t) {
    static const std::map<std::string, std::string> prefix_fns = {
        {"sin", "sin"}, {"cos", "cos"}, {"tan", "tan"}, {"arctan", "tan⁻¹"},
        {"ln", "ln"}, {"exp", "exp"}};
    const std::string& h = t.name();
    if (t.arity() == 0) {
      if (h == "pi") return std::pair<std::string, int>{"π", kAtom};
      return std::nullopt;
    }
    if (t.arity() == 1) {
      if (auto it = prefix_fns.find(h); it != prefix_fns.end()) {
        const Term& a = t.arg(0);
        std::string arg = is_simple(a) ? " " + render(a, kAtom) : "(" + render(a, 0) + ")";
        return std::pair<std::string, int>{it->second + arg, kUnary};
      }
      if (h == "sqrt") {
        const Term& a = t.arg(0);
        return std::pair<std::string, int>{"√" + (is_simple(a) ? render(a, kAtom) : "(" + render(a, 0) + ")"),
                                           kAtom};
      }
      if (h == "is_differentiable")
        return std::pair<std::string, int>{render(t.arg(0), kRel + 1) + " is_differentiable", kRel};
    }
    if (t.arity() == 2) {
      if (h == "d_d")
        return std::pair<std::string, int>{"d/d" + render(t.arg(0), kAtom) + " " + render(t.arg(1), kUnary),
                                           kUnary};
      if (h == "open_interval")
        return std::pair<std::string, int>{"]" + render(t.arg(0), 0) + ", " + render(t.arg(1), 0) + "[",
                                           kAtom};
      if (h == "is_differentiable_on")
        return std::pair<std::string, int>{
            render(t.arg(0), kRel + 1) + " is_differentiable_on " + render(t.arg(1), kRel + 1), kRel};
    }
    return std::nullopt;
  }

  RenderStyle style_;
};

}  // namespace

std::string render_term(const Term& t, RenderStyle style) {
  Renderer r(style);
  return r.render(t, 0);
}

}  // namespace lucas
