#include "lucas/program.hpp"

#include "lucas/syntax.hpp"

namespace lucas {
namespace {

bool is_infix(const std::string& op) {
  return op == "+" || op == "-" || op == "*" || op == "/" || op == "^" || op == "=" ||
         op == "~=" || op == "<" || op == "<=";
}

std::string print_list_item(const Pure& e) {
  std::string out = print_pure(e);
  if (!e.type.empty()) out += "::" + e.type;
  return out;
}

std::string print_tactic(const ProgTactic& t) {
  std::string head = tactic_kind_name(t.kind);
  switch (t.kind) {
    case Tactic::Kind::Take:
    case Tactic::Kind::Approximate: {
      std::string arg = print_pure(*t.arg);
      // Take's argument is a single atom; wrap anything else.
      bool atomic = arg.front() == '(' || arg.front() == '[' ||
                    t.arg->kind == Pure::Kind::Var || t.arg->kind == Pure::Kind::Quote ||
                    (t.arg->kind == Pure::Kind::Num && t.arg->literal.value() >= 0);
      return head + " " + (atomic ? arg : "(" + arg + ")");
    }
    case Tactic::Kind::Rewrite:
    case Tactic::Kind::RewriteSet:
      return head + " " + t.name;
    case Tactic::Kind::RewriteInst: {
      std::string out = head + " [";
      for (std::size_t i = 0; i < t.inst.size(); ++i) {
        if (i) out += ", ";
        out += "(" + t.inst[i].first + ", " + print_pure(*t.inst[i].second) + ")";
      }
      return out + "] " + t.name;
    }
    case Tactic::Kind::Subproblem: {
      std::string out = head + " (" + t.theory + ", [" + join_path(t.spec) + "], " + t.name + ") [";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += print_list_item(*t.args[i]);
      }
      return out + "]";
    }
    case Tactic::Kind::CheckPostcond:
      return head + " [" + join_path(t.spec) + "]";
  }
  return head;
}

bool needs_parens(const Expr& e) {
  return e.kind != Expr::Kind::Tactic && e.kind != Expr::Kind::Pure;
}

std::string child(const Expr& e) {
  std::string text = print_expr(e);
  return needs_parens(e) ? "(" + text + ")" : text;
}

}  // namespace

std::string print_pure(const Pure& e) {
  switch (e.kind) {
    case Pure::Kind::Var:
    case Pure::Kind::Comb:
      return e.name;
    case Pure::Kind::Num: {
      std::string text = render_term(e.literal, RenderStyle::Ascii);
      return e.literal.value() < 0 ? "(" + text + ")" : text;
    }
    case Pure::Kind::Op: {
      if (e.args.empty()) return builtin_arity(e.name) ? e.name : e.name + "()";
      if (e.args.size() == 2 && is_infix(e.name))
        return "(" + print_pure(*e.args[0]) + " " + e.name + " " + print_pure(*e.args[1]) + ")";
      if (e.name == "neg" && e.args.size() == 1) return "(-(" + print_pure(*e.args[0]) + "))";
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_pure(*e.args[i]);
      }
      return out + ")";
    }
    case Pure::Kind::Compose:
      return "(" + print_pure(*e.args[0]) + " o " + print_pure(*e.args[1]) + ")";
    case Pure::Kind::Call:
      return "(" + print_pure(*e.args[0]) + " " + print_pure(*e.args[1]) + ")";
    case Pure::Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_list_item(*e.args[i]);
      }
      return out + "]";
    }
    case Pure::Kind::Quote:
      return "QUOTE (" + render_term(e.literal, RenderStyle::Ascii) + ")";
  }
  return "";
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Let: {
      std::string out = "LET ";
      for (std::size_t i = 0; i < e.names.size(); ++i) {
        if (i) out += "; ";
        out += e.names[i] + " = " + child(*e.children[i]);
      }
      return out + " IN " + child(*e.children.back());
    }
    case Expr::Kind::If:
      return "IF " + print_pure(*e.pure) + " THEN " + child(*e.children[0]) + " ELSE " +
             child(*e.children[1]);
    case Expr::Kind::Repeat:
      return "REPEAT " + child(*e.children[0]);
    case Expr::Kind::Try:
      return "TRY " + child(*e.children[0]);
    case Expr::Kind::Or:
    case Expr::Kind::Chain: {
      std::string sep = e.kind == Expr::Kind::Or ? " OR " : " @@ ";
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += sep;
        out += child(*e.children[i]);
      }
      return out;
    }
    case Expr::Kind::Applied:
      return child(*e.children[0]) + " " + print_pure(*e.pure);
    case Expr::Kind::Tactic:
      return print_tactic(*e.tactic);
    case Expr::Kind::Pure:
      return print_pure(*e.pure);
  }
  return "";
}

std::string print_program(const Program& p) {
  std::string out = "Program " + p.name;
  for (const auto& f : p.formals) out += " (" + f.name + "::" + f.type + ")";
  return out + " =\n  " + print_expr(*p.body) + "\n";
}

}  // namespace lucas
