#include "lucas/knowledge.hpp"

#include "lucas/syntax.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace lucas {

namespace fs = std::filesystem;

LoadError::LoadError(std::string file, std::size_t line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

std::vector<std::string> Specification::input_names() const {
  std::vector<std::string> out;
  for (const auto& i : inputs) out.push_back(i.name);
  return out;
}

std::vector<std::string> Specification::output_names() const {
  std::vector<std::string> out;
  for (const auto& o : outputs) out.push_back(o.name);
  return out;
}

std::string spec_path_text(const SpecPath& path) { return "[" + join_path(path) + "]"; }

std::string pre_status_name(PreStatus s) {
  switch (s) {
    case PreStatus::Satisfied: return "Satisfied";
    case PreStatus::Violated: return "Violated";
    case PreStatus::Undecided: return "Undecided";
  }
  return "Undecided";
}

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError(p.string(), 0, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Non-blank lines with comments removed.
std::vector<Line> read_lines(const fs::path& p) {
  std::vector<Line> out;
  if (!fs::exists(p)) return out;
  std::istringstream in(read_file(p));
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    if (!t.empty()) out.push_back({n, t});
  }
  return out;
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::pair<std::string, std::string> key_value(const Line& l, const std::string& file) {
  auto colon = l.text.find(':');
  if (colon == std::string::npos) throw LoadError(file, l.number, "expected 'key: value'");
  return {trim(l.text.substr(0, colon)), trim(l.text.substr(colon + 1))};
}

Term term_at(const std::string& text, const std::string& file, std::size_t line) {
  try {
    return parse_term(text);
  } catch (const ParseError& e) {
    throw LoadError(file, line, e.what());
  }
}

SpecPath parse_path(const std::string& text, const std::string& file, std::size_t line) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw LoadError(file, line, "expected a path like [a, b]");
  SpecPath out;
  for (auto& part : split_top(t.substr(1, t.size() - 2), ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::vector<TypedName> parse_typed(const std::string& text, const std::string& file, std::size_t line) {
  std::vector<TypedName> out;
  for (const auto& item : split_top(text, ',')) {
    if (item.empty()) continue;
    auto sep = item.find("::");
    if (sep == std::string::npos) throw LoadError(file, line, "expected name::type in '" + item + "'");
    out.push_back({trim(item.substr(0, sep)), trim(item.substr(sep + 2))});
  }
  return out;
}

void load_theory_header(Theory& th, const fs::path& dir) {
  std::string file = (dir / "theory.kb").string();
  for (const auto& l : read_lines(dir / "theory.kb")) {
    auto [key, value] = key_value(l, file);
    if (key == "parent") {
      th.parent = value;
    } else if (key == "symbol") {
      auto slash = value.find('/');
      if (slash == std::string::npos) throw LoadError(file, l.number, "expected symbol name/arity");
      th.symbols[trim(value.substr(0, slash))] = std::stoul(value.substr(slash + 1));
    } else if (key == "fact") {
      th.facts.push_back(term_at(value, file, l.number));
    } else if (key == "schematic") {
      for (const auto& s : split_top(value, ',')) th.schematic.insert(s);
    } else if (key == "condition_ruleset") {
      th.condition_ruleset = value;
    } else {
      throw LoadError(file, l.number, "unknown theory field '" + key + "'");
    }
  }
}

RulePtr parse_rule(const Line& l, const Theory& th, const std::string& file) {
  auto colon = l.text.find(':');
  if (colon == std::string::npos) throw LoadError(file, l.number, "expected 'name: lhs = rhs'");
  auto rule = std::make_shared<Rule>();
  rule->name = trim(l.text.substr(0, colon));
  rule->theory = th.name;
  std::string body = trim(l.text.substr(colon + 1));
  if (body.rfind("builtin ", 0) == 0) {
    auto b = parse_builtin(trim(body.substr(8)));
    if (!b) throw LoadError(file, l.number, "unknown builtin '" + trim(body.substr(8)) + "'");
    rule->builtin = b;
    return rule;
  }
  std::size_t pos = 0;
  Term eq;
  try {
    eq = parse_term_at(body, pos);
  } catch (const ParseError& e) {
    throw LoadError(file, l.number, e.what());
  }
  if (!is_equation(eq)) throw LoadError(file, l.number, "rule '" + rule->name + "' is not an equation");
  rule->lhs = eq.arg(0);
  rule->rhs = eq.arg(1);
  std::string rest = trim(body.substr(std::min(pos, body.size())));
  if (!rest.empty()) {
    if (rest.rfind("if ", 0) != 0) throw LoadError(file, l.number, "expected 'if' after the rule equation");
    for (const auto& c : split_top(rest.substr(3), ';'))
      rule->conditions.push_back(term_at(c, file, l.number));
  }
  for (const auto& v : free_vars(rule->lhs))
    if (th.schematic.count(v)) rule->schematic.insert(v);
  return rule;
}

}  // namespace

const Theory* KnowledgeStore::theory(const std::string& name) const {
  auto it = theories_.find(name);
  return it == theories_.end() ? nullptr : &it->second;
}

const Specification* KnowledgeStore::spec(const SpecPath& path) const {
  auto it = specs_.find(path);
  return it == specs_.end() ? nullptr : &it->second;
}

const Method* KnowledgeStore::method(const std::string& name) const {
  auto it = methods_.find(name);
  return it == methods_.end() ? nullptr : &it->second;
}

std::vector<std::string> KnowledgeStore::theory_chain(const std::string& name) const {
  std::vector<std::string> out;
  for (const Theory* th = theory(name); th; th = th->parent.empty() ? nullptr : theory(th->parent)) {
    if (std::find(out.begin(), out.end(), th->name) != out.end()) break;
    out.push_back(th->name);
  }
  return out;
}

RulePtr KnowledgeStore::rule(const std::string& theory_name, const std::string& name) const {
  for (const auto& t : theory_chain(theory_name))
    for (const auto& r : theory(t)->rules)
      if (r->name == name) return r;
  return nullptr;
}

RuleSetPtr KnowledgeStore::ruleset(const std::string& theory_name, const std::string& name) const {
  for (const auto& t : theory_chain(theory_name)) {
    const auto& sets = theory(t)->rulesets;
    if (auto it = sets.find(name); it != sets.end()) return it->second;
  }
  return nullptr;
}

std::vector<Term> KnowledgeStore::theory_facts(const std::string& theory_name) const {
  std::vector<Term> out;
  auto chain = theory_chain(theory_name);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    for (const auto& f : theory(*it)->facts) out.push_back(f);
  return out;
}

std::vector<RulePtr> KnowledgeStore::visible_rules(const std::string& theory_name) const {
  std::vector<RulePtr> out;
  std::set<std::string> seen;
  for (const auto& t : theory_chain(theory_name))
    for (const auto& r : theory(t)->rules)
      if (seen.insert(r->name).second) out.push_back(r);
  return out;
}

Rewriter KnowledgeStore::rewriter(const std::string& theory_name) const {
  for (const auto& t : theory_chain(theory_name)) {
    const Theory* th = theory(t);
    if (!th->condition_ruleset.empty()) return Rewriter(ruleset(t, th->condition_ruleset));
  }
  return Rewriter();
}

std::string knowledge_hash(const fs::path& dir) {
  std::vector<std::pair<std::string, fs::path>> files;
  if (fs::exists(dir))
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), dir).generic_string(), e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [rel, path] : files) {
    feed(rel);
    feed(read_file(path));
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

void load_rules(Theory& th, const fs::path& dir) {
  std::string file = (dir / "rules.kb").string();
  for (const auto& l : read_lines(dir / "rules.kb")) {
    RulePtr r = parse_rule(l, th, file);
    for (const auto& existing : th.rules)
      if (existing->name == r->name) throw LoadError(file, l.number, "duplicate rule '" + r->name + "'");
    th.rules.push_back(r);
  }
}

void load_specs(std::map<SpecPath, Specification>& specs, const Theory& th, const fs::path& dir) {
  std::string file = (dir / "specs.kb").string();
  auto lines = read_lines(dir / "specs.kb");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& head = lines[i];
    if (head.text.rfind("spec ", 0) != 0) throw LoadError(file, head.number, "expected 'spec [path]'");
    Specification s;
    s.path = parse_path(head.text.substr(5), file, head.number);
    s.theory = th.name;
    bool closed = false;
    for (++i; i < lines.size(); ++i) {
      const Line& l = lines[i];
      if (l.text == "end") {
        closed = true;
        break;
      }
      auto [key, value] = key_value(l, file);
      if (key == "input") {
        s.inputs = parse_typed(value, file, l.number);
      } else if (key == "output") {
        s.outputs = parse_typed(value, file, l.number);
      } else if (key == "precond") {
        s.precond.push_back(term_at(value, file, l.number));
      } else if (key == "postcond") {
        s.postcond = term_at(value, file, l.number);
      } else if (key == "prop") {
        s.props.push_back(term_at(value, file, l.number));
      } else if (key == "prop_var") {
        for (const auto& v : split_top(value, ',')) s.prop_vars.push_back(v);
      } else {
        throw LoadError(file, l.number, "unknown spec field '" + key + "'");
      }
    }
    if (!closed) throw LoadError(file, head.number, "spec without 'end'");
    if (specs.count(s.path)) throw LoadError(file, head.number, "duplicate spec " + spec_path_text(s.path));
    for (const auto& in : s.inputs)
      for (const auto& out : s.outputs)
        if (in.name == out.name)
          throw LoadError(file, head.number, "'" + in.name + "' is both input and output");
    specs[s.path] = std::move(s);
  }
}

ProgramPtr synthesize_stub(const Method& m, const std::vector<TypedName>& formals) {
  std::string text = "Program " + m.name;
  for (const auto& f : formals) text += " (" + f.name + "::" + f.type + ")";
  text += " = Take (QUOTE (" + to_ascii(*m.stub_result) + "))";
  if (!m.approximate.empty()) text = text + " @@ Approximate " + m.approximate;
  return std::make_shared<const Program>(parse_program(text));
}

void load_methods(std::map<std::string, Method>& methods, const Theory& th, const fs::path& dir) {
  std::string file = (dir / "methods.kb").string();
  auto lines = read_lines(dir / "methods.kb");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& head = lines[i];
    if (head.text.rfind("method ", 0) != 0) throw LoadError(file, head.number, "expected 'method name'");
    Method m;
    m.name = trim(head.text.substr(7));
    m.theory = th.name;
    std::vector<TypedName> stub_formals;
    bool closed = false;
    for (++i; i < lines.size(); ++i) {
      const Line& l = lines[i];
      if (l.text == "end") {
        closed = true;
        break;
      }
      auto [key, value] = key_value(l, file);
      if (key == "theory") {
        m.theory = value;
      } else if (key == "spec") {
        m.spec = parse_path(value, file, l.number);
      } else if (key == "program") {
        m.program_file = value;
        fs::path p = dir / value;
        if (!fs::exists(p)) throw LoadError(file, l.number, "program file '" + value + "' not found");
        try {
          m.program = std::make_shared<const Program>(parse_program(read_file(p)));
        } catch (const ProgramParseError& e) {
          throw LoadError(p.string(), e.line(), e.what());
        } catch (const ParseError& e) {
          throw LoadError(p.string(), 0, e.what());
        }
      } else if (key == "check") {
        m.check_ruleset = value;
      } else if (key == "inputs_via") {
        m.inputs_via = value;
      } else if (key == "result") {
        m.stub_result = term_at(value, file, l.number);
      } else if (key == "formals") {
        stub_formals = parse_typed(value, file, l.number);
      } else if (key == "export") {
        m.exports.push_back(term_at(value, file, l.number));
      } else if (key == "approximate") {
        m.approximate = value;
      } else if (key == "example") {
        auto eq = value.find('=');
        if (eq == std::string::npos) throw LoadError(file, l.number, "expected 'example: name = term'");
        m.examples.emplace_back(trim(value.substr(0, eq)), term_at(value.substr(eq + 1), file, l.number));
      } else {
        throw LoadError(file, l.number, "unknown method field '" + key + "'");
      }
    }
    if (!closed) throw LoadError(file, head.number, "method without 'end'");
    if (m.is_stub() == static_cast<bool>(m.program))
      throw LoadError(file, head.number, "method '" + m.name + "' needs exactly one of 'program' and 'result'");
    if (m.is_stub()) m.program = synthesize_stub(m, stub_formals);
    if (methods.count(m.name)) throw LoadError(file, head.number, "duplicate method '" + m.name + "'");
    methods[m.name] = std::move(m);
  }
}

}  // namespace

static void load_rulesets(KnowledgeStore& store, Theory& th, const fs::path& dir) {
  std::string file = (dir / "rulesets.kb").string();
  for (const auto& l : read_lines(dir / "rulesets.kb")) {
    // ruleset NAME [max_steps=N] = item, item, @other
    auto sep = l.text.find(" = ");
    if (l.text.rfind("ruleset ", 0) != 0 || sep == std::string::npos)
      throw LoadError(file, l.number, "expected 'ruleset name [max_steps=N] = items'");
    auto rs = std::make_shared<RuleSet>();
    rs->theory = th.name;
    std::istringstream head(l.text.substr(8, sep - 8));
    head >> rs->name;
    std::string opt;
    while (head >> opt) {
      if (opt.rfind("max_steps=", 0) != 0) throw LoadError(file, l.number, "unexpected '" + opt + "'");
      try {
        rs->max_steps = std::stoi(opt.substr(10));
      } catch (const std::exception&) {
        throw LoadError(file, l.number, "bad max_steps '" + opt + "'");
      }
    }
    auto lookup_set = [&](const std::string& name) -> RuleSetPtr {
      if (auto it = th.rulesets.find(name); it != th.rulesets.end()) return it->second;
      return th.parent.empty() ? nullptr : store.ruleset(th.parent, name);
    };
    auto lookup_rule = [&](const std::string& name) -> RulePtr {
      for (const auto& r : th.rules)
        if (r->name == name) return r;
      return th.parent.empty() ? nullptr : store.rule(th.parent, name);
    };
    auto rules = std::make_shared<RuleSet>(*rs);
    for (const auto& item : split_top(l.text.substr(sep + 3), ',')) {
      if (item.empty()) continue;
      if (item[0] == '@') {
        RuleSetPtr other = lookup_set(item.substr(1));
        if (!other) throw LoadError(file, l.number, "unknown rule set '" + item.substr(1) + "'");
        for (const auto& r : other->rules) rules->rules.push_back(r);
      } else {
        RulePtr r = lookup_rule(item);
        if (!r) throw LoadError(file, l.number, "unknown rule '" + item + "'");
        rules->rules.push_back(r);
      }
    }
    if (th.rulesets.count(rs->name)) throw LoadError(file, l.number, "duplicate rule set '" + rs->name + "'");
    th.rulesets[rs->name] = rules;
  }
}

KnowledgeStore load_knowledge(const fs::path& dir) {
  KnowledgeStore store;
  if (!fs::is_directory(dir)) throw LoadError(dir.string(), 0, "not a directory");
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());

  for (const auto& d : dirs) {
    Theory th;
    th.name = d.filename().string();
    load_theory_header(th, d);
    store.theories_[th.name] = std::move(th);
  }
  for (const auto& [name, th] : store.theories_)
    if (!th.parent.empty() && !store.theory(th.parent))
      throw LoadError((dir / name / "theory.kb").string(), 0, "unknown parent theory '" + th.parent + "'");

  // Parents before children, so rule sets can include inherited sets.
  std::vector<std::string> order;
  std::function<void(const std::string&, int)> visit = [&](const std::string& name, int depth) {
    if (std::find(order.begin(), order.end(), name) != order.end()) return;
    if (depth > static_cast<int>(store.theories_.size()))
      throw LoadError((dir / name / "theory.kb").string(), 0, "cyclic parent chain");
    const Theory& th = store.theories_.at(name);
    if (!th.parent.empty()) visit(th.parent, depth + 1);
    order.push_back(name);
  };
  for (const auto& [name, th] : store.theories_) visit(name, 0);

  for (const auto& name : order) {
    Theory& th = store.theories_.at(name);
    fs::path d = dir / name;
    load_rules(th, d);
    if (!th.parent.empty())
      for (const auto& r : th.rules)
        if (RulePtr earlier = store.rule(th.parent, r->name))
          throw LoadError((d / "rules.kb").string(), 0,
                          "rule '" + r->name + "' already defined in theory " + earlier->theory);
    load_rulesets(store, th, d);
  }
  for (const auto& name : order) {
    const Theory& th = store.theories_.at(name);
    load_specs(store.specs_, th, dir / name);
    load_methods(store.methods_, th, dir / name);
  }
  store.hash_ = knowledge_hash(dir);
  return store;
}

std::vector<std::string> KnowledgeStore::audit() const {
  std::vector<std::string> problems;
  auto note = [&](std::string p) { problems.push_back(std::move(p)); };

  for (const auto& [name, th] : theories_) {
    if (!th.condition_ruleset.empty() && !ruleset(name, th.condition_ruleset))
      note("theory " + name + ": condition rule set '" + th.condition_ruleset + "' not found");
  }
  for (const auto& [path, s] : specs_) {
    std::string where = "spec " + spec_path_text(path);
    if (!theory(s.theory)) note(where + ": unknown theory " + s.theory);
    auto ins = s.input_names();
    std::set<std::string> in(ins.begin(), ins.end());
    std::set<std::string> all = in;
    for (const auto& o : s.outputs) all.insert(o.name);
    for (const auto& a : s.prop_vars) all.insert(a);
    for (const auto& p : s.precond)
      for (const auto& v : free_vars(p))
        if (!in.count(v)) note(where + ": precondition mentions non-input '" + v + "'");
    for (const auto& p : s.props)
      for (const auto& v : free_vars(p))
        if (!all.count(v)) note(where + ": prop mentions undeclared '" + v + "'");
  }
  for (const auto& [name, m] : methods_) {
    std::string where = "method " + name;
    if (!theory(m.theory)) {
      note(where + ": unknown theory " + m.theory);
      continue;
    }
    const Specification* s = spec(m.spec);
    if (!s) note(where + ": unknown spec " + spec_path_text(m.spec));
    if (!m.check_ruleset.empty() && !ruleset(m.theory, m.check_ruleset))
      note(where + ": check rule set '" + m.check_ruleset + "' not found");
    std::set<std::string> formals;
    for (const auto& f : m.program->formals) formals.insert(f.name);
    if (!m.inputs_via.empty()) {
      if (!formals.count(m.inputs_via)) note(where + ": inputs_via names no formal '" + m.inputs_via + "'");
    } else if (s) {
      for (const auto& i : s->inputs)
        if (!formals.count(i.name)) note(where + ": spec input '" + i.name + "' is not a formal");
    }
    for (const ProgTactic* t : program_tactics(*m.program)) {
      switch (t->kind) {
        case Tactic::Kind::Rewrite:
        case Tactic::Kind::RewriteInst: {
          RulePtr r = rule(m.theory, t->name);
          if (!r) {
            note(where + ": unknown rule '" + t->name + "'");
            break;
          }
          for (const auto& [k, v] : t->inst)
            if (!r->schematic.count(k)) note(where + ": '" + k + "' is not schematic in rule " + r->name);
          break;
        }
        case Tactic::Kind::RewriteSet:
          if (!ruleset(m.theory, t->name)) note(where + ": unknown rule set '" + t->name + "'");
          break;
        case Tactic::Kind::Subproblem:
          if (!theory(t->theory)) note(where + ": Subproblem theory '" + t->theory + "' not found");
          if (!spec(t->spec)) note(where + ": Subproblem spec " + spec_path_text(t->spec) + " not found");
          if (!method(t->name)) note(where + ": Subproblem method '" + t->name + "' not found");
          break;
        case Tactic::Kind::CheckPostcond:
          if (!spec(t->spec)) note(where + ": Check_Postcond spec " + spec_path_text(t->spec) + " not found");
          break;
        case Tactic::Kind::Take:
        case Tactic::Kind::Approximate:
          break;
      }
    }
  }
  return problems;
}

PreconditionCheck check_precondition(const Specification& spec, const Substitution& args,
                                     const Context& ctx, const Rewriter& rewriter) {
  for (const auto& i : spec.inputs)
    if (!args.count(i.name)) throw MissingArgument("missing argument for input '" + i.name + "'");
  PreconditionCheck out;
  for (const auto& p : spec.precond) {
    Term inst = substitute(p, args);
    out.instantiated.push_back(inst);
    switch (rewriter.eval_condition(ctx, inst)) {
      case Truth::True:
        break;
      case Truth::False:
        out.violated.push_back(inst);
        break;
      case Truth::Undecided:
        out.undecided.push_back(inst);
        break;
    }
  }
  if (!out.violated.empty())
    out.status = PreStatus::Violated;
  else if (!out.undecided.empty())
    out.status = PreStatus::Undecided;
  return out;
}

const std::vector<TypedName>& method_formals(const Method& m) { return m.program->formals; }

Substitution spec_inputs_from_formals(const Specification& spec, const Method& method, const Env& formals) {
  Substitution out;
  if (!method.inputs_via.empty()) {
    auto it = formals.find(method.inputs_via);
    if (it == formals.end()) throw MissingArgument("missing argument for '" + method.inputs_via + "'");
    auto items = list_elements(it->second);
    if (!items || items->size() != spec.inputs.size())
      throw MissingArgument("'" + method.inputs_via + "' must list " + std::to_string(spec.inputs.size()) +
                            " input value(s)");
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) out[spec.inputs[i].name] = (*items)[i];
    return out;
  }
  for (const auto& i : spec.inputs) {
    auto it = formals.find(i.name);
    if (it == formals.end()) throw MissingArgument("missing argument for input '" + i.name + "'");
    out[i.name] = it->second;
  }
  return out;
}

}  // namespace lucas
