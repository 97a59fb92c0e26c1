#pragma once

#include "lucas/context.hpp"
#include "lucas/program.hpp"
#include "lucas/rewrite.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lucas {

using SpecPath = std::vector<std::string>;

struct Specification {
  SpecPath path;
  std::string theory;
  std::vector<TypedName> inputs;
  std::vector<Term> precond;
  std::vector<TypedName> outputs;
  std::optional<Term> postcond;
  std::vector<Term> props;
  std::vector<std::string> prop_vars;

  std::vector<std::string> input_names() const;
  std::vector<std::string> output_names() const;
};

struct Theory {
  std::string name;
  std::string parent;
  std::map<std::string, std::size_t> symbols;
  std::vector<Term> facts;
  std::set<std::string> schematic;
  std::string condition_ruleset;
  std::vector<RulePtr> rules;
  std::map<std::string, RuleSetPtr> rulesets;
};

/// A method is a program together with the theory it runs in and the
/// specification it solves. Stub methods carry a fixed result instead of
/// an authored program; their program is synthesized from it.
struct Method {
  std::string name;
  std::string theory;
  SpecPath spec;
  ProgramPtr program;
  std::string program_file;
  std::string check_ruleset;
  /// Spec inputs are the elements of this list-valued formal.
  std::string inputs_via;
  std::optional<Term> stub_result;
  std::vector<Term> exports;
  std::string approximate;
  std::vector<std::pair<std::string, Term>> examples;

  bool is_stub() const { return stub_result.has_value(); }
};

class LoadError : public std::runtime_error {
 public:
  LoadError(std::string file, std::size_t line, const std::string& message);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class KnowledgeStore {
 public:
  const std::map<std::string, Theory>& theories() const { return theories_; }
  const std::map<SpecPath, Specification>& specs() const { return specs_; }
  const std::map<std::string, Method>& methods() const { return methods_; }
  /// Content hash of the files the store was loaded from.
  const std::string& hash() const { return hash_; }

  const Theory* theory(const std::string& name) const;
  const Specification* spec(const SpecPath& path) const;
  const Method* method(const std::string& name) const;

  /// Lookup along the theory's parent chain.
  RulePtr rule(const std::string& theory, const std::string& name) const;
  RuleSetPtr ruleset(const std::string& theory, const std::string& name) const;
  std::vector<Term> theory_facts(const std::string& theory) const;
  std::vector<std::string> theory_chain(const std::string& theory) const;
  /// Every rule visible in the theory, nearest definition first.
  std::vector<RulePtr> visible_rules(const std::string& theory) const;
  Rewriter rewriter(const std::string& theory) const;

  /// Every cross reference that must resolve; empty when the store is closed.
  std::vector<std::string> audit() const;

 private:
  friend KnowledgeStore load_knowledge(const std::filesystem::path& dir);
  std::map<std::string, Theory> theories_;
  std::map<SpecPath, Specification> specs_;
  std::map<std::string, Method> methods_;
  std::string hash_;
};

/// Loads every theory directory below `dir`; throws LoadError naming the
/// file and line of the first problem.
KnowledgeStore load_knowledge(const std::filesystem::path& dir);

/// FNV-1a over the sorted relative paths and contents of the knowledge files.
std::string knowledge_hash(const std::filesystem::path& dir);

std::string spec_path_text(const SpecPath& path);

enum class PreStatus { Satisfied, Violated, Undecided };
std::string pre_status_name(PreStatus s);

struct PreconditionCheck {
  PreStatus status = PreStatus::Satisfied;
  std::vector<Term> instantiated;
  std::vector<Term> violated;
  std::vector<Term> undecided;
};

class MissingArgument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PreconditionCheck check_precondition(const Specification& spec, const Substitution& args,
                                     const Context& ctx, const Rewriter& rewriter);

/// Binds the spec inputs from the method's formals.
Substitution spec_inputs_from_formals(const Specification& spec, const Method& method,
                                      const Env& formals);

/// Formal parameters of the method's program.
const std::vector<TypedName>& method_formals(const Method& m);

}  // namespace lucas
