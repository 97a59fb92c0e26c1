#include "lucas/repl.hpp"
#include "lucas/service.hpp"
#include "lucas/syntax.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lucas: step-wise calculations driven by programs"};
  app.require_subcommand(1);

  std::string knowledge = env_or("LUCAS_KNOWLEDGE", LUCAS_DEFAULT_KNOWLEDGE);
  std::string data = env_or("LUCAS_DATA", "sessions");
  std::string host = "127.0.0.1";
  int port = std::atoi(env_or("LUCAS_PORT", "8080").c_str());
  app.add_option("--knowledge", knowledge, "knowledge directory (env LUCAS_KNOWLEDGE)");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP JSON API");
  serve_cmd->add_option("--port", port, "port (env LUCAS_PORT)");
  serve_cmd->add_option("--host", host, "interface to bind");
  serve_cmd->add_option("--data", data, "session directory (env LUCAS_DATA)");

  auto* repl_cmd = app.add_subcommand("repl", "interactive calculation on stdin/stdout");
  std::string method = "Differentiate";
  std::vector<std::string> spec_parts;
  std::vector<std::string> arg_texts;
  bool ascii = false;
  bool echo = false;
  repl_cmd->add_option("--method", method, "method to run");
  repl_cmd->add_option("--spec", spec_parts, "specification path (default: the method's)")->delimiter(',');
  repl_cmd->add_option("--arg", arg_texts, "formal binding name=term (default: the method's examples)");
  repl_cmd->add_flag("--ascii", ascii, "ascii rendering");
  repl_cmd->add_flag("--echo", echo, "echo commands read from a script");

  auto* check_cmd = app.add_subcommand("check", "load the knowledge and report unresolved references");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    lucas::KnowledgeStore store = lucas::load_knowledge(knowledge);
    if (check_cmd->parsed()) {
      auto problems = store.audit();
      for (const auto& p : problems) std::cerr << p << "\n";
      std::cout << store.theories().size() << " theories, " << store.specs().size() << " specs, "
                << store.methods().size() << " methods, hash " << store.hash() << "\n";
      return problems.empty() ? 0 : 1;
    }
    if (serve_cmd->parsed()) return lucas::serve(store, data, host, port);

    const lucas::Method* m = store.method(method);
    if (!m) {
      std::cerr << "error: unknown method " << method << "\n";
      return 1;
    }
    lucas::Env args;
    if (arg_texts.empty()) {
      for (const auto& [k, v] : m->examples) args[k] = v;
    }
    for (const auto& a : arg_texts) {
      auto eq = a.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --arg expects name=term, got " << a << "\n";
        return 1;
      }
      args[a.substr(0, eq)] = lucas::parse_term(a.substr(eq + 1));
    }
    lucas::SpecPath spec = spec_parts.empty() ? m->spec : lucas::SpecPath(spec_parts);
    lucas::Session session = lucas::open_session(store, spec, method, args, "repl");
    lucas::ReplOptions opt;
    opt.unicode = !ascii;
    opt.echo = echo;
    return lucas::run_repl(session, std::cin, std::cout, opt);
  } catch (const lucas::LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lucas::SessionError& e) {
    std::cerr << "error " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const lucas::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lucas::PreconditionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
