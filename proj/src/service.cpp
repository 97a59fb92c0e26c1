#include "lucas/service.hpp"

#include "lucas/syntax.hpp"

#include <httplib.h>

#include <atomic>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace lucas {

namespace {

/// Request-level failure mapped to an error envelope.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::optional<Json> position;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

SpecPath spec_from_json(const Json& j) {
  if (j.is_array()) return j.get<SpecPath>();
  SpecPath out;
  for (auto& part : split(j.get<std::string>(), ',')) {
    auto b = part.find_first_not_of(' ');
    auto e = part.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
  }
  return out;
}

Position position_param(const std::string& text) {
  try {
    return parse_position(text);
  } catch (const std::exception& e) {
    throw ApiError{400, "BadRequest", e.what(), text};
  }
}

int status_for(const std::string& code) {
  if (code == "NotFound" || code == "UnknownPosition") return 404;
  if (code == "NotApplicable" || code == "InvalidState" || code == "StoreHashMismatch") return 409;
  if (code == "CorruptRecord" || code == "Internal") return 500;
  return 400;
}

Json session_summary(const Session& s) {
  Json log = Json::array();
  for (std::size_t i = 0; i < s.step_log().size(); ++i) {
    const LogEntry& e = s.step_log()[i];
    log.push_back({{"index", i},
                   {"trigger", e.trigger},
                   {"outcome", e.outcome},
                   {"snapshot", e.snapshot ? Json(*e.snapshot) : Json(nullptr)}});
  }
  return {{"id", s.id()},
          {"finished", s.finished()},
          {"detached", s.detached()},
          {"at", s.at()},
          {"cursor", position_text(s.cursor())},
          {"depth", s.frames().size()},
          {"result", result_json(s.result())},
          {"log", log}};
}

}  // namespace

Json ok_envelope(Json data) { return {{"ok", true}, {"data", std::move(data)}}; }

Json error_envelope(const std::string& code, const std::string& message, std::optional<Json> position) {
  Json err = {{"code", code}, {"message", message}};
  if (position) err["position"] = *position;
  return {{"ok", false}, {"error", err}};
}

Service::Service(const KnowledgeStore& store, std::filesystem::path data_dir)
    : store_(store), files_(std::move(data_dir)) {}

std::string Service::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard<std::mutex> lock(slots_mutex_);
  for (;;) {
    std::ostringstream id;
    id << "s" << std::hex << std::setw(12) << std::setfill('0') << (rng() & 0xffffffffffffULL);
    if (!slots_.count(id.str()) && !files_.exists(id.str())) return id.str();
  }
}

std::shared_ptr<Service::Slot> Service::slot(const std::string& id) {
  if (!valid_session_id(id)) throw ApiError{404, "NotFound", "no session '" + id + "'", std::nullopt};
  std::shared_ptr<Slot> s;
  {
    std::lock_guard<std::mutex> lock(slots_mutex_);
    auto& entry = slots_[id];
    if (!entry) entry = std::make_shared<Slot>();
    s = entry;
  }
  std::lock_guard<std::mutex> lock(s->mutex);
  if (!s->session) {
    if (!files_.exists(id)) throw ApiError{404, "NotFound", "no session '" + id + "'", std::nullopt};
    s->session = std::make_unique<Session>(files_.load(store_, id));
  }
  return s;
}

ApiResponse Service::create_session(const Json& req) {
  if (!req.is_object() || !req.contains("method"))
    throw ApiError{400, "BadRequest", "expected {\"method\": ..., \"spec\": ..., \"args\": {...}}", std::nullopt};
  std::string method = req.at("method").get<std::string>();
  const Method* m = store_.method(method);
  if (!m) throw ApiError{400, "UnknownMethod", "unknown method " + method, std::nullopt};
  SpecPath spec = req.contains("spec") ? spec_from_json(req.at("spec")) : m->spec;
  Env args;
  if (req.contains("args")) {
    for (const auto& [k, v] : req.at("args").items()) args[k] = term_from_json(v);
  } else {
    for (const auto& [k, v] : m->examples) args[k] = v;
  }
  std::string id = req.contains("id") ? req.at("id").get<std::string>() : fresh_id();
  if (!valid_session_id(id)) throw ApiError{400, "BadRequest", "invalid session id '" + id + "'", std::nullopt};
  auto session = std::make_unique<Session>(open_session(store_, spec, method, args, id));
  std::lock_guard<std::mutex> lock(slots_mutex_);
  if (slots_.count(id) || files_.exists(id))
    throw ApiError{409, "Conflict", "session '" + id + "' already exists", std::nullopt};
  files_.save(*session);
  Json data = session_summary(*session);
  data["calc"] = calc_view_json(session->calc());
  auto s = std::make_shared<Slot>();
  s->session = std::move(session);
  slots_[id] = s;
  return {200, ok_envelope(data)};
}

ApiResponse Service::session_get(const std::string& id, const std::string& what,
                                 const std::map<std::string, std::string>& query) {
  auto s = slot(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  const Session& session = *s->session;
  auto param = [&](const std::string& key) {
    auto it = query.find(key);
    return it == query.end() ? std::string() : it->second;
  };
  if (what.empty()) return {200, ok_envelope(session_summary(session))};
  if (what == "calc") {
    std::set<Position> unfold;
    for (const auto& p : split(param("unfold"), ',')) unfold.insert(position_param(p));
    return {200, ok_envelope(calc_view_json(session.calc(), unfold))};
  }
  if (what == "context") {
    std::string pos = param("pos");
    return {200, ok_envelope({{"pos", pos}, {"facts", facts_json(session.context_at(position_param(pos)))}})};
  }
  if (what == "trace") {
    std::string pos = param("pos");
    return {200, ok_envelope({{"pos", pos}, {"trace", trace_json(session.trace_at(position_param(pos)))}})};
  }
  if (what == "knowledge") {
    KnowledgeReport r = session.knowledge(parse_tactic(param("tactic")));
    return {200, ok_envelope({{"kind", r.kind}, {"name", r.name}, {"theory", r.theory}, {"text", r.text}})};
  }
  throw ApiError{404, "NotFound", "no endpoint " + what, std::nullopt};
}

ApiResponse Service::session_post(const std::string& id, const std::string& what, const Json& req) {
  auto s = slot(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  Session& session = *s->session;
  Json data;
  if (what == "step") {
    std::string kind = req.value("kind", "do_next");
    StepOutcome out;
    if (kind == "do_next") {
      out = session.do_next();
    } else if (kind == "tactic") {
      out = session.input_tactic(tactic_from_json(req.at("tactic")));
    } else if (kind == "formula") {
      out = session.input_formula(parse_term(req.at("text").get<std::string>()));
    } else if (kind == "auto") {
      out = session.auto_complete();
    } else {
      throw ApiError{400, "BadRequest", "unknown step kind '" + kind + "'", std::nullopt};
    }
    data = outcome_json(out);
  } else if (what == "backtrack") {
    const Json& pos = req.at("pos");
    std::size_t index = pos.is_string() ? std::stoul(pos.get<std::string>()) : pos.get<std::size_t>();
    session.backtrack(index);
    data = {{"at", session.at()}};
  } else {
    throw ApiError{404, "NotFound", "no endpoint " + what, std::nullopt};
  }
  files_.save(session);
  data["session"] = session_summary(session);
  data["calc"] = calc_view_json(session.calc());
  return {200, ok_envelope(data)};
}

ApiResponse Service::knowledge_get(const std::vector<std::string>& parts) {
  // parts[0] == "knowledge"
  if (parts.size() < 2) throw ApiError{404, "NotFound", "expected /knowledge/specs|theories|methods", std::nullopt};
  const std::string& kind = parts[1];
  std::vector<std::string> rest(parts.begin() + 2, parts.end());
  if (kind == "specs") {
    if (rest.empty()) {
      Json out = Json::array();
      for (const auto& [path, spec] : store_.specs()) out.push_back(spec_json(spec));
      return {200, ok_envelope(out)};
    }
    const Specification* s = store_.spec(rest);
    if (!s) throw ApiError{404, "NotFound", "no spec " + spec_path_text(rest), std::nullopt};
    return {200, ok_envelope(spec_json(*s))};
  }
  if (kind == "theories") {
    if (rest.empty()) {
      Json out = Json::array();
      for (const auto& [name, th] : store_.theories()) out.push_back(theory_json(store_, th));
      return {200, ok_envelope(out)};
    }
    const Theory* t = rest.size() == 1 ? store_.theory(rest[0]) : nullptr;
    if (!t) throw ApiError{404, "NotFound", "no theory " + rest[0], std::nullopt};
    return {200, ok_envelope(theory_json(store_, *t))};
  }
  if (kind == "methods") {
    if (rest.empty()) {
      Json out = Json::array();
      for (const auto& [name, m] : store_.methods()) out.push_back(method_json(m));
      return {200, ok_envelope(out)};
    }
    const Method* m = rest.size() == 1 ? store_.method(rest[0]) : nullptr;
    if (!m) throw ApiError{404, "NotFound", "no method " + rest[0], std::nullopt};
    return {200, ok_envelope(method_json(*m))};
  }
  throw ApiError{404, "NotFound", "no knowledge kind '" + kind + "'", std::nullopt};
}

ApiResponse Service::handle(const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& query, const std::string& body) {
  auto fail = [](int status, const std::string& code, const std::string& message,
                 std::optional<Json> position = std::nullopt) {
    return ApiResponse{status, error_envelope(code, message, std::move(position))};
  };
  try {
    std::vector<std::string> parts = split(path, '/');
    Json req = Json::object();
    if (method == "POST" && !body.empty()) {
      req = Json::parse(body, nullptr, false);
      if (req.is_discarded()) return fail(400, "BadRequest", "request body is not JSON");
    }
    if (!parts.empty() && parts[0] == "knowledge" && method == "GET") return knowledge_get(parts);
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1 && method == "POST") return create_session(req);
      if (parts.size() == 1 && method == "GET") return {200, ok_envelope(files_.ids())};
      if (parts.size() <= 3) {
        std::string what = parts.size() == 3 ? parts[2] : "";
        if (method == "GET") return session_get(parts[1], what, query);
        if (method == "POST" && !what.empty()) return session_post(parts[1], what, req);
      }
    }
    return fail(404, "NotFound", "no endpoint " + method + " " + path);
  } catch (const ApiError& e) {
    return fail(e.status, e.code, e.message, e.position);
  } catch (const SessionError& e) {
    return fail(status_for(e.code()), e.code(), e.what());
  } catch (const PersistError& e) {
    return fail(status_for(e.code()), e.code(), e.what());
  } catch (const ParseError& e) {
    return fail(400, "ParseError", e.what(), Json(e.offset()));
  } catch (const PreconditionViolated& e) {
    return fail(400, "PreconditionViolated", e.what());
  } catch (const Json::exception& e) {
    return fail(400, "BadRequest", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(400, "BadRequest", e.what());
  } catch (const std::exception& e) {
    return fail(500, "Internal", e.what());
  }
}

void Service::install(httplib::Server& server) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    ApiResponse r = handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(R"(/.*)", route);
  server.Post(R"(/.*)", route);
}

namespace {
std::atomic<httplib::Server*> running{nullptr};
extern "C" void stop_server(int) {
  if (auto* s = running.load()) s->stop();
}
}  // namespace

int serve(const KnowledgeStore& store, const std::filesystem::path& data_dir, const std::string& host, int port) {
  Service service(store, data_dir);
  httplib::Server server;
  service.install(server);
  running = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  std::cerr << "listening on " << host << ":" << port << "\n";
  bool ok = server.listen(host, port);
  running = nullptr;
  if (!ok) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lucas
