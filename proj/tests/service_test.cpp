#include "oracles.hpp"

#include "lucas/service.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace lucas;
using oracle::bundled;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("lucas-test-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Json call(Service& svc, const std::string& method, const std::string& path, const Json& body = nullptr,
          std::map<std::string, std::string> query = {}, int* status = nullptr) {
  ApiResponse r = svc.handle(method, path, query, body.is_null() ? "" : body.dump());
  if (status) *status = r.status;
  return r.body;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Json open_diff(Service& svc, const std::string& id) {
  return call(svc, "POST", "/sessions", {{"method", "Differentiate"}, {"id", id}});
}

}  // namespace

TEST_CASE("creating a session") {
  TempDir dir("create");
  Service svc(bundled(), dir.path);
  int status = 0;
  Json r = call(svc, "POST", "/sessions", {{"method", "Differentiate"}}, {}, &status);
  CHECK(status == 200);
  CHECK(r["ok"] == true);
  std::string id = r["data"]["id"];
  CHECK(valid_session_id(id));
  CHECK(r["data"]["calc"]["entries"].empty());
  CHECK(r["data"]["calc"]["spec"] == Json({"differentiate", "function"}));
  CHECK(fs::exists(dir.path / (id + ".json")));
  Json again = call(svc, "POST", "/sessions", {{"method", "Differentiate"}, {"id", id}}, {}, &status);
  CHECK(status == 409);
  CHECK(again["ok"] == false);
}

TEST_CASE("errors come in one envelope") {
  TempDir dir("errors");
  Service svc(bundled(), dir.path);
  int status = 0;
  Json r = call(svc, "GET", "/sessions/unknown", nullptr, {}, &status);
  CHECK(status == 404);
  CHECK(r["ok"] == false);
  CHECK(r["error"]["code"] == "NotFound");
  CHECK(r["error"]["message"].is_string());

  r = call(svc, "POST", "/sessions", {{"method", "NoSuchMethod"}}, {}, &status);
  CHECK(status == 400);
  CHECK(r["error"]["code"] == "UnknownMethod");

  r = call(svc, "GET", "/nowhere", nullptr, {}, &status);
  CHECK(status == 404);

  ApiResponse raw = svc.handle("POST", "/sessions", {}, "{not json");
  CHECK(raw.status == 400);
  CHECK(raw.body["error"]["code"] == "BadRequest");

  open_diff(svc, "e1");
  call(svc, "POST", "/sessions/e1/step", {{"kind", "do_next"}});
  r = call(svc, "POST", "/sessions/e1/step", {{"kind", "formula"}, {"text", "sin(alpha) +"}}, {}, &status);
  CHECK(status == 400);
  CHECK(r["error"]["code"] == "ParseError");
  CHECK(r["error"]["position"] == 12);

  r = call(svc, "POST", "/sessions/e1/step",
           {{"kind", "tactic"}, {"tactic", {{"text", "Rewrite_Inst [(bdv, alpha)] diff_fraction"}}}}, {}, &status);
  CHECK(status == 409);
  CHECK(r["error"]["code"] == "NotApplicable");

  r = call(svc, "POST", "/sessions/e1/backtrack", {{"pos", 999}}, {}, &status);
  CHECK(status == 404);
  CHECK(r["error"]["code"] == "UnknownPosition");

  r = call(svc, "POST", "/sessions",
           {{"method", "Differentiate"}, {"args", {{"f", "x^2"}, {"v", "x"}}}, {"id", "short"}}, {}, &status);
  CHECK(status == 400);
  CHECK(r["error"]["code"] == "UnboundFormal");
}

TEST_CASE("stepping over the API") {
  TempDir dir("steps");
  Service svc(bundled(), dir.path);
  open_diff(svc, "d");
  Json last;
  std::vector<std::string> outcomes;
  for (int i = 0; i < 8; ++i) {
    Json r = call(svc, "POST", "/sessions/d/step", {{"kind", "do_next"}});
    REQUIRE(r["ok"] == true);
    outcomes.push_back(r["data"]["outcome"]);
    last = r["data"];
  }
  CHECK(last["tactic"]["kind"] == "Rewrite_Set");
  Session local = oracle::open_example("Differentiate");
  auto done = local.auto_complete();
  CHECK(last["formula"]["ascii"] == to_ascii(done.result.front().second));
  Json fin = call(svc, "POST", "/sessions/d/step", {{"kind", "do_next"}});
  CHECK(fin["data"]["outcome"] == "Finished");
  CHECK(fin["data"]["result"][0]["var"] == "f'");
  Json again = call(svc, "POST", "/sessions/d/step", {{"kind", "do_next"}});
  CHECK(again["error"]["code"] == "InvalidState");
}

TEST_CASE("formula and tactic input over the API") {
  TempDir dir("input");
  Service svc(bundled(), dir.path);
  open_diff(svc, "f");
  for (int i = 0; i < 4; ++i) call(svc, "POST", "/sessions/f/step", {{"kind", "do_next"}});
  Json r = call(svc, "POST", "/sessions/f/step",
                {{"kind", "formula"},
                 {"text", "8*r^2*(sin(alpha)*(-sin(alpha)) + cos(alpha)*cos(alpha)) - "
                          "4*r^2*2*sin(alpha)^(2-1)*d_d(alpha, sin(alpha))"}});
  CHECK(r["data"]["outcome"] == "Derived");
  CHECK(!r["data"]["derivation"].empty());
  r = call(svc, "POST", "/sessions/f/step",
           {{"kind", "tactic"}, {"tactic", {{"kind", "Rewrite_Inst"}, {"name", "diff_sin"}, {"inst", {{"bdv", "alpha"}}}}}});
  CHECK(r["data"]["outcome"] == "Located");
  r = call(svc, "POST", "/sessions/f/step", {{"kind", "auto"}});
  CHECK(r["data"]["outcome"] == "Finished");
}

TEST_CASE("reads do not change sessions") {
  TempDir dir("reads");
  Service svc(bundled(), dir.path);
  call(svc, "POST", "/sessions", {{"method", "Max"}, {"id", "m"}});
  for (int i = 0; i < 6; ++i) call(svc, "POST", "/sessions/m/step", {{"kind", "do_next"}});
  std::string before = file_bytes(dir.path / "m.json");
  Json s = call(svc, "GET", "/sessions/m");
  CHECK(s["ok"] == true);
  Json c = call(svc, "GET", "/sessions/m/calc", nullptr, {{"unfold", "3"}});
  CHECK(c["ok"] == true);
  CHECK(call(svc, "GET", "/sessions/m/context", nullptr, {{"pos", ""}})["ok"] == true);
  CHECK(call(svc, "GET", "/sessions/m/trace", nullptr, {{"pos", "1"}})["ok"] == true);
  CHECK(call(svc, "GET", "/sessions/m/knowledge", nullptr, {{"tactic", "Rewrite diff_sum"}})["ok"] == true);
  CHECK(call(svc, "GET", "/sessions")["data"] == Json({"m"}));
  CHECK(file_bytes(dir.path / "m.json") == before);
  CHECK(call(svc, "GET", "/sessions/m") == s);
}

TEST_CASE("folding in the calc view") {
  TempDir dir("fold");
  Service svc(bundled(), dir.path);
  call(svc, "POST", "/sessions", {{"method", "Max"}, {"id", "m"}});
  call(svc, "POST", "/sessions/m/step", {{"kind", "auto"}});
  Json folded = call(svc, "GET", "/sessions/m/calc")["data"];
  const Json* sub = nullptr;
  for (const auto& e : folded["entries"])
    if (e["kind"] == "subcalc") {
      sub = &e;
      break;
    }
  REQUIRE(sub);
  CHECK((*sub)["folded"] == true);
  CHECK(!(*sub)["calc"].contains("entries"));
  std::string pos = (*sub)["pos"];
  Json unfolded = call(svc, "GET", "/sessions/m/calc", nullptr, {{"unfold", pos}})["data"];
  bool found = false;
  for (const auto& e : unfolded["entries"])
    if (e["pos"] == pos) {
      found = true;
      CHECK(e["folded"] == false);
      CHECK(!e["calc"]["entries"].empty());
    }
  CHECK(found);
  // Folding is a view concern only.
  CHECK(call(svc, "GET", "/sessions/m/calc")["data"] == folded);
}

TEST_CASE("knowledge endpoints") {
  TempDir dir("knowledge");
  Service svc(bundled(), dir.path);
  Json specs = call(svc, "GET", "/knowledge/specs");
  CHECK(specs["data"].size() == bundled().specs().size());
  Json spec = call(svc, "GET", "/knowledge/specs/differentiate/function");
  CHECK(spec["data"]["precond"][0] == "is_differentiable(f)");
  int status = 0;
  call(svc, "GET", "/knowledge/specs/nothing", nullptr, {}, &status);
  CHECK(status == 404);
  CHECK(call(svc, "GET", "/knowledge/theories/Diff")["data"]["name"] == "Diff");
  CHECK(call(svc, "GET", "/knowledge/methods/Differentiate")["data"]["name"] == "Differentiate");
  CHECK(call(svc, "GET", "/knowledge/methods")["data"].size() == bundled().methods().size());
}

TEST_CASE("sessions survive a restart") {
  TempDir dir("restart");
  std::string calc_before;
  {
    Service svc(bundled(), dir.path);
    open_diff(svc, "keep");
    for (int i = 0; i < 3; ++i) call(svc, "POST", "/sessions/keep/step", {{"kind", "do_next"}});
    calc_before = call(svc, "GET", "/sessions/keep/calc").dump();
  }
  Service again(bundled(), dir.path);
  CHECK(call(again, "GET", "/sessions/keep/calc").dump() == calc_before);
  CHECK(call(again, "POST", "/sessions/keep/step", {{"kind", "do_next"}})["ok"] == true);
}

TEST_CASE("concurrent steps on one session are serialized") {
  TempDir dir("storm");
  Service svc(bundled(), dir.path);
  call(svc, "POST", "/sessions", {{"method", "Max"}, {"id", "storm"}});
  // Other sessions run alongside.
  for (int k = 0; k < 3; ++k) open_diff(svc, "side" + std::to_string(k));
  constexpr int kThreads = 8, kSteps = 3;
  std::vector<std::thread> pool;
  std::atomic<int> ok{0};
  for (int t = 0; t < kThreads; ++t)
    pool.emplace_back([&, t] {
      for (int i = 0; i < kSteps; ++i) {
        if (call(svc, "POST", "/sessions/storm/step", {{"kind", "do_next"}})["ok"] == true) ++ok;
        call(svc, "POST", "/sessions/side" + std::to_string(t % 3) + "/step", {{"kind", "do_next"}});
        call(svc, "GET", "/sessions/storm/calc");
      }
    });
  for (auto& th : pool) th.join();
  CHECK(ok == kThreads * kSteps);
  Json state = call(svc, "GET", "/sessions/storm")["data"];
  Json log = state["log"];
  CHECK(log.size() == static_cast<std::size_t>(kThreads * kSteps + 1));
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i]["snapshot"] == i);
  Session seq = oracle::open_example("Max");
  for (int i = 0; i < kThreads * kSteps; ++i) seq.do_next();
  CHECK(call(svc, "GET", "/sessions/storm/calc")["data"] == calc_view_json(seq.calc()));
}

TEST_CASE("session records") {
  TempDir dir("records");
  SessionFiles files(dir.path);
  Session s = oracle::open_example("Max");
  for (int i = 0; i < 7; ++i) s.do_next();
  files.save(s);
  Json record = files.record(s.id());
  CHECK(record["store_hash"] == bundled().hash());
  CHECK(record.contains("created"));
  CHECK(record.contains("updated"));
  // Byte-stable round trip.
  Session back = session_from_json(bundled(), record["session"]);
  CHECK(session_json(back).dump() == record["session"].dump());
  // Continuing after a reload matches continuing without one.
  Session loaded = files.load(bundled(), s.id());
  s.do_next();
  loaded.do_next();
  CHECK(calc_json(loaded.calc()).dump() == calc_json(s.calc()).dump());

  try {
    files.load(bundled(), "absent");
    FAIL("loaded a missing record");
  } catch (const PersistError& e) {
    CHECK(e.code() == "NotFound");
  }

  std::ofstream(dir.path / "broken.json") << "{\"session\": 3";
  try {
    files.load(bundled(), "broken");
    FAIL("loaded a corrupt record");
  } catch (const PersistError& e) {
    CHECK(e.code() == "CorruptRecord");
  }
}

TEST_CASE("records written against other knowledge are refused") {
  TempDir dir("hash");
  TempDir kdir("hash-knowledge");
  fs::remove_all(kdir.path);
  fs::copy(LUCAS_TEST_KNOWLEDGE, kdir.path, fs::copy_options::recursive);
  KnowledgeStore original = load_knowledge(kdir.path);
  SessionFiles files(dir.path);
  Session s = oracle::open_example("Differentiate", original);
  s.do_next();
  files.save(s);
  std::ofstream(kdir.path / "Reals" / "theory.kb", std::ios::app) << "fact: 0 < 1\n";
  KnowledgeStore edited = load_knowledge(kdir.path);
  CHECK(edited.hash() != original.hash());
  try {
    files.load(edited, s.id());
    FAIL("loaded across knowledge versions");
  } catch (const PersistError& e) {
    CHECK(e.code() == "StoreHashMismatch");
  }
  Service svc(edited, dir.path);
  int status = 0;
  Json r = call(svc, "GET", "/sessions/" + s.id(), nullptr, {}, &status);
  CHECK(status == 409);
  CHECK(r["error"]["code"] == "StoreHashMismatch");
}
