#include "lucas/persist.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace lucas {

namespace fs = std::filesystem;

namespace {

constexpr int kFormat = 1;

std::string now_text() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool valid_session_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
  return true;
}

Json session_json(const Session& s) {
  Json log = Json::array();
  for (const auto& e : s.step_log())
    log.push_back({{"trigger", e.trigger},
                   {"outcome", e.outcome},
                   {"snapshot", e.snapshot ? Json(*e.snapshot) : Json(nullptr)}});
  Json snaps = Json::array();
  for (const auto& snap : s.snapshots()) snaps.push_back(snapshot_json(snap));
  return {{"format", kFormat},
          {"id", s.id()},
          {"store_hash", s.store().hash()},
          {"at", s.at()},
          {"current", snapshot_json(s.current())},
          {"log", log},
          {"snapshots", snaps}};
}

Session session_from_json(const KnowledgeStore& store, const Json& j) {
  std::string hash;
  try {
    hash = j.at("store_hash").get<std::string>();
  } catch (const std::exception& e) {
    throw PersistError("CorruptRecord", std::string("session record: ") + e.what());
  }
  if (hash != store.hash())
    throw PersistError("StoreHashMismatch", "session was saved against knowledge " + hash +
                                                 ", the loaded knowledge is " + store.hash());
  try {
    if (j.at("format").get<int>() != kFormat) throw std::invalid_argument("unsupported record format");
    std::vector<LogEntry> log;
    for (const auto& e : j.at("log")) {
      LogEntry l{e.at("trigger").get<std::string>(), e.at("outcome").get<std::string>(), std::nullopt};
      if (!e.at("snapshot").is_null()) l.snapshot = e.at("snapshot").get<std::size_t>();
      log.push_back(std::move(l));
    }
    std::vector<Snapshot> snaps;
    for (const auto& s : j.at("snapshots")) snaps.push_back(snapshot_from_json(s));
    return Session::restore(store, j.at("id").get<std::string>(), snapshot_from_json(j.at("current")),
                            j.at("at").get<std::size_t>(), std::move(log), std::move(snaps));
  } catch (const PersistError&) {
    throw;
  } catch (const std::exception& e) {
    throw PersistError("CorruptRecord", std::string("session record: ") + e.what());
  }
}

SessionFiles::SessionFiles(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path SessionFiles::path_of(const std::string& id) const { return dir_ / (id + ".json"); }

bool SessionFiles::exists(const std::string& id) const { return valid_session_id(id) && fs::exists(path_of(id)); }

std::vector<std::string> SessionFiles::ids() const {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

Json SessionFiles::record(const std::string& id) const {
  if (!exists(id)) throw PersistError("NotFound", "no session '" + id + "'");
  std::ifstream in(path_of(id));
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("session"))
    throw PersistError("CorruptRecord", "session '" + id + "' is not a valid record");
  return j;
}

void SessionFiles::save(const Session& s) const {
  if (!valid_session_id(s.id())) throw PersistError("NotFound", "invalid session id '" + s.id() + "'");
  std::string now = now_text();
  std::string created = now;
  if (exists(s.id())) {
    try {
      created = record(s.id()).at("created").get<std::string>();
    } catch (const std::exception&) {
    }
  }
  Json rec = {{"id", s.id()},
              {"created", created},
              {"updated", now},
              {"store_hash", s.store().hash()},
              {"session", session_json(s)}};
  fs::path target = path_of(s.id());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << rec.dump() << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

Session SessionFiles::load(const KnowledgeStore& store, const std::string& id) const {
  return session_from_json(store, record(id).at("session"));
}

}  // namespace lucas
