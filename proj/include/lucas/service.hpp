#pragma once

#include "lucas/persist.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace httplib {
class Server;
}

namespace lucas {

struct ApiResponse {
  int status = 200;
  Json body;
};

/// The HTTP JSON API over a knowledge store and a session directory. Every
/// reply is an envelope {"ok": true, "data": ...} or
/// {"ok": false, "error": {"code", "message", "position"?}}.
class Service {
 public:
  Service(const KnowledgeStore& store, std::filesystem::path data_dir);

  /// Transport-independent dispatch; `query` holds decoded parameters.
  ApiResponse handle(const std::string& method, const std::string& path,
                     const std::map<std::string, std::string>& query, const std::string& body);

  /// Routes every endpoint of the API to handle().
  void install(httplib::Server& server);

 private:
  struct Slot {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };

  std::shared_ptr<Slot> slot(const std::string& id);
  std::string fresh_id();

  ApiResponse create_session(const Json& req);
  ApiResponse session_get(const std::string& id, const std::string& what,
                          const std::map<std::string, std::string>& query);
  ApiResponse session_post(const std::string& id, const std::string& what, const Json& req);
  ApiResponse knowledge_get(const std::vector<std::string>& parts);

  const KnowledgeStore& store_;
  SessionFiles files_;
  std::mutex slots_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::uint64_t counter_ = 0;
};

Json ok_envelope(Json data);
Json error_envelope(const std::string& code, const std::string& message, std::optional<Json> position = {});

/// Runs the service until interrupted. Returns the process exit code.
int serve(const KnowledgeStore& store, const std::filesystem::path& data_dir, const std::string& host, int port);

}  // namespace lucas
