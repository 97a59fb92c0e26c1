#pragma once

#include "lucas/interpreter.hpp"
#include "lucas/json_io.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace lucas {

/// Codes: NotFound, CorruptRecord, StoreHashMismatch.
class PersistError : public std::runtime_error {
 public:
  PersistError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// The session part of a record: state, step log and snapshots.
Json session_json(const Session& s);
/// Throws StoreHashMismatch when the record was written against other knowledge.
Session session_from_json(const KnowledgeStore& store, const Json& j);

/// One JSON file per session below a directory.
class SessionFiles {
 public:
  explicit SessionFiles(std::filesystem::path dir);

  /// Writes atomically (temporary file, then rename). Keeps the creation
  /// time of an existing record.
  void save(const Session& s) const;
  Session load(const KnowledgeStore& store, const std::string& id) const;
  /// The record exactly as stored.
  Json record(const std::string& id) const;
  bool exists(const std::string& id) const;
  std::vector<std::string> ids() const;
  std::filesystem::path path_of(const std::string& id) const;

 private:
  std::filesystem::path dir_;
};

bool valid_session_id(const std::string& id);

}  // namespace lucas
