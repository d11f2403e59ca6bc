#pragma once

// HTTP-shaped facade over sessions. Transport independent: the server binary
// and the tests both go through Service::handle.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "circlet/session.hpp"

namespace circlet {

struct Response {
  int status = 200;
  json body;
};

class Service {
 public:
  /// Steps a single /tactic request may take before answering with a
  /// continuation token.
  explicit Service(std::size_t step_cap = 5000) : step_cap_(step_cap) {}

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body);

  /// Holds the session's request lock (a concurrent request then gets 409).
  std::optional<std::unique_lock<std::mutex>> try_hold(const std::string& id);
  std::size_t session_count() const;

 private:
  struct Entry {
    std::mutex mu;
    Session session;
    explicit Entry(Session s) : session(std::move(s)) {}
  };

  Response create(const json& body);
  Response dispatch(Entry& e, const std::string& id, const std::string& method, const std::string& rest,
                    const std::map<std::string, std::string>& query, const json& body);
  json state(const std::string& id, const Session& s) const;
  std::string continuation(const std::string& id, const Session& s) const;
  std::shared_ptr<Entry> find(const std::string& id) const;

  std::size_t step_cap_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace circlet
