#pragma once

// JSON-over-HTTP access to proof sessions. `Service::handle` is transport
// independent; `HttpServer` binds it to a socket.
//
// All routes live under /api/v1:
//   POST /sessions                 {givens, goal, labels?}          -> 201 {id, view}
//   POST /sessions/import          session XML                      -> 201 {id, view}
//   GET  /sessions                                                  -> {sessions: [id]}
//   GET  /sessions/{id}                                             -> {id, view}
//   GET  /sessions/{id}/steps?goal=G[&given=H]                      -> {templates}
//   POST /sessions/{id}/steps      {expected_version?, goal, step}  -> {view}
//   POST /sessions/{id}/undo|redo  {expected_version?}              -> {view}
//   POST /sessions/{id}/auto       {expected_version?, goal, run?, max_steps?} -> {view, applied}
//   GET  /sessions/{id}/equivalences?goal=G[&given=H][&path=P]      -> {formula, options}
//   GET  /sessions/{id}/export?format=xml|html                      -> document
//   POST /parse                    {formula}                        -> {ascii, unicode, html}
//   GET  /rules                                                     -> {rules}

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "setproof/session.hpp"

namespace setproof {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Sessions by id. With a state directory every mutation is followed by an
/// atomic rewrite of <dir>/<id>.xml, and construction reloads that directory.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> state_dir = std::nullopt);

  std::string add(Session session);
  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const;

  /// Runs `fn` with the session locked; persists afterwards when `mutates`.
  /// Returns false when no such session exists.
  template <typename Fn>
  bool with(const std::string& id, bool mutates, Fn&& fn) {
    auto entry = find(id);
    if (!entry) return false;
    std::lock_guard lock(entry->mutex);
    fn(entry->session);
    if (mutates) persist(id, entry->session);
    return true;
  }

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex mutex;
    Session session;
  };
  std::shared_ptr<Entry> find(const std::string& id) const;
  void persist(const std::string& id, const Session& s) const;
  std::string new_id();

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex rng_mutex_;
};

class Service {
 public:
  explicit Service(std::optional<std::filesystem::path> state_dir = std::nullopt) : store_(std::move(state_dir)) {}

  HttpResponse handle(const HttpRequest& request);
  SessionStore& store() { return store_; }

 private:
  SessionStore store_;
};

class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace setproof
