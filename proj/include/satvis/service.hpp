#pragma once

#include <chrono>
#include <cstddef>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stop_token>
#include <string>
#include <unordered_map>

#include "satvis/derivation.hpp"
#include "satvis/layout.hpp"
#include "satvis/transformations.hpp"

namespace satvis {

struct ServiceConfig {
  std::size_t max_log_bytes = 64u << 20;
  std::size_t max_sessions = 32;
  std::size_t max_total_bytes = 512u << 20;
  std::string falsum = std::string(kDefaultFalsum);
  LayoutOptions layout;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// A parsed log held in memory. The derivation never changes; the current
/// view is replaced as a whole, so readers always see one complete view.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const Derivation> derivation, std::size_t footprint);

  const std::string& id() const { return id_; }
  const std::shared_ptr<const Derivation>& derivation() const { return derivation_; }
  std::size_t footprint() const { return footprint_; }
  std::chrono::system_clock::time_point created_at() const { return created_at_; }

  std::shared_ptr<const GraphView> view() const;

  /// Layout of the current view, computed on first use and cached by the
  /// view's provenance. Returns the view it belongs to alongside it.
  std::pair<std::shared_ptr<const GraphView>, std::shared_ptr<const Layout>> view_with_layout(
      const LayoutOptions& options);

  /// Layout of a specific view, shared through the same cache.
  std::shared_ptr<const Layout> layout_for(const GraphView& view, const LayoutOptions& options);

  /// Applies fn to the current view and installs the result. Writers are
  /// serialized; in-flight layouts of the replaced view are cancelled.
  template <typename Fn>
  std::shared_ptr<const GraphView> update(Fn&& fn);

  /// Pins (or unpins) highlights; they apply to every later view too.
  std::shared_ptr<const GraphView> set_highlight(const IdSet& ids, bool remove);

 private:
  std::shared_ptr<const Layout> cached_layout(const GraphView& view, const LayoutOptions& options,
                                              std::stop_token stop);
  void install(GraphView next);

  std::string id_;
  std::shared_ptr<const Derivation> derivation_;
  std::size_t footprint_;
  std::chrono::system_clock::time_point created_at_;

  std::mutex writer_;
  mutable std::shared_mutex view_mutex_;
  std::shared_ptr<const GraphView> view_;
  std::stop_source layout_stop_;
  IdSet pinned_;

  std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const Layout>> layouts_;
};

template <typename Fn>
std::shared_ptr<const GraphView> Session::update(Fn&& fn) {
  std::lock_guard lock(writer_);
  GraphView next = fn(*view());
  install(std::move(next));
  return view();
}

/// In-memory sessions with least-recently-used eviction by count and by
/// aggregate footprint.
class SessionStore {
 public:
  explicit SessionStore(std::size_t max_sessions, std::size_t max_total_bytes)
      : max_sessions_(max_sessions), max_total_bytes_(max_total_bytes) {}

  std::shared_ptr<Session> create(std::shared_ptr<const Derivation> derivation, std::size_t footprint);
  /// nullptr when unknown or evicted. Marks the session as recently used.
  std::shared_ptr<Session> find(const std::string& id);
  std::size_t size() const;

 private:
  void evict_locked(const std::string& keep);

  std::size_t max_sessions_;
  std::size_t max_total_bytes_;
  mutable std::mutex mutex_;
  std::list<std::shared_ptr<Session>> lru_;  // most recent first
  std::unordered_map<std::string, std::list<std::shared_ptr<Session>>::iterator> index_;
  std::size_t total_bytes_ = 0;
};

/// Transport-independent request handling for the HTTP API documented in
/// docs/api.md. Thread safe.
class Service {
 public:
  explicit Service(ServiceConfig config = {});

  HttpResponse handle(const HttpRequest& request);

  const ServiceConfig& config() const { return config_; }
  SessionStore& sessions() { return sessions_; }

 private:
  HttpResponse create_session(const HttpRequest& request);
  HttpResponse graph(Session& session);
  HttpResponse node(Session& session, const std::string& raw_id);
  HttpResponse transform(Session& session, const HttpRequest& request);
  HttpResponse search(Session& session, const HttpRequest& request);
  HttpResponse highlight(Session& session, const HttpRequest& request);
  HttpResponse state(Session& session, const HttpRequest& request);

  ServiceConfig config_;
  SessionStore sessions_;
};

/// cpp-httplib front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port, or -1. Port 0 picks a free port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace satvis
