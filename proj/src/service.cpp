#include "satvis/service.hpp"

#include <charconv>
#include <random>
#include <sstream>

#include <json.hpp>

#include "satvis/errors.hpp"
#include "satvis/log_parser.hpp"
#include "satvis/search.hpp"
#include "satvis/serialization.hpp"

namespace satvis {

using nlohmann::json;

namespace {

constexpr std::size_t kLayoutCacheLimit = 16;

std::string provenance_key(const GraphView& view) {
  std::string key;
  for (const auto& step : view.provenance) {
    key += step.op;
    key += ':';
    for (ClauseId id : step.ids) {
      key += std::to_string(id);
      key += ',';
    }
    key += ';';
  }
  return key;
}

IdSet visible_part(const IdSet& ids, const IdSet& visible) {
  IdSet out;
  for (ClauseId id : ids) {
    if (visible.contains(id)) out.insert(id);
  }
  return out;
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  std::ostringstream out;
  out << std::hex << rng() << rng();
  return out.str();
}

HttpResponse json_response(int status, const json& body) {
  return {status, body.dump(), "application/json"};
}

HttpResponse error(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

std::optional<ClauseId> parse_clause_id(std::string_view text) {
  ClauseId value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return value;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

// Body field "ids" as a set; nullopt when absent.
std::optional<IdSet> body_ids(const json& body) {
  auto it = body.find("ids");
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw std::invalid_argument("'ids' must be an array");
  IdSet ids;
  for (const auto& v : *it) {
    if (!v.is_number_unsigned() || v.get<ClauseId>() == 0) throw std::invalid_argument("'ids' must hold clause ids");
    ids.insert(v.get<ClauseId>());
  }
  return ids;
}

json id_json(const IdSet& ids) { return json(std::vector<ClauseId>(ids.begin(), ids.end())); }

json nullable(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------
// Session

Session::Session(std::string id, std::shared_ptr<const Derivation> derivation, std::size_t footprint)
    : id_(std::move(id)),
      derivation_(std::move(derivation)),
      footprint_(footprint),
      created_at_(std::chrono::system_clock::now()),
      view_(std::make_shared<const GraphView>(full_view(derivation_))) {}

std::shared_ptr<const GraphView> Session::view() const {
  std::shared_lock lock(view_mutex_);
  return view_;
}

std::shared_ptr<const Layout> Session::cached_layout(const GraphView& view, const LayoutOptions& options,
                                                     std::stop_token stop) {
  std::string key = provenance_key(view);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = layouts_.find(key); it != layouts_.end()) return it->second;
  }
  auto computed = std::make_shared<const Layout>(layout(view, options, stop));
  std::lock_guard lock(cache_mutex_);
  if (layouts_.size() >= kLayoutCacheLimit) layouts_.clear();
  return layouts_.try_emplace(key, std::move(computed)).first->second;
}

std::shared_ptr<const Layout> Session::layout_for(const GraphView& view, const LayoutOptions& options) {
  return cached_layout(view, options, {});
}

std::pair<std::shared_ptr<const GraphView>, std::shared_ptr<const Layout>> Session::view_with_layout(
    const LayoutOptions& options) {
  for (;;) {
    std::shared_ptr<const GraphView> current;
    std::stop_token stop;
    {
      std::shared_lock lock(view_mutex_);
      current = view_;
      stop = layout_stop_.get_token();
    }
    try {
      return {current, cached_layout(*current, options, stop)};
    } catch (const CancelledError&) {
      // superseded by a newer view; lay that one out instead
    }
  }
}

void Session::install(GraphView next) {
  next.highlighted = visible_part(pinned_, next.visible);
  auto fresh = std::make_shared<const GraphView>(std::move(next));
  std::unique_lock lock(view_mutex_);
  layout_stop_.request_stop();
  layout_stop_ = std::stop_source();
  view_ = std::move(fresh);
}

std::shared_ptr<const GraphView> Session::set_highlight(const IdSet& ids, bool remove) {
  std::lock_guard lock(writer_);
  for (ClauseId id : ids) {
    if (remove) {
      pinned_.erase(id);
    } else {
      pinned_.insert(id);
    }
  }
  GraphView next = *view();
  next.highlighted = visible_part(pinned_, next.visible);
  auto fresh = std::make_shared<const GraphView>(std::move(next));
  std::unique_lock view_lock(view_mutex_);
  view_ = fresh;
  return fresh;
}

// ---------------------------------------------------------------------------
// SessionStore

std::shared_ptr<Session> SessionStore::create(std::shared_ptr<const Derivation> derivation, std::size_t footprint) {
  auto session = std::make_shared<Session>(new_session_id(), std::move(derivation), footprint);
  std::lock_guard lock(mutex_);
  lru_.push_front(session);
  index_[session->id()] = lru_.begin();
  total_bytes_ += footprint;
  evict_locked(session->id());
  return session;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return *it->second;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return lru_.size();
}

void SessionStore::evict_locked(const std::string& keep) {
  while (lru_.size() > 1 && (lru_.size() > max_sessions_ || total_bytes_ > max_total_bytes_)) {
    auto victim = std::prev(lru_.end());
    if ((*victim)->id() == keep) break;
    total_bytes_ -= (*victim)->footprint();
    index_.erase((*victim)->id());
    lru_.erase(victim);
  }
}

// ---------------------------------------------------------------------------
// Service

Service::Service(ServiceConfig config)
    : config_(std::move(config)), sessions_(config_.max_sessions, config_.max_total_bytes) {}

HttpResponse Service::handle(const HttpRequest& request) {
  auto parts = split_path(request.path);
  if (parts.size() < 2 || parts[0] != "api" || parts[1] != "sessions") return error(404, "no such endpoint");

  auto method_is = [&](const char* m) { return request.method == m; };
  try {
    if (parts.size() == 2) {
      if (!method_is("POST")) return error(405, "use POST to create a session");
      return create_session(request);
    }

    auto session = sessions_.find(parts[2]);
    if (!session) return error(404, "unknown session '" + parts[2] + "'");

    const std::string action = parts.size() > 3 ? parts[3] : "";
    if (action == "graph" && parts.size() == 4) {
      if (!method_is("GET")) return error(405, "use GET");
      return graph(*session);
    }
    if (action == "node" && parts.size() == 5) {
      if (!method_is("GET")) return error(405, "use GET");
      return node(*session, parts[4]);
    }
    if (action == "transform" && parts.size() == 4) {
      if (!method_is("POST")) return error(405, "use POST");
      return transform(*session, request);
    }
    if (action == "search" && parts.size() == 4) {
      if (!method_is("GET")) return error(405, "use GET");
      return search(*session, request);
    }
    if (action == "highlight" && parts.size() == 4) {
      if (!method_is("POST")) return error(405, "use POST");
      return highlight(*session, request);
    }
    if (action == "state" && parts.size() == 4) {
      if (!method_is("GET")) return error(405, "use GET");
      return state(*session, request);
    }
    return error(404, "no such endpoint");
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const json::exception& e) {
    return error(400, std::string("malformed body: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

HttpResponse Service::create_session(const HttpRequest& request) {
  if (request.body.size() > config_.max_log_bytes) {
    return error(413, "log exceeds " + std::to_string(config_.max_log_bytes) + " bytes");
  }
  ParseReport report = parse_log(request.body);
  auto derivation = std::make_shared<const Derivation>(build(report.events));
  std::size_t footprint = request.body.size() * 2 + derivation->nodes.size() * 160 + 1024;
  auto session = sessions_.create(derivation, footprint);
  auto refutation = find_refutation(*derivation, config_.falsum);
  return json_response(200, {{"session_id", session->id()},
                             {"node_count", derivation->nodes.size()},
                             {"event_count", derivation->event_count()},
                             {"violation_count", derivation->violations.size()},
                             {"skipped_lines", report.skipped_lines.size()},
                             {"refutation", refutation ? json(*refutation) : json(nullptr)}});
}

HttpResponse Service::graph(Session& session) {
  auto [view, layout] = session.view_with_layout(config_.layout);
  return json_response(200, to_document(*session.derivation(), *view, *layout));
}

HttpResponse Service::node(Session& session, const std::string& raw_id) {
  auto id = parse_clause_id(raw_id);
  if (!id) return error(404, "unknown clause '" + raw_id + "'");
  const ClauseNode& n = session.derivation()->node(*id);
  auto view = session.view();
  return json_response(200, {{"id", n.id},
                             {"clause", n.clause_text},
                             {"rule", n.rule},
                             {"premises", n.premises},
                             {"children", n.children},
                             {"new_at", nullable(n.new_at)},
                             {"passive_at", nullable(n.passive_at)},
                             {"active_at", nullable(n.active_at)},
                             {"origin", std::string(to_string(n.origin))},
                             {"is_root", n.is_root},
                             {"visible", view->visible.contains(n.id)},
                             {"highlighted", view->highlighted.contains(n.id)}});
}

HttpResponse Service::transform(Session& session, const HttpRequest& request) {
  json body = json::parse(request.body);
  if (!body.is_object()) return error(400, "body must be an object");
  auto op_field = body.find("op");
  if (op_field == body.end() || !op_field->is_string()) return error(400, "missing 'op'");
  const std::string op = op_field->get<std::string>();
  auto ids = body_ids(body);
  const Derivation& base = *session.derivation();

  std::shared_ptr<const GraphView> next;
  if (op == "restrict_ancestors" || op == "restrict_descendants") {
    if (!ids || ids->empty()) return error(400, "'" + op + "' needs a non-empty 'ids' list");
    for (ClauseId id : *ids) base.node(id);
    next = session.update([&](const GraphView& view) {
      return op == "restrict_ancestors" ? restrict_to_ancestors(view, *ids) : restrict_to_descendants(view, *ids);
    });
  } else if (op == "prune_to_activated") {
    next = session.update([](const GraphView& view) { return prune_to_activated(view); });
  } else if (op == "merge_preprocessing") {
    next = session.update([](const GraphView& view) { return merge_preprocessing(view); });
  } else if (op == "reset") {
    next = session.update([&](const GraphView&) { return full_view(session.derivation()); });
  } else {
    return error(400, "unknown op '" + op + "'");
  }
  auto laid_out = session.layout_for(*next, config_.layout);
  return json_response(200, to_document(base, *next, *laid_out));
}

HttpResponse Service::search(Session& session, const HttpRequest& request) {
  auto get = [&](const char* key, const std::string& fallback) {
    auto it = request.query.find(key);
    return it == request.query.end() ? fallback : it->second;
  };
  const std::string mode = get("mode", "text");
  const std::string q = get("q", "");
  const bool case_sensitive = get("case_sensitive", "false") == "true";
  const bool in_view = get("in_view", "false") == "true";
  const Derivation& base = *session.derivation();

  std::vector<ClauseId> hits;
  if (mode == "text") {
    hits = full_text_search(base, q, case_sensitive);
  } else if (mode == "consequences") {
    IdSet ids;
    std::string token;
    std::istringstream in(q);
    while (std::getline(in, token, ',')) {
      if (token.empty()) continue;
      auto id = parse_clause_id(token);
      if (!id) return error(400, "bad clause id '" + token + "'");
      ids.insert(*id);
    }
    if (ids.empty()) return error(400, "consequence search needs clause ids in 'q'");
    IdSet found = common_consequences(base, ids);
    hits.assign(found.begin(), found.end());
  } else {
    return error(400, "unknown mode '" + mode + "'");
  }
  if (in_view) {
    auto view = session.view();
    std::erase_if(hits, [&](ClauseId id) { return !view->visible.contains(id); });
  }
  return json_response(200, {{"mode", mode}, {"ids", hits}});
}

HttpResponse Service::highlight(Session& session, const HttpRequest& request) {
  json body = json::parse(request.body);
  if (!body.is_object()) return error(400, "body must be an object");
  auto ids = body_ids(body);
  if (!ids || ids->empty()) return error(400, "'ids' must be a non-empty list");
  for (ClauseId id : *ids) session.derivation()->node(id);
  bool remove = body.value("remove", false);
  auto view = session.set_highlight(*ids, remove);
  return json_response(200, {{"ok", true}, {"highlighted", id_json(view->highlighted)}});
}

HttpResponse Service::state(Session& session, const HttpRequest& request) {
  auto it = request.query.find("event_index");
  if (it == request.query.end()) return error(400, "missing 'event_index'");
  std::size_t index = 0;
  const std::string& raw = it->second;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), index);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) return error(400, "bad 'event_index'");
  if (index > session.derivation()->event_count()) {
    return error(400, "event_index outside [0, " + std::to_string(session.derivation()->event_count()) + "]");
  }
  SaturationState s = state_at(*session.derivation(), index);
  return json_response(200, {{"event_index", s.event_index}, {"active", id_json(s.active)}, {"passive", id_json(s.passive)}});
}

}  // namespace satvis
