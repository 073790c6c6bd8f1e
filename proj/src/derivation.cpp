#include "satvis/derivation.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <tuple>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "satvis/errors.hpp"

namespace satvis {

std::string_view to_string(NodeOrigin origin) {
  switch (origin) {
    case NodeOrigin::Logged: return "logged";
    case NodeOrigin::Inferred: return "inferred";
    case NodeOrigin::Placeholder: return "placeholder";
  }
  return "logged";
}

std::optional<NodeOrigin> node_origin_from_string(std::string_view name) {
  if (name == "logged") return NodeOrigin::Logged;
  if (name == "inferred") return NodeOrigin::Inferred;
  if (name == "placeholder") return NodeOrigin::Placeholder;
  return std::nullopt;
}

std::string_view to_string(Property property) {
  switch (property) {
    case Property::DuplicateEvent: return "a";
    case Property::PassiveWithoutNew: return "b";
    case Property::ActiveWithoutPrior: return "c";
    case Property::DanglingPremise: return "dangling-premise";
    case Property::Cycle: return "cycle";
  }
  return "a";
}

std::optional<Property> property_from_string(std::string_view tag) {
  for (auto p : {Property::DuplicateEvent, Property::PassiveWithoutNew, Property::ActiveWithoutPrior,
                 Property::DanglingPremise, Property::Cycle}) {
    if (to_string(p) == tag) return p;
  }
  return std::nullopt;
}

const ClauseNode& Derivation::node(ClauseId id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw NotFoundError("unknown clause " + std::to_string(id));
  return it->second;
}

void Derivation::reindex() {
  for (auto& [id, node] : nodes) node.children.clear();
  for (auto& [id, node] : nodes) {
    for (ClauseId p : node.premises) {
      auto it = nodes.find(p);
      if (it != nodes.end()) it->second.children.push_back(id);
    }
  }
  for (auto& [id, node] : nodes) {
    std::sort(node.children.begin(), node.children.end());
    node.children.erase(std::unique(node.children.begin(), node.children.end()), node.children.end());
    node.is_root = std::all_of(node.premises.begin(), node.premises.end(), [this](ClauseId p) {
      auto it = nodes.find(p);
      return it == nodes.end() || it->second.origin == NodeOrigin::Placeholder;
    });
  }
}

namespace {

std::string clause_label(ClauseId id) { return "clause " + std::to_string(id); }

}  // namespace

std::vector<Violation> validate(std::span<const SaturationEvent> events) {
  std::vector<Violation> out;
  std::unordered_set<ClauseId> seen[3];
  auto has = [&](EventKind k, ClauseId id) { return seen[static_cast<int>(k)].contains(id); };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::size_t index = i + 1;
    if (has(e.kind, e.clause_id)) {
      out.push_back({index, Property::DuplicateEvent,
                     std::string(to_string(e.kind)) + " event repeated for " + clause_label(e.clause_id)});
    }
    if (e.kind == EventKind::Passive && !has(EventKind::New, e.clause_id)) {
      out.push_back({index, Property::PassiveWithoutNew, clause_label(e.clause_id) + " made passive before it was created"});
    }
    if (e.kind == EventKind::Active) {
      bool created = has(EventKind::New, e.clause_id);
      bool passive = has(EventKind::Passive, e.clause_id);
      if (!created || !passive) {
        std::string missing = !created && !passive ? "new and passive events" : !created ? "new event" : "passive event";
        out.push_back({index, Property::ActiveWithoutPrior, clause_label(e.clause_id) + " activated without prior " + missing});
      }
    }
    seen[static_cast<int>(e.kind)].insert(e.clause_id);
  }
  return out;
}

std::vector<Violation> adjacency_warnings(std::span<const SaturationEvent> events) {
  std::vector<Violation> out;
  std::unordered_map<ClauseId, std::size_t> created_at;  // 1-based
  std::vector<std::size_t> activations;                  // indices of Active events, ascending
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::size_t index = i + 1;
    switch (e.kind) {
      case EventKind::New:
        created_at.try_emplace(e.clause_id, index);
        break;
      case EventKind::Active:
        activations.push_back(index);
        break;
      case EventKind::Passive: {
        auto it = created_at.find(e.clause_id);
        if (it == created_at.end()) break;  // a (b) violation, reported by validate
        auto after = std::upper_bound(activations.begin(), activations.end(), it->second);
        if (after != activations.end()) {
          out.push_back({index, Property::PassiveWithoutNew,
                         clause_label(e.clause_id) + " made passive in a later iteration than its creation (activation at event " +
                             std::to_string(*after) + ")"});
        }
        break;
      }
    }
  }
  return out;
}

Derivation build(std::span<const SaturationEvent> events) {
  Derivation d;
  d.timeline.reserve(events.size());
  std::vector<Violation> structural;
  std::unordered_map<ClauseId, std::size_t> first_reference;

  // target is reachable from `from` along child edges
  auto reaches = [&](ClauseId from, ClauseId target) {
    std::vector<ClauseId> stack{from};
    std::unordered_set<ClauseId> seen{from};
    while (!stack.empty()) {
      ClauseId cur = stack.back();
      stack.pop_back();
      if (cur == target) return true;
      for (ClauseId child : d.nodes.at(cur).children) {
        if (seen.insert(child).second) stack.push_back(child);
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::size_t index = i + 1;
    d.timeline.push_back({e.kind, e.clause_id});

    auto [it, inserted] = d.nodes.try_emplace(e.clause_id);
    ClauseNode& node = it->second;
    if (inserted) {
      node.id = e.clause_id;
      node.origin = NodeOrigin::Placeholder;
    }

    const bool defines = node.origin == NodeOrigin::Placeholder ||
                         (e.kind == EventKind::New && node.origin == NodeOrigin::Inferred);
    if (defines) {
      for (ClauseId p : node.premises) {
        auto& siblings = d.nodes.at(p).children;
        siblings.erase(std::remove(siblings.begin(), siblings.end(), node.id), siblings.end());
      }
      node.premises.clear();
      node.clause_text = e.clause_text;
      node.rule = e.rule;
      node.origin = e.kind == EventKind::New ? NodeOrigin::Logged : NodeOrigin::Inferred;

      for (ClauseId p : e.premises) {
        if (p == e.clause_id || (!node.children.empty() && d.nodes.contains(p) && reaches(e.clause_id, p))) {
          structural.push_back({index, Property::Cycle,
                                "dropped premise edge " + std::to_string(p) + " -> " + std::to_string(e.clause_id) +
                                    " closing a cycle"});
          continue;
        }
        auto [pit, fresh] = d.nodes.try_emplace(p);
        if (fresh) {
          pit->second.id = p;
          pit->second.origin = NodeOrigin::Placeholder;
          first_reference.emplace(p, index);
        }
        auto& kids = pit->second.children;
        if (std::find(kids.begin(), kids.end(), e.clause_id) == kids.end()) kids.push_back(e.clause_id);
        node.premises.push_back(p);
      }
    }

    ClauseNode& stamped = d.nodes.at(e.clause_id);
    switch (e.kind) {
      case EventKind::New:
        if (!stamped.new_at) stamped.new_at = index;
        break;
      case EventKind::Passive:
        if (!stamped.passive_at) stamped.passive_at = index;
        break;
      case EventKind::Active:
        if (!stamped.active_at) stamped.active_at = index;
        break;
    }
  }

  for (const auto& [id, index] : first_reference) {
    if (d.nodes.at(id).origin == NodeOrigin::Placeholder) {
      structural.push_back({index, Property::DanglingPremise,
                            "premise " + clause_label(id) + " never appears in the log"});
    }
  }

  d.violations = validate(events);
  d.violations.insert(d.violations.end(), structural.begin(), structural.end());
  std::stable_sort(d.violations.begin(), d.violations.end(), [](const Violation& a, const Violation& b) {
    if (a.event_index != b.event_index) return a.event_index < b.event_index;
    if (a.property != b.property) return a.property < b.property;
    return a.message < b.message;
  });
  d.warnings = adjacency_warnings(events);
  d.reindex();
  return d;
}

void apply_event(SaturationState& state, const TimelineEntry& entry) {
  switch (entry.kind) {
    case EventKind::New:
      break;
    case EventKind::Passive:
      // Only activation removes from Passive, so an already active clause stays active.
      if (!state.active.contains(entry.clause_id)) state.passive.insert(entry.clause_id);
      break;
    case EventKind::Active:
      state.passive.erase(entry.clause_id);
      state.active.insert(entry.clause_id);
      break;
  }
  ++state.event_index;
}

SaturationState state_at(const Derivation& derivation, std::size_t event_index) {
  if (event_index > derivation.event_count()) {
    throw std::out_of_range("event index " + std::to_string(event_index) + " outside [0, " +
                            std::to_string(derivation.event_count()) + "]");
  }
  SaturationState state;
  for (std::size_t i = 0; i < event_index; ++i) apply_event(state, derivation.timeline[i]);
  return state;
}

std::optional<ClauseId> find_refutation(const Derivation& derivation, std::string_view falsum) {
  std::optional<ClauseId> best;
  std::size_t best_seen = 0;
  for (const auto& [id, node] : derivation.nodes) {
    if (node.origin == NodeOrigin::Placeholder || node.clause_text != falsum) continue;
    std::size_t seen = std::min({node.new_at.value_or(SIZE_MAX), node.passive_at.value_or(SIZE_MAX),
                                 node.active_at.value_or(SIZE_MAX)});
    if (!best || seen < best_seen) {
      best = id;
      best_seen = seen;
    }
  }
  return best;
}

Derivation sanitize(const Derivation& derivation) {
  // Post-order from the sinks: every node is visited after all of its premises.
  std::vector<ClauseId> post_order;
  post_order.reserve(derivation.nodes.size());
  std::unordered_set<ClauseId> visited;
  for (const auto& [sink, sink_node] : derivation.nodes) {
    if (!sink_node.children.empty() || visited.contains(sink)) continue;
    std::vector<std::pair<ClauseId, std::size_t>> stack{{sink, 0}};
    visited.insert(sink);
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& premises = derivation.nodes.at(id).premises;
      if (next < premises.size()) {
        ClauseId p = premises[next++];
        if (derivation.nodes.contains(p) && visited.insert(p).second) stack.push_back({p, 0});
      } else {
        post_order.push_back(id);
        stack.pop_back();
      }
    }
  }

  Derivation out = derivation;
  std::map<std::tuple<std::string, std::string, std::vector<ClauseId>>, ClauseId> representative;
  for (ClauseId id : post_order) {
    const ClauseNode& node = derivation.nodes.at(id);
    if (node.origin != NodeOrigin::Placeholder || !node.premises.empty()) continue;
    if (node.children.empty()) {
      out.nodes.erase(id);
      continue;
    }
    if (node.clause_text.empty()) continue;
    auto key = std::make_tuple(node.clause_text, node.rule, node.children);
    auto [rep, fresh] = representative.try_emplace(key, id);
    if (fresh) continue;
    ClauseId keep = std::min(rep->second, id);
    ClauseId drop = std::max(rep->second, id);
    rep->second = keep;
    for (ClauseId child : node.children) {
      auto& premises = out.nodes.at(child).premises;
      premises.erase(std::remove(premises.begin(), premises.end(), drop), premises.end());
    }
    out.nodes.erase(drop);
  }
  out.reindex();
  return out;
}

std::vector<ClauseId> topological_order(const Derivation& derivation) {
  std::unordered_map<ClauseId, std::size_t> pending;
  std::priority_queue<ClauseId, std::vector<ClauseId>, std::greater<>> ready;
  for (const auto& [id, node] : derivation.nodes) {
    std::size_t count = 0;
    for (ClauseId p : std::set<ClauseId>(node.premises.begin(), node.premises.end())) {
      if (derivation.nodes.contains(p)) ++count;
    }
    pending[id] = count;
    if (count == 0) ready.push(id);
  }
  std::vector<ClauseId> order;
  order.reserve(derivation.nodes.size());
  while (!ready.empty()) {
    ClauseId id = ready.top();
    ready.pop();
    order.push_back(id);
    for (ClauseId child : derivation.nodes.at(id).children) {
      if (--pending[child] == 0) ready.push(child);
    }
  }
  if (order.size() != derivation.nodes.size()) throw CycleError("derivation contains a cycle");
  return order;
}

}  // namespace satvis
