#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "satvis/log_parser.hpp"

namespace satvis {

inline constexpr std::string_view kDefaultFalsum = "$false";

/// How a node came to exist in the derivation.
enum class NodeOrigin {
  Logged,       ///< has a New event
  Inferred,     ///< only Passive/Active events; text and premises taken from those lines
  Placeholder,  ///< never logged, materialized because some clause names it as a premise
};

std::string_view to_string(NodeOrigin origin);
std::optional<NodeOrigin> node_origin_from_string(std::string_view name);

enum class Property {
  DuplicateEvent,      ///< (a) a clause is created, made passive or activated twice
  PassiveWithoutNew,   ///< (b)
  ActiveWithoutPrior,  ///< (c)
  DanglingPremise,
  Cycle,
};

/// Short tag used in documents and CLI output: "a", "b", "c", "dangling-premise", "cycle".
std::string_view to_string(Property property);
std::optional<Property> property_from_string(std::string_view tag);

struct Violation {
  std::size_t event_index = 0;  ///< 1-based position in the event list
  Property property = Property::DuplicateEvent;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ClauseNode {
  ClauseId id = 0;
  std::string clause_text;
  std::string rule;
  std::vector<ClauseId> premises;
  std::vector<ClauseId> children;  ///< derived index: sorted, unique
  std::optional<std::size_t> new_at;
  std::optional<std::size_t> passive_at;
  std::optional<std::size_t> active_at;
  NodeOrigin origin = NodeOrigin::Logged;
  bool is_root = true;

  bool operator==(const ClauseNode&) const = default;
};

struct TimelineEntry {
  EventKind kind = EventKind::New;
  ClauseId clause_id = 0;

  bool operator==(const TimelineEntry&) const = default;
};

/// The derivation DAG reconstructed from a saturation log.
struct Derivation {
  std::map<ClauseId, ClauseNode> nodes;
  /// (kind, id) of every event in order; entry i-1 is event index i.
  std::vector<TimelineEntry> timeline;
  std::vector<Violation> violations;
  /// Heuristic findings that do not make the stream malformed.
  std::vector<Violation> warnings;

  std::size_t event_count() const { return timeline.size(); }
  bool contains(ClauseId id) const { return nodes.contains(id); }
  /// Throws NotFoundError.
  const ClauseNode& node(ClauseId id) const;

  /// Recomputes the children index and is_root flags from premises.
  void reindex();

  bool operator==(const Derivation&) const = default;
};

struct SaturationState {
  std::set<ClauseId> active;
  std::set<ClauseId> passive;
  std::size_t event_index = 0;

  bool operator==(const SaturationState&) const = default;
};

/// Checks the stream properties:
///   (a) each (kind, clause) pair occurs at most once;
///   (b) a Passive event is preceded by a New event for the same clause;
///   (c) an Active event is preceded by both New and Passive events for it.
/// One violation per offending event. Empty result iff the stream is well formed.
std::vector<Violation> validate(std::span<const SaturationEvent> events);

/// Passive events separated from their New event by an activation. The log
/// has no iteration markers, so "created in the same iteration" can only be
/// approximated this way.
std::vector<Violation> adjacency_warnings(std::span<const SaturationEvent> events);

/// Replays the events into a derivation. Never throws; anomalies are
/// recorded in violations. Edges that would close a cycle are dropped.
Derivation build(std::span<const SaturationEvent> events);

/// Active and Passive sets after the first event_index events.
/// Throws std::out_of_range when event_index > event_count().
SaturationState state_at(const Derivation& derivation, std::size_t event_index);

/// Applies one event to a state in place.
void apply_event(SaturationState& state, const TimelineEntry& entry);

/// First node (by event order) whose text is the falsum literal.
std::optional<ClauseId> find_refutation(const Derivation& derivation,
                                        std::string_view falsum = kDefaultFalsum);

/// Drops placeholder nodes without incident edges and merges placeholder
/// roots that carry the same text, rule and children. Surviving ids keep
/// their identity. Idempotent.
Derivation sanitize(const Derivation& derivation);

/// Topological order of all nodes, premises first. Throws CycleError.
std::vector<ClauseId> topological_order(const Derivation& derivation);

}  // namespace satvis
