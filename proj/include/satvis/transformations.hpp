#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "satvis/derivation.hpp"

namespace satvis {

using IdSet = std::set<ClauseId>;

/// One applied transformation, recorded so that a view can be reproduced.
struct TransformStep {
  std::string op;
  std::vector<ClauseId> ids;

  bool operator==(const TransformStep&) const = default;
};

/// A visible subset of a derivation. Edges are the base premise edges with
/// both ends visible, except for nodes listed in `rewired`, whose premise
/// lists were replaced by merge_preprocessing.
struct GraphView {
  std::shared_ptr<const Derivation> base;
  IdSet visible;
  IdSet highlighted;
  std::vector<TransformStep> provenance;
  std::map<ClauseId, std::vector<ClauseId>> rewired;

  /// Premises of id as seen through this view (not filtered by visibility).
  const std::vector<ClauseId>& premises_of(ClauseId id) const;

  /// Induced edges (premise, conclusion), sorted and unique.
  std::vector<std::pair<ClauseId, ClauseId>> edges() const;

  /// Same visible set, highlights, provenance and rewiring; the bases are
  /// compared structurally.
  bool operator==(const GraphView& other) const;
};

/// Every node of the derivation, no transformations applied.
GraphView full_view(std::shared_ptr<const Derivation> base);

/// Transitive premises of ids, excluding ids. Throws NotFoundError on unknown ids.
IdSet ancestors(const Derivation& derivation, const IdSet& ids);

/// Transitive conclusions of ids, excluding ids. Throws NotFoundError on unknown ids.
IdSet descendants(const Derivation& derivation, const IdSet& ids);

/// Nodes whose derivation contains every one of ids (a node counts as part of
/// its own derivation). Throws std::invalid_argument when ids is empty.
IdSet common_consequences(const Derivation& derivation, const IdSet& ids);

/// Activated clauses together with everything they were derived from.
GraphView prune_to_activated(std::shared_ptr<const Derivation> base);

/// Intersects the view with the activated derivations.
GraphView prune_to_activated(const GraphView& view);

/// Contracts chains of preprocessing nodes (nodes without any saturation
/// event) so that each saturation clause hangs directly off the input roots
/// it came from. Interior chain nodes are hidden.
GraphView merge_preprocessing(const GraphView& view);

GraphView restrict_to_ancestors(const GraphView& view, const IdSet& ids);
GraphView restrict_to_descendants(const GraphView& view, const IdSet& ids);

/// Rebuilds a view by applying recorded steps to the full view of base.
/// Throws std::invalid_argument for an unknown op.
GraphView replay(std::shared_ptr<const Derivation> base, const std::vector<TransformStep>& steps);

/// Adds ids (which must be visible) to the highlighted set.
GraphView highlight(const GraphView& view, const IdSet& ids);

}  // namespace satvis
