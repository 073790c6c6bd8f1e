#pragma once

#include <cstddef>
#include <map>
#include <stop_token>
#include <vector>

#include "satvis/transformations.hpp"

namespace satvis {

struct LayoutOptions {
  double horizontal_gap = 180.0;
  double vertical_gap = 120.0;
  /// Number of down+up median sweeps after the initial DFS ordering.
  int sweeps = 4;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

using RankMap = std::map<ClauseId, std::size_t>;
/// Node ids per rank, left to right.
using RankOrder = std::vector<std::vector<ClauseId>>;

struct Layout {
  std::map<ClauseId, Point> positions;
  RankMap rank;
  double width = 0.0;
  double height = 0.0;

  bool operator==(const Layout&) const = default;
};

/// Longest premise path from any visible root; roots get rank 0.
/// Throws CycleError if the view's induced graph is cyclic.
RankMap assign_ranks(const GraphView& view);

/// Orders every rank to reduce edge crossings: an initial DFS from the roots,
/// then median sweeps with edges longer than one rank routed through dummy
/// nodes. Keeps the best ordering seen. Deterministic; ties go to the
/// smaller id. Throws CancelledError when stop is requested between sweeps.
RankOrder order_ranks(const GraphView& view, const RankMap& ranks, const LayoutOptions& options = {},
                      std::stop_token stop = {});

/// Crossings between edges joining adjacent ranks, for an ordering of the
/// view's nodes. Edges spanning several ranks are not counted.
std::size_t count_crossings(const GraphView& view, const RankMap& ranks, const RankOrder& order);

/// Ranks, orders, and places the view: x is the slot within the rank times
/// the horizontal gap, each rank centered on the widest one; y is the rank
/// times the vertical gap.
Layout layout(const GraphView& view, const LayoutOptions& options = {}, std::stop_token stop = {});

}  // namespace satvis
