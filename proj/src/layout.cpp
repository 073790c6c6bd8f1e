#include "satvis/layout.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "satvis/errors.hpp"

namespace satvis {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;  // (upper position, lower position)

// Inversions among the lower endpoints once edges are sorted by upper endpoint.
std::size_t count_inversions(std::vector<Edge> edges, std::size_t width) {
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> tree(width + 1, 0);
  std::size_t crossings = 0;
  std::size_t inserted = 0;
  for (const auto& [upper, lower] : edges) {
    // edges already inserted whose lower endpoint lies strictly right of this one
    std::size_t not_greater = 0;
    for (std::size_t i = lower + 1; i > 0; i -= i & (~i + 1)) not_greater += tree[i];
    crossings += inserted - not_greater;
    for (std::size_t i = lower + 1; i <= width; i += i & (~i + 1)) ++tree[i];
    ++inserted;
  }
  return crossings;
}

// The view with every edge cut into unit-length segments. Real nodes come
// first, ordered by id; dummy nodes follow in creation order.
struct LayerGraph {
  std::vector<ClauseId> ids;
  std::size_t real_count = 0;
  std::vector<std::size_t> layer_of;
  std::vector<std::vector<std::size_t>> up;
  std::vector<std::vector<std::size_t>> down;
  std::vector<std::vector<std::size_t>> layers;
  std::vector<std::size_t> pos;

  LayerGraph(const GraphView& view, const RankMap& ranks) {
    std::unordered_map<ClauseId, std::size_t> index;
    for (ClauseId id : view.visible) {
      index.emplace(id, ids.size());
      ids.push_back(id);
      layer_of.push_back(ranks.at(id));
    }
    real_count = ids.size();
    up.resize(real_count);
    down.resize(real_count);
    for (const auto& [from, to] : view.edges()) {
      std::size_t prev = index.at(from);
      std::size_t target = index.at(to);
      for (std::size_t r = layer_of[prev] + 1; r < layer_of[target]; ++r) {
        std::size_t dummy = layer_of.size();
        layer_of.push_back(r);
        up.emplace_back();
        down.emplace_back();
        link(prev, dummy);
        prev = dummy;
      }
      link(prev, target);
    }
    for (auto& list : up) std::sort(list.begin(), list.end());
    for (auto& list : down) std::sort(list.begin(), list.end());

    std::size_t depth = 0;
    for (std::size_t l : layer_of) depth = std::max(depth, l + 1);
    layers.resize(depth);
    pos.assign(layer_of.size(), 0);
  }

  void link(std::size_t from, std::size_t to) {
    down[from].push_back(to);
    up[to].push_back(from);
  }

  void initial_order() {
    std::vector<bool> seen(layer_of.size(), false);
    for (std::size_t root = 0; root < layer_of.size(); ++root) {
      if (!up[root].empty() || seen[root]) continue;
      std::vector<std::size_t> stack{root};
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        layers[layer_of[v]].push_back(v);
        for (auto it = down[v].rbegin(); it != down[v].rend(); ++it) {
          if (!seen[*it]) stack.push_back(*it);
        }
      }
    }
    refresh_positions();
  }

  void refresh_positions() {
    for (const auto& layer : layers) {
      for (std::size_t i = 0; i < layer.size(); ++i) pos[layer[i]] = i;
    }
  }

  double median_position(std::size_t v, const std::vector<std::vector<std::size_t>>& neighbours) const {
    const auto& adj = neighbours[v];
    if (adj.empty()) return static_cast<double>(pos[v]);
    std::vector<std::size_t> p;
    p.reserve(adj.size());
    for (std::size_t n : adj) p.push_back(pos[n]);
    std::sort(p.begin(), p.end());
    std::size_t m = p.size();
    if (m % 2 == 1) return static_cast<double>(p[m / 2]);
    return (static_cast<double>(p[m / 2 - 1]) + static_cast<double>(p[m / 2])) / 2.0;
  }

  void reorder(std::size_t layer, const std::vector<std::vector<std::size_t>>& neighbours) {
    auto& nodes = layers[layer];
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(nodes.size());
    for (std::size_t v : nodes) keyed.emplace_back(median_position(v, neighbours), v);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      nodes[i] = keyed[i].second;
      pos[nodes[i]] = i;
    }
  }

  void sweep() {
    for (std::size_t r = 1; r < layers.size(); ++r) reorder(r, up);
    for (std::size_t r = layers.size(); r-- > 1;) reorder(r - 1, down);
  }

  std::size_t crossings() const {
    std::size_t total = 0;
    for (std::size_t r = 0; r + 1 < layers.size(); ++r) {
      std::vector<Edge> edges;
      for (std::size_t u : layers[r]) {
        for (std::size_t v : down[u]) edges.emplace_back(pos[u], pos[v]);
      }
      total += count_inversions(std::move(edges), layers[r + 1].size());
    }
    return total;
  }

  RankOrder real_order() const {
    RankOrder out(layers.size());
    for (std::size_t r = 0; r < layers.size(); ++r) {
      for (std::size_t v : layers[r]) {
        if (v < real_count) out[r].push_back(ids[v]);
      }
    }
    return out;
  }
};

}  // namespace

RankMap assign_ranks(const GraphView& view) {
  std::unordered_map<ClauseId, std::size_t> indegree;
  std::unordered_map<ClauseId, std::vector<ClauseId>> out_edges;
  for (ClauseId id : view.visible) indegree.emplace(id, 0);
  for (const auto& [from, to] : view.edges()) {
    ++indegree[to];
    out_edges[from].push_back(to);
  }

  RankMap ranks;
  std::queue<ClauseId> ready;
  for (ClauseId id : view.visible) {
    if (indegree[id] == 0) {
      ready.push(id);
      ranks[id] = 0;
    }
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    ClauseId id = ready.front();
    ready.pop();
    ++processed;
    std::size_t next = ranks[id] + 1;
    for (ClauseId child : out_edges[id]) {
      auto& r = ranks[child];
      r = std::max(r, next);
      if (--indegree[child] == 0) ready.push(child);
    }
  }
  if (processed != view.visible.size()) throw CycleError("view contains a cycle");
  return ranks;
}

RankOrder order_ranks(const GraphView& view, const RankMap& ranks, const LayoutOptions& options,
                      std::stop_token stop) {
  LayerGraph graph(view, ranks);
  graph.initial_order();
  auto best_layers = graph.layers;
  std::size_t best = graph.crossings();
  for (int s = 0; s < options.sweeps && best > 0; ++s) {
    if (stop.stop_requested()) throw CancelledError("layout cancelled");
    graph.sweep();
    std::size_t c = graph.crossings();
    if (c < best) {
      best = c;
      best_layers = graph.layers;
    }
  }
  if (stop.stop_requested()) throw CancelledError("layout cancelled");
  graph.layers = std::move(best_layers);
  graph.refresh_positions();
  return graph.real_order();
}

std::size_t count_crossings(const GraphView& view, const RankMap& ranks, const RankOrder& order) {
  std::unordered_map<ClauseId, std::size_t> slot;
  for (const auto& layer : order) {
    for (std::size_t i = 0; i < layer.size(); ++i) slot[layer[i]] = i;
  }
  std::vector<std::vector<Edge>> per_layer(order.size());
  for (const auto& [from, to] : view.edges()) {
    std::size_t r = ranks.at(from);
    if (ranks.at(to) == r + 1) per_layer[r].emplace_back(slot.at(from), slot.at(to));
  }
  std::size_t total = 0;
  for (std::size_t r = 0; r + 1 < order.size(); ++r) {
    total += count_inversions(std::move(per_layer[r]), order[r + 1].size());
  }
  return total;
}

Layout layout(const GraphView& view, const LayoutOptions& options, std::stop_token stop) {
  Layout out;
  if (view.visible.empty()) return out;
  out.rank = assign_ranks(view);
  RankOrder order = order_ranks(view, out.rank, options, stop);

  std::size_t widest = 0;
  for (const auto& layer : order) widest = std::max(widest, layer.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& layer = order[r];
    double offset = (static_cast<double>(widest) - static_cast<double>(layer.size())) / 2.0;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      out.positions[layer[i]] = {(static_cast<double>(i) + offset) * options.horizontal_gap,
                                 static_cast<double>(r) * options.vertical_gap};
    }
  }
  out.width = static_cast<double>(widest - 1) * options.horizontal_gap;
  out.height = static_cast<double>(order.size() - 1) * options.vertical_gap;
  return out;
}

}  // namespace satvis
