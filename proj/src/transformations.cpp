#include "satvis/transformations.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <stdexcept>

#include "satvis/errors.hpp"

namespace satvis {

namespace {

bool is_preprocessing(const ClauseNode& node) {
  return !node.new_at && !node.passive_at && !node.active_at;
}

void require_known(const Derivation& derivation, const IdSet& ids) {
  for (ClauseId id : ids) {
    if (!derivation.contains(id)) throw NotFoundError("unknown clause " + std::to_string(id));
  }
}

template <typename Next>
IdSet closure(const Derivation& derivation, const IdSet& ids, Next next) {
  require_known(derivation, ids);
  IdSet reached;
  std::vector<ClauseId> stack(ids.begin(), ids.end());
  while (!stack.empty()) {
    ClauseId cur = stack.back();
    stack.pop_back();
    for (ClauseId n : next(derivation.nodes.at(cur))) {
      if (!derivation.contains(n)) continue;
      if (reached.insert(n).second) stack.push_back(n);
    }
  }
  for (ClauseId id : ids) reached.erase(id);
  return reached;
}

IdSet intersect(const IdSet& a, const IdSet& b) {
  IdSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::vector<ClauseId> to_vector(const IdSet& ids) { return {ids.begin(), ids.end()}; }

GraphView with_visible(const GraphView& view, IdSet visible, TransformStep step) {
  GraphView out = view;
  out.highlighted = intersect(view.highlighted, visible);
  out.visible = std::move(visible);
  out.provenance.push_back(std::move(step));
  return out;
}

}  // namespace

const std::vector<ClauseId>& GraphView::premises_of(ClauseId id) const {
  if (auto it = rewired.find(id); it != rewired.end()) return it->second;
  return base->node(id).premises;
}

std::vector<std::pair<ClauseId, ClauseId>> GraphView::edges() const {
  std::vector<std::pair<ClauseId, ClauseId>> out;
  for (ClauseId v : visible) {
    for (ClauseId p : premises_of(v)) {
      if (visible.contains(p)) out.emplace_back(p, v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool GraphView::operator==(const GraphView& other) const {
  bool same_base = base == other.base || (base && other.base && *base == *other.base);
  return same_base && visible == other.visible && highlighted == other.highlighted &&
         provenance == other.provenance && rewired == other.rewired;
}

GraphView full_view(std::shared_ptr<const Derivation> base) {
  GraphView view;
  for (const auto& [id, node] : base->nodes) view.visible.insert(view.visible.end(), id);
  view.base = std::move(base);
  return view;
}

IdSet ancestors(const Derivation& derivation, const IdSet& ids) {
  return closure(derivation, ids, [](const ClauseNode& n) -> const std::vector<ClauseId>& { return n.premises; });
}

IdSet descendants(const Derivation& derivation, const IdSet& ids) {
  return closure(derivation, ids, [](const ClauseNode& n) -> const std::vector<ClauseId>& { return n.children; });
}

IdSet common_consequences(const Derivation& derivation, const IdSet& ids) {
  if (ids.empty()) throw std::invalid_argument("common_consequences needs at least one clause");
  require_known(derivation, ids);
  std::optional<IdSet> result;
  for (ClauseId id : ids) {
    IdSet below = descendants(derivation, {id});
    below.insert(id);
    result = result ? intersect(*result, below) : std::move(below);
    if (result->empty()) break;
  }
  return *result;
}

GraphView prune_to_activated(std::shared_ptr<const Derivation> base) {
  IdSet activated;
  for (const auto& [id, node] : base->nodes) {
    if (node.active_at) activated.insert(activated.end(), id);
  }
  IdSet visible = ancestors(*base, activated);
  visible.insert(activated.begin(), activated.end());
  GraphView view;
  view.base = std::move(base);
  view.visible = std::move(visible);
  view.provenance.push_back({"prune_to_activated", {}});
  return view;
}

GraphView prune_to_activated(const GraphView& view) {
  GraphView pruned = prune_to_activated(view.base);
  return with_visible(view, intersect(view.visible, pruned.visible), {"prune_to_activated", {}});
}

GraphView merge_preprocessing(const GraphView& view) {
  const Derivation& d = *view.base;
  auto visible_pre = [&](ClauseId id) {
    return view.visible.contains(id) && is_preprocessing(d.nodes.at(id));
  };
  // A visible preprocessing node with a visible premise sits inside a chain.
  auto interior = [&](ClauseId id) {
    if (!visible_pre(id)) return false;
    const auto& up = view.premises_of(id);
    return std::any_of(up.begin(), up.end(), [&](ClauseId p) { return view.visible.contains(p); });
  };

  IdSet hidden;
  std::map<ClauseId, std::vector<ClauseId>> rewired = view.rewired;
  for (ClauseId conclusion : view.visible) {
    if (is_preprocessing(d.nodes.at(conclusion))) continue;
    const auto& premises = view.premises_of(conclusion);
    std::vector<ClauseId> merged;
    bool changed = false;
    auto add = [&](ClauseId id) {
      if (std::find(merged.begin(), merged.end(), id) == merged.end()) merged.push_back(id);
    };
    for (ClauseId p : premises) {
      if (!interior(p)) {
        add(p);
        continue;
      }
      // Walk up the preprocessing chain to the inputs it started from.
      std::vector<ClauseId> stack{p};
      IdSet seen{p};
      std::vector<ClauseId> inputs;
      while (!stack.empty()) {
        ClauseId cur = stack.back();
        stack.pop_back();
        if (!interior(cur)) {
          inputs.push_back(cur);
          continue;
        }
        hidden.insert(cur);
        const auto& up = view.premises_of(cur);
        for (auto it = up.rbegin(); it != up.rend(); ++it) {
          if (view.visible.contains(*it) && seen.insert(*it).second) stack.push_back(*it);
        }
      }
      changed = true;
      for (ClauseId input : inputs) add(input);
    }
    if (changed) rewired[conclusion] = std::move(merged);
  }

  if (hidden.empty()) return view;
  IdSet visible;
  std::set_difference(view.visible.begin(), view.visible.end(), hidden.begin(), hidden.end(),
                      std::inserter(visible, visible.end()));
  GraphView out = with_visible(view, std::move(visible), {"merge_preprocessing", to_vector(hidden)});
  out.rewired = std::move(rewired);
  return out;
}

GraphView restrict_to_ancestors(const GraphView& view, const IdSet& ids) {
  if (ids.empty()) throw std::invalid_argument("restrict_ancestors needs at least one clause");
  IdSet keep = ancestors(*view.base, ids);
  keep.insert(ids.begin(), ids.end());
  return with_visible(view, intersect(keep, view.visible), {"restrict_ancestors", to_vector(ids)});
}

GraphView restrict_to_descendants(const GraphView& view, const IdSet& ids) {
  if (ids.empty()) throw std::invalid_argument("restrict_descendants needs at least one clause");
  IdSet keep = descendants(*view.base, ids);
  keep.insert(ids.begin(), ids.end());
  return with_visible(view, intersect(keep, view.visible), {"restrict_descendants", to_vector(ids)});
}

GraphView replay(std::shared_ptr<const Derivation> base, const std::vector<TransformStep>& steps) {
  GraphView view = full_view(std::move(base));
  for (const auto& step : steps) {
    IdSet ids(step.ids.begin(), step.ids.end());
    if (step.op == "prune_to_activated") {
      view = prune_to_activated(view);
    } else if (step.op == "merge_preprocessing") {
      view = merge_preprocessing(view);
    } else if (step.op == "restrict_ancestors") {
      view = restrict_to_ancestors(view, ids);
    } else if (step.op == "restrict_descendants") {
      view = restrict_to_descendants(view, ids);
    } else {
      throw std::invalid_argument("unknown transformation '" + step.op + "'");
    }
  }
  return view;
}

GraphView highlight(const GraphView& view, const IdSet& ids) {
  require_known(*view.base, ids);
  for (ClauseId id : ids) {
    if (!view.visible.contains(id)) throw std::invalid_argument("clause " + std::to_string(id) + " is not visible");
  }
  GraphView out = view;
  out.highlighted.insert(ids.begin(), ids.end());
  return out;
}

}  // namespace satvis
