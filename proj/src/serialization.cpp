#include "satvis/serialization.hpp"

#include <sstream>

#include "satvis/errors.hpp"

namespace satvis {

using nlohmann::json;

namespace {

json optional_index(const std::optional<std::size_t>& value) {
  return value ? json(*value) : json(nullptr);
}

json violations_to_json(const std::vector<Violation>& list) {
  json out = json::array();
  for (const auto& v : list) {
    out.push_back({{"event_index", v.event_index}, {"property", std::string(to_string(v.property))}, {"message", v.message}});
  }
  return out;
}

template <typename Range>
json id_array(const Range& ids) {
  json out = json::array();
  for (ClauseId id : ids) out.push_back(id);
  return out;
}

// Typed accessors that report failures as JSON pointers.
class Reader {
 public:
  static const json& field(const json& object, const std::string& path, const char* key) {
    if (!object.is_object()) throw SchemaError(path, "expected an object");
    auto it = object.find(key);
    if (it == object.end()) throw SchemaError(path + "/" + key, "missing field");
    return *it;
  }

  static const json& array(const json& value, const std::string& path) {
    if (!value.is_array()) throw SchemaError(path, "expected an array");
    return value;
  }

  static std::string string(const json& value, const std::string& path) {
    if (!value.is_string()) throw SchemaError(path, "expected a string");
    return value.get<std::string>();
  }

  static std::uint64_t unsigned_int(const json& value, const std::string& path) {
    // documents built in memory carry signed integers, parsed ones unsigned
    bool ok = value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
    if (!ok) throw SchemaError(path, "expected a non-negative integer");
    return value.get<std::uint64_t>();
  }

  static ClauseId id(const json& value, const std::string& path) {
    auto v = unsigned_int(value, path);
    if (v == 0) throw SchemaError(path, "clause ids start at 1");
    return v;
  }

  static double number(const json& value, const std::string& path) {
    if (!value.is_number()) throw SchemaError(path, "expected a number");
    return value.get<double>();
  }

  static std::optional<std::size_t> nullable_index(const json& value, const std::string& path) {
    if (value.is_null()) return std::nullopt;
    auto v = unsigned_int(value, path);
    if (v == 0) throw SchemaError(path, "event indices start at 1");
    return static_cast<std::size_t>(v);
  }

  static std::vector<ClauseId> ids(const json& value, const std::string& path) {
    std::vector<ClauseId> out;
    const auto& list = array(value, path);
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(id(list[i], path + "/" + std::to_string(i)));
    return out;
  }

  static std::vector<Violation> violations(const json& value, const std::string& path) {
    std::vector<Violation> out;
    const auto& list = array(value, path);
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string at = path + "/" + std::to_string(i);
      Violation v;
      v.event_index = unsigned_int(field(list[i], at, "event_index"), at + "/event_index");
      auto tag = string(field(list[i], at, "property"), at + "/property");
      auto property = property_from_string(tag);
      if (!property) throw SchemaError(at + "/property", "unknown property tag '" + tag + "'");
      v.property = *property;
      v.message = string(field(list[i], at, "message"), at + "/message");
      out.push_back(std::move(v));
    }
    return out;
  }
};

void require_member(const Derivation& d, ClauseId id, const std::string& path) {
  if (!d.contains(id)) throw SchemaError(path, "unknown clause " + std::to_string(id));
}

}  // namespace

std::string escape_label(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c;
    }
  }
  return out;
}

json to_document(const Derivation& derivation, const GraphView& view, const Layout& layout) {
  json nodes = json::array();
  for (const auto& [id, node] : derivation.nodes) {
    nodes.push_back({{"id", id},
                     {"clause", node.clause_text},
                     {"rule", node.rule},
                     {"premises", id_array(node.premises)},
                     {"new_at", optional_index(node.new_at)},
                     {"passive_at", optional_index(node.passive_at)},
                     {"active_at", optional_index(node.active_at)},
                     {"origin", std::string(to_string(node.origin))},
                     {"is_root", node.is_root}});
  }

  json timeline = json::array();
  for (const auto& entry : derivation.timeline) timeline.push_back({std::string(to_string(entry.kind)), entry.clause_id});

  json provenance = json::array();
  for (const auto& step : view.provenance) provenance.push_back({{"op", step.op}, {"ids", id_array(step.ids)}});
  json rewired = json::array();
  for (const auto& [id, premises] : view.rewired) rewired.push_back({{"id", id}, {"premises", id_array(premises)}});

  json positions = json::array();
  for (const auto& [id, point] : layout.positions) {
    auto rank = layout.rank.find(id);
    positions.push_back({{"id", id},
                         {"x", point.x},
                         {"y", point.y},
                         {"rank", rank == layout.rank.end() ? json(nullptr) : json(rank->second)}});
  }

  return {{"format_version", kFormatVersion},
          {"event_count", derivation.event_count()},
          {"nodes", std::move(nodes)},
          {"timeline", std::move(timeline)},
          {"violations", violations_to_json(derivation.violations)},
          {"warnings", violations_to_json(derivation.warnings)},
          {"view",
           {{"visible", id_array(view.visible)},
            {"highlighted", id_array(view.highlighted)},
            {"provenance", std::move(provenance)},
            {"rewired", std::move(rewired)}}},
          {"layout", {{"width", layout.width}, {"height", layout.height}, {"positions", std::move(positions)}}}};
}

GraphDocument from_document(const json& document) {
  if (!document.is_object()) throw SchemaError("", "expected an object");
  const auto& version = Reader::field(document, "", "format_version");
  if (!version.is_number_integer()) throw SchemaError("/format_version", "expected an integer");
  if (version.get<std::int64_t>() != kFormatVersion) {
    throw VersionError("unsupported format_version " + version.dump() + " (expected " +
                       std::to_string(kFormatVersion) + ")");
  }

  auto derivation = std::make_shared<Derivation>();
  const auto& nodes = Reader::array(Reader::field(document, "", "nodes"), "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = "/nodes/" + std::to_string(i);
    const auto& n = nodes[i];
    ClauseNode node;
    node.id = Reader::id(Reader::field(n, at, "id"), at + "/id");
    node.clause_text = Reader::string(Reader::field(n, at, "clause"), at + "/clause");
    node.rule = Reader::string(Reader::field(n, at, "rule"), at + "/rule");
    node.premises = Reader::ids(Reader::field(n, at, "premises"), at + "/premises");
    node.new_at = Reader::nullable_index(Reader::field(n, at, "new_at"), at + "/new_at");
    node.passive_at = Reader::nullable_index(Reader::field(n, at, "passive_at"), at + "/passive_at");
    node.active_at = Reader::nullable_index(Reader::field(n, at, "active_at"), at + "/active_at");
    auto origin_name = Reader::string(Reader::field(n, at, "origin"), at + "/origin");
    auto origin = node_origin_from_string(origin_name);
    if (!origin) throw SchemaError(at + "/origin", "unknown origin '" + origin_name + "'");
    node.origin = *origin;
    if (!derivation->nodes.emplace(node.id, std::move(node)).second) {
      throw SchemaError(at + "/id", "duplicate clause id");
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = "/nodes/" + std::to_string(i) + "/premises";
    const auto& node = derivation->nodes.at(nodes[i]["id"].get<ClauseId>());
    for (std::size_t j = 0; j < node.premises.size(); ++j) {
      require_member(*derivation, node.premises[j], at + "/" + std::to_string(j));
    }
  }

  const auto& timeline = Reader::array(Reader::field(document, "", "timeline"), "/timeline");
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    std::string at = "/timeline/" + std::to_string(i);
    const auto& entry = timeline[i];
    if (!entry.is_array() || entry.size() != 2) throw SchemaError(at, "expected [kind, id]");
    auto kind_name = Reader::string(entry[0], at + "/0");
    auto kind = event_kind_from_string(kind_name);
    if (!kind) throw SchemaError(at + "/0", "unknown event kind '" + kind_name + "'");
    derivation->timeline.push_back({*kind, Reader::id(entry[1], at + "/1")});
  }
  auto event_count = Reader::unsigned_int(Reader::field(document, "", "event_count"), "/event_count");
  if (event_count != derivation->timeline.size()) {
    throw SchemaError("/event_count", "does not match the timeline length");
  }
  derivation->violations = Reader::violations(Reader::field(document, "", "violations"), "/violations");
  derivation->warnings = Reader::violations(Reader::field(document, "", "warnings"), "/warnings");
  derivation->reindex();
  try {
    topological_order(*derivation);
  } catch (const CycleError&) {
    throw SchemaError("/nodes", "premise relation contains a cycle");
  }

  GraphDocument out;
  out.derivation = derivation;
  out.view.base = derivation;

  const auto& view = Reader::field(document, "", "view");
  for (ClauseId id : Reader::ids(Reader::field(view, "/view", "visible"), "/view/visible")) {
    require_member(*derivation, id, "/view/visible");
    out.view.visible.insert(id);
  }
  for (ClauseId id : Reader::ids(Reader::field(view, "/view", "highlighted"), "/view/highlighted")) {
    if (!out.view.visible.contains(id)) throw SchemaError("/view/highlighted", "clause " + std::to_string(id) + " is not visible");
    out.view.highlighted.insert(id);
  }
  const auto& provenance = Reader::array(Reader::field(view, "/view", "provenance"), "/view/provenance");
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    std::string at = "/view/provenance/" + std::to_string(i);
    TransformStep step;
    step.op = Reader::string(Reader::field(provenance[i], at, "op"), at + "/op");
    step.ids = Reader::ids(Reader::field(provenance[i], at, "ids"), at + "/ids");
    out.view.provenance.push_back(std::move(step));
  }
  const auto& rewired = Reader::array(Reader::field(view, "/view", "rewired"), "/view/rewired");
  for (std::size_t i = 0; i < rewired.size(); ++i) {
    std::string at = "/view/rewired/" + std::to_string(i);
    ClauseId id = Reader::id(Reader::field(rewired[i], at, "id"), at + "/id");
    require_member(*derivation, id, at + "/id");
    auto premises = Reader::ids(Reader::field(rewired[i], at, "premises"), at + "/premises");
    for (ClauseId p : premises) require_member(*derivation, p, at + "/premises");
    out.view.rewired[id] = std::move(premises);
  }

  const auto& layout = Reader::field(document, "", "layout");
  out.layout.width = Reader::number(Reader::field(layout, "/layout", "width"), "/layout/width");
  out.layout.height = Reader::number(Reader::field(layout, "/layout", "height"), "/layout/height");
  const auto& positions = Reader::array(Reader::field(layout, "/layout", "positions"), "/layout/positions");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    std::string at = "/layout/positions/" + std::to_string(i);
    const auto& p = positions[i];
    ClauseId id = Reader::id(Reader::field(p, at, "id"), at + "/id");
    require_member(*derivation, id, at + "/id");
    out.layout.positions[id] = {Reader::number(Reader::field(p, at, "x"), at + "/x"),
                                Reader::number(Reader::field(p, at, "y"), at + "/y")};
    const auto& rank = Reader::field(p, at, "rank");
    if (!rank.is_null()) out.layout.rank[id] = Reader::unsigned_int(rank, at + "/rank");
  }
  return out;
}

std::string to_dot(const GraphView& view) {
  std::ostringstream out;
  out << "digraph derivation {\n";
  out << "  node [shape=box];\n";
  for (ClauseId id : view.visible) {
    const auto& node = view.base->node(id);
    out << "  " << id << " [label=\"" << id << ". " << escape_label(node.clause_text) << "\"";
    if (view.highlighted.contains(id)) out << ", style=bold";
    out << "];\n";
  }
  for (const auto& [from, to] : view.edges()) out << "  " << from << " -> " << to << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace satvis
