#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "satvis/derivation.hpp"
#include "satvis/layout.hpp"
#include "satvis/transformations.hpp"

namespace satvis {

inline constexpr int kFormatVersion = 1;

struct GraphDocument {
  std::shared_ptr<const Derivation> derivation;
  GraphView view;
  Layout layout;
};

/// Writes the document described in docs/format.md.
nlohmann::json to_document(const Derivation& derivation, const GraphView& view, const Layout& layout);

/// Inverse of to_document. The returned view's base is the returned
/// derivation. Throws VersionError for an unknown format_version and
/// SchemaError (with a JSON pointer) for anything malformed.
GraphDocument from_document(const nlohmann::json& document);

/// Graphviz digraph of the visible nodes and induced edges, nodes by id and
/// edges by (premise, conclusion).
std::string to_dot(const GraphView& view);

/// Quotes and backslashes escaped for a double-quoted DOT/JSON-like string.
std::string escape_label(std::string_view text);

}  // namespace satvis
