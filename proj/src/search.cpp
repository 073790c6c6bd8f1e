#include "satvis/search.hpp"

#include <algorithm>
#include <string>

namespace satvis {

namespace {

char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool contains_folded(std::string_view haystack, std::string_view needle) {
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return fold(a) == fold(b); });
  return it != haystack.end();
}

}  // namespace

std::vector<ClauseId> full_text_search(const Derivation& derivation, std::string_view query, bool case_sensitive) {
  std::vector<ClauseId> hits;
  for (const auto& [id, node] : derivation.nodes) {
    bool match = query.empty() ||
                 (case_sensitive ? node.clause_text.find(query) != std::string::npos
                                 : contains_folded(node.clause_text, query));
    if (match) hits.push_back(id);
  }
  return hits;
}

std::vector<ClauseId> parents(const Derivation& derivation, ClauseId id) {
  return derivation.node(id).premises;
}

std::vector<ClauseId> children(const Derivation& derivation, ClauseId id) {
  return derivation.node(id).children;
}

}  // namespace satvis
