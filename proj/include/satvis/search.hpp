#pragma once

#include <string_view>
#include <vector>

#include "satvis/derivation.hpp"

namespace satvis {

/// Ids of clauses whose text contains query, ascending. Case folding is
/// ASCII-only. The empty query matches every node.
std::vector<ClauseId> full_text_search(const Derivation& derivation, std::string_view query,
                                       bool case_sensitive = false);

/// Premise list of id in inference order. Throws NotFoundError.
std::vector<ClauseId> parents(const Derivation& derivation, ClauseId id);

/// Clauses that use id as a premise, ascending. Throws NotFoundError.
std::vector<ClauseId> children(const Derivation& derivation, ClauseId id);

}  // namespace satvis
