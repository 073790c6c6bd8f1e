#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satvis {

/// The prover's clause number. Always >= 1.
using ClauseId = std::uint64_t;

enum class EventKind { New, Passive, Active };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

/// One `[SA]` line of the saturation log.
///
/// The inference that produced the clause is (premises, clause_id); an empty
/// premise list means the annotation carried only a rule name, as in
/// `[input]`.
struct SaturationEvent {
  EventKind kind = EventKind::New;
  ClauseId clause_id = 0;
  std::string clause_text;
  std::string rule;
  std::vector<ClauseId> premises;
  std::size_t line_number = 0;

  bool operator==(const SaturationEvent&) const = default;
};

struct SkippedLine {
  std::size_t line_number = 0;
  std::string reason;

  bool operator==(const SkippedLine&) const = default;
};

struct ParseReport {
  std::vector<SaturationEvent> events;
  std::vector<SkippedLine> skipped_lines;
};

/// Parses one line of the form
///
///     [SA] <kind>: <id>. <clause> [<annotation>]
///
/// kind is one of new/passive/active. The annotation is split at its last
/// space; when the final token is `digits(,digits)*` it is the premise list
/// and the prefix is the rule, otherwise the whole annotation is the rule.
/// A trailing '\r' and surrounding whitespace are ignored. Returns nullopt
/// for anything else.
std::optional<SaturationEvent> parse_line(std::string_view line,
                                          std::size_t line_number);

/// Parses newline-delimited text (LF or CRLF). Every line ends up either as
/// an event or as a skipped line, in input order.
ParseReport parse_log(std::string_view text);

/// Inverse of parse_line, modulo line_number.
std::string render_event(const SaturationEvent& event);

}  // namespace satvis
