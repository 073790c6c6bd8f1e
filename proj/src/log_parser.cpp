#include "satvis/log_parser.hpp"

#include <algorithm>
#include <charconv>

namespace satvis {

namespace {

constexpr std::string_view kPrefix = "[SA]";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Strict positive decimal; rejects empty, signs, zero and overflow.
std::optional<ClauseId> parse_id(std::string_view s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), is_digit)) return std::nullopt;
  ClauseId value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value == 0) return std::nullopt;
  return value;
}

bool looks_like_premise_list(std::string_view token) {
  if (token.empty() || !is_digit(token.front()) || !is_digit(token.back())) return false;
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (c == ',') {
      if (token[i + 1] == ',') return false;
    } else if (!is_digit(c)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::New: return "new";
    case EventKind::Passive: return "passive";
    case EventKind::Active: return "active";
  }
  return "new";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  if (name == "new") return EventKind::New;
  if (name == "passive") return EventKind::Passive;
  if (name == "active") return EventKind::Active;
  return std::nullopt;
}

std::optional<SaturationEvent> parse_line(std::string_view line, std::size_t line_number) {
  std::string_view rest = trim(line);
  if (!rest.starts_with(kPrefix)) return std::nullopt;
  rest.remove_prefix(kPrefix.size());
  if (rest.empty() || !is_space(rest.front())) return std::nullopt;
  rest = trim(rest);

  auto colon = rest.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto kind = event_kind_from_string(rest.substr(0, colon));
  if (!kind) return std::nullopt;
  rest = trim(rest.substr(colon + 1));

  auto dot = rest.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto id = parse_id(rest.substr(0, dot));
  if (!id) return std::nullopt;
  rest = rest.substr(dot + 1);
  if (rest.empty() || !is_space(rest.front())) return std::nullopt;
  rest = trim(rest);

  // <clause> [<annotation>]
  if (rest.empty() || rest.back() != ']') return std::nullopt;
  auto open = rest.rfind('[');
  if (open == std::string_view::npos || open == 0 || !is_space(rest[open - 1])) return std::nullopt;
  std::string_view clause = trim(rest.substr(0, open));
  std::string_view annotation = trim(rest.substr(open + 1, rest.size() - open - 2));
  if (clause.empty() || annotation.empty()) return std::nullopt;

  SaturationEvent event;
  event.kind = *kind;
  event.clause_id = *id;
  event.clause_text = std::string(clause);
  event.line_number = line_number;

  auto split = std::find_if(annotation.rbegin(), annotation.rend(), is_space);
  std::string_view tail = annotation.substr(static_cast<std::size_t>(annotation.rend() - split));
  if (split != annotation.rend() && looks_like_premise_list(tail)) {
    std::size_t start = 0;
    while (start <= tail.size()) {
      auto comma = tail.find(',', start);
      if (comma == std::string_view::npos) comma = tail.size();
      auto premise = parse_id(tail.substr(start, comma - start));
      if (!premise) return std::nullopt;
      event.premises.push_back(*premise);
      start = comma + 1;
    }
    event.rule = std::string(trim(annotation.substr(0, annotation.size() - tail.size())));
  } else {
    event.rule = std::string(annotation);
  }
  return event;
}

ParseReport parse_log(std::string_view text) {
  ParseReport report;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_number;
    if (auto event = parse_line(line, line_number)) {
      report.events.push_back(std::move(*event));
    } else {
      report.skipped_lines.push_back({line_number, "unrecognized line"});
    }
    pos = end + 1;
  }
  return report;
}

std::string render_event(const SaturationEvent& event) {
  std::string out = "[SA] ";
  out += to_string(event.kind);
  out += ": ";
  out += std::to_string(event.clause_id);
  out += ". ";
  out += event.clause_text;
  out += " [";
  out += event.rule;
  for (std::size_t i = 0; i < event.premises.size(); ++i) {
    out += i == 0 ? ' ' : ',';
    out += std::to_string(event.premises[i]);
  }
  out += ']';
  return out;
}

}  // namespace satvis
