#pragma once

// Trace model and its tab-separated text form. render_trace and parse_trace
// are inverses over the event lines; the trailing summary comment is
// regenerated rather than trusted.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"
#include "pmth/service.hpp"
#include "pmth/switch_protocol.hpp"

namespace pmth {

enum class EventKind {
  act,
  pseudo_act,
  c_switch,
  a_switch,
  proper_switch,
  pseudo_switch,
  pseudo_back,
  block,
  halt,
  deadlock,
  shrink,
  grow,
  waiver,
  fuel_exhausted,
};

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::act: return "act";
    case EventKind::pseudo_act: return "pseudo-act";
    case EventKind::c_switch: return "c-switch";
    case EventKind::a_switch: return "a-switch";
    case EventKind::proper_switch: return "proper-switch";
    case EventKind::pseudo_switch: return "pseudo-switch";
    case EventKind::pseudo_back: return "pseudo-back";
    case EventKind::block: return "block";
    case EventKind::halt: return "halt";
    case EventKind::deadlock: return "deadlock";
    case EventKind::shrink: return "shrink";
    case EventKind::grow: return "grow";
    case EventKind::waiver: return "waiver";
    case EventKind::fuel_exhausted: return "fuel-exhausted";
  }
  return "?";
}

inline EventKind event_kind_from_name(std::string_view s) {
  if (s == "act") return EventKind::act;
  if (s == "pseudo-act") return EventKind::pseudo_act;
  if (s == "c-switch") return EventKind::c_switch;
  if (s == "a-switch") return EventKind::a_switch;
  if (s == "proper-switch") return EventKind::proper_switch;
  if (s == "pseudo-switch") return EventKind::pseudo_switch;
  if (s == "pseudo-back") return EventKind::pseudo_back;
  if (s == "block") return EventKind::block;
  if (s == "halt") return EventKind::halt;
  if (s == "deadlock") return EventKind::deadlock;
  if (s == "shrink") return EventKind::shrink;
  if (s == "grow") return EventKind::grow;
  if (s == "waiver") return EventKind::waiver;
  if (s == "fuel-exhausted") return EventKind::fuel_exhausted;
  fail(Errc::parse_error, "unknown event kind '" + std::string(s) + "'");
}

// One line of a trace. `thread` is the acting thread; switch events put the
// target there and leave context empty; pseudo events carry the guest as
// thread and the host as context.
struct TraceEvent {
  std::int64_t step = 0;
  EventKind kind = EventKind::act;
  std::string thread;
  std::optional<std::string> context;
  std::optional<Action> action;
  std::optional<Reply> reply;
  std::optional<Motive> motive;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct TraceSummary {
  std::int64_t steps = 0;
  int threads = 0;
  std::string policy;
  std::uint64_t seed = 0;
  friend bool operator==(const TraceSummary&, const TraceSummary&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  TraceSummary summary;
};

inline std::string render_event(const TraceEvent& e) {
  std::string out = std::to_string(e.step);
  out += '\t';
  out += event_kind_name(e.kind);
  out += '\t';
  out += e.thread.empty() ? "-" : e.thread;
  out += '\t';
  out += e.context ? *e.context : "-";
  out += '\t';
  out += e.action ? e.action->str() : "-";
  out += '\t';
  out += e.reply ? std::string(1, reply_char(*e.reply)) : "-";
  out += '\t';
  out += e.motive ? motive_name(*e.motive) : "-";
  return out;
}

inline std::string render_trace(const Trace& t) {
  std::string out;
  for (const TraceEvent& e : t.events) {
    out += render_event(e);
    out += '\n';
  }
  out += "# steps=" + std::to_string(t.summary.steps) +
         " threads=" + std::to_string(t.summary.threads) + " policy=" + t.summary.policy +
         " seed=" + std::to_string(t.summary.seed) + "\n";
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

inline TraceEvent parse_event(std::string_view line) {
  auto cols = detail::split_tabs(line);
  if (cols.size() != 7)
    fail(Errc::parse_error, "trace line needs 7 tab-separated columns, got " +
                                std::to_string(cols.size()));
  TraceEvent e;
  try {
    e.step = std::stoll(std::string(cols[0]));
  } catch (const std::exception&) {
    fail(Errc::parse_error, "bad step number '" + std::string(cols[0]) + "'");
  }
  e.kind = event_kind_from_name(cols[1]);
  if (cols[2] != "-") e.thread = std::string(cols[2]);
  if (cols[3] != "-") e.context = std::string(cols[3]);
  if (cols[4] != "-") e.action = parse_action(cols[4]);
  if (cols[5] != "-") {
    if (cols[5].size() != 1 || (cols[5][0] != 'T' && cols[5][0] != 'F' && cols[5][0] != 'B'))
      fail(Errc::parse_error, "bad reply '" + std::string(cols[5]) + "'");
    e.reply = static_cast<Reply>(cols[5][0]);
  }
  if (cols[6] != "-") e.motive = motive_from_name(cols[6]);
  return e;
}

// Reads event lines; `#` lines are skipped except that a summary comment is
// mined for its key=value pairs when present.
inline Trace parse_trace(std::string_view text) {
  Trace t;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string s(line);
      auto grab = [&](const std::string& key) -> std::optional<std::string> {
        auto pos = s.find(key + "=");
        if (pos == std::string::npos) return std::nullopt;
        pos += key.size() + 1;
        auto stop = s.find(' ', pos);
        return s.substr(pos, stop == std::string::npos ? std::string::npos : stop - pos);
      };
      try {
        if (auto v = grab("steps")) t.summary.steps = std::stoll(*v);
        if (auto v = grab("threads")) t.summary.threads = std::stoi(*v);
        if (auto v = grab("policy")) t.summary.policy = *v;
        if (auto v = grab("seed")) t.summary.seed = std::stoull(*v);
      } catch (const std::exception&) {
        // Malformed summary comments are ignored; events are the record.
      }
      continue;
    }
    t.events.push_back(parse_event(line));
  }
  return t;
}

}  // namespace pmth
