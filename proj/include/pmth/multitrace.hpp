#pragma once

// Ex-post analysis: projecting a trace onto one thread, decomposing a whole
// history into revealed threads, and span statistics over the result.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"
#include "pmth/trace.hpp"

namespace pmth {

struct Progression {
  std::vector<std::pair<std::int64_t, Action>> items;
  std::size_t now = 0;  // boundary: items[0..now) are past, the rest future
  friend bool operator==(const Progression&, const Progression&) = default;
};

struct MultiTrace {
  std::map<std::string, Progression> threads;  // revealed name -> progression
  std::string classifier_id;
};

inline bool is_progression_event(const TraceEvent& e) {
  return e.kind == EventKind::act || e.kind == EventKind::pseudo_act;
}

// Everything t did, in step order, as already past.
inline Progression project(const Trace& tr, const std::string& t) {
  Progression p;
  for (const TraceEvent& e : tr.events)
    if (is_progression_event(e) && e.thread == t && e.action)
      p.items.emplace_back(e.step, *e.action);
  p.now = p.items.size();
  return p;
}

// An observer's rule set: action prefixes mapped to revealed-thread names,
// with a catch-all. provenance ignores prefixes and trusts the recorded
// owner instead.
struct Classifier {
  std::vector<std::pair<std::string, std::string>> prefixes;  // prefix -> revealed name
  std::string default_name = "other";
  bool provenance = false;
};

inline MultiTrace decompose(const Trace& tr, const Classifier& cls) {
  std::set<std::string> seen;
  for (const auto& [prefix, name] : cls.prefixes)
    if (!seen.insert(prefix).second)
      fail(Errc::ambiguous_classifier, "duplicate prefix '" + prefix + "'");

  MultiTrace mt;
  mt.classifier_id = cls.provenance ? "provenance" : "prefix";
  for (const TraceEvent& e : tr.events) {
    if (!is_progression_event(e) || !e.action) continue;
    std::string revealed;
    if (cls.provenance) {
      revealed = e.thread;
    } else {
      const std::string key = e.action->str();
      std::size_t best = 0;
      bool matched = false;
      for (const auto& [prefix, name] : cls.prefixes) {
        if (key.compare(0, prefix.size(), prefix) != 0) continue;
        if (!matched || prefix.size() > best) {
          best = prefix.size();
          revealed = name;
          matched = true;
        }
      }
      if (!matched) revealed = cls.default_name;
    }
    mt.threads[revealed].items.emplace_back(e.step, *e.action);
  }
  for (auto& [name, prog] : mt.threads) prog.now = prog.items.size();
  return mt;
}

struct RevealedStats {
  std::string name;
  std::int64_t count = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::int64_t span = 0;  // last - first + 1
};

inline std::vector<RevealedStats> stats(const MultiTrace& mt) {
  std::vector<RevealedStats> out;
  for (const auto& [name, prog] : mt.threads) {
    if (prog.items.empty()) continue;
    RevealedStats s;
    s.name = name;
    s.count = static_cast<std::int64_t>(prog.items.size());
    s.first = prog.items.front().first;
    s.last = prog.items.back().first;
    s.span = s.last - s.first + 1;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const RevealedStats& a, const RevealedStats& b) { return a.name < b.name; });
  return out;
}

// Mean span with two decimals, computed in integer arithmetic (round half
// away from zero) so the report is platform-independent.
inline std::string format_mean_span(const std::vector<RevealedStats>& rows) {
  if (rows.empty()) return "0.00";
  std::int64_t total = 0;
  for (const RevealedStats& s : rows) total += s.span;
  std::int64_t n = static_cast<std::int64_t>(rows.size());
  std::int64_t scaled = (total * 100 + n / 2) / n;
  std::string whole = std::to_string(scaled / 100);
  std::int64_t frac = scaled % 100;
  std::string f = std::to_string(frac);
  if (f.size() < 2) f = "0" + f;
  return whole + "." + f;
}

inline std::string render_stats(const MultiTrace& mt) {
  auto rows = stats(mt);
  std::string out = "name\tcount\tfirst\tlast\tspan\n";
  for (const RevealedStats& s : rows)
    out += s.name + "\t" + std::to_string(s.count) + "\t" + std::to_string(s.first) + "\t" +
           std::to_string(s.last) + "\t" + std::to_string(s.span) + "\n";
  out += "# mean-span=" + format_mean_span(rows) +
         " threads=" + std::to_string(rows.size()) + "\n";
  return out;
}

}  // namespace pmth
