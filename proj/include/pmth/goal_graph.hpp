#pragma once

// Goal graphs: named actions plus dependency edges, condensed into a linear
// instruction sequence by a deterministic topological sort.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"

namespace pmth {

struct GoalGraph {
  std::map<std::string, Action> goals;                     // id -> action
  std::set<std::pair<std::string, std::string>> deps;      // (before, after)
};

namespace detail {

// Walks back through predecessors to print one concrete cycle.
inline std::string describe_cycle(const GoalGraph& g,
                                  const std::set<std::string>& stuck) {
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto& [a, b] : g.deps)
    if (stuck.count(a) && stuck.count(b)) preds[b].push_back(a);
  std::string start = *stuck.begin();
  std::vector<std::string> path{start};
  std::set<std::string> seen{start};
  std::string cur = start;
  for (;;) {
    const auto& ps = preds[cur];
    std::string next = ps.empty() ? cur : *std::min_element(ps.begin(), ps.end());
    if (seen.count(next)) {
      std::vector<std::string> cycle;
      auto it = std::find(path.begin(), path.end(), next);
      cycle.assign(it, path.end());
      cycle.push_back(next);
      std::reverse(cycle.begin(), cycle.end());
      std::string out;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) out += " -> ";
        out += cycle[i];
      }
      return out;
    }
    seen.insert(next);
    path.push_back(next);
    cur = next;
  }
}

}  // namespace detail

// Kahn's algorithm taking the lexicographically smallest ready goal each
// round, so the result is the lexicographically least linear extension.
// A trailing Halt is appended.
inline InstructionSequence condense(const GoalGraph& g, const std::string& name) {
  for (const auto& [a, b] : g.deps) {
    if (!g.goals.count(a))
      fail(Errc::validation_error, "dependency references unknown goal '" + a + "'");
    if (!g.goals.count(b))
      fail(Errc::validation_error, "dependency references unknown goal '" + b + "'");
  }
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [id, act] : g.goals) indeg[id] = 0;
  for (const auto& [a, b] : g.deps) {
    ++indeg[b];
    out[a].push_back(b);
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push(id);
  InstructionSequence iseq;
  iseq.name = name;
  std::set<std::string> done;
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    done.insert(id);
    iseq.instrs.push_back(Instruction::basic(g.goals.at(id)));
    for (const std::string& nxt : out[id])
      if (--indeg[nxt] == 0) ready.push(nxt);
  }
  if (done.size() != g.goals.size()) {
    std::set<std::string> stuck;
    for (const auto& [id, act] : g.goals)
      if (!done.count(id)) stuck.insert(id);
    fail(Errc::cyclic_goals, detail::describe_cycle(g, stuck));
  }
  iseq.instrs.push_back(Instruction::halt());
  return iseq;
}

}  // namespace pmth
