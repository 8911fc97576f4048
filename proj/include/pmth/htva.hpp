#pragma once

// Hierarchical thread vectors with attributes: nested vectors whose leaves
// are thread instances, plus the workload-conserving reconfiguration moves
// (shrink / grow / rebalance / create / remove).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pmth/attributes.hpp"
#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"

namespace pmth {

struct ThreadInstance {
  std::string name;
  InstructionSequence iseq;
  std::uint32_t pc = 1;
  AttributeSet attrs;
  bool blocked = false;
  bool finished = false;
  std::optional<std::int64_t> last_active_step;
  int consecutive_turns = 0;
};

struct HtvNode;

struct HtvVector {
  std::string name;
  std::vector<HtvNode> children;
};

struct HtvNode {
  std::variant<ThreadInstance, HtvVector> v;

  bool is_leaf() const { return std::holds_alternative<ThreadInstance>(v); }
  ThreadInstance& leaf() { return std::get<ThreadInstance>(v); }
  const ThreadInstance& leaf() const { return std::get<ThreadInstance>(v); }
  HtvVector& vec() { return std::get<HtvVector>(v); }
  const HtvVector& vec() const { return std::get<HtvVector>(v); }
};

struct Htva {
  std::vector<HtvNode> top;
};

// Depth counts vector nesting only: a bare leaf contributes nothing, and a
// vector is one deeper than its deepest vector child. A flat vector of
// threads therefore has depth 1, as does an empty one.
inline int depth(const HtvNode& n) {
  if (n.is_leaf()) return 0;
  int inner = 0;
  for (const HtvNode& c : n.vec().children)
    if (!c.is_leaf()) inner = std::max(inner, depth(c));
  return 1 + inner;
}

inline int depth(const Htva& h) {
  int inner = 0;
  for (const HtvNode& c : h.top)
    if (!c.is_leaf()) inner = std::max(inner, depth(c));
  return 1 + inner;
}

namespace detail {

template <typename Fn>
void walk_leaves(std::vector<HtvNode>& nodes, Fn&& fn) {
  for (HtvNode& n : nodes) {
    if (n.is_leaf())
      fn(n.leaf());
    else
      walk_leaves(n.vec().children, fn);
  }
}

template <typename Fn>
void walk_leaves(const std::vector<HtvNode>& nodes, Fn&& fn) {
  for (const HtvNode& n : nodes) {
    if (n.is_leaf())
      fn(n.leaf());
    else
      walk_leaves(n.vec().children, fn);
  }
}

}  // namespace detail

// Leaves in left-to-right order; the order leaf names are revealed here is
// the canonical scheduling order of a freshly loaded population.
inline std::vector<const ThreadInstance*> flatten(const Htva& h) {
  std::vector<const ThreadInstance*> out;
  detail::walk_leaves(h.top, [&](const ThreadInstance& t) { out.push_back(&t); });
  return out;
}

inline std::vector<ThreadInstance*> flatten(Htva& h) {
  std::vector<ThreadInstance*> out;
  detail::walk_leaves(h.top, [&](ThreadInstance& t) { out.push_back(&t); });
  return out;
}

inline ThreadInstance* find_thread(Htva& h, const std::string& name) {
  for (ThreadInstance* t : flatten(h))
    if (t->name == name) return t;
  return nullptr;
}

inline const ThreadInstance* find_thread(const Htva& h, const std::string& name) {
  for (const ThreadInstance* t : flatten(h))
    if (t->name == name) return t;
  return nullptr;
}

// One cyclic move on the top level: head node to the tail.
inline void rotate(Htva& h) {
  if (h.top.size() < 2) return;
  std::rotate(h.top.begin(), h.top.begin() + 1, h.top.end());
}

struct ExecutiveConfig {
  enum class Mode { dedicated, distributed };
  Mode mode = Mode::distributed;
  std::string thread;  // dedicated only
};

struct ValidationReport {
  struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
  };
  std::vector<Check> checks;

  bool all_pass() const {
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string render() const {
    std::string out;
    for (const Check& c : checks) {
      out += c.pass ? "ok   " : "FAIL ";
      out += c.name;
      if (!c.detail.empty()) {
        out += ": ";
        out += c.detail;
      }
      out += '\n';
    }
    return out;
  }
};

// Structural and quantitative well-formedness. Never throws: auditing a bad
// population is the point. Check order is fixed so reports diff cleanly.
inline ValidationReport validate(const Htva& h, const ExecutiveConfig& exec) {
  ValidationReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  bool empty_vec = false;
  std::string empty_name;
  std::vector<const HtvVector*> stack;
  std::vector<const std::vector<HtvNode>*> todo{&h.top};
  while (!todo.empty()) {
    const auto* nodes = todo.back();
    todo.pop_back();
    for (const HtvNode& n : *nodes) {
      if (n.is_leaf()) continue;
      if (n.vec().children.empty() && !empty_vec) {
        empty_vec = true;
        empty_name = n.vec().name;
      }
      todo.push_back(&n.vec().children);
    }
  }
  add("vector-children-nonempty", !empty_vec,
      empty_vec ? "vector '" + empty_name + "' has no children" : "");

  auto leaves = flatten(h);
  std::set<std::string> names;
  std::string dup;
  for (const ThreadInstance* t : leaves)
    if (!names.insert(t->name).second && dup.empty()) dup = t->name;
  add("leaf-names-unique", dup.empty(), dup.empty() ? "" : "duplicate '" + dup + "'");

  const int n = static_cast<int>(leaves.size());
  auto sum_check = [&](std::string name, long long got, long long want) {
    add(std::move(name), got == want,
        got == want ? "" : "sum " + std::to_string(got) + ", expected " + std::to_string(want));
  };
  long long po = 0, ps = 0;
  for (const ThreadInstance* t : leaves) {
    po += t->attrs.prominence_objective;
    ps += t->attrs.prominence_subjective;
  }
  sum_check("prominence-objective-sum", po, 3LL * n);
  sum_check("prominence-subjective-sum", ps, 3LL * n);

  for (WorkloadComponent c : {WorkloadComponent::subjective, WorkloadComponent::objective,
                              WorkloadComponent::intended, WorkloadComponent::expected}) {
    long long s = 0;
    for (const ThreadInstance* t : leaves) s += t->attrs.workload[c];
    sum_check(std::string("workload-") + workload_component_name(c) + "-sum", s,
              n == 0 ? 0 : kWorkloadTotalBp);
  }

  std::string range_bad;
  auto in_range = [&](const ThreadInstance& t, const std::string& what, int v, int lo, int hi) {
    if (v < lo || v > hi)
      if (range_bad.empty())
        range_bad = t.name + "." + what + "=" + std::to_string(v) + " outside " +
                    std::to_string(lo) + ".." + std::to_string(hi);
  };
  for (const ThreadInstance* t : leaves) {
    const AttributeSet& a = t->attrs;
    in_range(*t, "prominence-objective", a.prominence_objective, 1, 5);
    in_range(*t, "prominence-subjective", a.prominence_subjective, 1, 5);
    in_range(*t, "effectiveness.internal", a.effectiveness.internal, 0, 100);
    in_range(*t, "effectiveness.external", a.effectiveness.external, 0, 100);
    in_range(*t, "effectiveness.intended", a.effectiveness.intended, 0, 100);
    in_range(*t, "effectiveness.expected", a.effectiveness.expected, 0, 100);
    in_range(*t, "flow", a.flow, 0, 5);
    in_range(*t, "satisfaction", a.satisfaction, 0, 5);
    in_range(*t, "identification", a.identification, 0, 5);
    in_range(*t, "clarity", a.clarity, 0, 5);
    for (WorkloadComponent c : {WorkloadComponent::subjective, WorkloadComponent::objective,
                                WorkloadComponent::intended, WorkloadComponent::expected})
      in_range(*t, std::string("workload.") + workload_component_name(c), a.workload[c], 0,
               kWorkloadTotalBp);
    for (const auto& [name, q] : a.other) {
      in_range(*t, name + ".internal", q.internal, 0, 100);
      in_range(*t, name + ".external", q.external, 0, 100);
      in_range(*t, name + ".intended", q.intended, 0, 100);
      in_range(*t, name + ".expected", q.expected, 0, 100);
    }
  }
  add("attribute-ranges", range_bad.empty(), range_bad);

  bool exec_ok = exec.mode == ExecutiveConfig::Mode::distributed ||
                 find_thread(h, exec.thread) != nullptr;
  add("executive-exists", exec_ok,
      exec_ok ? "" : "dedicated executive '" + exec.thread + "' not found");
  return rep;
}

// Moves workload off a thread onto the dedicated executive. The donor keeps
// running; only its share changes. All checks precede any mutation.
inline void shrink(Htva& h, const ExecutiveConfig& exec, const std::string& thread, int delta,
                   WorkloadComponent comp) {
  if (exec.mode != ExecutiveConfig::Mode::dedicated)
    fail(Errc::no_executive, "shrink requires a dedicated executive");
  if (thread == exec.thread) fail(Errc::self_transfer, "executive cannot shrink itself");
  ThreadInstance* t = find_thread(h, thread);
  if (!t) fail(Errc::unknown_thread, "'" + thread + "'");
  ThreadInstance* e = find_thread(h, exec.thread);
  if (!e) fail(Errc::no_executive, "dedicated executive '" + exec.thread + "' not found");
  if (delta < 0) fail(Errc::validation_error, "negative shrink");
  if (t->attrs.workload[comp] < delta)
    fail(Errc::insufficient_workload,
         "'" + thread + "' holds " + std::to_string(t->attrs.workload[comp]) + " bp, need " +
             std::to_string(delta));
  t->attrs.workload[comp] -= delta;
  e->attrs.workload[comp] += delta;
}

// The inverse move: the executive grants workload to a thread.
inline void grow(Htva& h, const ExecutiveConfig& exec, const std::string& thread, int delta,
                 WorkloadComponent comp) {
  if (exec.mode != ExecutiveConfig::Mode::dedicated)
    fail(Errc::no_executive, "grow requires a dedicated executive");
  if (thread == exec.thread) fail(Errc::self_transfer, "executive cannot grow itself");
  ThreadInstance* t = find_thread(h, thread);
  if (!t) fail(Errc::unknown_thread, "'" + thread + "'");
  ThreadInstance* e = find_thread(h, exec.thread);
  if (!e) fail(Errc::no_executive, "dedicated executive '" + exec.thread + "' not found");
  if (delta < 0) fail(Errc::validation_error, "negative grow");
  if (e->attrs.workload[comp] < delta)
    fail(Errc::insufficient_executive_balance,
         "executive holds " + std::to_string(e->attrs.workload[comp]) + " bp, need " +
             std::to_string(delta));
  e->attrs.workload[comp] -= delta;
  t->attrs.workload[comp] += delta;
}

// Distributed-mode transfer from one thread to several, applied atomically:
// insufficient funds reject the whole move.
inline void rebalance(Htva& h, const ExecutiveConfig& exec, const std::string& from,
                      const std::map<std::string, int>& targets, WorkloadComponent comp) {
  if (exec.mode != ExecutiveConfig::Mode::distributed)
    fail(Errc::protocol_error, "rebalance requires distributed executive control");
  if (targets.empty()) return;
  if (targets.count(from)) fail(Errc::self_transfer, "'" + from + "' cannot receive from itself");
  ThreadInstance* src = find_thread(h, from);
  if (!src) fail(Errc::unknown_thread, "'" + from + "'");
  long long total = 0;
  for (const auto& [name, delta] : targets) {
    if (delta < 0) fail(Errc::validation_error, "negative rebalance share");
    if (!find_thread(h, name)) fail(Errc::unknown_thread, "'" + name + "'");
    total += delta;
  }
  if (src->attrs.workload[comp] < total)
    fail(Errc::insufficient_workload,
         "'" + from + "' holds " + std::to_string(src->attrs.workload[comp]) + " bp, need " +
             std::to_string(total));
  src->attrs.workload[comp] -= static_cast<int>(total);
  for (const auto& [name, delta] : targets) find_thread(h, name)->attrs.workload[comp] += delta;
}

namespace detail {

inline void collect_node_names(const std::vector<HtvNode>& nodes, std::set<std::string>& out) {
  for (const HtvNode& n : nodes) {
    if (n.is_leaf()) {
      out.insert(n.leaf().name);
    } else {
      out.insert(n.vec().name);
      collect_node_names(n.vec().children, out);
    }
  }
}

}  // namespace detail

// Admits a new thread at top level. Under a dedicated executive its initial
// workload is donated by the executive; under distributed control new
// threads start empty and gain shares through rebalance.
inline void create_thread(Htva& h, const ExecutiveConfig& exec, ThreadInstance t,
                          const WorkloadQuad& donated) {
  std::set<std::string> names;
  detail::collect_node_names(h.top, names);
  if (names.count(t.name)) fail(Errc::duplicate_name, "'" + t.name + "'");
  if (exec.mode == ExecutiveConfig::Mode::dedicated) {
    ThreadInstance* e = find_thread(h, exec.thread);
    if (!e) fail(Errc::no_executive, "dedicated executive '" + exec.thread + "' not found");
    for (WorkloadComponent c : {WorkloadComponent::subjective, WorkloadComponent::objective,
                                WorkloadComponent::intended, WorkloadComponent::expected}) {
      if (donated[c] < 0) fail(Errc::validation_error, "negative donation");
      if (e->attrs.workload[c] < donated[c])
        fail(Errc::insufficient_executive_balance,
             std::string(workload_component_name(c)) + ": executive holds " +
                 std::to_string(e->attrs.workload[c]) + " bp, need " +
                 std::to_string(donated[c]));
    }
    for (WorkloadComponent c : {WorkloadComponent::subjective, WorkloadComponent::objective,
                                WorkloadComponent::intended, WorkloadComponent::expected})
      e->attrs.workload[c] -= donated[c];
    t.attrs.workload = donated;
  } else {
    if (donated != WorkloadQuad{})
      fail(Errc::validation_error, "distributed control: create with zero workload, then rebalance");
    t.attrs.workload = WorkloadQuad{};
  }
  HtvNode node;
  node.v = std::move(t);
  h.top.push_back(std::move(node));
}

namespace detail {

inline bool erase_leaf(std::vector<HtvNode>& nodes, const std::string& name) {
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    if (it->is_leaf()) {
      if (it->leaf().name == name) {
        nodes.erase(it);
        return true;
      }
    } else if (erase_leaf(it->vec().children, name)) {
      if (it->vec().children.empty()) nodes.erase(it);
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Retires a thread. Its workload must not evaporate: a dedicated executive
// absorbs it, while distributed mode demands the thread be drained first.
// Vectors emptied by the removal are pruned all the way up.
inline void remove_thread(Htva& h, const ExecutiveConfig& exec, const std::string& name,
                          bool force = false) {
  ThreadInstance* t = find_thread(h, name);
  if (!t) fail(Errc::unknown_thread, "'" + name + "'");
  if (!t->finished && !force)
    fail(Errc::protocol_error, "'" + name + "' has not finished (use force to override)");
  if (exec.mode == ExecutiveConfig::Mode::dedicated && name == exec.thread)
    fail(Errc::orphaned_workload, "cannot remove the dedicated executive");
  WorkloadQuad hold = t->attrs.workload;
  if (exec.mode == ExecutiveConfig::Mode::dedicated) {
    ThreadInstance* e = find_thread(h, exec.thread);
    if (!e) fail(Errc::no_executive, "dedicated executive '" + exec.thread + "' not found");
    for (WorkloadComponent c : {WorkloadComponent::subjective, WorkloadComponent::objective,
                                WorkloadComponent::intended, WorkloadComponent::expected})
      e->attrs.workload[c] += hold[c];
  } else if (hold != WorkloadQuad{}) {
    fail(Errc::orphaned_workload,
         "'" + name + "' still holds workload; rebalance it away before removal");
  }
  detail::erase_leaf(h.top, name);
}

}  // namespace pmth
