#pragma once

// The interleaving engine. run() drives a population under a policy,
// emitting the full switch ceremony between turns; run_manual() replays a
// scripted meta-action list; run_standalone() runs one sequence alone.
//
// Two counters: step_counter numbers behavioral steps (fuel is charged per
// step), event_counter numbers trace lines. Switch ceremonies cost events
// but no fuel.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmth/attributes.hpp"
#include "pmth/behavior.hpp"
#include "pmth/errors.hpp"
#include "pmth/htva.hpp"
#include "pmth/policy.hpp"
#include "pmth/prng.hpp"
#include "pmth/service.hpp"
#include "pmth/switch_protocol.hpp"
#include "pmth/trace.hpp"

namespace pmth {

// One scripted instruction for manual mode.
struct MetaAction {
  enum class Kind {
    c_switch,
    a_switch,
    pseudo_switch,
    pseudo_back,
    step,
    waiver,
    shrink,
    grow,
    rebalance,
  };
  Kind kind = Kind::step;
  std::string a;  // c-switch: from; a-switch: target; pseudo: host/guest; shrink/grow/rebalance: thread
  std::string b;  // c-switch: to; pseudo: the other of host/guest
  int count = 1;  // step: how many behavioral steps
  std::optional<Motive> motive;  // a-switch
  int delta = 0;                 // shrink/grow
  WorkloadComponent component = WorkloadComponent::intended;
  std::vector<std::pair<std::string, int>> targets;  // rebalance
};

struct EngineState {
  Htva htva;
  ExecutiveConfig executive;
  ServiceMap services;
  Environment env;
  PhaseState phase;
  PrngState prng;
  std::int64_t step_counter = 0;
  std::int64_t event_counter = 0;
  std::vector<std::string> order;  // rotation order of unfinished leaves
  int jump_chain_bound = kDefaultJumpChainBound;
  // Prominence snapshot taken each time a thread yields the focus, keyed by
  // the yielding thread; consulted by motive classification.
  std::map<std::string, std::map<std::string, int>> prom_at_yield;
  std::map<std::string, std::int64_t> blocked_at;
  int acts_in_turn = 0;
  std::optional<std::string> last_executed;
};

inline EngineState make_engine_state(Htva htva, ExecutiveConfig exec, ServiceMap services,
                                     ProtocolMode mode = ProtocolMode::sip) {
  EngineState st;
  st.htva = std::move(htva);
  st.executive = exec;
  st.services = std::move(services);
  st.phase.mode = mode;
  for (const ThreadInstance* t : flatten(st.htva))
    if (!t->finished) st.order.push_back(t->name);
  return st;
}

struct RunResult {
  Trace trace;
  EngineState state;
};

namespace detail {

inline TraceEvent switch_trace_event(EngineState& st, EventKind kind, const std::string& thread,
                                     std::optional<Motive> motive = std::nullopt,
                                     std::optional<std::string> context = std::nullopt) {
  TraceEvent e;
  e.step = ++st.event_counter;
  e.kind = kind;
  e.thread = thread;
  e.context = std::move(context);
  e.motive = motive;
  return e;
}

inline std::vector<std::string> live_names(const EngineState& st) {
  std::vector<std::string> out;
  for (const std::string& n : st.order) {
    const ThreadInstance* t = find_thread(st.htva, n);
    if (t && !t->finished) out.push_back(n);
  }
  return out;
}

inline MotiveInputs gather_motive_inputs(const EngineState& st, const Policy& p,
                                         const std::string& to,
                                         const std::vector<std::string>& live) {
  MotiveInputs in;
  in.fatigue_bound = p.fatigue_bound;
  if (st.phase.active) {
    const ThreadInstance* f = find_thread(st.htva, *st.phase.active);
    if (f) {
      in.have_from = true;
      in.from_blocked = f->blocked;
      in.from_consecutive_turns = f->consecutive_turns;
      auto snap = st.prom_at_yield.find(f->name);
      if (snap != st.prom_at_yield.end()) {
        auto it = snap->second.find(to);
        if (it != snap->second.end()) in.to_prom_subj_at_last_yield = it->second;
      }
    }
  }
  const ThreadInstance* r = find_thread(st.htva, to);
  if (r) {
    in.to_prom_subj_now = r->attrs.prominence_subjective;
    in.to_last_active = r->last_active_step.value_or(0);
  }
  for (const std::string& n : live) {
    const ThreadInstance* t = find_thread(st.htva, n);
    if (t) in.live_last_active.push_back(t->last_active_step.value_or(0));
  }
  return in;
}

// The sip ceremony before activating `sel`: contemplate the target, then one
// alternative (or waive when none exists), then commit. The very first
// activation of a run is silent bootstrap.
inline void emit_switch_episode(EngineState& st, Trace& tr, const std::string& sel,
                                const Policy& p, const std::vector<std::string>& live) {
  std::vector<std::string> known;
  for (const ThreadInstance* t : flatten(st.htva)) known.push_back(t->name);

  bool bootstrap = !st.phase.active && !st.phase.contemplating && st.phase.contemplated.empty();
  if (bootstrap) {
    a_switch(st.phase, known, sel, Motive::policy_default, st.event_counter + 1);
    st.acts_in_turn = 0;
    return;
  }

  Motive motive = classify_motive(gather_motive_inputs(st, p, sel, live));
  std::optional<std::string> yielder = st.phase.active;

  c_switch(st.phase, known, *st.phase.active, sel);
  tr.events.push_back(switch_trace_event(st, EventKind::c_switch, sel));

  std::optional<std::string> alt;
  for (const std::string& n : live)
    if (n != sel) {
      alt = n;
      break;
    }
  if (alt) {
    c_switch(st.phase, known, sel, *alt);
    tr.events.push_back(switch_trace_event(st, EventKind::c_switch, *alt));
  } else {
    waive_readiness(st.phase);
    tr.events.push_back(switch_trace_event(st, EventKind::waiver, sel));
  }

  SwitchEvent ev = a_switch(st.phase, known, sel, motive, st.event_counter + 1);
  tr.events.push_back(switch_trace_event(st, EventKind::proper_switch, ev.to, ev.motive));

  if (yielder) {
    std::map<std::string, int> snap;
    for (const ThreadInstance* t : flatten(st.htva))
      snap[t->name] = t->attrs.prominence_subjective;
    st.prom_at_yield[*yielder] = std::move(snap);
  }
  st.acts_in_turn = 0;
}

// Rotate the executed thread (and everything before it) to the tail, so the
// cyclic successor of the executed thread becomes the head.
inline void rotate_past(std::vector<std::string>& order, const std::string& executed) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == executed) {
      std::vector<std::string> next(order.begin() + i + 1, order.end());
      next.insert(next.end(), order.begin(), order.begin() + i + 1);
      order = std::move(next);
      return;
    }
  }
}

inline void erase_from_order(std::vector<std::string>& order, const std::string& name) {
  for (auto it = order.begin(); it != order.end(); ++it)
    if (*it == name) {
      order.erase(it);
      return;
    }
}

// Executes one behavioral step of `t`, appending the resulting trace event.
// Pseudo-guest execution passes the host via `context`.
inline void execute_step(EngineState& st, Trace& tr, ThreadInstance& t,
                         const std::optional<std::string>& context) {
  std::int64_t idx = ++st.step_counter;
  if (st.last_executed && *st.last_executed == t.name)
    ++t.consecutive_turns;
  else
    t.consecutive_turns = 1;
  st.last_executed = t.name;
  t.last_active_step = idx;

  StepResult r = behavior_step(t.iseq, t.pc, st.services, st.jump_chain_bound);
  TraceEvent e;
  e.step = ++st.event_counter;
  e.thread = t.name;
  e.context = context;
  switch (r.kind) {
    case StepResult::Kind::performed:
      e.kind = context ? EventKind::pseudo_act : EventKind::act;
      e.action = r.action;
      e.reply = r.reply;
      t.pc = r.next_pc;
      t.blocked = false;
      if (!st.services.count(r.action.focus))
        st.env = apply_action(std::move(st.env), e.step, r.action);
      break;
    case StepResult::Kind::blocked:
      e.kind = EventKind::block;
      e.action = r.action;
      e.reply = Reply::B;
      t.blocked = true;
      st.blocked_at[t.name] = idx;
      break;
    case StepResult::Kind::halted:
      e.kind = EventKind::halt;
      t.finished = true;
      break;
    case StepResult::Kind::deadlocked:
      e.kind = EventKind::deadlock;
      t.finished = true;
      break;
  }
  tr.events.push_back(std::move(e));
}

}  // namespace detail

// Policy-driven run. Deterministic: the PRNG is reseeded from the policy at
// entry, so identical inputs replay byte-identically.
inline RunResult run(EngineState state, const Policy& p, std::int64_t fuel) {
  if (fuel < 0) fail(Errc::validation_error, "fuel must be >= 0");
  state.phase.mode = ProtocolMode::sip;
  state.prng = PrngState{p.seed};
  Trace tr;
  tr.summary.threads = static_cast<int>(flatten(state.htva).size());
  tr.summary.policy = policy_name(p.kind);
  tr.summary.seed = p.seed;

  for (;;) {
    std::vector<std::string> live = detail::live_names(state);
    if (live.empty()) break;
    if (state.step_counter >= fuel) {
      TraceEvent e;
      e.step = ++state.event_counter;
      e.kind = EventKind::fuel_exhausted;
      tr.events.push_back(std::move(e));
      break;
    }
    std::int64_t upcoming = state.step_counter + 1;

    // A thread that blocked on the previous step sits the next selection
    // out; if everyone just blocked, the exclusion is lifted.
    std::vector<SchedCandidate> cands;
    for (const std::string& n : live) {
      const ThreadInstance* t = find_thread(state.htva, n);
      auto ba = state.blocked_at.find(n);
      if (t->blocked && ba != state.blocked_at.end() && ba->second + 1 == upcoming) continue;
      cands.push_back({n, t->attrs.workload.intended, t->last_active_step.value_or(0)});
    }
    if (cands.empty())
      for (const std::string& n : live) {
        const ThreadInstance* t = find_thread(state.htva, n);
        cands.push_back({n, t->attrs.workload.intended, t->last_active_step.value_or(0)});
      }

    int last_consecutive = 0;
    if (state.last_executed) {
      const ThreadInstance* lt = find_thread(state.htva, *state.last_executed);
      if (lt) last_consecutive = lt->consecutive_turns;
    }
    auto [pick, rng] =
        next_thread(p, cands, state.last_executed, last_consecutive, state.prng, upcoming);
    state.prng = rng;
    const std::string sel = cands[pick].name;

    if (!state.phase.active || *state.phase.active != sel)
      detail::emit_switch_episode(state, tr, sel, p, live);

    ThreadInstance* t = find_thread(state.htva, sel);
    detail::execute_step(state, tr, *t, std::nullopt);

    if (t->finished) {
      detail::erase_from_order(state.order, sel);
    } else if (p.kind == PolicyKind::cyclic &&
               tr.events.back().kind == EventKind::act) {
      if (++state.acts_in_turn >= p.turn_length) {
        detail::rotate_past(state.order, sel);
        state.acts_in_turn = 0;
      }
    }
  }
  tr.summary.steps = state.step_counter;
  return {std::move(tr), std::move(state)};
}

// Scripted run: the script owns all switching; behavioral steps go to the
// pseudo guest while a pseudo-switch is open, else to the active thread.
inline RunResult run_manual(EngineState state, const std::vector<MetaAction>& script,
                            std::int64_t fuel, std::uint64_t seed = 0) {
  if (fuel < 0) fail(Errc::validation_error, "fuel must be >= 0");
  state.phase.mode = ProtocolMode::manual;
  Trace tr;
  tr.summary.threads = static_cast<int>(flatten(state.htva).size());
  tr.summary.policy = "manual";
  tr.summary.seed = seed;

  std::vector<std::string> known;
  for (const ThreadInstance* t : flatten(state.htva)) known.push_back(t->name);

  bool out_of_fuel = false;
  for (const MetaAction& m : script) {
    if (out_of_fuel) break;
    switch (m.kind) {
      case MetaAction::Kind::c_switch:
        c_switch(state.phase, known, m.a, m.b);
        tr.events.push_back(detail::switch_trace_event(state, EventKind::c_switch, m.b));
        break;
      case MetaAction::Kind::a_switch: {
        SwitchEvent ev = a_switch(state.phase, known, m.a,
                                  m.motive.value_or(Motive::policy_default),
                                  state.event_counter + 1);
        tr.events.push_back(
            detail::switch_trace_event(state, EventKind::proper_switch, ev.to, ev.motive));
        break;
      }
      case MetaAction::Kind::pseudo_switch:
        pseudo_switch(state.phase, known, m.a, m.b);
        tr.events.push_back(
            detail::switch_trace_event(state, EventKind::pseudo_switch, m.b, std::nullopt, m.a));
        break;
      case MetaAction::Kind::pseudo_back:
        pseudo_back(state.phase, m.b, m.a);
        tr.events.push_back(
            detail::switch_trace_event(state, EventKind::pseudo_back, m.b, std::nullopt, m.a));
        break;
      case MetaAction::Kind::waiver: {
        waive_readiness(state.phase);
        std::string who = state.phase.contemplating.value_or("");
        TraceEvent e;
        e.step = ++state.event_counter;
        e.kind = EventKind::waiver;
        e.thread = who;
        tr.events.push_back(std::move(e));
        break;
      }
      case MetaAction::Kind::step: {
        for (int i = 0; i < m.count; ++i) {
          if (state.step_counter >= fuel) {
            TraceEvent e;
            e.step = ++state.event_counter;
            e.kind = EventKind::fuel_exhausted;
            tr.events.push_back(std::move(e));
            out_of_fuel = true;
            break;
          }
          std::optional<std::string> context;
          std::string target;
          if (state.phase.pseudo) {
            target = state.phase.pseudo->guest;
            context = state.phase.pseudo->host;
          } else if (state.phase.active) {
            target = *state.phase.active;
          } else {
            fail(Errc::not_active, "no active thread to step");
          }
          ThreadInstance* t = find_thread(state.htva, target);
          if (!t) fail(Errc::unknown_thread, "'" + target + "'");
          if (t->finished)
            fail(Errc::protocol_error, "'" + target + "' already finished");
          detail::execute_step(state, tr, *t, context);
          if (t->finished) detail::erase_from_order(state.order, target);
        }
        break;
      }
      case MetaAction::Kind::shrink:
        shrink(state.htva, state.executive, m.a, m.delta, m.component);
        tr.events.push_back(detail::switch_trace_event(state, EventKind::shrink, m.a));
        break;
      case MetaAction::Kind::grow:
        grow(state.htva, state.executive, m.a, m.delta, m.component);
        tr.events.push_back(detail::switch_trace_event(state, EventKind::grow, m.a));
        break;
      case MetaAction::Kind::rebalance: {
        std::map<std::string, int> targets(m.targets.begin(), m.targets.end());
        rebalance(state.htva, state.executive, m.a, targets, m.component);
        tr.events.push_back(detail::switch_trace_event(state, EventKind::shrink, m.a));
        for (const auto& [name, share] : m.targets)
          tr.events.push_back(detail::switch_trace_event(state, EventKind::grow, name));
        break;
      }
    }
  }
  tr.summary.steps = state.step_counter;
  return {std::move(tr), std::move(state)};
}

// One sequence alone: blocks are retried until the service pattern yields.
// This is the reference a projected interleaved run is compared against.
inline Trace run_standalone(const InstructionSequence& iseq, ServiceMap services,
                            std::int64_t fuel) {
  if (fuel < 0) fail(Errc::validation_error, "fuel must be >= 0");
  Trace tr;
  tr.summary.threads = 1;
  tr.summary.policy = "standalone";
  tr.summary.seed = 0;
  std::uint32_t pc = 1;
  std::int64_t steps = 0, events = 0;
  for (;;) {
    if (steps >= fuel) {
      TraceEvent e;
      e.step = ++events;
      e.kind = EventKind::fuel_exhausted;
      tr.events.push_back(std::move(e));
      break;
    }
    ++steps;
    StepResult r = behavior_step(iseq, pc, services);
    TraceEvent e;
    e.step = ++events;
    e.thread = iseq.name;
    bool done = false;
    switch (r.kind) {
      case StepResult::Kind::performed:
        e.kind = EventKind::act;
        e.action = r.action;
        e.reply = r.reply;
        pc = r.next_pc;
        break;
      case StepResult::Kind::blocked:
        e.kind = EventKind::block;
        e.action = r.action;
        e.reply = Reply::B;
        break;
      case StepResult::Kind::halted:
        e.kind = EventKind::halt;
        done = true;
        break;
      case StepResult::Kind::deadlocked:
        e.kind = EventKind::deadlock;
        done = true;
        break;
    }
    tr.events.push_back(std::move(e));
    if (done) break;
  }
  tr.summary.steps = steps;
  return tr;
}

}  // namespace pmth
