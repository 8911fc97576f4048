#pragma once

// The focus-switching protocol. A PhaseState tracks which thread is active,
// which is being contemplated, and any open pseudo-switch; every transition
// validates its preconditions before mutating, so a rejected call leaves the
// state untouched.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmth/errors.hpp"

namespace pmth {

enum class Motive { fairness, blocked, priority_change, fatigue, policy_default };

inline const char* motive_name(Motive m) {
  switch (m) {
    case Motive::fairness: return "fairness";
    case Motive::blocked: return "blocked";
    case Motive::priority_change: return "priority-change";
    case Motive::fatigue: return "fatigue";
    case Motive::policy_default: return "policy-default";
  }
  return "?";
}

inline Motive motive_from_name(std::string_view s) {
  if (s == "fairness") return Motive::fairness;
  if (s == "blocked") return Motive::blocked;
  if (s == "priority-change") return Motive::priority_change;
  if (s == "fatigue") return Motive::fatigue;
  if (s == "policy-default") return Motive::policy_default;
  fail(Errc::parse_error, "unknown motive '" + std::string(s) + "'");
}

// sip: the interleaving driver emits contemplations mechanically and commits
// on any contemplated target. manual: scripted runs must be contemplating
// the exact target when they commit.
enum class ProtocolMode { sip, manual };

struct PseudoPair {
  std::string host;   // the thread that stays active
  std::string guest;  // the thread borrowing the focus
  friend bool operator==(const PseudoPair&, const PseudoPair&) = default;
};

struct PhaseState {
  std::optional<std::string> active;
  std::optional<std::string> contemplating;
  std::optional<PseudoPair> pseudo;
  std::vector<std::string> contemplated;  // since the last proper switch
  bool readiness_waived = false;
  ProtocolMode mode = ProtocolMode::sip;
  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

struct SwitchEvent {
  enum class Kind { c_switch, a_switch, proper_switch, pseudo_switch, pseudo_back };
  Kind kind = Kind::proper_switch;
  std::optional<std::string> from;
  std::string to;
  std::optional<Motive> motive;
  std::int64_t step = 0;
};

namespace detail {

inline void require_known(const std::vector<std::string>& known, const std::string& t) {
  if (std::find(known.begin(), known.end(), t) == known.end())
    fail(Errc::unknown_thread, "'" + t + "'");
}

inline bool contemplated_has(const PhaseState& ps, const std::string& t) {
  return std::find(ps.contemplated.begin(), ps.contemplated.end(), t) != ps.contemplated.end();
}

}  // namespace detail

// Considering a switch target: only ever done from the current focus, which
// is the thread being contemplated if there is one, else the active thread.
inline void c_switch(PhaseState& ps, const std::vector<std::string>& known, const std::string& t,
                     const std::string& r) {
  detail::require_known(known, r);
  if (r == t) fail(Errc::protocol_error, "self-contemplation of '" + t + "'");
  bool holds_focus =
      (ps.contemplating && *ps.contemplating == t) ||
      (!ps.contemplating && ps.active && *ps.active == t);
  if (!holds_focus)
    fail(Errc::contemplation_not_held, "'" + t + "' does not hold the focus");
  ps.contemplating = r;
  if (!detail::contemplated_has(ps, r)) ps.contemplated.push_back(r);
}

// Readiness: committing to r is only well-considered once some alternative
// s != r has been contemplated during the same deliberation.
inline bool readiness_ok(const PhaseState& ps, const std::string& r) {
  if (!detail::contemplated_has(ps, r)) return false;
  for (const std::string& s : ps.contemplated)
    if (s != r) return true;
  return false;
}

// Commits the deliberation: r becomes active, the contemplation record is
// cleared. The very first activation of a run needs no deliberation.
inline SwitchEvent a_switch(PhaseState& ps, const std::vector<std::string>& known,
                            const std::string& r, Motive m, std::int64_t step) {
  detail::require_known(known, r);
  if (ps.pseudo)
    fail(Errc::unclosed_pseudo_switch,
         "pseudo-switch to '" + ps.pseudo->guest + "' still open");
  bool bootstrap = !ps.active && !ps.contemplating && ps.contemplated.empty();
  if (!bootstrap) {
    if (ps.mode == ProtocolMode::manual) {
      if (!ps.contemplating || *ps.contemplating != r)
        fail(Errc::not_contemplated, "'" + r + "' is not being contemplated");
      if (!ps.readiness_waived && !readiness_ok(ps, r))
        fail(Errc::readiness_violation, "no alternative to '" + r + "' was contemplated");
    } else {
      if (!detail::contemplated_has(ps, r))
        fail(Errc::not_contemplated, "'" + r + "' was never contemplated");
      if (!ps.readiness_waived && !readiness_ok(ps, r))
        fail(Errc::readiness_violation, "no alternative to '" + r + "' was contemplated");
    }
  }
  SwitchEvent ev;
  ev.kind = SwitchEvent::Kind::proper_switch;
  ev.from = ps.active;
  ev.to = r;
  ev.motive = m;
  ev.step = step;
  ps.active = r;
  ps.contemplating.reset();
  ps.contemplated.clear();
  ps.readiness_waived = false;
  return ev;
}

// Lends the focus to r without ending t's session; must be closed by a
// matching pseudo_back before any proper switch.
inline void pseudo_switch(PhaseState& ps, const std::vector<std::string>& known,
                          const std::string& t, const std::string& r) {
  detail::require_known(known, r);
  if (!ps.active || *ps.active != t) fail(Errc::not_active, "'" + t + "' is not active");
  if (ps.pseudo)
    fail(Errc::pseudo_nested, "pseudo-switch to '" + ps.pseudo->guest + "' still open");
  if (r == t) fail(Errc::protocol_error, "pseudo-switch of '" + t + "' to itself");
  ps.pseudo = PseudoPair{t, r};
}

inline void pseudo_back(PhaseState& ps, const std::string& r, const std::string& t) {
  if (!ps.pseudo || ps.pseudo->guest != r || ps.pseudo->host != t)
    fail(Errc::unmatched_pseudo_back,
         "no open pseudo-switch from '" + t + "' to '" + r + "'");
  ps.pseudo.reset();
}

// Single-use escape hatch for degenerate populations (e.g. one live thread)
// where no alternative exists to contemplate.
inline void waive_readiness(PhaseState& ps) { ps.readiness_waived = true; }

// Everything classify_motive needs, snapshotted by the caller so the rule
// order below is the whole story.
struct MotiveInputs {
  bool have_from = false;
  bool from_blocked = false;
  int from_consecutive_turns = 0;
  int fatigue_bound = 8;
  std::optional<int> to_prom_subj_at_last_yield;
  int to_prom_subj_now = 3;
  std::int64_t to_last_active = 0;  // 0 = never ran
  std::vector<std::int64_t> live_last_active;
};

// First matching rule wins: no predecessor, blockage, fatigue, a prominence
// change since the target last yielded, staleness (fairness), default.
inline Motive classify_motive(const MotiveInputs& in) {
  if (!in.have_from) return Motive::policy_default;
  if (in.from_blocked) return Motive::blocked;
  if (in.from_consecutive_turns >= in.fatigue_bound) return Motive::fatigue;
  if (in.to_prom_subj_at_last_yield && *in.to_prom_subj_at_last_yield != in.to_prom_subj_now)
    return Motive::priority_change;
  if (!in.live_last_active.empty() &&
      in.to_last_active == *std::min_element(in.live_last_active.begin(),
                                             in.live_last_active.end()))
    return Motive::fairness;
  return Motive::policy_default;
}

}  // namespace pmth
