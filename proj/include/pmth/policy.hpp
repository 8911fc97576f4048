#pragma once

// Interleaving policies. next_thread is a pure choice function over the live
// candidates; the engine owns rotation, fuel, and bookkeeping.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmth/errors.hpp"
#include "pmth/prng.hpp"

namespace pmth {

enum class PolicyKind { cyclic, poly, arbitrary, weighted };

inline const char* policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::cyclic: return "cyclic";
    case PolicyKind::poly: return "poly";
    case PolicyKind::arbitrary: return "random";
    case PolicyKind::weighted: return "weighted";
  }
  return "?";
}

inline PolicyKind policy_from_name(std::string_view s) {
  if (s == "cyclic") return PolicyKind::cyclic;
  if (s == "poly") return PolicyKind::poly;
  if (s == "random") return PolicyKind::arbitrary;
  if (s == "weighted") return PolicyKind::weighted;
  fail(Errc::parse_error, "unknown policy '" + std::string(s) + "'");
}

struct Policy {
  PolicyKind kind = PolicyKind::cyclic;
  std::uint64_t seed = 0;
  int fatigue_bound = 8;  // consecutive turns before a thread must yield
  int turn_length = 1;    // cyclic: acts per turn before rotating
};

struct SchedCandidate {
  std::string name;
  int intended_workload_bp = 0;
  std::int64_t last_active_step = 0;  // 0 = never ran
};

// Picks the next thread to run. `live` is already in rotation order and
// excludes finished or suspended candidates. The index returned is into
// `live`.
// The fatigue bound evicts the incumbent when alternatives exist. A random
// draw is consumed on every arbitrary-policy call, selection forced or not,
// so traces stay aligned across populations.
inline std::pair<std::size_t, PrngState> next_thread(const Policy& p,
                                                     const std::vector<SchedCandidate>& live,
                                                     const std::optional<std::string>& last,
                                                     int last_consecutive_turns, PrngState rng,
                                                     std::int64_t current_step) {
  if (live.empty()) fail(Errc::no_live_thread, "no live thread to select");

  std::vector<std::size_t> remaining;
  remaining.reserve(live.size());
  bool evict = last && last_consecutive_turns >= p.fatigue_bound && live.size() > 1;
  for (std::size_t i = 0; i < live.size(); ++i) {
    if (evict && live[i].name == *last) continue;
    remaining.push_back(i);
  }
  if (remaining.empty())
    for (std::size_t i = 0; i < live.size(); ++i) remaining.push_back(i);

  switch (p.kind) {
    case PolicyKind::cyclic:
    case PolicyKind::poly:
      return {remaining.front(), rng};
    case PolicyKind::arbitrary: {
      auto [value, next] = splitmix64(rng);
      return {remaining[value % remaining.size()], next};
    }
    case PolicyKind::weighted: {
      std::size_t best = remaining.front();
      long long best_score = -1;
      for (std::size_t i : remaining) {
        long long idle = current_step - live[i].last_active_step;
        long long score = static_cast<long long>(live[i].intended_workload_bp) * idle;
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      return {best, rng};
    }
  }
  fail(Errc::protocol_error, "unreachable policy kind");
}

}  // namespace pmth
