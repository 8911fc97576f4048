#pragma once

// Used state (services with cyclic reply patterns) and applied-to state
// (the environment's append-only effect log).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"

namespace pmth {

enum class Reply : char { T = 'T', F = 'F', B = 'B' };

inline char reply_char(Reply r) { return static_cast<char>(r); }

// Cyclic reply pattern; B means "blocked now, retry later" and consumes a
// pattern slot, so blocking is finite whenever the pattern has a non-B entry.
struct Service {
  std::string name;
  std::vector<Reply> pattern;  // nonempty
  std::size_t cursor = 0;
  std::vector<std::string> state_log;  // methods received, in order

  Reply next_reply(const std::string& method) {
    Reply r = pattern[cursor % pattern.size()];
    cursor = (cursor + 1) % pattern.size();
    state_log.push_back(method);
    return r;
  }
};

using ServiceMap = std::map<std::string, Service>;

struct Environment {
  std::vector<std::pair<std::int64_t, Action>> effect_log;
};

inline Environment apply_action(Environment env, std::int64_t step, Action action) {
  if (!env.effect_log.empty() && step <= env.effect_log.back().first)
    fail(Errc::non_monotone_step,
         "step " + std::to_string(step) + " does not follow step " +
             std::to_string(env.effect_log.back().first));
  if (env.effect_log.empty() && step < 1)
    fail(Errc::non_monotone_step, "step indices start at 1");
  env.effect_log.emplace_back(step, std::move(action));
  return env;
}

}  // namespace pmth
