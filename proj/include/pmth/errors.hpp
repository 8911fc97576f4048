#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pmth {

enum class Errc {
  malformed_instruction,
  jump_chain_exceeded,
  non_monotone_step,
  cyclic_goals,
  no_live_thread,
  insufficient_workload,
  no_executive,
  insufficient_executive_balance,
  self_transfer,
  duplicate_name,
  unknown_thread,
  orphaned_workload,
  contemplation_not_held,
  not_contemplated,
  readiness_violation,
  unclosed_pseudo_switch,
  pseudo_nested,
  not_active,
  unmatched_pseudo_back,
  ambiguous_classifier,
  parse_error,
  validation_error,
  protocol_error,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_instruction: return "MalformedInstruction";
    case Errc::jump_chain_exceeded: return "JumpChainExceeded";
    case Errc::non_monotone_step: return "NonMonotoneStep";
    case Errc::cyclic_goals: return "CyclicGoals";
    case Errc::no_live_thread: return "NoLiveThread";
    case Errc::insufficient_workload: return "InsufficientWorkload";
    case Errc::no_executive: return "NoExecutive";
    case Errc::insufficient_executive_balance: return "InsufficientExecutiveBalance";
    case Errc::self_transfer: return "SelfTransfer";
    case Errc::duplicate_name: return "DuplicateName";
    case Errc::unknown_thread: return "UnknownThread";
    case Errc::orphaned_workload: return "OrphanedWorkload";
    case Errc::contemplation_not_held: return "ContemplationNotHeld";
    case Errc::not_contemplated: return "NotContemplated";
    case Errc::readiness_violation: return "ReadinessViolation";
    case Errc::unclosed_pseudo_switch: return "UnclosedPseudoSwitch";
    case Errc::pseudo_nested: return "PseudoNested";
    case Errc::not_active: return "NotActive";
    case Errc::unmatched_pseudo_back: return "UnmatchedPseudoBack";
    case Errc::ambiguous_classifier: return "AmbiguousClassifier";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::protocol_error: return "ProtocolError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(msg)),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace pmth
