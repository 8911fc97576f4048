#pragma once

// Step-wise behavior extraction from an instruction sequence against a set
// of services. One call resolves jump chains and performs at most one action.

#include <cstdint>
#include <string>

#include "pmth/errors.hpp"
#include "pmth/instruction.hpp"
#include "pmth/service.hpp"

namespace pmth {

inline constexpr int kDefaultJumpChainBound = 1024;

struct StepResult {
  enum class Kind { performed, blocked, halted, deadlocked };

  Kind kind = Kind::deadlocked;
  Action action;                 // performed / blocked
  Reply reply = Reply::T;        // performed: T or F
  std::uint32_t next_pc = 0;     // performed: >= 1

  static StepResult performed(Action a, Reply r, std::uint32_t next) {
    return {Kind::performed, std::move(a), r, next};
  }
  static StepResult blocked(Action a) { return {Kind::blocked, std::move(a), Reply::B, 0}; }
  static StepResult halted() { return {Kind::halted, {}, Reply::T, 0}; }
  static StepResult deadlocked() { return {Kind::deadlocked, {}, Reply::T, 0}; }
};

// pc past the end deadlocks; Jump(0) deadlocks; a B reply blocks without
// moving pc (the service cursor still advances). Tests fall through to pc+2
// when the reply does not match their polarity. Actions whose focus names no
// service are environmental and reply T.
inline StepResult behavior_step(const InstructionSequence& iseq, std::uint32_t pc,
                                ServiceMap& services,
                                int jump_chain_bound = kDefaultJumpChainBound) {
  if (pc < 1) fail(Errc::protocol_error, "pc must be >= 1");
  std::uint32_t cur = pc;
  int chain = 0;
  for (;;) {
    if (cur > iseq.size()) return StepResult::deadlocked();
    const Instruction& ins = iseq.instrs[cur - 1];
    switch (ins.op) {
      case Opcode::halt:
        return StepResult::halted();
      case Opcode::jump:
        if (ins.jump == 0) return StepResult::deadlocked();
        if (++chain > jump_chain_bound)
          fail(Errc::jump_chain_exceeded,
               "more than " + std::to_string(jump_chain_bound) +
                   " consecutive jumps in '" + iseq.name + "'");
        cur += ins.jump;
        continue;
      case Opcode::basic:
      case Opcode::pos_test:
      case Opcode::neg_test: {
        Reply r = Reply::T;
        auto it = services.find(ins.action.focus);
        if (it != services.end()) {
          r = it->second.next_reply(ins.action.method);
          if (r == Reply::B) return StepResult::blocked(ins.action);
        }
        std::uint32_t next = cur + 1;
        if (ins.op == Opcode::pos_test && r != Reply::T) next = cur + 2;
        if (ins.op == Opcode::neg_test && r != Reply::F) next = cur + 2;
        return StepResult::performed(ins.action, r, next);
      }
    }
  }
}

}  // namespace pmth
