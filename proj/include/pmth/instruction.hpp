#pragma once

// Instruction alphabet for rigid plans: basic actions, positive/negative
// tests, relative forward jumps, and halt. Jump(0) denotes divergence.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pmth/errors.hpp"

namespace pmth {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

// focus-name "." method-name, both drawn from [a-z0-9_]+
struct Action {
  std::string focus;
  std::string method;

  std::string str() const { return focus + "." + method; }

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

inline Action parse_action(std::string_view token) {
  auto dot = token.find('.');
  if (dot == std::string_view::npos)
    fail(Errc::malformed_instruction,
         "action '" + std::string(token) + "' lacks a '.' separator");
  std::string focus(token.substr(0, dot));
  std::string method(token.substr(dot + 1));
  if (!is_identifier(focus) || !is_identifier(method))
    fail(Errc::malformed_instruction,
         "action '" + std::string(token) + "' has a malformed identifier");
  return Action{std::move(focus), std::move(method)};
}

enum class Opcode { basic, pos_test, neg_test, jump, halt };

struct Instruction {
  Opcode op = Opcode::halt;
  Action action;            // basic / pos_test / neg_test
  std::uint32_t jump = 0;   // jump

  static Instruction basic(Action a) { return {Opcode::basic, std::move(a), 0}; }
  static Instruction pos_test(Action a) { return {Opcode::pos_test, std::move(a), 0}; }
  static Instruction neg_test(Action a) { return {Opcode::neg_test, std::move(a), 0}; }
  static Instruction jump_by(std::uint32_t k) { return {Opcode::jump, {}, k}; }
  static Instruction halt() { return {Opcode::halt, {}, 0}; }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// Token grammar: f.m | +f.m | -f.m | #k | !
inline Instruction parse_instruction(std::string_view token) {
  if (token.empty()) fail(Errc::malformed_instruction, "empty instruction token");
  if (token == "!") return Instruction::halt();
  if (token.front() == '#') {
    auto digits = token.substr(1);
    if (digits.empty())
      fail(Errc::malformed_instruction, "jump '#' without a distance");
    std::uint64_t k = 0;
    for (char c : digits) {
      if (c < '0' || c > '9')
        fail(Errc::malformed_instruction,
             "jump distance '" + std::string(digits) + "' is not a non-negative integer");
      k = k * 10 + static_cast<std::uint64_t>(c - '0');
      if (k > 0xFFFFFFFFull)
        fail(Errc::malformed_instruction, "jump distance out of range");
    }
    return Instruction::jump_by(static_cast<std::uint32_t>(k));
  }
  if (token.front() == '+') return Instruction::pos_test(parse_action(token.substr(1)));
  if (token.front() == '-') return Instruction::neg_test(parse_action(token.substr(1)));
  return Instruction::basic(parse_action(token));
}

inline std::string to_string(const Instruction& ins) {
  switch (ins.op) {
    case Opcode::basic: return ins.action.str();
    case Opcode::pos_test: return "+" + ins.action.str();
    case Opcode::neg_test: return "-" + ins.action.str();
    case Opcode::jump: return "#" + std::to_string(ins.jump);
    case Opcode::halt: return "!";
  }
  return "!";
}

// A finite rigid plan. Positions are 1-based; the empty sequence deadlocks
// immediately.
struct InstructionSequence {
  std::string name;
  std::vector<Instruction> instrs;

  std::size_t size() const { return instrs.size(); }

  friend bool operator==(const InstructionSequence&, const InstructionSequence&) = default;
};

inline std::string to_string(const InstructionSequence& iseq) {
  std::string out;
  for (std::size_t i = 0; i < iseq.instrs.size(); ++i) {
    if (i) out += ' ';
    out += to_string(iseq.instrs[i]);
  }
  return out;
}

}  // namespace pmth
