#include <catch2/catch_amalgamated.hpp>

#include "pmth/behavior.hpp"

using namespace pmth;

namespace {

InstructionSequence seq(std::initializer_list<const char*> toks) {
  InstructionSequence s;
  s.name = "t";
  for (const char* t : toks) s.instrs.push_back(parse_instruction(t));
  return s;
}

ServiceMap one_service(const std::string& name, std::initializer_list<Reply> pattern) {
  Service s;
  s.name = name;
  s.pattern = pattern;
  ServiceMap m;
  m.emplace(name, std::move(s));
  return m;
}

}  // namespace

TEST_CASE("positive test falling through on F", "[behavior]") {
  // [+s.q, a.x, b.y, !] at pc=1 with s replying F: the action is performed,
  // the F reply skips the next instruction.
  auto iseq = seq({"+s.q", "a.x", "b.y", "!"});
  auto services = one_service("s", {Reply::F});
  StepResult r = behavior_step(iseq, 1, services);
  REQUIRE(r.kind == StepResult::Kind::performed);
  CHECK(r.action == Action{"s", "q"});
  CHECK(r.reply == Reply::F);
  CHECK(r.next_pc == 3);
}

TEST_CASE("positive test proceeding on T", "[behavior]") {
  auto iseq = seq({"+s.q", "a.x", "b.y", "!"});
  auto services = one_service("s", {Reply::T});
  StepResult r = behavior_step(iseq, 1, services);
  REQUIRE(r.kind == StepResult::Kind::performed);
  CHECK(r.next_pc == 2);
}

TEST_CASE("negative test polarity", "[behavior]") {
  auto iseq = seq({"-s.q", "a.x", "b.y", "!"});
  auto services = one_service("s", {Reply::F, Reply::T});
  StepResult on_f = behavior_step(iseq, 1, services);
  CHECK(on_f.next_pc == 2);  // F satisfies a negative test
  StepResult on_t = behavior_step(iseq, 1, services);
  CHECK(on_t.next_pc == 3);
}

TEST_CASE("basic instruction always advances by one", "[behavior]") {
  auto iseq = seq({"s.q", "!"});
  auto services = one_service("s", {Reply::F});
  StepResult r = behavior_step(iseq, 1, services);
  REQUIRE(r.kind == StepResult::Kind::performed);
  CHECK(r.reply == Reply::F);
  CHECK(r.next_pc == 2);
}

TEST_CASE("non-service focus replies T", "[behavior]") {
  auto iseq = seq({"+env.ping", "a.x", "b.y"});
  ServiceMap services;
  StepResult r = behavior_step(iseq, 1, services);
  REQUIRE(r.kind == StepResult::Kind::performed);
  CHECK(r.reply == Reply::T);
  CHECK(r.next_pc == 2);
}

TEST_CASE("halt and running off the end", "[behavior]") {
  ServiceMap none;
  auto halting = seq({"!"});
  CHECK(behavior_step(halting, 1, none).kind == StepResult::Kind::halted);

  auto short_seq = seq({"a.x"});
  CHECK(behavior_step(short_seq, 2, none).kind == StepResult::Kind::deadlocked);

  InstructionSequence empty;
  empty.name = "t";
  CHECK(behavior_step(empty, 1, none).kind == StepResult::Kind::deadlocked);
}

TEST_CASE("jumps chain and jump zero diverges", "[behavior]") {
  ServiceMap none;
  auto iseq = seq({"#2", "a.x", "#1", "b.y", "!"});
  StepResult r = behavior_step(iseq, 1, none);
  REQUIRE(r.kind == StepResult::Kind::performed);
  CHECK(r.action == Action{"b", "y"});  // 1 -> 3 -> 4
  CHECK(r.next_pc == 5);

  auto diverge = seq({"#0", "a.x"});
  CHECK(behavior_step(diverge, 1, none).kind == StepResult::Kind::deadlocked);

  auto off_end = seq({"#9", "a.x"});
  CHECK(behavior_step(off_end, 1, none).kind == StepResult::Kind::deadlocked);
}

TEST_CASE("jump chains beyond the bound are an error", "[behavior]") {
  ServiceMap none;
  InstructionSequence long_chain;
  long_chain.name = "t";
  for (int i = 0; i < 2000; ++i) long_chain.instrs.push_back(Instruction::jump_by(1));
  long_chain.instrs.push_back(Instruction::halt());
  CHECK_THROWS_MATCHES(behavior_step(long_chain, 1, none), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::jump_chain_exceeded;
                       }));

  InstructionSequence at_bound;
  at_bound.name = "t";
  for (int i = 0; i < kDefaultJumpChainBound; ++i)
    at_bound.instrs.push_back(Instruction::jump_by(1));
  at_bound.instrs.push_back(Instruction::halt());
  CHECK(behavior_step(at_bound, 1, none).kind == StepResult::Kind::halted);
}

TEST_CASE("a B reply blocks without advancing pc", "[behavior]") {
  auto iseq = seq({"s.q", "!"});
  auto services = one_service("s", {Reply::B, Reply::T});
  StepResult r = behavior_step(iseq, 1, services);
  REQUIRE(r.kind == StepResult::Kind::blocked);
  CHECK(r.action == Action{"s", "q"});
  // The reply pattern cursor advanced past the B, so a retry succeeds.
  StepResult retry = behavior_step(iseq, 1, services);
  REQUIRE(retry.kind == StepResult::Kind::performed);
  CHECK(retry.next_pc == 2);
}

TEST_CASE("reply patterns cycle and log uses", "[behavior]") {
  Service s;
  s.name = "s";
  s.pattern = {Reply::T, Reply::F};
  CHECK(s.next_reply("a") == Reply::T);
  CHECK(s.next_reply("b") == Reply::F);
  CHECK(s.next_reply("c") == Reply::T);
  CHECK(s.state_log == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("environment refuses non-monotone application steps", "[behavior]") {
  Environment env;
  env = apply_action(std::move(env), 1, {"e", "x"});
  env = apply_action(std::move(env), 5, {"e", "y"});
  CHECK(env.effect_log.size() == 2);
  CHECK_THROWS_MATCHES(apply_action(std::move(env), 5, {"e", "z"}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::non_monotone_step;
                       }));
  Environment fresh;
  CHECK_THROWS_AS(apply_action(std::move(fresh), 0, {"e", "x"}), Error);
}
