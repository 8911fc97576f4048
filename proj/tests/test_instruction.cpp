#include <catch2/catch_amalgamated.hpp>

#include "pmth/instruction.hpp"

using namespace pmth;

TEST_CASE("identifiers are lowercase alphanumerics and underscore", "[instruction]") {
  CHECK(is_identifier("a"));
  CHECK(is_identifier("a1_b2"));
  CHECK(is_identifier("0"));
  CHECK_FALSE(is_identifier(""));
  CHECK_FALSE(is_identifier("A"));
  CHECK_FALSE(is_identifier("a-b"));
  CHECK_FALSE(is_identifier("a.b"));
  CHECK_FALSE(is_identifier("a "));
}

TEST_CASE("parsing the five instruction forms", "[instruction]") {
  Instruction basic = parse_instruction("a.x");
  CHECK(basic.op == Opcode::basic);
  CHECK(basic.action.focus == "a");
  CHECK(basic.action.method == "x");

  Instruction pos = parse_instruction("+f.m");
  CHECK(pos.op == Opcode::pos_test);
  CHECK(pos.action.focus == "f");
  CHECK(pos.action.method == "m");

  Instruction neg = parse_instruction("-f.m");
  CHECK(neg.op == Opcode::neg_test);
  CHECK(neg.action == Action{"f", "m"});

  Instruction jmp = parse_instruction("#3");
  CHECK(jmp.op == Opcode::jump);
  CHECK(jmp.jump == 3);

  Instruction div = parse_instruction("#0");
  CHECK(div.op == Opcode::jump);
  CHECK(div.jump == 0);

  Instruction halt = parse_instruction("!");
  CHECK(halt.op == Opcode::halt);
}

TEST_CASE("malformed instructions are rejected", "[instruction]") {
  for (const char* bad : {"", " ", "+", "-", "a", "a.", ".x", "a..x", "a.x.y", "A.x", "a.X",
                          "#", "#x", "#-1", "#1x", "!!", "+a", "a.x ", "f m"}) {
    INFO("token: '" << bad << "'");
    CHECK_THROWS_MATCHES(parse_instruction(bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::malformed_instruction;
                         }));
  }
}

TEST_CASE("jump offsets handle 32-bit bounds", "[instruction]") {
  CHECK(parse_instruction("#4294967295").jump == 4294967295u);
  CHECK_THROWS_AS(parse_instruction("#4294967296"), Error);
}

TEST_CASE("instruction rendering round-trips", "[instruction]") {
  for (const char* tok : {"a.x", "+f.m", "-f.m", "#3", "#0", "!", "my_svc.do_it"}) {
    CHECK(to_string(parse_instruction(tok)) == tok);
  }
}

TEST_CASE("sequence rendering joins tokens with spaces", "[instruction]") {
  InstructionSequence s;
  s.name = "t1";
  s.instrs = {Instruction::basic({"a", "x"}), Instruction::pos_test({"s", "q"}),
              Instruction::jump_by(2), Instruction::halt()};
  CHECK(to_string(s) == "a.x +s.q #2 !");
  CHECK(s.size() == 4);
}

TEST_CASE("actions order and render", "[instruction]") {
  Action a{"a", "x"}, b{"b", "x"};
  CHECK(a.str() == "a.x");
  CHECK(a < b);
  CHECK(a == Action{"a", "x"});
}
