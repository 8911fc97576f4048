#include <catch2/catch_amalgamated.hpp>

#include "pmth/switch_protocol.hpp"

using namespace pmth;

namespace {
const std::vector<std::string> kThreads{"t1", "t2", "t3"};

PhaseState active_state(const std::string& t, ProtocolMode mode = ProtocolMode::manual) {
  PhaseState ps;
  ps.mode = mode;
  ps.active = t;
  return ps;
}
}  // namespace

TEST_CASE("contemplation moves from the focus holder only", "[switch]") {
  PhaseState ps = active_state("t1");
  c_switch(ps, kThreads, "t1", "t2");  // bootstrap: active holds the focus
  CHECK(ps.contemplating == "t2");
  CHECK(ps.contemplated == std::vector<std::string>{"t2"});

  c_switch(ps, kThreads, "t2", "t3");  // chained: the contemplated thread passes it on
  CHECK(ps.contemplating == "t3");
  CHECK(ps.contemplated == std::vector<std::string>{"t2", "t3"});

  PhaseState before = ps;
  CHECK_THROWS_MATCHES(c_switch(ps, kThreads, "t1", "t2"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::contemplation_not_held;
                       }));
  CHECK(ps == before);

  CHECK_THROWS_MATCHES(c_switch(ps, kThreads, "t3", "t3"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::protocol_error;
                       }));
  CHECK_THROWS_MATCHES(c_switch(ps, kThreads, "t3", "ghost"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::unknown_thread;
                       }));
}

TEST_CASE("readiness needs the target plus one alternative", "[switch]") {
  PhaseState ps = active_state("t1");
  CHECK_FALSE(readiness_ok(ps, "t2"));  // empty set
  c_switch(ps, kThreads, "t1", "t2");
  CHECK_FALSE(readiness_ok(ps, "t2"));  // only the target itself
  c_switch(ps, kThreads, "t2", "t3");
  CHECK(readiness_ok(ps, "t2"));
  CHECK(readiness_ok(ps, "t3"));
  CHECK_FALSE(readiness_ok(ps, "t1"));  // never contemplated
}

TEST_CASE("manual commits require exact contemplation and readiness", "[switch]") {
  PhaseState ps = active_state("t1");
  c_switch(ps, kThreads, "t1", "t2");

  PhaseState only_target = ps;
  CHECK_THROWS_MATCHES(a_switch(only_target, kThreads, "t2", Motive::fairness, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::readiness_violation;
                       }));
  CHECK(only_target == ps);

  c_switch(ps, kThreads, "t2", "t3");
  PhaseState wrong_target = ps;
  CHECK_THROWS_MATCHES(a_switch(wrong_target, kThreads, "t2", Motive::fairness, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::not_contemplated;
                       }));  // contemplating is t3, not t2
  CHECK(wrong_target == ps);

  SwitchEvent ev = a_switch(ps, kThreads, "t3", Motive::fairness, 7);
  CHECK(ev.kind == SwitchEvent::Kind::proper_switch);
  CHECK(ev.from == "t1");
  CHECK(ev.to == "t3");
  CHECK(ev.motive == Motive::fairness);
  CHECK(ev.step == 7);
  CHECK(ps.active == "t3");
  CHECK(ps.contemplating == std::nullopt);
  CHECK(ps.contemplated.empty());
}

TEST_CASE("sip commits accept any contemplated target", "[switch]") {
  PhaseState ps = active_state("t1", ProtocolMode::sip);
  c_switch(ps, kThreads, "t1", "t2");
  c_switch(ps, kThreads, "t2", "t3");
  // contemplating is t3 but t2 was contemplated with an alternative present.
  SwitchEvent ev = a_switch(ps, kThreads, "t2", Motive::fairness, 3);
  CHECK(ev.to == "t2");
  CHECK(ps.active == "t2");

  PhaseState ps2 = active_state("t1", ProtocolMode::sip);
  c_switch(ps2, kThreads, "t1", "t2");
  CHECK_THROWS_MATCHES(a_switch(ps2, kThreads, "t3", Motive::fairness, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::not_contemplated;
                       }));
  CHECK_THROWS_MATCHES(a_switch(ps2, kThreads, "t2", Motive::fairness, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::readiness_violation;
                       }));
}

TEST_CASE("a waiver substitutes for the missing alternative", "[switch]") {
  PhaseState ps = active_state("t1");
  c_switch(ps, kThreads, "t1", "t2");
  waive_readiness(ps);
  SwitchEvent ev = a_switch(ps, kThreads, "t2", Motive::blocked, 2);
  CHECK(ps.active == "t2");
  CHECK(ev.motive == Motive::blocked);
  CHECK_FALSE(ps.readiness_waived);  // consumed by the commit
}

TEST_CASE("the first activation bootstraps without ceremony", "[switch]") {
  PhaseState ps;
  ps.mode = ProtocolMode::manual;
  SwitchEvent ev = a_switch(ps, kThreads, "t1", Motive::policy_default, 1);
  CHECK(ev.from == std::nullopt);
  CHECK(ps.active == "t1");

  // Once anything is on record, the bootstrap exemption is gone.
  PhaseState ps2;
  ps2.mode = ProtocolMode::manual;
  ps2.active = "t1";
  CHECK_THROWS_AS(a_switch(ps2, kThreads, "t2", Motive::fairness, 1), Error);
}

TEST_CASE("pseudo-switch pairing is strict", "[switch]") {
  PhaseState ps = active_state("t1");
  CHECK_THROWS_MATCHES(pseudo_switch(ps, kThreads, "t2", "t3"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::not_active;
                       }));
  pseudo_switch(ps, kThreads, "t1", "t2");
  REQUIRE(ps.pseudo.has_value());
  CHECK(ps.pseudo->host == "t1");
  CHECK(ps.pseudo->guest == "t2");
  CHECK(ps.active == "t1");  // proper activity stays with the host

  CHECK_THROWS_MATCHES(pseudo_switch(ps, kThreads, "t1", "t3"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::pseudo_nested;
                       }));
  CHECK_THROWS_MATCHES(a_switch(ps, kThreads, "t2", Motive::fairness, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::unclosed_pseudo_switch;
                       }));
  CHECK_THROWS_MATCHES(pseudo_back(ps, "t3", "t1"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::unmatched_pseudo_back;
                       }));
  pseudo_back(ps, "t2", "t1");
  CHECK(ps.pseudo == std::nullopt);
  CHECK_THROWS_AS(pseudo_back(ps, "t2", "t1"), Error);

  PhaseState self = active_state("t1");
  CHECK_THROWS_AS(pseudo_switch(self, kThreads, "t1", "t1"), Error);
}

TEST_CASE("motive classification follows first-match order", "[switch]") {
  MotiveInputs in;
  in.have_from = false;
  CHECK(classify_motive(in) == Motive::policy_default);

  in.have_from = true;
  in.from_blocked = true;
  in.from_consecutive_turns = 99;  // blocked outranks fatigue
  CHECK(classify_motive(in) == Motive::blocked);

  in.from_blocked = false;
  in.fatigue_bound = 8;
  in.from_consecutive_turns = 8;
  CHECK(classify_motive(in) == Motive::fatigue);
  in.from_consecutive_turns = 7;

  in.to_prom_subj_at_last_yield = 2;
  in.to_prom_subj_now = 4;
  CHECK(classify_motive(in) == Motive::priority_change);
  in.to_prom_subj_at_last_yield = 4;  // unchanged -> rule passes over

  in.to_last_active = 3;
  in.live_last_active = {3, 9, 12};
  CHECK(classify_motive(in) == Motive::fairness);

  in.to_last_active = 9;
  CHECK(classify_motive(in) == Motive::policy_default);

  in.to_prom_subj_at_last_yield.reset();  // no snapshot: no priority-change
  in.to_last_active = 9;
  CHECK(classify_motive(in) == Motive::policy_default);
}

TEST_CASE("motive names round-trip", "[switch]") {
  for (Motive m : {Motive::fairness, Motive::blocked, Motive::priority_change, Motive::fatigue,
                   Motive::policy_default})
    CHECK(motive_from_name(motive_name(m)) == m);
  CHECK_THROWS_AS(motive_from_name("boredom"), Error);
}
