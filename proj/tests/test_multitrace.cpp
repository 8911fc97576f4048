#include <catch2/catch_amalgamated.hpp>

#include "pmth/multitrace.hpp"

using namespace pmth;

namespace {

TraceEvent act(std::int64_t step, const std::string& thread, const std::string& focus,
               const std::string& method) {
  TraceEvent e;
  e.step = step;
  e.kind = EventKind::act;
  e.thread = thread;
  e.action = Action{focus, method};
  e.reply = Reply::T;
  return e;
}

Trace interleaved() {
  // a.1(t1) b.1(t2) a.2(t1) with switch noise in between.
  Trace tr;
  tr.events.push_back(act(1, "t1", "a", "1"));
  TraceEvent sw;
  sw.step = 2;
  sw.kind = EventKind::proper_switch;
  sw.thread = "t2";
  sw.motive = Motive::fairness;
  tr.events.push_back(sw);
  tr.events.push_back(act(3, "t2", "b", "1"));
  tr.events.push_back(act(4, "t1", "a", "2"));
  return tr;
}

}  // namespace

TEST_CASE("projection filters one thread's acts in step order", "[multitrace]") {
  Progression p = project(interleaved(), "t1");
  REQUIRE(p.items.size() == 2);
  CHECK(p.items[0] == std::pair<std::int64_t, Action>{1, {"a", "1"}});
  CHECK(p.items[1] == std::pair<std::int64_t, Action>{4, {"a", "2"}});
  CHECK(p.now == 2);  // everything is past

  CHECK(project(interleaved(), "nobody").items.empty());
}

TEST_CASE("pseudo-acts project to the guest, not the host", "[multitrace]") {
  Trace tr;
  TraceEvent e;
  e.step = 1;
  e.kind = EventKind::pseudo_act;
  e.thread = "r";
  e.context = "t";
  e.action = Action{"b", "y"};
  tr.events.push_back(e);
  CHECK(project(tr, "r").items.size() == 1);
  CHECK(project(tr, "t").items.empty());
}

TEST_CASE("provenance decomposition equals per-thread projection", "[multitrace]") {
  Classifier cls;
  cls.provenance = true;
  MultiTrace mt = decompose(interleaved(), cls);
  REQUIRE(mt.threads.size() == 2);
  CHECK(mt.threads.at("t1") == project(interleaved(), "t1"));
  CHECK(mt.threads.at("t2") == project(interleaved(), "t2"));
  CHECK(mt.classifier_id == "provenance");
}

TEST_CASE("prefix classification takes the longest match with a default", "[multitrace]") {
  Trace tr;
  tr.events.push_back(act(1, "t1", "lotto", "buy"));
  tr.events.push_back(act(2, "t1", "lotto", "win"));
  tr.events.push_back(act(3, "t2", "lottery_office", "visit"));
  tr.events.push_back(act(4, "t2", "x", "y"));

  Classifier cls;
  cls.prefixes = {{"lotto", "luck"}, {"lotto.w", "jackpot"}};
  cls.default_name = "noise";
  MultiTrace mt = decompose(tr, cls);
  REQUIRE(mt.threads.count("luck"));
  REQUIRE(mt.threads.count("jackpot"));
  REQUIRE(mt.threads.count("noise"));
  CHECK(mt.threads.at("luck").items.size() == 1);     // lotto.buy
  CHECK(mt.threads.at("jackpot").items.size() == 1);  // lotto.win takes the longer prefix
  CHECK(mt.threads.at("noise").items.size() == 2);    // lottery_office.visit, x.y
}

TEST_CASE("three unrelated same-focus events reveal one thread", "[multitrace]") {
  Trace tr;
  tr.events.push_back(act(1, "t1", "a", "buy"));
  tr.events.push_back(act(5, "t2", "a", "check"));
  tr.events.push_back(act(9, "t3", "a", "collect"));
  Classifier cls;
  cls.prefixes = {{"a.", "luck"}};
  MultiTrace mt = decompose(tr, cls);
  REQUIRE(mt.threads.size() == 1);
  CHECK(mt.threads.at("luck").items.size() == 3);
}

TEST_CASE("duplicate classifier prefixes are ambiguous", "[multitrace]") {
  Classifier cls;
  cls.prefixes = {{"a.", "x"}, {"a.", "y"}};
  CHECK_THROWS_MATCHES(decompose(interleaved(), cls), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::ambiguous_classifier;
                       }));
}

TEST_CASE("an empty trace decomposes to an empty multi-trace", "[multitrace]") {
  Classifier cls;
  cls.provenance = true;
  CHECK(decompose(Trace{}, cls).threads.empty());
  CHECK(render_stats(decompose(Trace{}, cls)) ==
        "name\tcount\tfirst\tlast\tspan\n# mean-span=0.00 threads=0\n");
}

TEST_CASE("decomposition partitions the behavioral events", "[multitrace]") {
  Trace tr = interleaved();
  Classifier cls;
  cls.prefixes = {{"a.1", "one"}};
  cls.default_name = "rest";
  MultiTrace mt = decompose(tr, cls);
  std::size_t total = 0;
  for (const auto& [name, prog] : mt.threads) total += prog.items.size();
  CHECK(total == 3);
}

TEST_CASE("stats report count, bounds and span", "[multitrace]") {
  MultiTrace mt;
  mt.threads["w"].items = {{1, {"a", "x"}}, {3, {"a", "y"}}};
  mt.threads["v"].items = {{5, {"b", "z"}}};
  auto rows = stats(mt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].name == "v");  // sorted by name
  CHECK(rows[0].count == 1);
  CHECK(rows[0].span == 1);
  CHECK(rows[1].name == "w");
  CHECK(rows[1].count == 2);
  CHECK(rows[1].first == 1);
  CHECK(rows[1].last == 3);
  CHECK(rows[1].span == 3);
}

TEST_CASE("mean span over spans three and five is four", "[multitrace]") {
  MultiTrace mt;
  mt.threads["a"].items = {{1, {"x", "m"}}, {3, {"x", "m"}}};  // span 3
  mt.threads["b"].items = {{10, {"x", "m"}}, {14, {"x", "m"}}};  // span 5
  CHECK(format_mean_span(stats(mt)) == "4.00");
  CHECK(render_stats(mt) ==
        "name\tcount\tfirst\tlast\tspan\n"
        "a\t2\t1\t3\t3\n"
        "b\t2\t10\t14\t5\n"
        "# mean-span=4.00 threads=2\n");
}

TEST_CASE("stats are invariant under revealed-name relabeling", "[multitrace]") {
  MultiTrace a;
  a.threads["x"].items = {{2, {"p", "q"}}, {7, {"p", "q"}}};
  MultiTrace b;
  b.threads["renamed"] = a.threads["x"];
  auto ra = stats(a), rb = stats(b);
  REQUIRE(ra.size() == rb.size());
  CHECK(ra[0].count == rb[0].count);
  CHECK(ra[0].span == rb[0].span);
  CHECK(format_mean_span(ra) == format_mean_span(rb));
}

TEST_CASE("fractional mean spans round half away from zero", "[multitrace]") {
  MultiTrace mt;
  mt.threads["a"].items = {{1, {"x", "m"}}};                   // span 1
  mt.threads["b"].items = {{1, {"x", "m"}}, {2, {"x", "m"}}};  // span 2
  CHECK(format_mean_span(stats(mt)) == "1.50");
  mt.threads["c"].items = {{1, {"x", "m"}}, {2, {"x", "m"}}};  // spans 1,2,2
  CHECK(format_mean_span(stats(mt)) == "1.67");
}
