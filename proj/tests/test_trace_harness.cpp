#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "netfloc/generator.hpp"
#include "netfloc/harness.hpp"
#include "netfloc/trace.hpp"

using namespace netfloc;

namespace {

const std::string kData = NETFLOC_DATA_DIR;

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("trace parsing") {
  const auto events = fixtures::trace(
      "# header\n"
      "+ c1 P3\n"
      "\n"
      "+ c2 4   # trailing comment\n"
      "- c1\n"
      "? cost\n"
      "? solution\n");
  REQUIRE(events.size() == 5);
  CHECK(events[0].kind == TraceEvent::Kind::Insert);
  CHECK(events[0].client == "c1");
  CHECK(events[0].point == PointId{3});
  CHECK(events[0].line == 2);
  CHECK(events[1].point == PointId{4});
  CHECK(events[2].kind == TraceEvent::Kind::Delete);
  CHECK(events[3].kind == TraceEvent::Kind::CostQuery);
  CHECK(events[4].kind == TraceEvent::Kind::SolutionQuery);
  CHECK(format_trace(events) == "+ c1 3\n+ c2 4\n- c1\n? cost\n? solution\n");

  CHECK_THROWS_WITH_AS(fixtures::trace("+ c1\n"), doctest::Contains(":1"), InputError);
  CHECK_THROWS_AS(fixtures::trace("+ c1 Q3\n"), InputError);
  CHECK_THROWS_AS(fixtures::trace("? price\n"), InputError);
  CHECK_THROWS_AS(fixtures::trace("* c1\n"), InputError);
}

TEST_CASE("trace validation against the instance") {
  const Instance inst = fixtures::line5();
  CHECK_NOTHROW(validate_trace(inst, fixtures::trace("+ a 1\n- a\n+ a 2\n")));
  CHECK_THROWS_WITH_AS(validate_trace(inst, fixtures::trace("+ a 5\n")),
                       doctest::Contains("outside"), InputError);
  CHECK_THROWS_WITH_AS(validate_trace(inst, fixtures::trace("+ a 1\n+ a 2\n")),
                       doctest::Contains("<trace>:2"), InputError);
  CHECK_THROWS_AS(validate_trace(inst, fixtures::trace("- a\n")), InputError);
}

TEST_CASE("instance files") {
  const Instance inst = load_instance(kData + "/line5.json");
  CHECK(inst.num_points() == 5);
  CHECK(inst.num_facilities() == 2);
  CHECK(inst.facility(FacilityId{1}).point == PointId{3});

  const Instance again = parse_instance(instance_to_json(inst));
  CHECK(instance_to_json(again) == instance_to_json(inst));

  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"metric": {"kind": "euclidean-L2", "points": [0, 1]},
                        "facilities": [{"point": 0, "cost": -4}]})"),
      doctest::Contains("/facilities/0/cost"), InputError);
  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"metric": {"kind": "explicit-matrix", "matrix": [[0, 1], [2, 0]]},
                        "facilities": [{"point": 0, "cost": 1}]})"),
      doctest::Contains("(0, 1)"), InputError);
  CHECK_THROWS_WITH_AS(parse_instance("{\n  \"metric\": [1,\n}"), doctest::Contains("line 3"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"metric": {"kind": "euclidean-L2", "points": [0]},
                                          "facilities": [{"cost": 1}]})"),
                       doctest::Contains("point"), InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"metric": {"kind": "taxicab", "points": [0]},
                                          "facilities": [{"point": 0, "cost": 1}]})"),
                       doctest::Contains("/metric/kind"), InputError);
  CHECK_THROWS_AS(load_instance(kData + "/missing.json"), InputError);

  const Instance with_kappa = parse_instance(R"({"metric": {"kind": "euclidean-Linf", "points": [[0, 0], [1, 2]]},
                                                 "facilities": [{"point": 1, "cost": 3}], "kappa": 2})");
  CHECK(with_kappa.kappa() == 2.0);
  CHECK(with_kappa.distance(PointId{0}, PointId{1}) == 2.0);
}

TEST_CASE("running the LINE5 trace") {
  const Instance inst = load_instance(kData + "/line5.json");
  const auto trace = load_trace(kData + "/line5.trace");
  validate_trace(inst, trace);
  for (RunMode mode : {RunMode::Fast, RunMode::Verified}) {
    RunOptions options;
    options.mode = mode;
    const RunReport report = run_trace(inst, trace, options);
    CHECK_FALSE(report.failure);
    CHECK(report.outputs == std::vector<std::string>{"25", "F0", "15", "F0", "25", "0"});
    CHECK(report.events.size() == trace.size());
  }

  CHECK(run_trace(inst, fixtures::trace("+ c1 P3\n- c1\n? cost\n")).outputs ==
        std::vector<std::string>{"0"});
  CHECK(run_trace(inst, fixtures::trace("? solution\n")).outputs == std::vector<std::string>{""});
}

TEST_CASE("verification catches a corrupted engine") {
  const Instance inst = load_instance(kData + "/line5.json");
  const auto trace = load_trace(kData + "/line5.trace");
  CHECK_FALSE(verify_trace(inst, trace).failure);

  RunOptions hooks;
  hooks.after_event = [](DynamicFacilityLocation& engine, std::size_t index) {
    if (index == 3) engine.annotation_for_testing(engine.hierarchy().root()).open_below += 1;
  };
  const RunReport report = verify_trace(inst, trace, hooks);
  REQUIRE(report.failure);
  CHECK(report.failure->event_index == 3);
  CHECK(report.failure->line == 5);
  CHECK(report.failure->messages.front().find("open_below") != std::string::npos);
}

TEST_CASE("fuzz traces verify clean") {
  std::mt19937_64 rng(seed_from_env(7));
  GeneratorConfig config;
  config.points = 50;
  config.facilities = 8;
  const Instance inst = random_instance(rng, config);
  const auto trace = random_trace(rng, inst, 1000, 10);
  validate_trace(inst, trace);
  const RunReport report = verify_trace(inst, trace);
  CHECK_MESSAGE(!report.failure, (report.failure ? report.failure->messages.front() : ""));
  CHECK(report.outputs.size() == 100);
}

TEST_CASE("replay is deterministic") {
  const auto make = [] {
    std::mt19937_64 rng(42);
    const Instance inst = random_instance(rng, GeneratorConfig{});
    return std::make_pair(instance_to_json(inst), format_trace(random_trace(rng, inst, 300, 7)));
  };
  const auto first = make();
  CHECK(first == make());

  const Instance inst = parse_instance(first.first);
  std::istringstream in(first.second);
  const auto trace = parse_trace(in);
  CHECK(run_trace(inst, trace).outputs == run_trace(inst, trace).outputs);
}

TEST_CASE("bench table") {
  const Instance inst = load_instance(kData + "/line5.json");
  const auto trace = load_trace(kData + "/line5.trace");
  const std::string single = bench_trace(inst, trace, 1);
  CHECK(single.rfind("event_index,op,micros,heap_pulls,flips\n", 0) == 0);
  CHECK(count_lines(single) == trace.size() + 1);
  CHECK(single.find("\n0,insert,") != std::string::npos);
  CHECK(single.find("\n1,cost,") != std::string::npos);

  const std::string triple = bench_trace(inst, trace, 3);
  CHECK(triple.rfind("event_index,op,micros,heap_pulls,flips,median_micros\n", 0) == 0);
  CHECK(count_lines(triple) == trace.size() + 1);
}

TEST_CASE("opt command") {
  const Instance inst = load_instance(kData + "/line5.json");
  const auto trace = load_trace(kData + "/line5.trace");

  OptReport r = opt_command(inst, trace, 1);
  CHECK(r.opt == 10.0);
  CHECK(r.engine_cost == 25.0);
  CHECK(r.realized_cost == 110.0);
  CHECK(r.realized_ratio == 11.0);

  r = opt_command(inst, trace, 6);
  CHECK(r.clients == 3);
  CHECK(r.opt == 11.0);
  CHECK(r.realized_cost == 311.0);

  r = opt_command(inst, trace, 0);
  CHECK(r.opt == 0.0);
  CHECK(r.realized_ratio == 1.0);
  CHECK(format_opt_report(r).find("realized_ratio 1\n") != std::string::npos);

  const Instance big = fixtures::random_instance(1, 30, 21);
  CHECK_THROWS_AS(opt_command(big, {}), InputError);
}

TEST_CASE("generator respects its configuration") {
  std::mt19937_64 rng(3);
  GeneratorConfig config;
  config.points = 30;
  config.facilities = 10;
  const Instance inst = random_instance(rng, config);
  CHECK(inst.num_points() == 30);
  CHECK(inst.num_facilities() == 10);
  for (const Facility& f : inst.facilities()) {
    CHECK(f.opening_cost >= 1.0);
    CHECK(f.opening_cost <= 500.0);
    CHECK(f.opening_cost == std::floor(f.opening_cost));
  }
  const auto trace = random_trace(rng, inst, 3000);
  std::size_t inserts = 0;
  for (const TraceEvent& ev : trace) inserts += ev.kind == TraceEvent::Kind::Insert;
  CHECK(trace.size() == 3000);
  // Two of three draws insert; deletes fall back to inserts only on an empty set.
  CHECK(inserts > 1800);
  CHECK(inserts < 2200);
  CHECK_NOTHROW(validate_trace(inst, trace));
}
