#include <doctest.h>

#include "support.hpp"
#include "ttm/analysis.hpp"
#include "ttm/io.hpp"

using namespace ttm;

namespace {

TimePoint tick(std::int64_t t) { return TimePoint::from_input_ticks(t); }
Duration dur(std::int64_t d) { return Duration::from_input_ticks(d); }

}  // namespace

TEST_CASE("stability: excluding the fastest walk falls back to the next one") {
  Network pe1 =
      regularize(builtin_example(BuiltinExample::MinMinCounterexample));
  StabilityReport report = stability_metric(pe1);

  std::uint32_t a = *pe1.find_location("a");
  std::uint32_t b = *pe1.find_location("b");
  CHECK(report.baseline ==
        maxmin_metric(pe1, SearchPolicy::for_network(pe1)));
  CHECK(report.flagged.empty());

  // with the direct hop excluded the detour via c costs 45 + 60 at every
  // departure, so it is the excluded-case worst case for (a,b)
  CHECK(report.excluded.at(a, b) == dur(105));
  CHECK(report.excluded.at(a, *pe1.find_location("c")) == dur(120));
  for (std::size_t i = 0; i < report.delta.size(); ++i)
    CHECK(report.delta[i] >= Duration::zero());
  CHECK(verify_metric_axioms(report.excluded).all_pass());
}

TEST_CASE("stability: parallel segments back each other up") {
  std::vector<Location> locations{{"a", ""}, {"b", ""}};
  std::vector<RouteSegment> segments{
      {"fast", 0, 1, TravelTimeProfile::constant(dur(7)), "", std::nullopt, false},
      {"slow", 0, 1, TravelTimeProfile::constant(dur(9)), "", std::nullopt, false},
      {"rfast", 1, 0, TravelTimeProfile::constant(dur(7)), "", std::nullopt, false},
      {"rslow", 1, 0, TravelTimeProfile::constant(dur(8)), "", std::nullopt, false}};
  Network net = regularize(Network("minute", locations, segments,
                                   Period{tick(0), tick(20)},
                                   WaitingPolicy::NoWaiting));
  StabilityReport report = stability_metric(net);
  std::uint32_t a = *net.find_location("a");
  std::uint32_t b = *net.find_location("b");
  CHECK(report.baseline.at(a, b) == dur(7));  // both directions take 7
  // with the 7-minute hop excluded, each direction falls back to its
  // parallel segment; the worse of the two wins the symmetrized cell
  CHECK(report.excluded.at(a, b) == dur(9));
  CHECK(report.delta_at(a, b) == dur(2));
  CHECK(report.flagged.empty());
}

TEST_CASE("stability requires a regularized network") {
  CHECK_THROWS_AS(
      stability_metric(builtin_example(BuiltinExample::BoundaryExample)),
      domain_error);
}

TEST_CASE("stability delta stays non-negative on random networks") {
  std::mt19937 rng(61);
  testing::GenParams params;
  params.max_locations = 4;
  params.max_segments = 7;
  params.max_period = 20;
  for (int i = 0; i < 8; ++i) {
    Network net = regularize(testing::random_network(rng, params));
    StabilityReport report = stability_metric(net);
    for (Duration d : report.delta) CHECK(d >= Duration::zero());
  }
}

TEST_CASE("capacity: removing the at-capacity leg forces the direct route") {
  Network pe2 = builtin_example(BuiltinExample::BoundaryExample);
  std::vector<RouteSegment> segments = pe2.segments();
  for (RouteSegment& seg : segments)
    if (seg.id == "ab") seg.capacity = 3;
  Network net("minute", pe2.locations(), segments, pe2.period(),
              pe2.waiting_policy());

  CapacityScenario rush{"rush", {{"ab", 3}}};
  MetricMatrix m = capacity_scenario(net, rush);
  std::uint32_t a = *net.find_location("a");
  std::uint32_t c = *net.find_location("c");
  CHECK(m.at(a, c) == dur(120));
  CHECK(verify_metric_axioms(m).all_pass());

  // below capacity nothing changes
  CapacityScenario calm{"calm", {{"ab", 2}}};
  CHECK(capacity_scenario(net, calm) ==
        maxmin_metric(regularize(net), SearchPolicy::for_network(net)));
}

TEST_CASE("capacity: empty scenario is bit-identical to the baseline") {
  Network net = builtin_example(BuiltinExample::BoundaryExample);
  MetricMatrix baseline =
      maxmin_metric(regularize(net), SearchPolicy::for_network(net));
  MetricMatrix scenario = capacity_scenario(net, CapacityScenario{});
  CHECK(scenario == baseline);
}

TEST_CASE("capacity: stranding a location is an existence error") {
  Network pe2 = builtin_example(BuiltinExample::BoundaryExample);
  std::vector<RouteSegment> segments = pe2.segments();
  for (RouteSegment& seg : segments)
    if (seg.id == "ac" || seg.id == "bc") seg.capacity = 1;
  Network net("minute", pe2.locations(), segments, pe2.period(),
              pe2.waiting_policy());
  CapacityScenario jam{"jam", {{"ac", 5}, {"bc", 5}}};
  CHECK_THROWS_AS(capacity_scenario(net, jam), existence_error);
  try {
    capacity_scenario(net, jam);
  } catch (const existence_error& e) {
    CHECK(!e.report.ok);
    CHECK(!e.report.violations.empty());
    CHECK(e.report.violations[0].rule == ConsistencyRule::Existence);
  }
}

TEST_CASE("capacity: unknown segment ids are rejected") {
  Network net = builtin_example(BuiltinExample::BoundaryExample);
  CHECK_THROWS_AS(capacity_scenario(net, CapacityScenario{"x", {{"zz", 1}}}),
                  parse_error);
}

TEST_CASE("rolling windows over a stationary network are identical") {
  Network pe2 = builtin_example(BuiltinExample::BoundaryExample);
  RollingSpec spec{dur(120), dur(60)};
  auto series = rolling_metrics(pe2, spec);
  // floor((480 - 120) / 60) + 1
  CHECK(series.size() == 7);
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(series[i].first == tick(120 + 60 * static_cast<std::int64_t>(i)));
    CHECK(series[i].second.values == series[0].second.values);
    CHECK(verify_metric_axioms(series[i].second).all_pass());
  }
}

TEST_CASE("rolling window sees only the profiles inside it") {
  Network pe1 = builtin_example(BuiltinExample::MinMinCounterexample);
  std::uint32_t a = *pe1.find_location("a");
  std::uint32_t b = *pe1.find_location("b");

  // a morning window: the 5 PM discount on (a,b) is out of scope and the
  // off-peak constant is the worst case
  Network window = pe1.with_period(Period{tick(540), tick(720)});
  MetricMatrix m = maxmin_metric(regularize(window),
                                 SearchPolicy::for_network(window));
  CHECK(m.at(a, b) == dur(60));
  CHECK(m.period == Period{tick(540), tick(720)});

  RollingSpec spec{dur(720), dur(720)};  // single window [0, 720]
  auto series = rolling_metrics(pe1, spec);
  REQUIRE(series.size() == 1);
  CHECK(series[0].first == tick(720));
  CHECK(series[0].second.at(a, b) == dur(60));
  CHECK(series[0].second.period == Period{tick(0), tick(720)});
}

TEST_CASE("rolling windows must fit the data period") {
  Network pe2 = builtin_example(BuiltinExample::BoundaryExample);
  CHECK_THROWS_AS(rolling_metrics(pe2, RollingSpec{dur(481), dur(10)}),
                  domain_error);
  CHECK_THROWS_AS(rolling_metrics(pe2, RollingSpec{dur(0), dur(10)}),
                  domain_error);
  CHECK_THROWS_AS(rolling_metrics(regularize(pe2), RollingSpec{dur(10), dur(10)}),
                  domain_error);
}
