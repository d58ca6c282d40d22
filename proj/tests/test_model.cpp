#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "ttm/io.hpp"
#include "ttm/model.hpp"

using namespace ttm;

namespace {

TimePoint tick(std::int64_t t) { return TimePoint::from_input_ticks(t); }
Duration dur(std::int64_t d) { return Duration::from_input_ticks(d); }

const RouteSegment& segment(const Network& net, const char* id) {
  return net.segments()[*net.find_segment(id)];
}

}  // namespace

TEST_CASE("profile_duration evaluates the piece containing the departure") {
  TravelTimeProfile constant = TravelTimeProfile::constant(dur(60));
  CHECK(profile_duration(constant, tick(0)) == dur(60));
  CHECK(profile_duration(constant, tick(1234)) == dur(60));

  Network pe1 = builtin_example(BuiltinExample::MinMinCounterexample);
  const TravelTimeProfile& ab = segment(pe1, "ab").profile;
  CHECK(profile_duration(ab, tick(1020)) == dur(10));
  CHECK(profile_duration(ab, tick(1019)) == dur(60));
  CHECK(profile_duration(ab, tick(1079)) == dur(10));
  CHECK(profile_duration(ab, tick(1080)) == dur(60));

  TravelTimeProfile late({{tick(10), dur(5)}});
  CHECK_THROWS_AS(profile_duration(late, tick(9)), domain_error);
}

TEST_CASE("fifo_check finds every decreasing arrival step") {
  Period grid{tick(0), tick(1439)};
  CHECK(fifo_check(TravelTimeProfile::constant(dur(60)), grid).empty());

  Network pe1 = builtin_example(BuiltinExample::MinMinCounterexample);
  auto violations = fifo_check(segment(pe1, "ab").profile, grid);
  REQUIRE(!violations.empty());
  // 1019 + 60 > 1020 + 10
  CHECK(std::find(violations.begin(), violations.end(), tick(1019)) !=
        violations.end());
  // the step back up at 1080 is not a violation
  CHECK(std::find(violations.begin(), violations.end(), tick(1079)) ==
        violations.end());

  TravelTimeProfile drop({{tick(0), dur(50)}, {tick(10), dur(45)}});
  auto v = fifo_check(drop, Period{tick(0), tick(20)});
  CHECK(v == std::vector<TimePoint>{tick(9)});  // 9+50 > 10+45
}

TEST_CASE("fifo_check empty iff the arrival function is non-decreasing") {
  std::mt19937 rng(7);
  testing::GenParams params;
  params.min_duration = 1;
  for (int i = 0; i < 30; ++i) {
    Network net = testing::random_network(rng, params);
    for (const RouteSegment& seg : net.segments()) {
      bool monotone = true;
      TimePoint prev =
          net.period().start + seg.profile.value_at(net.period().start);
      for (std::int64_t h = net.period().start.half_ticks() + kGridStep;
           h <= net.period().end.half_ticks(); h += kGridStep) {
        TimePoint t = TimePoint::from_half_ticks(h);
        TimePoint arrival = t + seg.profile.value_at(t);
        if (arrival < prev) monotone = false;
        prev = arrival;
      }
      CHECK(fifo_check(seg.profile, net.period()).empty() == monotone);
    }
  }
}

TEST_CASE("validate_network accepts the built-in examples") {
  for (auto which :
       {BuiltinExample::MinMinCounterexample, BuiltinExample::BoundaryExample,
        BuiltinExample::IntegralViolation}) {
    ValidationReport report = validate_network(builtin_example(which));
    CHECK(report.ok);
    CHECK(report.violations.empty());
    REQUIRE(report.structurally_satisfied.size() == 2);
    CHECK(report.structurally_satisfied[0] == ConsistencyRule::Identity);
    CHECK(report.structurally_satisfied[1] == ConsistencyRule::Composition);
  }
}

TEST_CASE("validate_network reports a missing return path with a witness") {
  // removing only c->a leaves the c->b->a composition, so existence holds
  Network pe1 = builtin_example(BuiltinExample::MinMinCounterexample);
  CHECK(validate_network(pe1.without_segments({*pe1.find_segment("ca")})).ok);

  // cutting every segment out of c strands it
  Network broken = pe1.without_segments(
      {*pe1.find_segment("ca"), *pe1.find_segment("cb")});
  ValidationReport report = validate_network(broken);
  CHECK(!report.ok);
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0].rule == ConsistencyRule::Existence);
  CHECK(report.violations[0].witness.find("'c'") != std::string::npos);
  CHECK(report.violations[0].witness.find("'a'") != std::string::npos);
  CHECK(report.violations[0].witness.find("departing at 0") !=
        std::string::npos);
}

TEST_CASE("validate_network reports zero-duration segments as positivity") {
  std::vector<Location> locations{{"a", ""}, {"b", ""}};
  std::vector<RouteSegment> segments{
      {"ab", 0, 1, TravelTimeProfile::constant(dur(0)), "", std::nullopt, false},
      {"ba", 1, 0, TravelTimeProfile::constant(dur(5)), "", std::nullopt, false}};
  Network net("minute", locations, segments, Period{tick(0), tick(10)},
              WaitingPolicy::NoWaiting);
  ValidationReport report = validate_network(net);
  CHECK(!report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].rule == ConsistencyRule::Positivity);
  CHECK(report.violations[0].witness.find("'ab'") != std::string::npos);
}

TEST_CASE("validate_network flags profiles that start after the period") {
  std::vector<Location> locations{{"a", ""}, {"b", ""}};
  std::vector<RouteSegment> segments{
      {"ab", 0, 1, TravelTimeProfile({{tick(5), dur(3)}}), "", std::nullopt,
       false},
      {"ba", 1, 0, TravelTimeProfile::constant(dur(5)), "", std::nullopt,
       false}};
  Network net("minute", locations, segments, Period{tick(0), tick(10)},
              WaitingPolicy::NoWaiting);
  ValidationReport report = validate_network(net);
  CHECK(!report.ok);
  bool has_profile_rule = false;
  for (const auto& v : report.violations)
    has_profile_rule |= v.rule == ConsistencyRule::Profile;
  CHECK(has_profile_rule);
}

TEST_CASE("regularized networks must cover every ordered pair past the end") {
  Network reg = regularize(builtin_example(BuiltinExample::BoundaryExample));
  CHECK(validate_network(reg).ok);

  Network gap = reg.without_segments({*reg.find_segment("~eps:b>c")});
  ValidationReport report = validate_network(gap);
  CHECK(!report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].rule == ConsistencyRule::Existence);
  CHECK(report.violations[0].witness.find("synthetic") != std::string::npos);
}

TEST_CASE("network construction rejects structural errors") {
  std::vector<Location> locations{{"a", ""}, {"b", ""}};
  CHECK_THROWS_AS(TravelTimeProfile({{tick(10), dur(1)}, {tick(5), dur(2)}}),
                  parse_error);
  CHECK_THROWS_AS(
      Network("minute", {{"a", ""}, {"a", ""}}, {}, Period{tick(0), tick(1)},
              WaitingPolicy::NoWaiting),
      parse_error);
  std::vector<RouteSegment> self{
      {"aa", 0, 0, TravelTimeProfile::constant(dur(1)), "", std::nullopt,
       false}};
  CHECK_THROWS_AS(Network("minute", locations, self, Period{tick(0), tick(1)},
                          WaitingPolicy::NoWaiting),
                  parse_error);
}

TEST_CASE("random valid networks stay positive on every departure") {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    Network net = testing::random_network(rng, {});
    CHECK(validate_network(net).ok);
    for (const RouteSegment& seg : net.segments())
      for (std::int64_t h = net.period().start.half_ticks();
           h <= net.period().end.half_ticks(); h += kGridStep)
        CHECK(seg.profile.value_at(TimePoint::from_half_ticks(h)) >
              Duration::zero());
  }
}
