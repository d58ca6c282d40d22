#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ttm/model.hpp"

namespace ttm::testing {

struct GenParams {
  int min_locations = 2;
  int max_locations = 5;
  int max_segments = 10;
  int max_breakpoints = 4;
  // duration >= 6 with a period of <= 40 ticks keeps every useful walk
  // within the 8-edge oracle budget
  std::int64_t min_duration = 6;
  std::int64_t max_duration = 40;
  std::int64_t min_period = 8;
  std::int64_t max_period = 40;
  bool randomize_waiting = true;
};

// Random network satisfying the consistency requirements: a directed cycle
// through all locations guarantees existence, extra segments and random
// piecewise profiles supply the time dependence.
inline Network random_network(std::mt19937& rng, const GenParams& params) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };

  int n = static_cast<int>(pick(params.min_locations, params.max_locations));
  std::vector<Location> locations;
  for (int i = 0; i < n; ++i)
    locations.push_back({"n" + std::to_string(i), ""});

  std::int64_t t1 = pick(params.min_period, params.max_period);
  Period period{TimePoint::from_input_ticks(0), TimePoint::from_input_ticks(t1)};

  auto random_profile = [&]() {
    int pieces = static_cast<int>(pick(1, params.max_breakpoints));
    std::vector<std::int64_t> breaks{0};
    while (static_cast<int>(breaks.size()) < pieces) {
      std::int64_t b = pick(1, t1);
      if (std::find(breaks.begin(), breaks.end(), b) == breaks.end())
        breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<TravelTimeProfile::Piece> out;
    for (std::int64_t b : breaks)
      out.push_back({TimePoint::from_input_ticks(b),
                     Duration::from_input_ticks(
                         pick(params.min_duration, params.max_duration))});
    return TravelTimeProfile(std::move(out));
  };

  std::vector<std::uint32_t> cycle(n);
  for (int i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>(i);
  std::shuffle(cycle.begin(), cycle.end(), rng);

  std::vector<RouteSegment> segments;
  int id = 0;
  for (int i = 0; i < n; ++i) {
    std::uint32_t from = cycle[i];
    std::uint32_t to = cycle[(i + 1) % n];
    if (n == 1) break;
    segments.push_back({"e" + std::to_string(id++), from, to, random_profile(),
                        "", std::nullopt, false});
  }
  std::int64_t extra = pick(0, std::max(0, params.max_segments - n));
  for (std::int64_t i = 0; i < extra; ++i) {
    std::uint32_t from = static_cast<std::uint32_t>(pick(0, n - 1));
    std::uint32_t to = static_cast<std::uint32_t>(pick(0, n - 1));
    if (from == to) continue;
    segments.push_back({"e" + std::to_string(id++), from, to, random_profile(),
                        "", std::nullopt, false});
  }

  WaitingPolicy waiting = WaitingPolicy::NoWaiting;
  if (params.randomize_waiting && pick(0, 1) == 1)
    waiting = WaitingPolicy::WaitingAllowed;

  return Network("minute", std::move(locations), std::move(segments), period,
                 waiting);
}

// Every duration, breakpoint, and the period multiplied by k.
inline Network scale_network(const Network& net, std::int64_t k) {
  auto scale_t = [&](TimePoint t) {
    return TimePoint::from_half_ticks(t.half_ticks() * k);
  };
  auto scale_d = [&](Duration d) {
    return Duration::from_half_ticks(d.half_ticks() * k);
  };
  std::vector<RouteSegment> segments;
  for (const RouteSegment& seg : net.segments()) {
    std::vector<TravelTimeProfile::Piece> pieces;
    for (const auto& piece : seg.profile.pieces())
      pieces.push_back({scale_t(piece.from), scale_d(piece.duration)});
    segments.push_back({seg.id, seg.from, seg.to,
                        TravelTimeProfile(std::move(pieces)), seg.mode,
                        seg.capacity, seg.synthetic});
  }
  return Network(net.unit(), net.locations(), std::move(segments),
                 Period{scale_t(net.period().start), scale_t(net.period().end)},
                 net.waiting_policy(), net.regularized());
}

}  // namespace ttm::testing
