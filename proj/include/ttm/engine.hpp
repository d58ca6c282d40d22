#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ttm/model.hpp"

namespace ttm {

enum class Algorithm { Auto, LabelSetting, TimeExpanded, BruteForce };

/// Which departure times may board a stored segment.
///
/// PeriodRestricted is the route-set model behind the metric: real segments
/// are boardable only within the period, synthetic epsilon-segments only
/// after it. Unbounded treats every real profile as available wherever it
/// is defined and ignores synthetic segments; the rejected aggregators are
/// evaluated in this boundary-free setting.
enum class BoardingRule { PeriodRestricted, Unbounded };

struct SearchPolicy {
  WaitingPolicy waiting = WaitingPolicy::NoWaiting;
  Algorithm algorithm = Algorithm::Auto;
  int max_walk_edges = 8;  // brute-force / oracle budget
  BoardingRule boarding = BoardingRule::PeriodRestricted;

  static SearchPolicy for_network(const Network& net) {
    SearchPolicy p;
    p.waiting = net.waiting_policy();
    return p;
  }
};

struct WalkStep {
  std::uint32_t segment;  // segment index
  TimePoint board;
  TimePoint arrival;
};

/// Earliest arrivals from one origin and departure time at every location,
/// with a reconstructed walk per reachable destination.
struct ArrivalLabels {
  std::uint32_t origin = 0;
  TimePoint departure;
  std::vector<TimePoint> arrivals;          // +inf when unreachable
  std::vector<std::vector<WalkStep>> walks; // empty for origin / unreachable

  // last leg into loc: (segment index, board time)
  std::optional<std::pair<std::uint32_t, TimePoint>> predecessor(
      std::uint32_t loc) const {
    if (loc >= walks.size() || walks[loc].empty()) return std::nullopt;
    const WalkStep& last = walks[loc].back();
    return std::make_pair(last.segment, last.board);
  }
};

/// Earliest arrival at every location for a departure from origin at t.
/// Arrivals satisfy arrivals[b] = t + T(origin, b, t) where the route set
/// is every finite walk departing at t, with waiting inserted between legs
/// iff the policy allows it.
ArrivalLabels earliest_arrival(const Network& net, std::uint32_t origin,
                               TimePoint t, const SearchPolicy& policy);

/// Best travel time T(a, b, t); zero iff a == b, +inf when no admissible
/// walk exists (possible only before regularization, near the boundary).
Duration best_travel_time(const Network& net, std::uint32_t a, std::uint32_t b,
                          TimePoint t, const SearchPolicy& policy);

/// Independent check of best_travel_time: exhaustive enumeration of all
/// walks of at most max_walk_edges edges (with every candidate waiting time
/// when allowed). Returns +inf when no walk fits the edge budget.
Duration oracle_best_travel_time(const Network& net, std::uint32_t a,
                                 std::uint32_t b, TimePoint t,
                                 int max_walk_edges,
                                 const SearchPolicy& policy);

enum class TdTriangle { Holds, Violated, PremiseViolated };

/// Time-dependent triangle inequality
/// T(a,c,t) <= T(a,b,t) + T(b,c, t + T(a,b,t)).
/// PremiseViolated when the second departure falls outside the domain of an
/// unregularized network.
TdTriangle check_td_triangle(const Network& net, std::uint32_t a,
                             std::uint32_t b, std::uint32_t c, TimePoint t,
                             const SearchPolicy& policy);

}  // namespace ttm
