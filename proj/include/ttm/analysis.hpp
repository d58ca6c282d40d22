#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttm/metric.hpp"

namespace ttm {

/// Assumed existing traffic per segment; segments at capacity are denied
/// the marginal traveler.
struct CapacityScenario {
  std::string name;
  std::map<std::string, std::int64_t> volumes;  // segment id -> volume
};

/// Sliding window over the data period producing one metric per window.
struct RollingSpec {
  Duration window_length;
  Duration stride;

  // window end ticks: period.start + W, then every stride until period.end;
  // throws domain_error when the window does not fit the period
  std::vector<TimePoint> evaluation_times(const Period& data_period) const;
};

/// Baseline metric vs the metric with the single fastest walk per
/// (origin, destination, departure) excluded.
struct StabilityReport {
  MetricMatrix baseline;
  MetricMatrix excluded;
  std::vector<Duration> delta;  // row-major, excluded - baseline, >= 0

  struct FlaggedCell {
    std::uint32_t from = 0, to = 0;
    TimePoint depart;
  };
  // cells where exclusion emptied the bounded candidate set
  std::vector<FlaggedCell> flagged;

  Duration delta_at(std::size_t from, std::size_t to) const {
    return delta[from * baseline.size() + to];
  }
};

/// Recomputes every T(a,b,t) over walks excluding the single fastest
/// edge-walk (ties broken lexicographically by edge-id sequence), then
/// aggregates as the max-min metric. Waiting is disabled; the walk budget
/// is 2|M| edges. Requires a regularized network.
StabilityReport stability_metric(const Network& net, int jobs = 1);

/// Removes every segment whose assumed volume reaches its capacity,
/// revalidates, regularizes the reduced network and returns its max-min
/// metric. Throws existence_error when the removal breaks reachability.
MetricMatrix capacity_scenario(const Network& net,
                               const CapacityScenario& scenario, int jobs = 1);

/// One max-min metric per rolling window, each with its own epsilon and
/// regularization relative to that window. The network must not already be
/// regularized.
std::vector<std::pair<TimePoint, MetricMatrix>> rolling_metrics(
    const Network& net, const RollingSpec& spec, int jobs = 1);

}  // namespace ttm
