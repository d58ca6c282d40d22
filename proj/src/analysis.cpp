#include "ttm/analysis.hpp"

#include <algorithm>

#include "ttm/parallel.hpp"

namespace ttm {

namespace {

std::int64_t grid_tick_count(const Period& p) {
  return (p.end.half_ticks() - p.start.half_ticks()) / kGridStep + 1;
}

TimePoint grid_tick(const Period& p, std::int64_t index) {
  return TimePoint::from_half_ticks(p.start.half_ticks() + index * kGridStep);
}

// Bounded enumeration of no-waiting walks for the stability analysis.
// Sequences are compared by cost first, then lexicographically by edge id,
// so "the fastest walk" is unique and exclusion is well defined.
struct WalkEnumerator {
  const Network& net;
  std::uint32_t target;
  TimePoint depart;
  int budget;
  std::vector<std::uint32_t> edge_rank;  // segment index -> id rank

  std::vector<std::uint32_t> current;
  bool have_best = false;
  Duration best_cost = Duration::infinite();
  std::vector<std::uint32_t> best_seq;

  // pass 2 state
  const std::vector<std::uint32_t>* excluded_seq = nullptr;
  Duration second_cost = Duration::infinite();
  bool have_second = false;

  WalkEnumerator(const Network& n, std::uint32_t target, TimePoint depart,
                 int budget)
      : net(n), target(target), depart(depart), budget(budget) {
    std::vector<std::uint32_t> order(net.segments().size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                return net.segments()[a].id < net.segments()[b].id;
              });
    edge_rank.resize(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) edge_rank[order[r]] = r;
  }

  bool boardable(const RouteSegment& seg, TimePoint s) const {
    if (seg.synthetic)
      return s >= seg.profile.first_breakpoint();
    return s >= net.period().start && s <= net.period().end &&
           s >= seg.profile.first_breakpoint();
  }

  bool lex_less(const std::vector<std::uint32_t>& a,
                const std::vector<std::uint32_t>& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [&](std::uint32_t x, std::uint32_t y) {
          return edge_rank[x] < edge_rank[y];
        });
  }

  void find_best(std::uint32_t node, TimePoint time) {
    if (node == target) {
      Duration cost = time - depart;
      if (!have_best || cost < best_cost ||
          (cost == best_cost && lex_less(current, best_seq))) {
        have_best = true;
        best_cost = cost;
        best_seq = current;
      }
      return;  // continuations only cost more
    }
    if (static_cast<int>(current.size()) == budget) return;
    for (std::uint32_t s : net.out_segments(node)) {
      const RouteSegment& seg = net.segments()[s];
      if (!boardable(seg, time)) continue;
      TimePoint arrival = time + seg.profile.value_at(time);
      if (have_best && arrival - depart > best_cost) continue;
      current.push_back(s);
      find_best(seg.to, arrival);
      current.pop_back();
    }
  }

  // cheapest walk whose edge sequence differs from *excluded_seq; such a
  // walk may legitimately pass through the target and keep going
  void find_second(std::uint32_t node, TimePoint time) {
    Duration cost = time - depart;
    if (cost >= second_cost) return;
    if (node == target && current != *excluded_seq && !current.empty()) {
      second_cost = cost;
      have_second = true;
    }
    if (static_cast<int>(current.size()) == budget) return;
    for (std::uint32_t s : net.out_segments(node)) {
      const RouteSegment& seg = net.segments()[s];
      if (!boardable(seg, time)) continue;
      TimePoint arrival = time + seg.profile.value_at(time);
      if (arrival - depart >= second_cost) continue;
      current.push_back(s);
      find_second(seg.to, arrival);
      current.pop_back();
    }
  }
};

}  // namespace

std::vector<TimePoint> RollingSpec::evaluation_times(
    const Period& data_period) const {
  if (window_length <= Duration::zero() || stride <= Duration::zero())
    throw domain_error("window length and stride must be positive");
  if (window_length > data_period.span())
    throw domain_error("window does not fit inside the data period");
  std::vector<TimePoint> ends;
  for (TimePoint end = data_period.start + window_length;
       end <= data_period.end; end = end + stride)
    ends.push_back(end);
  return ends;
}

StabilityReport stability_metric(const Network& net, int jobs) {
  if (!net.regularized())
    throw domain_error("stability analysis requires a regularized network");

  SearchPolicy policy = SearchPolicy::for_network(net);
  policy.waiting = WaitingPolicy::NoWaiting;  // exclusion is vacuous with waiting

  StabilityReport report;
  report.baseline = maxmin_metric(net, policy, jobs);

  std::size_t n = net.location_count();
  std::int64_t ticks = grid_tick_count(net.period());
  int budget = static_cast<int>(2 * n);

  struct Cell {
    Duration excluded = Duration::infinite();
    bool flagged = false;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(n) * n * ticks);

  parallel_for(static_cast<std::int64_t>(n) * n * ticks, jobs,
               [&](std::int64_t index) {
                 std::uint32_t a = static_cast<std::uint32_t>(index / (n * ticks));
                 std::uint32_t b =
                     static_cast<std::uint32_t>((index / ticks) % n);
                 if (a == b) return;
                 TimePoint t = grid_tick(net.period(), index % ticks);
                 WalkEnumerator walks(net, b, t, budget);
                 walks.find_best(a, t);
                 Cell& cell = cells[index];
                 if (!walks.have_best) {
                   cell.flagged = true;
                   return;
                 }
                 walks.excluded_seq = &walks.best_seq;
                 walks.find_second(a, t);
                 if (!walks.have_second) {
                   cell.flagged = true;
                   return;
                 }
                 cell.excluded = walks.second_cost;
               });

  std::vector<Duration> directed(n * n, Duration::zero());
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a == b) continue;
      for (std::int64_t tick = 0; tick < ticks; ++tick) {
        std::size_t index = (static_cast<std::size_t>(a) * n + b) * ticks + tick;
        const Cell& cell = cells[index];
        if (cell.flagged)
          report.flagged.push_back({a, b, grid_tick(net.period(), tick)});
        directed[a * n + b] = std::max(directed[a * n + b], cell.excluded);
      }
    }

  report.excluded = report.baseline;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      report.excluded.at(a, b) =
          a == b ? Duration::zero()
                 : std::max(directed[a * n + b], directed[b * n + a]);

  report.delta.assign(n * n, Duration::zero());
  for (std::size_t i = 0; i < report.delta.size(); ++i)
    report.delta[i] = report.excluded.values[i] - report.baseline.values[i];
  return report;
}

MetricMatrix capacity_scenario(const Network& net,
                               const CapacityScenario& scenario, int jobs) {
  if (net.regularized())
    throw domain_error("capacity scenarios apply to unregularized networks");
  {
    ValidationReport base = validate_network(net);
    if (!base.ok)
      throw validation_error("capacity_scenario requires a valid network",
                             std::move(base));
  }

  std::vector<std::uint32_t> removed;
  for (const auto& [id, volume] : scenario.volumes) {
    auto seg = net.find_segment(id);
    if (!seg)
      throw parse_error("scenario references unknown segment '" + id + "'");
    const RouteSegment& s = net.segments()[*seg];
    if (s.capacity && volume >= *s.capacity) removed.push_back(*seg);
  }

  Network reduced = net.without_segments(removed);
  ValidationReport report = validate_network(reduced);
  if (!report.ok)
    throw existence_error(
        "removing at-capacity segments breaks the consistency requirements",
        std::move(report));

  SearchPolicy policy = SearchPolicy::for_network(reduced);
  return maxmin_metric(regularize(reduced), policy, jobs);
}

std::vector<std::pair<TimePoint, MetricMatrix>> rolling_metrics(
    const Network& net, const RollingSpec& spec, int jobs) {
  if (net.regularized())
    throw domain_error("rolling metrics apply to unregularized networks");

  std::vector<std::pair<TimePoint, MetricMatrix>> series;
  for (TimePoint end : spec.evaluation_times(net.period())) {
    TimePoint start = TimePoint::from_half_ticks(
        end.half_ticks() - spec.window_length.half_ticks());
    Period window{start, end};
    Network sub = net.with_period(window);
    SearchPolicy policy = SearchPolicy::for_network(sub);
    series.emplace_back(end, maxmin_metric(regularize(sub), policy, jobs));
  }
  return series;
}

}  // namespace ttm
