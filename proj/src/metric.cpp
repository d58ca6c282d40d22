#include "ttm/metric.hpp"

#include <algorithm>
#include <cassert>

#include "ttm/parallel.hpp"

namespace ttm {

namespace {

std::int64_t grid_tick_count(const Period& p) {
  return (p.end.half_ticks() - p.start.half_ticks()) / kGridStep + 1;
}

TimePoint grid_tick(const Period& p, std::int64_t index) {
  return TimePoint::from_half_ticks(p.start.half_ticks() + index * kGridStep);
}

void require_valid(const Network& net, const char* op) {
  ValidationReport report = validate_network(net);
  if (!report.ok)
    throw validation_error(std::string(op) + " requires a valid network",
                           std::move(report));
}

// T(origin, b, t) for every destination and every grid tick, row-major by
// (origin, tick); the aggregation loops below are pure folds over it.
std::vector<Duration> travel_time_table(const Network& net,
                                        const SearchPolicy& policy, int jobs) {
  std::size_t n = net.location_count();
  std::int64_t ticks = grid_tick_count(net.period());
  std::vector<Duration> table(static_cast<std::size_t>(n) * ticks * n,
                              Duration::infinite());
  parallel_for(static_cast<std::int64_t>(n) * ticks, jobs, [&](std::int64_t i) {
    std::uint32_t origin = static_cast<std::uint32_t>(i / ticks);
    std::int64_t tick = i % ticks;
    TimePoint t = grid_tick(net.period(), tick);
    ArrivalLabels labels = earliest_arrival(net, origin, t, policy);
    for (std::uint32_t b = 0; b < n; ++b) {
      Duration d = labels.arrivals[b].is_infinite() ? Duration::infinite()
                                                    : labels.arrivals[b] - t;
      table[(static_cast<std::size_t>(origin) * ticks + tick) * n + b] = d;
    }
  });
  return table;
}

MetricMatrix empty_matrix(const Network& net, Aggregator aggregator,
                          bool symmetrized) {
  MetricMatrix m;
  m.locations = net.locations();
  m.values.assign(net.location_count() * net.location_count(),
                  Duration::zero());
  m.aggregator = aggregator;
  m.symmetrized = symmetrized;
  m.regularized = net.regularized();
  m.period = net.period();
  m.unit = net.unit();
  return m;
}

// nearest half-tick, exact rational input
Duration rounded_mean(std::int64_t sum_half, std::int64_t count) {
  assert(count > 0);
  return Duration::from_half_ticks((2 * sum_half + count) / (2 * count));
}

}  // namespace

std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::MaxMin: return "maxmin";
    case Aggregator::MinMin: return "minmin";
    case Aggregator::IntegralUniform: return "integral";
  }
  return "?";
}

EpsilonChoice compute_epsilon(const Network& net) {
  if (net.regularized())
    throw domain_error("epsilon is chosen before regularization");
  if (!net.has_real_segments())
    throw domain_error("network has no segments to derive epsilon from");

  EpsilonChoice choice;
  Duration min_duration = Duration::infinite();
  for (const RouteSegment& seg : net.segments()) {
    if (seg.synthetic) continue;
    ++choice.derivation.segments_scanned;
    const auto& pieces = seg.profile.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      TimePoint hi = i + 1 < pieces.size() ? pieces[i + 1].from
                                           : TimePoint::infinite();
      if (pieces[i].from > net.period().end || hi <= net.period().start)
        continue;
      if (pieces[i].duration < min_duration) {
        min_duration = pieces[i].duration;
        choice.derivation.segment_id = seg.id;
        choice.derivation.piece_start = pieces[i].from;
        choice.derivation.piece_duration = pieces[i].duration;
      }
    }
  }
  if (min_duration.is_infinite())
    throw domain_error("no stored duration occurs within the period");
  choice.value = Duration::from_half_ticks(min_duration.half_ticks() / 2);
  return choice;
}

Network regularize(const Network& net, const EpsilonChoice& eps) {
  if (net.regularized()) throw domain_error("network is already regularized");
  if (eps.value <= Duration::zero())
    throw domain_error("epsilon must be positive");
  for (const RouteSegment& seg : net.segments()) {
    if (seg.synthetic) continue;
    if (seg.profile.min_duration_over(net.period()) <= eps.value)
      throw domain_error(
          "epsilon must be smaller than every stored duration over the period");
  }

  std::vector<RouteSegment> segments = net.segments();
  TimePoint start =
      net.period().end + Duration::from_half_ticks(kGridStep);
  for (std::uint32_t a = 0; a < net.location_count(); ++a) {
    for (std::uint32_t b = 0; b < net.location_count(); ++b) {
      if (a == b) continue;
      RouteSegment seg{
          "~eps:" + net.locations()[a].id + ">" + net.locations()[b].id,
          a,
          b,
          TravelTimeProfile::constant(eps.value, start),
          "",
          std::nullopt,
          true};
      if (net.find_segment(seg.id))
        throw parse_error("segment id '" + seg.id +
                          "' collides with the synthetic naming scheme");
      segments.push_back(std::move(seg));
    }
  }
  return Network(net.unit(), net.locations(), std::move(segments),
                 net.period(), net.waiting_policy(), true);
}

Duration directed_worst_best(const Network& net, std::uint32_t a,
                             std::uint32_t b, const SearchPolicy& policy) {
  if (a == b) return Duration::zero();
  Duration worst = Duration::zero();
  for (std::int64_t i = 0; i < grid_tick_count(net.period()); ++i) {
    Duration d =
        best_travel_time(net, a, b, grid_tick(net.period(), i), policy);
    worst = std::max(worst, d);
  }
  return worst;
}

MetricMatrix maxmin_metric(const Network& net, const SearchPolicy& policy,
                           int jobs) {
  require_valid(net, "maxmin_metric");
  std::size_t n = net.location_count();
  std::int64_t ticks = grid_tick_count(net.period());
  std::vector<Duration> table = travel_time_table(net, policy, jobs);

  std::vector<Duration> directed(n * n, Duration::zero());
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::int64_t tick = 0; tick < ticks; ++tick)
      for (std::uint32_t b = 0; b < n; ++b)
        directed[a * n + b] =
            std::max(directed[a * n + b],
                     table[(static_cast<std::size_t>(a) * ticks + tick) * n + b]);

  MetricMatrix m = empty_matrix(net, Aggregator::MaxMin, true);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (a != b)
        m.at(a, b) = std::max(directed[a * n + b], directed[b * n + a]);
  return m;
}

MetricMatrix maxmin_metric(const Network& net) {
  return maxmin_metric(net, SearchPolicy::for_network(net));
}

namespace {

// The rejected aggregators are statements about the boundary-free setting;
// evaluate them there regardless of the incoming policy.
SearchPolicy unbounded(SearchPolicy policy) {
  policy.boarding = BoardingRule::Unbounded;
  return policy;
}

}  // namespace

MetricMatrix minmin_aggregate(const Network& net, const SearchPolicy& policy,
                              int jobs) {
  require_valid(net, "minmin_aggregate");
  SearchPolicy p = unbounded(policy);
  std::size_t n = net.location_count();
  std::int64_t ticks = grid_tick_count(net.period());
  std::vector<Duration> table = travel_time_table(net, p, jobs);

  MetricMatrix m = empty_matrix(net, Aggregator::MinMin, false);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a == b) continue;
      Duration best = Duration::infinite();
      for (std::int64_t tick = 0; tick < ticks; ++tick)
        best = std::min(best,
                        table[(static_cast<std::size_t>(a) * ticks + tick) * n + b]);
      m.at(a, b) = best;
    }
  return m;
}

MetricMatrix minmin_aggregate(const Network& net) {
  return minmin_aggregate(net, SearchPolicy::for_network(net));
}

MetricMatrix integral_aggregate(const Network& net, const SearchPolicy& policy,
                                int jobs) {
  require_valid(net, "integral_aggregate");
  SearchPolicy p = unbounded(policy);
  std::size_t n = net.location_count();
  std::int64_t ticks = grid_tick_count(net.period());
  std::vector<Duration> table = travel_time_table(net, p, jobs);

  MetricMatrix m = empty_matrix(net, Aggregator::IntegralUniform, false);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a == b) continue;
      std::int64_t sum = 0;
      bool infinite = false;
      for (std::int64_t tick = 0; tick < ticks; ++tick) {
        Duration d = table[(static_cast<std::size_t>(a) * ticks + tick) * n + b];
        if (d.is_infinite()) {
          infinite = true;
          break;
        }
        sum += d.half_ticks();
      }
      m.at(a, b) = infinite ? Duration::infinite() : rounded_mean(sum, ticks);
    }
  return m;
}

MetricMatrix integral_aggregate(const Network& net) {
  return integral_aggregate(net, SearchPolicy::for_network(net));
}

Network construct_integral_violation() {
  using P = TravelTimeProfile::Piece;
  auto tick = [](std::int64_t t) { return TimePoint::from_input_ticks(t); };
  auto dur = [](std::int64_t d) { return Duration::from_input_ticks(d); };

  std::vector<Location> locations{{"a", ""}, {"b", ""}, {"c", ""}};

  // the monotone second leg: duration 10 + t, held constant once every
  // composed departure from within the period has passed (t1 + 10)
  std::vector<P> ramp;
  for (std::int64_t t = 0; t <= 110; ++t) ramp.push_back({tick(t), dur(10 + t)});

  std::vector<RouteSegment> segments;
  segments.push_back({"ab", 0, 1, TravelTimeProfile::constant(dur(10)), "", std::nullopt, false});
  segments.push_back({"bc", 1, 2, TravelTimeProfile(std::move(ramp)), "", std::nullopt, false});
  segments.push_back({"ba", 1, 0, TravelTimeProfile::constant(dur(10)), "", std::nullopt, false});
  segments.push_back({"cb", 2, 1, TravelTimeProfile::constant(dur(10)), "", std::nullopt, false});

  return Network("minute", std::move(locations), std::move(segments),
                 Period{tick(0), tick(100)}, WaitingPolicy::NoWaiting);
}

AxiomReport verify_metric_axioms(const MetricMatrix& m) {
  AxiomReport report;
  std::size_t n = m.size();

  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      Duration v = m.at(a, b);
      if (v < Duration::zero())
        report.non_negativity.witnesses.push_back(
            {a, b, v, Duration::zero()});
      if (a == b && !v.is_zero())
        report.identity_of_indiscernibles.witnesses.push_back(
            {a, b, v, Duration::zero()});
      if (a != b && v <= Duration::zero())
        report.identity_of_indiscernibles.witnesses.push_back(
            {a, b, v, Duration::zero()});
      if (a < b && m.at(a, b) != m.at(b, a))
        report.symmetry.witnesses.push_back({a, b, m.at(a, b), m.at(b, a)});
    }

  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        Duration lhs = m.at(a, c);
        Duration rhs = m.at(a, b) + m.at(b, c);
        if (lhs > rhs)
          report.triangle.witnesses.push_back({a, b, c, lhs, rhs});
      }

  report.non_negativity.pass = report.non_negativity.witnesses.empty();
  report.identity_of_indiscernibles.pass =
      report.identity_of_indiscernibles.witnesses.empty();
  report.symmetry.pass = report.symmetry.witnesses.empty();
  report.triangle.pass = report.triangle.witnesses.empty();
  return report;
}

}  // namespace ttm
