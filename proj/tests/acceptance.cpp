// Acceptance suite: one criterion per case, one pass/fail line each, exit
// status reflects the whole run. Expected values are the worked-example
// constants and the exhaustive/property checks behind them.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "support.hpp"
#include "ttm/analysis.hpp"
#include "ttm/engine.hpp"
#include "ttm/io.hpp"
#include "ttm/metric.hpp"

using namespace ttm;

namespace {

Duration dur(std::int64_t d) { return Duration::from_input_ticks(d); }

struct Criterion {
  int number;
  const char* title;
  bool pass = true;
  double seconds = 0.0;

  void expect(bool ok) { pass = pass && ok; }
};

int failures = 0;

template <typename Fn>
void run(int number, const char* title, double time_limit, Fn&& body) {
  Criterion criterion{number, title};
  auto start = std::chrono::steady_clock::now();
  body(criterion);
  criterion.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (criterion.seconds >= time_limit) criterion.pass = false;
  std::printf("[criterion %d] %s — %s (%.2fs, limit %.0fs)\n",
              criterion.number, criterion.pass ? "PASS" : "FAIL",
              criterion.title, criterion.seconds, time_limit);
  if (!criterion.pass) ++failures;
}

struct Trio {
  Network net;
  std::uint32_t a, b, c;
};

Trio builtin(BuiltinExample which) {
  Network net = builtin_example(which);
  std::uint32_t a = *net.find_location("a");
  std::uint32_t b = *net.find_location("b");
  std::uint32_t c = *net.find_location("c");
  return {std::move(net), a, b, c};
}

// deterministic suite shared by criteria 4 and 6
std::vector<Network> regularized_suite() {
  std::mt19937 rng(20260809);
  testing::GenParams params;
  params.max_locations = 6;
  params.max_segments = 12;
  params.max_breakpoints = 5;
  params.min_duration = 2;
  params.max_duration = 40;
  params.max_period = 50;
  std::vector<Network> nets;
  for (int i = 0; i < 200; ++i)
    nets.push_back(regularize(testing::random_network(rng, params)));
  return nets;
}

}  // namespace

int main() {
  run(1, "quick-hop example: max-min holds where min-min composes nothing",
      5.0, [](Criterion& c) {
        auto [net, a, b, cc] = builtin(BuiltinExample::MinMinCounterexample);
        SearchPolicy policy = SearchPolicy::for_network(net);

        c.expect(directed_worst_best(net, a, b, policy) == dur(60));
        c.expect(directed_worst_best(net, b, cc, policy) == dur(60));
        c.expect(directed_worst_best(net, a, cc, policy) == dur(45));

        MetricMatrix minmin = minmin_aggregate(net, policy);
        c.expect(minmin.at(a, b) == dur(10));
        c.expect(minmin.at(b, cc) == dur(10));
        c.expect(minmin.at(a, cc) == dur(45));
        AxiomReport axioms = verify_metric_axioms(minmin);
        c.expect(!axioms.triangle.pass);
        bool witnessed = false;
        for (const TriangleWitness& w : axioms.triangle.witnesses)
          witnessed |= w.a == a && w.b == b && w.c == cc;
        c.expect(witnessed);
      });

  run(2, "boundary example: eps=15 regularization restores the axioms",
      5.0, [](Criterion& c) {
        auto [net, a, b, cc] = builtin(BuiltinExample::BoundaryExample);
        SearchPolicy policy = SearchPolicy::for_network(net);

        c.expect(directed_worst_best(net, a, cc, policy) == dur(120));
        c.expect(!verify_metric_axioms(maxmin_metric(net, policy)).triangle.pass);

        EpsilonChoice eps = compute_epsilon(net);
        c.expect(eps.value == Duration::from_half_ticks(30));  // exactly 15
        Network reg = regularize(net, eps);
        MetricMatrix m = maxmin_metric(reg, SearchPolicy::for_network(reg));
        c.expect(m.at(a, cc) == dur(60));
        c.expect(m.at(a, b) == dur(30));
        c.expect(m.at(b, cc) == dur(30));
        c.expect(verify_metric_axioms(m).all_pass());
      });

  run(3, "integral aggregate: monotone second leg breaks the triangle",
      10.0, [](Criterion& c) {
        auto [net, a, b, cc] = builtin(BuiltinExample::IntegralViolation);
        MetricMatrix m = integral_aggregate(net, SearchPolicy::for_network(net));
        c.expect(m.at(a, b) == dur(10));
        c.expect(m.at(b, cc) == dur(60));
        c.expect(m.at(a, cc) == dur(80));
        c.expect(m.at(a, cc) > m.at(a, b) + m.at(b, cc));
        c.expect(!verify_metric_axioms(m).triangle.pass);
      });

  {
    std::vector<Network> suite = regularized_suite();

    run(4, "metric axioms hold on 200 random regularized networks",
        300.0, [&](Criterion& c) {
          for (const Network& net : suite) {
            MetricMatrix m = maxmin_metric(net, SearchPolicy::for_network(net));
            for (Duration v : m.values)
              if (v.is_infinite()) {
                c.expect(false);
                return;
              }
            if (!verify_metric_axioms(m).all_pass()) {
              c.expect(false);
              return;
            }
          }
        });

    run(6, "time-dependent triangle holds for every triple and departure",
        300.0, [&](Criterion& c) {
          for (const Network& net : suite) {
            SearchPolicy policy = SearchPolicy::for_network(net);
            std::size_t n = net.location_count();
            for (std::uint32_t a = 0; a < n; ++a)
              for (std::uint32_t b = 0; b < n; ++b)
                for (std::uint32_t cc = 0; cc < n; ++cc) {
                  if (a == b || b == cc || a == cc) continue;
                  for (std::int64_t h = net.period().start.half_ticks();
                       h <= net.period().end.half_ticks(); h += kGridStep) {
                    if (check_td_triangle(net, a, b, cc,
                                          TimePoint::from_half_ticks(h),
                                          policy) != TdTriangle::Holds) {
                      c.expect(false);
                      return;
                    }
                  }
                }
          }
        });
  }

  run(5, "search equals the exhaustive walk oracle on 100 random networks",
      300.0, [](Criterion& c) {
        std::mt19937 rng(97);
        testing::GenParams params;  // durations >= 6 keep walks within 8 edges
        params.max_locations = 5;
        params.max_segments = 10;
        params.max_breakpoints = 4;
        params.max_period = 40;
        for (int i = 0; i < 100; ++i) {
          Network net = testing::random_network(rng, params);
          SearchPolicy policy = SearchPolicy::for_network(net);
          for (std::uint32_t a = 0; a < net.location_count(); ++a)
            for (std::int64_t h = net.period().start.half_ticks();
                 h <= net.period().end.half_ticks(); h += kGridStep) {
              TimePoint t = TimePoint::from_half_ticks(h);
              ArrivalLabels labels = earliest_arrival(net, a, t, policy);
              for (std::uint32_t b = 0; b < net.location_count(); ++b) {
                if (a == b) continue;
                Duration engine = labels.arrivals[b].is_infinite()
                                      ? Duration::infinite()
                                      : labels.arrivals[b] - t;
                if (engine != oracle_best_travel_time(net, a, b, t, 8, policy)) {
                  c.expect(false);
                  return;
                }
              }
            }
        }
      });

  run(7, "scaling durations and period by k scales the metric by k",
      300.0, [](Criterion& c) {
        for (std::int64_t k : {2, 5}) {
          for (auto which : {BuiltinExample::MinMinCounterexample,
                             BuiltinExample::BoundaryExample}) {
            Network net = builtin_example(which);
            MetricMatrix base = maxmin_metric(regularize(net));
            MetricMatrix scaled =
                maxmin_metric(regularize(testing::scale_network(net, k)));
            for (std::size_t i = 0; i < base.size(); ++i)
              for (std::size_t j = 0; j < base.size(); ++j)
                c.expect(scaled.at(i, j) == base.at(i, j) * k);
          }
        }
      });

  run(8, "analysis sanity: stability, capacity identity, rolling axioms",
      300.0, [](Criterion& c) {
        for (auto which : {BuiltinExample::MinMinCounterexample,
                           BuiltinExample::BoundaryExample,
                           BuiltinExample::IntegralViolation}) {
          Network net = builtin_example(which);
          StabilityReport stability = stability_metric(regularize(net), 2);
          for (Duration d : stability.delta)
            c.expect(d >= Duration::zero());

          MetricMatrix baseline =
              maxmin_metric(regularize(net), SearchPolicy::for_network(net));
          c.expect(capacity_scenario(net, CapacityScenario{}) == baseline);
        }

        Network pe1 = builtin_example(BuiltinExample::MinMinCounterexample);
        RollingSpec spec{dur(360), dur(180)};
        auto series = rolling_metrics(pe1, spec, 2);
        c.expect(series.size() ==
                 static_cast<std::size_t>((1439 - 360) / 180 + 1));
        for (const auto& [end, m] : series)
          c.expect(verify_metric_axioms(m).all_pass());
      });

  std::printf("%s\n", failures == 0 ? "ACCEPTANCE: all criteria passed"
                                    : "ACCEPTANCE: FAILURES present");
  return failures == 0 ? 0 : 1;
}
