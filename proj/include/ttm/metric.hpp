#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttm/engine.hpp"
#include "ttm/model.hpp"

namespace ttm {

enum class Aggregator { MaxMin, MinMin, IntegralUniform };

std::string_view to_string(Aggregator a);

/// Dense |M| x |M| matrix of aggregated pairwise travel times with
/// provenance flags.
struct MetricMatrix {
  std::vector<Location> locations;
  std::vector<Duration> values;  // row-major
  Aggregator aggregator = Aggregator::MaxMin;
  bool symmetrized = false;
  bool regularized = false;
  Period period;
  std::string unit;

  Duration at(std::size_t from, std::size_t to) const {
    return values[from * locations.size() + to];
  }
  Duration& at(std::size_t from, std::size_t to) {
    return values[from * locations.size() + to];
  }
  std::size_t size() const { return locations.size(); }

  friend bool operator==(const MetricMatrix&, const MetricMatrix&) = default;
};

struct PairWitness {
  std::uint32_t a = 0, b = 0;
  Duration lhs, rhs;
};

struct TriangleWitness {
  std::uint32_t a = 0, b = 0, c = 0;
  Duration lhs, rhs;  // lhs = T(a,c), rhs = T(a,b) + T(b,c)
};

/// Per-axiom verdicts with a concrete witness for every violation found.
struct AxiomReport {
  struct PairSection {
    bool pass = true;
    std::vector<PairWitness> witnesses;
  };
  struct TriangleSection {
    bool pass = true;
    std::vector<TriangleWitness> witnesses;
  };

  PairSection non_negativity;
  PairSection identity_of_indiscernibles;
  PairSection symmetry;
  TriangleSection triangle;

  bool all_pass() const {
    return non_negativity.pass && identity_of_indiscernibles.pass &&
           symmetry.pass && triangle.pass;
  }
};

/// The safe epsilon for boundary regularization: half the smallest stored
/// route duration occurring at any departure time in the period.
struct EpsilonChoice {
  Duration value;
  struct Derivation {
    std::string segment_id;   // argmin segment
    TimePoint piece_start;    // start of the piece attaining the minimum
    Duration piece_duration;  // the minimum itself
    std::size_t segments_scanned = 0;
  } derivation;
};

// throws domain_error on regularized or segment-free networks
EpsilonChoice compute_epsilon(const Network& net);

/// Eliminates the period boundary: adds, for every ordered pair (a,b) with
/// a != b, one synthetic segment of duration eps boardable only after the
/// period end. Throws domain_error when already regularized or when eps
/// does not satisfy 0 < eps < every stored duration over the period.
Network regularize(const Network& net, const EpsilonChoice& eps);

inline Network regularize(const Network& net) {
  return regularize(net, compute_epsilon(net));
}

/// Directed worst-case best travel time
/// T_U(a,b) = max over grid departures t in the period of T(a,b,t).
/// Post-boundary departures resolve to epsilon-composites and can never
/// attain the maximum, so the scan covers the period only.
Duration directed_worst_best(const Network& net, std::uint32_t a,
                             std::uint32_t b, const SearchPolicy& policy);

/// The max-min metric: values[a][b] = max(T_U(a,b), T_U(b,a)). Passes all
/// four metric axioms on every valid regularized network.
MetricMatrix maxmin_metric(const Network& net, const SearchPolicy& policy,
                           int jobs = 1);
MetricMatrix maxmin_metric(const Network& net);

/// Rejected aggregator: minimum over departure times, per direction. Not a
/// metric in general; evaluated in the boundary-free setting (synthetic
/// segments ignored, profiles available wherever defined).
MetricMatrix minmin_aggregate(const Network& net, const SearchPolicy& policy,
                              int jobs = 1);
MetricMatrix minmin_aggregate(const Network& net);

/// Rejected aggregator: uniform-weight mean over grid departures, per
/// direction, exact rational mean reported to the half-tick. Same
/// boundary-free evaluation as minmin_aggregate.
MetricMatrix integral_aggregate(const Network& net, const SearchPolicy& policy,
                                int jobs = 1);
MetricMatrix integral_aggregate(const Network& net);

/// Built-in three-point network on which the integral aggregate provably
/// violates the triangle inequality (monotonically increasing second leg).
Network construct_integral_violation();

/// Exhaustive check of the four metric axioms over all pairs and triples.
AxiomReport verify_metric_axioms(const MetricMatrix& m);

}  // namespace ttm
