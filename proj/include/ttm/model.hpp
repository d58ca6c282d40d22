#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ttm/errors.hpp"
#include "ttm/time.hpp"

namespace ttm {

struct Location {
  std::string id;
  std::string name;  // optional display name, empty when unset

  friend bool operator==(const Location&, const Location&) = default;
};

/// Departure-time-dependent duration of one route segment, piecewise
/// constant: each piece applies from its breakpoint up to (exclusive) the
/// next one; the last piece extends to +infinity.
class TravelTimeProfile {
 public:
  struct Piece {
    TimePoint from;
    Duration duration;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  // throws parse_error when empty or breakpoints are not strictly increasing
  explicit TravelTimeProfile(std::vector<Piece> pieces);

  static TravelTimeProfile constant(Duration d,
                                    TimePoint from = TimePoint::from_half_ticks(0));

  const std::vector<Piece>& pieces() const { return pieces_; }
  TimePoint first_breakpoint() const { return pieces_.front().from; }

  // duration of the piece containing t; throws domain_error for t before
  // the first breakpoint
  Duration value_at(TimePoint t) const;

  Duration max_duration() const;
  // minimum duration over pieces that intersect [window.start, window.end]
  Duration min_duration_over(const Period& window) const;

  // breakpoints where the duration strictly drops, in increasing order
  const std::vector<Piece>& decreasing_breakpoints() const {
    return decreasing_;
  }

  friend bool operator==(const TravelTimeProfile& a,
                         const TravelTimeProfile& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  std::vector<Piece> pieces_;
  std::vector<Piece> decreasing_;
};

struct RouteSegment {
  std::string id;
  std::uint32_t from = 0;  // location index
  std::uint32_t to = 0;
  TravelTimeProfile profile;
  std::string mode;  // optional tag, empty when unset
  std::optional<std::int64_t> capacity;
  bool synthetic = false;  // true only for regularization epsilon-routes

  friend bool operator==(const RouteSegment&, const RouteSegment&) = default;
};

enum class WaitingPolicy { WaitingAllowed, NoWaiting };

/// Immutable set of locations and time-dependent route segments over an
/// analysis period. Identity routes are implicit and never stored; waiting
/// routes are the network-level policy flag.
class Network {
 public:
  Network(std::string unit, std::vector<Location> locations,
          std::vector<RouteSegment> segments, Period period,
          WaitingPolicy waiting, bool regularized = false);

  const std::string& unit() const { return unit_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<RouteSegment>& segments() const { return segments_; }
  const Period& period() const { return period_; }
  WaitingPolicy waiting_policy() const { return waiting_; }
  bool regularized() const { return regularized_; }

  std::size_t location_count() const { return locations_.size(); }

  std::optional<std::uint32_t> find_location(std::string_view id) const;
  std::optional<std::uint32_t> find_segment(std::string_view id) const;

  const std::vector<std::uint32_t>& out_segments(std::uint32_t loc) const {
    return out_[loc];
  }

  // rank of each location id in lexicographic order; deterministic tie-break
  const std::vector<std::uint32_t>& id_rank() const { return id_rank_; }

  Duration max_real_duration() const { return max_real_duration_; }
  bool has_real_segments() const { return has_real_; }
  // every non-synthetic profile has a non-decreasing arrival function on
  // the period grid
  bool all_real_profiles_fifo() const { return all_real_fifo_; }

  Network with_period(Period p) const;
  Network without_segments(const std::vector<std::uint32_t>& drop) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.unit_ == b.unit_ && a.locations_ == b.locations_ &&
           a.segments_ == b.segments_ && a.period_ == b.period_ &&
           a.waiting_ == b.waiting_ && a.regularized_ == b.regularized_;
  }

 private:
  std::string unit_;
  std::vector<Location> locations_;
  std::vector<RouteSegment> segments_;
  Period period_;
  WaitingPolicy waiting_;
  bool regularized_;

  std::vector<std::vector<std::uint32_t>> out_;
  std::unordered_map<std::string, std::uint32_t> location_index_;
  std::unordered_map<std::string, std::uint32_t> segment_index_;
  std::vector<std::uint32_t> id_rank_;
  Duration max_real_duration_;
  bool has_real_ = false;
  bool all_real_fifo_ = true;
};

enum class ConsistencyRule { Identity, Positivity, Existence, Composition, Profile };

std::string_view to_string(ConsistencyRule rule);

struct RuleViolation {
  ConsistencyRule rule;
  std::string witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<RuleViolation> violations;
  // requirements that hold by construction of the model
  std::vector<ConsistencyRule> structurally_satisfied;
};

// A network failed validate_network where a valid one was required.
class validation_error : public std::runtime_error {
 public:
  validation_error(const std::string& what, ValidationReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  ValidationReport report;
};

// Removing segments broke the existence requirement.
class existence_error : public std::runtime_error {
 public:
  existence_error(const std::string& what, ValidationReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  ValidationReport report;
};

/// Piece duration at departure time t (the function behind every stored
/// route's travel time).
Duration profile_duration(const TravelTimeProfile& profile, TimePoint t);

/// Grid ticks t in [grid.start, grid.end) where t + tau(t) > (t+1) + tau(t+1),
/// i.e. where the arrival function decreases. Empty result means the profile
/// is FIFO on the grid.
std::vector<TimePoint> fifo_check(const TravelTimeProfile& profile,
                                  const Period& grid);

/// Checks Positivity, profile well-formedness and per-tick Existence
/// (reachability of every ordered pair from every grid departure, witnessed
/// by a concrete bounded walk). Identity and Composition hold by
/// construction and are reported as structurally satisfied.
ValidationReport validate_network(const Network& net);

}  // namespace ttm
