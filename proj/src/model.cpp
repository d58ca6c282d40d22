#include "ttm/model.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace ttm {

std::string format_half_ticks(std::int64_t half) {
  if (half >= kInfiniteHalfTicks) return "inf";
  if (half < 0) return "-" + format_half_ticks(-half);
  std::string out = std::to_string(half / 2);
  if (half % 2 != 0) out += ".5";
  return out;
}

TravelTimeProfile::TravelTimeProfile(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw parse_error("profile has no pieces");
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (!(pieces_[i - 1].from < pieces_[i].from))
      throw parse_error("unsorted profile");
    if (pieces_[i].duration < pieces_[i - 1].duration)
      decreasing_.push_back(pieces_[i]);
  }
}

TravelTimeProfile TravelTimeProfile::constant(Duration d, TimePoint from) {
  return TravelTimeProfile({Piece{from, d}});
}

Duration TravelTimeProfile::value_at(TimePoint t) const {
  if (t < pieces_.front().from)
    throw domain_error("departure " + to_string(t) +
                       " precedes the profile's first breakpoint " +
                       to_string(pieces_.front().from));
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](TimePoint lhs, const Piece& p) { return lhs < p.from; });
  return std::prev(it)->duration;
}

Duration TravelTimeProfile::max_duration() const {
  Duration m = pieces_.front().duration;
  for (const Piece& p : pieces_) m = std::max(m, p.duration);
  return m;
}

Duration TravelTimeProfile::min_duration_over(const Period& window) const {
  Duration m = Duration::infinite();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    TimePoint lo = pieces_[i].from;
    TimePoint hi = i + 1 < pieces_.size() ? pieces_[i + 1].from
                                          : TimePoint::infinite();
    // piece covers [lo, hi)
    if (lo > window.end || hi <= window.start) continue;
    m = std::min(m, pieces_[i].duration);
  }
  return m;
}

Duration profile_duration(const TravelTimeProfile& profile, TimePoint t) {
  return profile.value_at(t);
}

std::vector<TimePoint> fifo_check(const TravelTimeProfile& profile,
                                  const Period& grid) {
  if (grid.start < profile.first_breakpoint())
    throw domain_error("profile does not cover the grid start");
  std::vector<TimePoint> violations;
  for (std::int64_t h = grid.start.half_ticks();
       h + kGridStep <= grid.end.half_ticks(); h += kGridStep) {
    TimePoint t = TimePoint::from_half_ticks(h);
    TimePoint next = TimePoint::from_half_ticks(h + kGridStep);
    if (t + profile.value_at(t) > next + profile.value_at(next))
      violations.push_back(t);
  }
  return violations;
}

Network::Network(std::string unit, std::vector<Location> locations,
                 std::vector<RouteSegment> segments, Period period,
                 WaitingPolicy waiting, bool regularized)
    : unit_(std::move(unit)),
      locations_(std::move(locations)),
      segments_(std::move(segments)),
      period_(period),
      waiting_(waiting),
      regularized_(regularized) {
  if (locations_.empty()) throw parse_error("network has no locations");
  if (period_.end < period_.start)
    throw parse_error("period end precedes period start");
  if (period_.start < TimePoint::from_half_ticks(0))
    throw parse_error("period start is negative");

  for (std::uint32_t i = 0; i < locations_.size(); ++i) {
    if (!location_index_.emplace(locations_[i].id, i).second)
      throw parse_error("duplicate location id '" + locations_[i].id + "'");
  }
  out_.resize(locations_.size());
  max_real_duration_ = Duration::zero();
  for (std::uint32_t i = 0; i < segments_.size(); ++i) {
    const RouteSegment& seg = segments_[i];
    if (!segment_index_.emplace(seg.id, i).second)
      throw parse_error("duplicate segment id '" + seg.id + "'");
    if (seg.from >= locations_.size() || seg.to >= locations_.size())
      throw parse_error("segment '" + seg.id + "' references unknown location");
    if (seg.from == seg.to)
      throw parse_error("segment '" + seg.id +
                        "' connects a location to itself; identity routes are implicit");
    if (seg.capacity && *seg.capacity <= 0)
      throw parse_error("segment '" + seg.id + "' has non-positive capacity");
    out_[seg.from].push_back(i);
    if (!seg.synthetic) {
      has_real_ = true;
      max_real_duration_ = std::max(max_real_duration_, seg.profile.max_duration());
      if (seg.profile.first_breakpoint() <= period_.start &&
          !fifo_check(seg.profile, period_).empty())
        all_real_fifo_ = false;
    }
  }

  id_rank_.resize(locations_.size());
  std::vector<std::uint32_t> order(locations_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return locations_[a].id < locations_[b].id;
  });
  for (std::uint32_t rank = 0; rank < order.size(); ++rank)
    id_rank_[order[rank]] = rank;
}

std::optional<std::uint32_t> Network::find_location(std::string_view id) const {
  auto it = location_index_.find(std::string(id));
  if (it == location_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Network::find_segment(std::string_view id) const {
  auto it = segment_index_.find(std::string(id));
  if (it == segment_index_.end()) return std::nullopt;
  return it->second;
}

Network Network::with_period(Period p) const {
  return Network(unit_, locations_, segments_, p, waiting_, regularized_);
}

Network Network::without_segments(const std::vector<std::uint32_t>& drop) const {
  std::vector<bool> dropped(segments_.size(), false);
  for (std::uint32_t i : drop) dropped[i] = true;
  std::vector<RouteSegment> kept;
  for (std::uint32_t i = 0; i < segments_.size(); ++i)
    if (!dropped[i]) kept.push_back(segments_[i]);
  return Network(unit_, locations_, kept, period_, waiting_, regularized_);
}

std::string_view to_string(ConsistencyRule rule) {
  switch (rule) {
    case ConsistencyRule::Identity: return "Identity";
    case ConsistencyRule::Positivity: return "Positivity";
    case ConsistencyRule::Existence: return "Existence";
    case ConsistencyRule::Composition: return "Composition";
    case ConsistencyRule::Profile: return "Profile";
  }
  return "?";
}

namespace {

// Breadth-first tree over the stored (non-synthetic) segments. The tree
// walk from the origin is the existence witness: profiles are total past
// their first breakpoint, so evaluating the tree legs in order yields a
// concrete finite walk whose arrival is capped by the sum of the per-edge
// maximum durations (the greedy search bound).
struct ReachTree {
  std::vector<std::int32_t> parent_segment;  // -1 = unreached / origin
  std::vector<std::uint32_t> bfs_order;      // reached nodes, origin first
};

ReachTree real_reach_tree(const Network& net, std::uint32_t origin) {
  ReachTree tree;
  tree.parent_segment.assign(net.location_count(), -1);
  std::vector<bool> seen(net.location_count(), false);
  seen[origin] = true;
  std::deque<std::uint32_t> queue{origin};
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    tree.bfs_order.push_back(u);
    for (std::uint32_t s : net.out_segments(u)) {
      const RouteSegment& seg = net.segments()[s];
      if (seg.synthetic || seen[seg.to]) continue;
      seen[seg.to] = true;
      tree.parent_segment[seg.to] = static_cast<std::int32_t>(s);
      queue.push_back(seg.to);
    }
  }
  return tree;
}

}  // namespace

ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  report.structurally_satisfied = {ConsistencyRule::Identity,
                                   ConsistencyRule::Composition};

  std::vector<bool> synthetic_pair(net.location_count() * net.location_count(),
                                   false);
  for (const RouteSegment& seg : net.segments()) {
    for (const auto& piece : seg.profile.pieces()) {
      if (piece.duration <= Duration::zero()) {
        report.violations.push_back(
            {ConsistencyRule::Positivity,
             "segment '" + seg.id + "' has duration " +
                 to_string(piece.duration) + " from tick " +
                 to_string(piece.from)});
      }
    }
    if (seg.synthetic) {
      synthetic_pair[seg.from * net.location_count() + seg.to] = true;
      if (seg.profile.first_breakpoint() <= net.period().end)
        report.violations.push_back(
            {ConsistencyRule::Profile,
             "synthetic segment '" + seg.id + "' starts inside the period"});
    } else if (seg.profile.first_breakpoint() > net.period().start) {
      report.violations.push_back(
          {ConsistencyRule::Profile,
           "segment '" + seg.id + "' first breakpoint " +
               to_string(seg.profile.first_breakpoint()) +
               " is after the period start " + to_string(net.period().start)});
    }
  }

  if (net.regularized()) {
    for (std::uint32_t a = 0; a < net.location_count(); ++a)
      for (std::uint32_t b = 0; b < net.location_count(); ++b)
        if (a != b && !synthetic_pair[a * net.location_count() + b])
          report.violations.push_back(
              {ConsistencyRule::Existence,
               "regularized network lacks a synthetic segment from '" +
                   net.locations()[a].id + "' to '" + net.locations()[b].id +
                   "' past the period end"});
  }

  // Existence: for every ordered pair and every grid departure there must be
  // a finite walk; witnessed per tick by evaluating the breadth-first tree
  // walk (bounded by the summed per-edge maxima along the tree).
  for (std::uint32_t origin = 0; origin < net.location_count(); ++origin) {
    ReachTree tree = real_reach_tree(net, origin);
    for (std::uint32_t b = 0; b < net.location_count(); ++b) {
      if (b == origin) continue;
      if (tree.parent_segment[b] < 0) {
        report.violations.push_back(
            {ConsistencyRule::Existence,
             "no walk from '" + net.locations()[origin].id + "' to '" +
                 net.locations()[b].id + "' departing at " +
                 to_string(net.period().start)});
      }
    }
    bool all_reached = tree.bfs_order.size() == net.location_count();
    if (!all_reached) continue;
    for (std::int64_t h = net.period().start.half_ticks();
         h <= net.period().end.half_ticks(); h += kGridStep) {
      std::vector<TimePoint> arrival(net.location_count());
      arrival[origin] = TimePoint::from_half_ticks(h);
      bool tick_ok = true;
      for (std::uint32_t u : tree.bfs_order) {
        if (u == origin) continue;
        const RouteSegment& seg =
            net.segments()[static_cast<std::uint32_t>(tree.parent_segment[u])];
        TimePoint board = arrival[seg.from];
        if (board < seg.profile.first_breakpoint()) {
          // flagged above as a Profile violation; skip this origin
          tick_ok = false;
          break;
        }
        arrival[u] = board + seg.profile.value_at(board);
      }
      if (!tick_ok) break;
    }
  }

  report.ok = report.violations.empty();
  return report;
}

}  // namespace ttm
