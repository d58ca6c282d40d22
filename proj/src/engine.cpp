#include "ttm/engine.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <unordered_set>

namespace ttm {

namespace {

struct BoardWindow {
  TimePoint lo;
  TimePoint hi;  // inclusive; +inf for synthetic segments
  bool empty() const { return hi < lo; }
};

BoardWindow board_window(const RouteSegment& seg, const Network& net,
                         BoardingRule rule) {
  if (seg.synthetic) {
    // epsilon-routes exist only for departures after the period end; the
    // boundary-free evaluation ignores them entirely
    if (rule == BoardingRule::Unbounded)
      return {TimePoint::infinite(), TimePoint::from_half_ticks(0)};
    return {seg.profile.first_breakpoint(), TimePoint::infinite()};
  }
  if (rule == BoardingRule::Unbounded)
    return {seg.profile.first_breakpoint(), TimePoint::infinite()};
  return {std::max(net.period().start, seg.profile.first_breakpoint()),
          net.period().end};
}

struct Boarding {
  bool ok = false;
  TimePoint board;
  TimePoint arrival;
};

// Best admissible boarding of seg at or after s. With waiting the optimal
// board time is s itself or a breakpoint where the duration drops.
Boarding best_boarding(const RouteSegment& seg, TimePoint s,
                       const BoardWindow& window, WaitingPolicy waiting) {
  if (window.empty()) return {};
  if (waiting == WaitingPolicy::NoWaiting) {
    if (s < window.lo || s > window.hi) return {};
    return {true, s, s + seg.profile.value_at(s)};
  }
  TimePoint first = std::max(s, window.lo);
  if (first > window.hi) return {};
  Boarding best{true, first, first + seg.profile.value_at(first)};
  for (const auto& piece : seg.profile.decreasing_breakpoints()) {
    if (piece.from <= first || piece.from > window.hi) continue;
    TimePoint arrival = piece.from + piece.duration;
    if (arrival < best.arrival) best = {true, piece.from, arrival};
  }
  return best;
}

Algorithm resolve_algorithm(const Network& net, const SearchPolicy& policy) {
  if (policy.algorithm != Algorithm::Auto) return policy.algorithm;
  if (policy.waiting == WaitingPolicy::WaitingAllowed)
    return Algorithm::LabelSetting;
  // Without waiting, label setting needs non-decreasing arrival functions.
  // Synthetic segments jump from unavailable to epsilon at the boundary, so
  // a regularized network under the period-restricted rule is non-FIFO even
  // when every stored profile passes fifo_check.
  if (policy.boarding == BoardingRule::PeriodRestricted && net.regularized())
    return Algorithm::TimeExpanded;
  return net.all_real_profiles_fifo() ? Algorithm::LabelSetting
                                      : Algorithm::TimeExpanded;
}

void check_departure(const Network& net, TimePoint t,
                     const SearchPolicy& policy) {
  if (t < net.period().start)
    throw domain_error("departure " + to_string(t) +
                       " precedes the period start");
  if (policy.boarding == BoardingRule::PeriodRestricted && !net.regularized() &&
      t > net.period().end)
    throw domain_error("departure " + to_string(t) +
                       " is after the period end of an unregularized network");
}

ArrivalLabels label_setting(const Network& net, std::uint32_t origin,
                            TimePoint t, const SearchPolicy& policy) {
  std::size_t n = net.location_count();
  ArrivalLabels labels;
  labels.origin = origin;
  labels.departure = t;
  labels.arrivals.assign(n, TimePoint::infinite());
  labels.walks.resize(n);
  labels.arrivals[origin] = t;

  struct Pred {
    std::int32_t segment = -1;
    TimePoint board;
  };
  std::vector<Pred> pred(n);
  std::vector<bool> settled(n, false);

  using Entry = std::tuple<std::int64_t, std::uint32_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  queue.emplace(t.half_ticks(), net.id_rank()[origin], origin);

  TimePoint last_settled = t;
  while (!queue.empty()) {
    auto [h, rank, u] = queue.top();
    queue.pop();
    if (settled[u] || TimePoint::from_half_ticks(h) != labels.arrivals[u])
      continue;
    settled[u] = true;
    assert(labels.arrivals[u] >= last_settled);
    last_settled = labels.arrivals[u];
    for (std::uint32_t s : net.out_segments(u)) {
      const RouteSegment& seg = net.segments()[s];
      Boarding b = best_boarding(seg, labels.arrivals[u],
                                 board_window(seg, net, policy.boarding),
                                 policy.waiting);
      if (!b.ok || b.arrival >= labels.arrivals[seg.to]) continue;
      labels.arrivals[seg.to] = b.arrival;
      pred[seg.to] = {static_cast<std::int32_t>(s), b.board};
      queue.emplace(b.arrival.half_ticks(), net.id_rank()[seg.to], seg.to);
    }
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    if (v == origin || labels.arrivals[v].is_infinite()) continue;
    std::vector<WalkStep> walk;
    std::uint32_t cur = v;
    while (cur != origin) {
      const Pred& p = pred[cur];
      const RouteSegment& seg = net.segments()[static_cast<std::uint32_t>(p.segment)];
      walk.push_back({static_cast<std::uint32_t>(p.segment), p.board,
                      labels.arrivals[cur]});
      cur = seg.from;
    }
    std::reverse(walk.begin(), walk.end());
    labels.walks[v] = std::move(walk);
  }
  return labels;
}

// Exact search for non-FIFO, no-waiting queries: every reachable
// (location, time) state is expanded once, in time order, so the first pop
// of a location is its earliest arrival even when arriving later somewhere
// enables arriving earlier downstream.
ArrivalLabels time_expanded(const Network& net, std::uint32_t origin,
                            TimePoint t, const SearchPolicy& policy) {
  std::size_t n = net.location_count();
  ArrivalLabels labels;
  labels.origin = origin;
  labels.departure = t;
  labels.arrivals.assign(n, TimePoint::infinite());
  labels.walks.resize(n);

  // Any reachable location is reachable by the breadth-first tree walk
  // (possibly rerouted through one epsilon-hop past the boundary), which
  // bounds the earliest arrivals and caps the state space.
  Duration tree_bound = Duration::zero();
  {
    std::vector<bool> seen(n, false);
    seen[origin] = true;
    std::vector<std::uint32_t> queue{origin};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (std::uint32_t s : net.out_segments(queue[i])) {
        const RouteSegment& seg = net.segments()[s];
        if (seg.synthetic || seen[seg.to]) continue;
        seen[seg.to] = true;
        tree_bound = tree_bound + seg.profile.max_duration();
        queue.push_back(seg.to);
      }
    }
  }
  // Under the period-restricted rule the tree walk can be blocked at the
  // boundary while a longer detour still fits: every real boarding happens
  // by the period end, so arrivals are also capped by end + max duration
  // (plus one epsilon hop on regularized networks).
  TimePoint horizon = t + tree_bound;
  if (policy.boarding == BoardingRule::PeriodRestricted) {
    TimePoint cap = net.period().end + net.max_real_duration() +
                    Duration::from_half_ticks(2 * kGridStep);
    if (net.regularized())
      for (const RouteSegment& seg : net.segments())
        if (seg.synthetic) {
          cap = cap + seg.profile.max_duration();
          break;
        }
    horizon = std::max(horizon, cap);
  }

  struct State {
    std::uint32_t node;
    TimePoint time;
    std::int32_t parent;
    std::uint32_t segment;
    TimePoint board;  // of the segment into this state
  };
  std::vector<State> states;
  std::vector<std::unordered_set<std::int64_t>> visited(n);
  std::vector<std::int32_t> first_state(n, -1);

  using Entry = std::tuple<std::int64_t, std::uint32_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  states.push_back({origin, t, -1, 0, t});
  visited[origin].insert(t.half_ticks());
  queue.emplace(t.half_ticks(), net.id_rank()[origin], 0u);

  std::size_t reached = 0;
  while (!queue.empty() && reached < n) {
    auto [h, rank, idx] = queue.top();
    queue.pop();
    const State state = states[idx];
    if (first_state[state.node] < 0) {
      first_state[state.node] = static_cast<std::int32_t>(idx);
      labels.arrivals[state.node] = state.time;
      ++reached;
    }
    for (std::uint32_t s : net.out_segments(state.node)) {
      const RouteSegment& seg = net.segments()[s];
      // with waiting the earliest boarding dominates every later one (any
      // later departure can be replicated by waiting at the target), so
      // one successor state per edge remains exact
      Boarding b = best_boarding(seg, state.time,
                                 board_window(seg, net, policy.boarding),
                                 policy.waiting);
      if (!b.ok || b.arrival > horizon) continue;
      if (!visited[seg.to].insert(b.arrival.half_ticks()).second) continue;
      states.push_back(
          {seg.to, b.arrival, static_cast<std::int32_t>(idx), s, b.board});
      queue.emplace(b.arrival.half_ticks(), net.id_rank()[seg.to],
                    static_cast<std::uint32_t>(states.size() - 1));
    }
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    if (v == origin || first_state[v] < 0) continue;
    std::vector<WalkStep> walk;
    std::int32_t cur = first_state[v];
    while (cur >= 0 && states[cur].parent >= 0) {
      const State& st = states[cur];
      walk.push_back({st.segment, st.board, st.time});
      cur = st.parent;
    }
    std::reverse(walk.begin(), walk.end());
    labels.walks[v] = std::move(walk);
  }
  return labels;
}

// Independent walk enumeration used by the BruteForce algorithm and the
// oracle. Boarding rules restated from the model rather than shared with
// the search code.
struct OracleRun {
  const Network& net;
  std::uint32_t target;
  TimePoint depart;
  WaitingPolicy waiting;
  BoardingRule boarding;
  Duration best = Duration::infinite();

  void candidate_boards(const RouteSegment& seg, TimePoint s,
                        std::vector<TimePoint>& out) const {
    out.clear();
    TimePoint lo;
    TimePoint hi;
    if (seg.synthetic) {
      if (boarding == BoardingRule::Unbounded) return;
      lo = seg.profile.first_breakpoint();
      hi = TimePoint::infinite();
    } else if (boarding == BoardingRule::Unbounded) {
      lo = seg.profile.first_breakpoint();
      hi = TimePoint::infinite();
    } else {
      lo = net.period().start;
      hi = net.period().end;
      if (seg.profile.first_breakpoint() > lo) lo = seg.profile.first_breakpoint();
    }
    if (waiting == WaitingPolicy::NoWaiting) {
      if (s >= lo && s <= hi) out.push_back(s);
      return;
    }
    TimePoint first = std::max(s, lo);
    if (first > hi) return;
    out.push_back(first);
    // every later breakpoint, not just the duration-decreasing ones
    for (const auto& piece : seg.profile.pieces())
      if (piece.from > first && piece.from <= hi) out.push_back(piece.from);
  }

  void run(std::uint32_t node, TimePoint time, int edges_left) {
    if (node == target) {
      best = std::min(best, time - depart);
      return;
    }
    if (edges_left == 0) return;
    std::vector<TimePoint> boards;
    for (std::uint32_t s : net.out_segments(node)) {
      const RouteSegment& seg = net.segments()[s];
      candidate_boards(seg, time, boards);
      for (TimePoint board : boards) {
        TimePoint arrival = board + seg.profile.value_at(board);
        if (arrival - depart >= best) continue;
        run(seg.to, arrival, edges_left - 1);
      }
    }
  }
};

}  // namespace

ArrivalLabels earliest_arrival(const Network& net, std::uint32_t origin,
                               TimePoint t, const SearchPolicy& policy) {
  if (origin >= net.location_count())
    throw domain_error("origin index out of range");
  check_departure(net, t, policy);
  switch (resolve_algorithm(net, policy)) {
    case Algorithm::LabelSetting:
      return label_setting(net, origin, t, policy);
    case Algorithm::TimeExpanded:
      return time_expanded(net, origin, t, policy);
    case Algorithm::BruteForce: {
      ArrivalLabels labels;
      labels.origin = origin;
      labels.departure = t;
      labels.arrivals.assign(net.location_count(), TimePoint::infinite());
      labels.walks.resize(net.location_count());
      labels.arrivals[origin] = t;
      for (std::uint32_t b = 0; b < net.location_count(); ++b) {
        if (b == origin) continue;
        Duration d =
            oracle_best_travel_time(net, origin, b, t, policy.max_walk_edges, policy);
        labels.arrivals[b] = d.is_infinite() ? TimePoint::infinite() : t + d;
      }
      return labels;
    }
    case Algorithm::Auto: break;  // unreachable
  }
  throw domain_error("unresolved search algorithm");
}

Duration best_travel_time(const Network& net, std::uint32_t a, std::uint32_t b,
                          TimePoint t, const SearchPolicy& policy) {
  if (b >= net.location_count())
    throw domain_error("destination index out of range");
  if (a == b) {
    check_departure(net, t, policy);
    return Duration::zero();
  }
  ArrivalLabels labels = earliest_arrival(net, a, t, policy);
  if (labels.arrivals[b].is_infinite()) return Duration::infinite();
  return labels.arrivals[b] - t;
}

Duration oracle_best_travel_time(const Network& net, std::uint32_t a,
                                 std::uint32_t b, TimePoint t,
                                 int max_walk_edges,
                                 const SearchPolicy& policy) {
  if (a >= net.location_count() || b >= net.location_count())
    throw domain_error("location index out of range");
  if (a == b) return Duration::zero();
  OracleRun oracle{net, b, t, policy.waiting, policy.boarding};
  oracle.run(a, t, max_walk_edges);
  return oracle.best;
}

TdTriangle check_td_triangle(const Network& net, std::uint32_t a,
                             std::uint32_t b, std::uint32_t c, TimePoint t,
                             const SearchPolicy& policy) {
  Duration ab = best_travel_time(net, a, b, t, policy);
  if (ab.is_infinite()) return TdTriangle::PremiseViolated;
  TimePoint second = t + ab;
  if (policy.boarding == BoardingRule::PeriodRestricted && !net.regularized() &&
      second > net.period().end)
    return TdTriangle::PremiseViolated;
  Duration bc = best_travel_time(net, b, c, second, policy);
  if (bc.is_infinite()) return TdTriangle::PremiseViolated;
  Duration ac = best_travel_time(net, a, c, t, policy);
  return ac <= ab + bc ? TdTriangle::Holds : TdTriangle::Violated;
}

}  // namespace ttm
