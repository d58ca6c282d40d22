#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace ttm {

// All times and durations are stored as integer half-ticks: input tick
// values are doubled on load so that half-tick quantities (notably the
// boundary-regularization epsilon, half of the smallest duration) remain
// exact integers. Rendering divides back, printing halves as "x.5".

inline constexpr std::int64_t kInfiniteHalfTicks =
    std::numeric_limits<std::int64_t>::max() / 4;

// one input tick
inline constexpr std::int64_t kGridStep = 2;

class Duration {
 public:
  constexpr Duration() = default;

  static constexpr Duration from_input_ticks(std::int64_t ticks) {
    return Duration(ticks * 2);
  }
  static constexpr Duration from_half_ticks(std::int64_t half) {
    return Duration(half);
  }
  static constexpr Duration infinite() { return Duration(kInfiniteHalfTicks); }
  static constexpr Duration zero() { return Duration(0); }

  constexpr std::int64_t half_ticks() const { return half_; }
  constexpr bool is_infinite() const { return half_ >= kInfiniteHalfTicks; }
  constexpr bool is_zero() const { return half_ == 0; }

  friend constexpr bool operator==(Duration, Duration) = default;
  friend constexpr auto operator<=>(Duration a, Duration b) {
    return a.half_ <=> b.half_;
  }

  friend constexpr Duration operator+(Duration a, Duration b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return Duration(a.half_ + b.half_);
  }
  friend constexpr Duration operator-(Duration a, Duration b) {
    if (a.is_infinite()) return infinite();
    return Duration(a.half_ - b.half_);
  }
  friend constexpr Duration operator*(Duration a, std::int64_t k) {
    if (a.is_infinite()) return infinite();
    return Duration(a.half_ * k);
  }

 private:
  constexpr explicit Duration(std::int64_t half) : half_(half) {}
  std::int64_t half_ = 0;
};

class TimePoint {
 public:
  constexpr TimePoint() = default;

  static constexpr TimePoint from_input_ticks(std::int64_t ticks) {
    return TimePoint(ticks * 2);
  }
  static constexpr TimePoint from_half_ticks(std::int64_t half) {
    return TimePoint(half);
  }
  static constexpr TimePoint infinite() {
    return TimePoint(kInfiniteHalfTicks);
  }

  constexpr std::int64_t half_ticks() const { return half_; }
  constexpr bool is_infinite() const { return half_ >= kInfiniteHalfTicks; }
  constexpr bool on_grid() const { return half_ % kGridStep == 0; }

  friend constexpr bool operator==(TimePoint, TimePoint) = default;
  friend constexpr auto operator<=>(TimePoint a, TimePoint b) {
    return a.half_ <=> b.half_;
  }

  friend constexpr TimePoint operator+(TimePoint t, Duration d) {
    if (t.is_infinite() || d.is_infinite()) return infinite();
    return TimePoint(t.half_ + d.half_ticks());
  }
  friend constexpr Duration operator-(TimePoint a, TimePoint b) {
    if (a.is_infinite()) return Duration::infinite();
    return Duration::from_half_ticks(a.half_ - b.half_);
  }

 private:
  constexpr explicit TimePoint(std::int64_t half) : half_(half) {}
  std::int64_t half_ = 0;
};

struct Period {
  TimePoint start;
  TimePoint end;

  constexpr bool contains(TimePoint t) const { return start <= t && t <= end; }
  constexpr Duration span() const { return end - start; }

  friend constexpr bool operator==(const Period&, const Period&) = default;
};

// "7", "3.5" or "inf"; input-tick units.
std::string format_half_ticks(std::int64_t half);

inline std::string to_string(Duration d) {
  return format_half_ticks(d.half_ticks());
}
inline std::string to_string(TimePoint t) {
  return format_half_ticks(t.half_ticks());
}

}  // namespace ttm
