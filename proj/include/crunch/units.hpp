#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>

namespace crunch {

/// Bandwidth in thousandths of a Gbps, stored as an integer so that
/// capacity bookkeeping is exact: sums, differences and comparisons of
/// allocated bandwidths never accumulate rounding error.
class Bandwidth {
 public:
  constexpr Bandwidth() = default;

  static constexpr Bandwidth zero() { return Bandwidth{0}; }

  static constexpr Bandwidth from_milli(std::int64_t milli) {
    return Bandwidth{milli};
  }

  static Bandwidth from_gbps(double gbps) {
    return Bandwidth{static_cast<std::int64_t>(std::llround(gbps * 1000.0))};
  }

  constexpr std::int64_t milli() const { return milli_; }
  constexpr double gbps() const { return static_cast<double>(milli_) / 1000.0; }

  constexpr bool is_zero() const { return milli_ == 0; }
  constexpr bool positive() const { return milli_ > 0; }

  friend constexpr Bandwidth operator+(Bandwidth a, Bandwidth b) {
    return Bandwidth{a.milli_ + b.milli_};
  }
  friend constexpr Bandwidth operator-(Bandwidth a, Bandwidth b) {
    return Bandwidth{a.milli_ - b.milli_};
  }
  Bandwidth& operator+=(Bandwidth o) {
    milli_ += o.milli_;
    return *this;
  }
  Bandwidth& operator-=(Bandwidth o) {
    milli_ -= o.milli_;
    return *this;
  }
  friend constexpr auto operator<=>(Bandwidth, Bandwidth) = default;

  friend std::ostream& operator<<(std::ostream& os, Bandwidth b) {
    return os << b.gbps();
  }

 private:
  explicit constexpr Bandwidth(std::int64_t milli) : milli_(milli) {}
  std::int64_t milli_ = 0;
};

constexpr Bandwidth min(Bandwidth a, Bandwidth b) { return a < b ? a : b; }
constexpr Bandwidth max(Bandwidth a, Bandwidth b) { return a < b ? b : a; }

/// Rounds a fractional Gbps amount up to the bandwidth grid, used when a
/// continuous solver result has to be turned into an executable throttle
/// amount (rounding up keeps the freed capacity sufficient).
inline Bandwidth ceil_to_grid(double gbps) {
  return Bandwidth::from_milli(
      static_cast<std::int64_t>(std::ceil(gbps * 1000.0 - 1e-9)));
}

}  // namespace crunch
