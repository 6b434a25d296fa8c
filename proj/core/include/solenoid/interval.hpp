#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace solenoid {

// Closed interval [lo, hi] with the handful of operations the enclosure code
// needs. Endpoints are plain doubles; no directed rounding.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr explicit Interval(double v) : lo(v), hi(v) {}
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  constexpr double width() const { return hi - lo; }
  constexpr double mid() const { return 0.5 * (lo + hi); }
  constexpr bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator+(Interval a, double b) { return {a.lo + b, a.hi + b}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }

inline Interval operator*(Interval a, Interval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline Interval operator*(double s, Interval a) {
  return s >= 0.0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

inline Interval square(Interval a) {
  if (a.lo >= 0.0) return {a.lo * a.lo, a.hi * a.hi};
  if (a.hi <= 0.0) return {a.hi * a.hi, a.lo * a.lo};
  return {0.0, std::max(a.lo * a.lo, a.hi * a.hi)};
}

inline Interval intersect(Interval a, Interval b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline Interval hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Exact range of sin over [lo, hi]: endpoints plus any interior extrema.
inline Interval sin(Interval a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a.width() >= two_pi) return {-1.0, 1.0};
  double lo = std::min(std::sin(a.lo), std::sin(a.hi));
  double hi = std::max(std::sin(a.lo), std::sin(a.hi));
  // Extrema sit at pi/2 + k*pi; test the ones inside [a.lo, a.hi].
  const double first = std::ceil((a.lo - std::numbers::pi / 2) / std::numbers::pi);
  for (double k = first; std::numbers::pi / 2 + k * std::numbers::pi <= a.hi; k += 1.0) {
    const bool is_max = std::fmod(std::abs(k), 2.0) == 0.0;
    if (is_max) hi = 1.0; else lo = -1.0;
  }
  return {lo, hi};
}

inline Interval cos(Interval a) {
  return sin(Interval{a.lo + std::numbers::pi / 2, a.hi + std::numbers::pi / 2});
}

// Requires a.lo > 0.
inline Interval log(Interval a) { return {std::log(a.lo), std::log(a.hi)}; }

}  // namespace solenoid
