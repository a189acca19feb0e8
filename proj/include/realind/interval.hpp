// Closed bounded interval arithmetic over double endpoints.
//
// Contract: every operation returns an interval that contains the exact real
// result for all point inputs drawn from the argument intervals. Outward
// rounding is done by nudging an endpoint to the neighbouring representable
// value whenever the computed endpoint may be inexact. For +, -, * and / the
// residual of the endpoint computation is known exactly (TwoSum / fused
// multiply-add), so representable endpoint results stay exact and directed
// endpoints are correctly rounded. Library functions (sin, cos, exp) are
// padded by two ulps, which covers the documented worst-case error of the
// host libm.
//
// There are no empty and no unbounded intervals: a computation whose
// endpoint overflows to infinity raises DomainError instead.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "realind/errors.hpp"

namespace realind {

namespace detail {

inline double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double steps_up(double x, int n) {
  for (int i = 0; i < n; ++i) x = next_up(x);
  return x;
}

inline double steps_down(double x, int n) {
  for (int i = 0; i < n; ++i) x = next_down(x);
  return x;
}

struct ValueWithError {
  double value;  // nearest-rounded result
  double error;  // exact residual: true result = value + error
};

// Knuth's branch-free TwoSum; exact as long as no intermediate overflows.
inline ValueWithError two_sum(double a, double b) {
  const double s = a + b;
  const double bp = s - a;
  const double e = (a - (s - bp)) + (b - bp);
  return {s, e};
}

inline ValueWithError two_prod(double a, double b) {
  const double p = a * b;
  const double e = std::fma(a, b, -p);
  return {p, e};
}

// Largest double <= value+error, given the nearest rounding `value`.
inline double dir_down(const ValueWithError& r) {
  return r.error < 0 ? next_down(r.value) : r.value;
}

inline double dir_up(const ValueWithError& r) {
  return r.error > 0 ? next_up(r.value) : r.value;
}

}  // namespace detail

class Interval {
 public:
  Interval() : lo_(0.0), hi_(0.0) {}

  explicit Interval(double point) : Interval(point, point) {}

  Interval(double lo, double hi) : lo_(lo + 0.0), hi_(hi + 0.0) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_))
      throw DomainError("interval endpoints must be finite");
    if (lo_ > hi_)
      throw DomainError("interval endpoints out of order");
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  double lo_, hi_;
};

inline double width(const Interval& a) {
  // rounded up, so the result is a valid bound on the true diameter
  return detail::dir_up(detail::two_sum(a.hi(), -a.lo()));
}

inline bool contains(const Interval& a, double x) {
  return a.lo() <= x && x <= a.hi();
}

inline bool subset(const Interval& a, const Interval& b) {
  return b.lo() <= a.lo() && a.hi() <= b.hi();
}

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline Interval intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) throw DomainError("empty intersection");
  return Interval(lo, hi);
}

inline double midpoint(const Interval& a) {
  const double m = 0.5 * (a.lo() + a.hi());
  if (std::isfinite(m) && contains(a, m)) return m;
  return a.lo() + 0.5 * (a.hi() - a.lo());
}

inline Interval add(const Interval& a, const Interval& b) {
  return Interval(detail::dir_down(detail::two_sum(a.lo(), b.lo())),
                  detail::dir_up(detail::two_sum(a.hi(), b.hi())));
}

inline Interval neg(const Interval& a) {
  return Interval(-a.hi(), -a.lo());
}

inline Interval sub(const Interval& a, const Interval& b) {
  return Interval(detail::dir_down(detail::two_sum(a.lo(), -b.hi())),
                  detail::dir_up(detail::two_sum(a.hi(), -b.lo())));
}

inline Interval mul(const Interval& a, const Interval& b) {
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    for (double y : ys) {
      const auto p = detail::two_prod(x, y);
      lo = std::min(lo, detail::dir_down(p));
      hi = std::max(hi, detail::dir_up(p));
    }
  }
  return Interval(lo, hi);
}

// Division; the divisor must not contain zero.
inline Interval div_checked(const Interval& a, const Interval& b) {
  if (b.lo() <= 0.0 && 0.0 <= b.hi())
    throw DomainError("division by an interval containing zero");
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    for (double y : ys) {
      const double q = x / y;
      // r = q*y - x exactly; sign(q - x/y) = sign(r) * sign(y)
      const double r = std::fma(q, y, -x);
      const bool q_high = r != 0.0 && ((r > 0.0) == (y > 0.0));
      const bool q_low = r != 0.0 && !q_high;
      lo = std::min(lo, q_high ? detail::next_down(q) : q);
      hi = std::max(hi, q_low ? detail::next_up(q) : q);
    }
  }
  return Interval(lo, hi);
}

inline Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return neg(a);
  return Interval(0.0, std::max(-a.lo(), a.hi()));
}

inline Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

inline Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline Interval exp(const Interval& a) {
  const double hi = detail::steps_up(std::exp(a.hi()), 2);
  if (!std::isfinite(hi)) throw DomainError("exp endpoint overflows");
  const double lo = std::max(0.0, detail::steps_down(std::exp(a.lo()), 2));
  return Interval(lo, hi);
}

inline Interval pi_enclosure() {
  const double p = std::numbers::pi_v<double>;
  return Interval(detail::next_down(p), detail::next_up(p));
}

namespace detail {

// Conservative test: may [x] contain a point offset + k*period, k integer?
// May answer yes when the true ratio range narrowly misses an integer;
// never answers no when a congruent point is present.
inline bool contains_congruent(const Interval& x, const Interval& offset,
                               const Interval& period) {
  const Interval ratio = div_checked(sub(x, offset), period);
  return std::ceil(ratio.lo()) <= std::floor(ratio.hi());
}

}  // namespace detail

inline Interval cos(const Interval& a) {
  const Interval pi = pi_enclosure();
  const Interval two_pi = add(pi, pi);
  const bool has_max = detail::contains_congruent(a, Interval(0.0), two_pi);
  const bool has_min = detail::contains_congruent(a, pi, two_pi);
  const double clo = std::cos(a.lo());
  const double chi = std::cos(a.hi());
  const double lo = has_min
                        ? -1.0
                        : std::max(-1.0, detail::steps_down(std::min(clo, chi), 2));
  const double hi = has_max
                        ? 1.0
                        : std::min(1.0, detail::steps_up(std::max(clo, chi), 2));
  return Interval(lo, hi);
}

inline Interval sin(const Interval& a) {
  const Interval pi = pi_enclosure();
  const Interval two_pi = add(pi, pi);
  const Interval half_pi(0.5 * pi.lo(), 0.5 * pi.hi());
  const bool has_max = detail::contains_congruent(a, half_pi, two_pi);
  const bool has_min = detail::contains_congruent(a, neg(half_pi), two_pi);
  const double slo = std::sin(a.lo());
  const double shi = std::sin(a.hi());
  const double lo = has_min
                        ? -1.0
                        : std::max(-1.0, detail::steps_down(std::min(slo, shi), 2));
  const double hi = has_max
                        ? 1.0
                        : std::min(1.0, detail::steps_up(std::max(slo, shi), 2));
  return Interval(lo, hi);
}

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }

}  // namespace realind
