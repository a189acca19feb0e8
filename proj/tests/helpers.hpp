// Shared generators for the fuzz-style tests.
#pragma once

#include <cmath>
#include <random>

#include "realind/interval.hpp"

namespace testutil {

inline double rand_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// magnitudes spread over several decades, both signs, occasional zero
inline double rand_value(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
    case 0: return 0.0;
    case 1: return rand_uniform(rng, -1.0, 1.0);
    default: {
      const double mag = std::pow(10.0, rand_uniform(rng, -6.0, 6.0));
      return std::uniform_int_distribution<int>(0, 1)(rng) ? mag : -mag;
    }
  }
}

inline realind::Interval rand_interval(std::mt19937_64& rng) {
  double a = rand_value(rng);
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) return realind::Interval(a);
  double b = rand_value(rng);
  if (a > b) std::swap(a, b);
  return realind::Interval(a, b);
}

inline double sample_in(std::mt19937_64& rng, const realind::Interval& iv) {
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: return iv.lo();
    case 1: return iv.hi();
    default: {
      const double t = rand_uniform(rng, 0.0, 1.0);
      const double x = iv.lo() + t * (iv.hi() - iv.lo());
      return std::min(std::max(x, iv.lo()), iv.hi());
    }
  }
}

// grow an interval into a random superset
inline realind::Interval widen(std::mt19937_64& rng, const realind::Interval& iv) {
  const double pad_lo = std::fabs(rand_value(rng));
  const double pad_hi = std::fabs(rand_value(rng));
  return realind::Interval(iv.lo() - pad_lo, iv.hi() + pad_hi);
}

}  // namespace testutil
