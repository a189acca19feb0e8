#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "realind/interval.hpp"

using namespace realind;

TEST_CASE("interval construction enforces the invariants") {
  CHECK_THROWS_AS(Interval(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(Interval(std::nan(""), 0.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), DomainError);
  CHECK(Interval(-0.0, 0.0).lo() == 0.0);
}

TEST_CASE("endpoint arithmetic stays exact when representable") {
  CHECK(add(Interval(1, 2), Interval(3, 4)) == Interval(4, 6));
  CHECK(sub(Interval(0, 0), Interval(0, 0)) == Interval(0, 0));
  CHECK(mul(Interval(-1, 2), Interval(3, 4)) == Interval(-4, 8));
  CHECK(div_checked(Interval(0, 0), Interval(1, 2)) == Interval(0, 0));
  CHECK(div_checked(Interval(1, 1), Interval(2, 4)) == Interval(0.25, 0.5));
}

TEST_CASE("division through zero is rejected") {
  CHECK_THROWS_AS(div_checked(Interval(1, 2), Interval(-1, 1)), DomainError);
  CHECK_THROWS_AS(div_checked(Interval(1, 2), Interval(0, 1)), DomainError);
  CHECK_NOTHROW(div_checked(Interval(1, 2), Interval(-2, -1)));
}

TEST_CASE("hull, width, contains") {
  CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
  CHECK(width(Interval(1, 4)) == 3.0);
  CHECK(contains(Interval(0, 1), 0.5));
  CHECK_FALSE(contains(Interval(0, 1), 1.5));
}

TEST_CASE("elementary enclosures on the worked cases") {
  CHECK(abs(Interval(-3, 2)) == Interval(0, 3));
  CHECK(neg(Interval(-1, 2)) == Interval(-2, 1));

  const Interval pi = pi_enclosure();
  const Interval s = sin(Interval(0.0, pi.hi()));
  CHECK(s.lo() <= 0.0);
  CHECK(s.lo() >= -1e-12);
  CHECK(s.hi() == 1.0);  // the peak lies inside

  const Interval c0 = cos(Interval(0.0));
  CHECK(c0.hi() == 1.0);
  CHECK(c0.lo() >= 1.0 - 1e-12);
  CHECK(contains(c0, 1.0));

  const Interval cpi = cos(Interval(pi.lo(), pi.hi()));
  CHECK(cpi.lo() == -1.0);

  const Interval wide = sin(Interval(-100.0, 100.0));
  CHECK(wide == Interval(-1.0, 1.0));

  const Interval e = exp(Interval(0.0, 1.0));
  CHECK(contains(e, 1.0));
  CHECK(contains(e, std::numbers::e));
  CHECK_THROWS_AS(exp(Interval(0.0, 1e6)), DomainError);
}

namespace {

Interval apply_op(int op, const Interval& a, const Interval& b) {
  switch (op) {
    case 0: return add(a, b);
    case 1: return sub(a, b);
    case 2: return mul(a, b);
    case 3: return div_checked(a, b);
    case 4: return neg(a);
    case 5: return abs(a);
    case 6: return sin(a);
    case 7: return cos(a);
    case 8: return min(a, b);
    default: return max(a, b);
  }
}

double apply_op(int op, double x, double y) {
  switch (op) {
    case 0: return x + y;
    case 1: return x - y;
    case 2: return x * y;
    case 3: return x / y;
    case 4: return -x;
    case 5: return std::fabs(x);
    case 6: return std::sin(x);
    case 7: return std::cos(x);
    case 8: return std::min(x, y);
    default: return std::max(x, y);
  }
}

}  // namespace

TEST_CASE("containment fuzz: point results stay inside interval results") {
  std::mt19937_64 rng(20260809);
  int checked = 0;
  while (checked < 10000) {
    const int op = std::uniform_int_distribution<int>(0, 9)(rng);
    const Interval a = testutil::rand_interval(rng);
    const Interval b = testutil::rand_interval(rng);
    if (op == 3 && contains(b, 0.0)) continue;
    Interval r{};
    try {
      r = apply_op(op, a, b);
    } catch (const DomainError&) {
      continue;  // overflow cases are rejected, not enclosed
    }
    for (int k = 0; k < 4; ++k) {
      const double x = testutil::sample_in(rng, a);
      const double y = testutil::sample_in(rng, b);
      const double exact = apply_op(op, x, y);
      INFO("op=" << op << " x=" << x << " y=" << y << " exact=" << exact
                 << " r=[" << r.lo() << "," << r.hi() << "]");
      REQUIRE(contains(r, exact));
    }
    ++checked;
  }
}

TEST_CASE("inclusion isotonicity of add/sub/mul under random nesting") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const int op = std::uniform_int_distribution<int>(0, 2)(rng);
    const Interval a = testutil::rand_interval(rng);
    const Interval b = testutil::rand_interval(rng);
    try {
      const Interval wa = testutil::widen(rng, a);
      const Interval wb = testutil::widen(rng, b);
      const Interval inner = apply_op(op, a, b);
      const Interval outer = apply_op(op, wa, wb);
      INFO("op=" << op);
      REQUIRE(subset(inner, outer));
    } catch (const DomainError&) {
      continue;
    }
  }
}

TEST_CASE("add/sub widths do not exceed the input widths plus rounding slack") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const Interval a = testutil::rand_interval(rng);
    const Interval b = testutil::rand_interval(rng);
    try {
      const double budget = width(a) + width(b);
      const Interval s1 = add(a, b);
      const Interval s2 = sub(a, b);
      // outward rounding nudges each endpoint by at most one ulp of its own
      // magnitude, so the slack scales with the result endpoints
      const auto slack_for = [](const Interval& r) {
        const double mag = std::max({1.0, std::fabs(r.lo()), std::fabs(r.hi())});
        return 8 * mag * std::numeric_limits<double>::epsilon();
      };
      CHECK(width(s1) <= budget + slack_for(s1));
      CHECK(width(s2) <= budget + slack_for(s2));
    } catch (const DomainError&) {
      continue;
    }
  }
}
