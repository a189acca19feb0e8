#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "realind/syntax.hpp"

using namespace realind;

TEST_CASE("parsing the worked examples") {
  const PredPtr p = parse("0 <= x /\\ x <= 1");
  REQUIRE(p->kind == PredKind::conj);
  CHECK(p->left->kind == PredKind::le);
  CHECK(p->left->lhs->kind == TermKind::constant);
  CHECK(p->left->rhs->name == "x");

  const PredPtr q = parse("forall t in [0,1]: t*(1 - t) <= 0.3");
  REQUIRE(q->kind == PredKind::forall);
  CHECK(q->var == "t");
  CHECK(q->domain == Interval(0, 1));
  CHECK(q->left->kind == PredKind::le);
  CHECK(q->left->lhs->kind == TermKind::mul);
}

TEST_CASE("printing matches the canonical spacing") {
  CHECK(print(conj(le(constant(0), variable("x")), le(variable("x"), constant(1)))) ==
        "0 <= x /\\ x <= 1");
  CHECK(print(le(abs(variable("x")), constant(2))) == "abs(x) <= 2");
  CHECK(print(forall("t", Interval(0, 1), le(variable("t"), constant(1)))) ==
        "forall t in [0,1]: t <= 1");
}

TEST_CASE("non-closed constructs raise GrammarError") {
  const std::vector<std::string> rejected = {
      "x < 1",
      "1 < x",
      "not x <= 1",
      "x <= 1 /\\ not x == 0",
      "exists t in [0,1]: t <= 1",
      "forall t in [0,1]: exists s in [0,1]: s <= t",
      "abs(x) < 2",
  };
  for (const auto& text : rejected) {
    INFO(text);
    CHECK_THROWS_AS(parse(text), GrammarError);
  }
}

TEST_CASE("malformed input raises SyntaxError with a position") {
  CHECK_THROWS_AS(parse("x <="), SyntaxError);
  CHECK_THROWS_AS(parse("x >= 1"), SyntaxError);
  CHECK_THROWS_AS(parse("x / y <= 1"), SyntaxError);
  CHECK_THROWS_AS(parse("x = 1"), SyntaxError);
  CHECK_THROWS_AS(parse("forall t in [1,0]: t <= 1"), SyntaxError);
  CHECK_THROWS_AS(parse("sqrt(x) <= 1"), SyntaxError);
  CHECK_THROWS_AS(parse("x <= 1 extra"), SyntaxError);
  try {
    parse("x ? 1");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 2);
  }
}

namespace {

TermPtr random_term(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 11);
  switch (pick(rng)) {
    case 0: {
      // constants over many scales, negatives included
      std::uniform_real_distribution<double> u(-1e3, 1e3);
      double v = u(rng);
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) v *= 1e-7;
      return constant(v);
    }
    case 1: {
      const char* names[] = {"x", "y", "t", "u_1"};
      return variable(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
    case 2: return add(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 3: return sub(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 4: return mul(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 5: return neg(random_term(rng, depth - 1));
    case 6: return abs(random_term(rng, depth - 1));
    case 7: return sin(random_term(rng, depth - 1));
    case 8: return cos(random_term(rng, depth - 1));
    case 9: return exp(random_term(rng, depth - 1));
    case 10: return min(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return max(random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

PredPtr random_pred(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0: return le(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 1: return eq(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 2: return conj(random_pred(rng, depth - 1), random_pred(rng, depth - 1));
    case 3: return disj(random_pred(rng, depth - 1), random_pred(rng, depth - 1));
    default: {
      std::uniform_real_distribution<double> u(-10.0, 10.0);
      double lo = u(rng), hi = u(rng);
      if (lo > hi) std::swap(lo, hi);
      return forall("q", Interval(lo, hi), random_pred(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("parse(print(p)) round-trips a random corpus exactly") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 1200; ++i) {
    const PredPtr p = random_pred(rng, 8);
    const std::string text = print(p);
    INFO(text);
    const PredPtr q = parse(text);
    REQUIRE(equals(p, q));
    CHECK(print(q) == text);
  }
}

TEST_CASE("term printing round-trips tricky shapes") {
  const std::vector<TermPtr> cases = {
      sub(variable("x"), constant(-1.5)),
      neg(mul(variable("x"), variable("y"))),
      neg(neg(variable("x"))),
      neg(constant(2.0)),
      mul(constant(-2.0), variable("x")),
      sub(sub(variable("a"), variable("b")), variable("c")),
      sub(variable("a"), sub(variable("b"), variable("c"))),
      mul(variable("a"), mul(variable("b"), variable("c"))),
      min(add(variable("a"), constant(1)), max(variable("b"), constant(2))),
  };
  for (const auto& t : cases) {
    const std::string text = print(t);
    INFO(text);
    CHECK(equals(t, parse_term(text)));
  }
}
