#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "realind/eval.hpp"
#include "realind/syntax.hpp"

using namespace realind;

TEST_CASE("eval_term encloses ranges and reports unbound variables") {
  const Env env{{"x", Interval(0, 1)}};
  const Interval q = eval_term(parse_term("x*x - x"), env);
  CHECK(q.lo() <= -0.25);
  CHECK(q.hi() >= 0.0);
  CHECK(q.lo() >= -1.0 - 1e-12);  // naive form bottoms out at -1

  const Interval s = eval_term(parse_term("sin(x)"), Env{{"x", Interval(0.0)}});
  CHECK(std::fabs(s.lo()) <= 1e-12);
  CHECK(std::fabs(s.hi()) <= 1e-12);

  CHECK(eval_term(parse_term("abs(x)"), Env{{"x", Interval(-2, 1)}}) == Interval(0, 2));

  CHECK_THROWS_AS(eval_term(parse_term("x + y"), env), UnboundVariableError);
}

TEST_CASE("eval_pred decides the worked atoms") {
  const PredPtr p = parse("0 <= x /\\ x <= 1");
  CHECK(eval_pred(p, Env{{"x", Interval(0.2, 0.8)}}) == Tri::proved);
  CHECK(eval_pred(p, Env{{"x", Interval(1.5, 2.0)}}) == Tri::disproved);
  CHECK(eval_pred(p, Env{{"x", Interval(0.5, 1.5)}}) == Tri::unknown);
  CHECK(eval_pred(p, Env{{"x", Interval(0.0, 1.0)}}) == Tri::proved);  // boundary included
}

TEST_CASE("equality is honest about interval semantics") {
  CHECK(eval_pred(parse("x == x"), Env{{"x", Interval(2.0)}}) == Tri::proved);
  CHECK(eval_pred(parse("x == 3"), Env{{"x", Interval(1.0, 2.0)}}) == Tri::disproved);
  CHECK(eval_pred(parse("x == 1"), Env{{"x", Interval(0.5, 1.5)}}) == Tri::unknown);
}

TEST_CASE("bounded quantifier proves the parabola bound within depth 6") {
  const PredPtr p = parse("forall t in [0,1]: t*(1 - t) <= 0.3");
  EvalBudget budget;
  budget.max_depth = 6;
  CHECK(eval_pred(p, Env{}, budget) == Tri::proved);
  // max of t(1-t) is 0.25, so a 0.2 bound must be refuted
  CHECK(eval_pred(parse("forall t in [0,1]: t*(1 - t) <= 0.2"), Env{}) != Tri::proved);
  CHECK(eval_pred(parse("forall t in [0,1]: 0 <= t*(1 - t) + 1"), Env{}) == Tri::proved);
  CHECK(eval_pred(parse("forall t in [0,1]: t <= -1"), Env{}) == Tri::disproved);
}

TEST_CASE("bisection recovers proofs that need a disjunctive cover") {
  // neither disjunct holds across the whole domain, but each leaf of a fine
  // enough split is covered by one of them
  const PredPtr p = parse("forall t in [0,1]: t <= 0.6 \\/ 0.4 <= t");
  CHECK(eval_pred(p, Env{}) == Tri::proved);
  EvalBudget whole_box;
  whole_box.max_depth = 0;
  whole_box.max_boxes = 4;
  CHECK(eval_pred(p, Env{}, whole_box) == Tri::unknown);
}

TEST_CASE("eval_pred reports unbound variables") {
  CHECK_THROWS_AS(eval_pred(parse("x <= y"), Env{{"x", Interval(0.0)}}),
                  UnboundVariableError);
}

TEST_CASE("budget exhaustion yields unknown, never a flipped verdict") {
  // true bound, extremely tight: needs splitting beyond one box
  const PredPtr p = parse("forall t in [0,1]: t*(1 - t) <= 0.2500001");
  EvalBudget tiny;
  tiny.max_depth = 0;
  tiny.max_boxes = 1;
  CHECK(eval_pred(p, Env{}, tiny) == Tri::unknown);
  EvalBudget big;
  big.max_depth = 40;
  big.max_boxes = 2000000;
  CHECK(eval_pred(p, Env{}, big) == Tri::proved);
}

namespace {

// nested quantifiers multiply the leaf-box budgets, so the corpus allows at
// most one forall per formula
PredPtr random_closed_pred(std::mt19937_64& rng, int depth, bool allow_forall = true) {
  auto term = [&](auto&& self, int d) -> TermPtr {
    std::uniform_int_distribution<int> pick(0, d <= 0 ? 1 : 6);
    switch (pick(rng)) {
      case 0:
        return constant(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
      case 1:
        return variable(std::uniform_int_distribution<int>(0, 1)(rng) ? "x" : "y");
      case 2: return add(self(self, d - 1), self(self, d - 1));
      case 3: return sub(self(self, d - 1), self(self, d - 1));
      case 4: return mul(self(self, d - 1), self(self, d - 1));
      case 5: return sin(self(self, d - 1));
      default: return cos(self(self, d - 1));
    }
  };
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : (allow_forall ? 3 : 2));
  switch (pick(rng)) {
    case 0: return le(term(term, 3), term(term, 3));
    case 1: return conj(random_closed_pred(rng, depth - 1, allow_forall),
                        random_closed_pred(rng, depth - 1, false));
    case 2: return disj(random_closed_pred(rng, depth - 1, allow_forall),
                        random_closed_pred(rng, depth - 1, false));
    default: {
      double lo = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      return forall("q", Interval(lo, lo + 1.0), random_closed_pred(rng, depth - 1, false));
    }
  }
}

}  // namespace

TEST_CASE("soundness fuzz: decided verdicts agree with point evaluations") {
  std::mt19937_64 rng(1337);
  int decided = 0;
  for (int i = 0; i < 600; ++i) {
    const PredPtr p = random_closed_pred(rng, 3);
    const double xl = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const double yl = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const Env env{{"x", Interval(xl, xl + 0.5)}, {"y", Interval(yl, yl + 0.5)}};
    EvalBudget budget;
    budget.max_depth = 5;
    budget.max_boxes = 64;
    const Tri verdict = eval_pred(p, env, budget);
    if (verdict == Tri::unknown) continue;
    ++decided;
    for (int k = 0; k < 25; ++k) {
      Env point{{"x", Interval(testutil::sample_in(rng, env.at("x")))},
                {"y", Interval(testutil::sample_in(rng, env.at("y")))}};
      const Tri at_point = eval_pred(p, point, budget);
      INFO(print(p));
      if (verdict == Tri::proved) REQUIRE(at_point != Tri::disproved);
      if (verdict == Tri::disproved) REQUIRE(at_point != Tri::proved);
    }
  }
  CHECK(decided > 50);  // the corpus must actually exercise decided cases
}

TEST_CASE("raising the budget only resolves unknowns") {
  std::mt19937_64 rng(733);
  EvalBudget small;
  small.max_depth = 2;
  small.max_boxes = 16;
  EvalBudget large;
  large.max_depth = 8;
  large.max_boxes = 512;
  for (int i = 0; i < 300; ++i) {
    const PredPtr p = random_closed_pred(rng, 3);
    const Env env{{"x", Interval(-1.0, 1.0)}, {"y", Interval(0.0, 0.5)}};
    const Tri a = eval_pred(p, env, small);
    const Tri b = eval_pred(p, env, large);
    if (a == Tri::proved) CHECK(b == Tri::proved);
    if (a == Tri::disproved) CHECK(b == Tri::disproved);
  }
}
