// Rigorous evaluation of terms and predicates over boxes.
//
// eval_term returns an enclosure of the term's range over the environment
// box. eval_pred decides a predicate with three-valued semantics: atoms by
// the sign of a difference enclosure, connectives Kleene-style, and bounded
// quantifiers by adaptive bisection of the quantified domain under a budget.
// `proved` and `disproved` answers are sound; `unknown` is always allowed.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "realind/ast.hpp"
#include "realind/errors.hpp"
#include "realind/interval.hpp"

namespace realind {

using Env = std::map<std::string, Interval>;
using PointEnv = std::map<std::string, double>;

struct EvalBudget {
  int max_depth = 20;             // bisection depth per quantifier
  std::int64_t max_boxes = 10000; // leaf boxes per quantifier
};

inline Interval eval_term(const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case TermKind::constant: return Interval(t->value);
    case TermKind::variable: {
      auto it = env.find(t->name);
      if (it == env.end()) throw UnboundVariableError(t->name);
      return it->second;
    }
    case TermKind::add: return add(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case TermKind::sub: return sub(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case TermKind::mul: return mul(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case TermKind::min: return min(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case TermKind::max: return max(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case TermKind::neg: return neg(eval_term(t->lhs, env));
    case TermKind::abs: return abs(eval_term(t->lhs, env));
    case TermKind::sin: return sin(eval_term(t->lhs, env));
    case TermKind::cos: return cos(eval_term(t->lhs, env));
    case TermKind::exp: return exp(eval_term(t->lhs, env));
  }
  throw Error("unreachable term kind");
}

inline double eval_term_point(const TermPtr& t, const PointEnv& env) {
  switch (t->kind) {
    case TermKind::constant: return t->value;
    case TermKind::variable: {
      auto it = env.find(t->name);
      if (it == env.end()) throw UnboundVariableError(t->name);
      return it->second;
    }
    case TermKind::add: return eval_term_point(t->lhs, env) + eval_term_point(t->rhs, env);
    case TermKind::sub: return eval_term_point(t->lhs, env) - eval_term_point(t->rhs, env);
    case TermKind::mul: return eval_term_point(t->lhs, env) * eval_term_point(t->rhs, env);
    case TermKind::min: return std::min(eval_term_point(t->lhs, env), eval_term_point(t->rhs, env));
    case TermKind::max: return std::max(eval_term_point(t->lhs, env), eval_term_point(t->rhs, env));
    case TermKind::neg: return -eval_term_point(t->lhs, env);
    case TermKind::abs: return std::fabs(eval_term_point(t->lhs, env));
    case TermKind::sin: return std::sin(eval_term_point(t->lhs, env));
    case TermKind::cos: return std::cos(eval_term_point(t->lhs, env));
    case TermKind::exp: return std::exp(eval_term_point(t->lhs, env));
  }
  throw Error("unreachable term kind");
}

inline Tri eval_pred(const PredPtr& p, const Env& env, const EvalBudget& budget = {});

namespace detail {

inline Tri eval_forall(const PredPtr& p, const Env& env, const EvalBudget& budget) {
  struct Item {
    Interval dom;
    int depth;
  };
  std::vector<Item> stack{{p->domain, 0}};
  Env sub_env = env;
  std::int64_t boxes = 0;
  bool any_unknown = false;
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    if (++boxes > budget.max_boxes) {
      any_unknown = true;
      break;
    }
    sub_env[p->var] = item.dom;
    const Tri r = eval_pred(p->left, sub_env, budget);
    if (r == Tri::disproved) return Tri::disproved;  // fails everywhere on a sub-box
    if (r == Tri::proved) continue;
    const double m = midpoint(item.dom);
    if (item.depth >= budget.max_depth || !(item.dom.lo() < m && m < item.dom.hi())) {
      any_unknown = true;
      continue;
    }
    stack.push_back({Interval(m, item.dom.hi()), item.depth + 1});
    stack.push_back({Interval(item.dom.lo(), m), item.depth + 1});
  }
  return any_unknown ? Tri::unknown : Tri::proved;
}

}  // namespace detail

inline Tri eval_pred(const PredPtr& p, const Env& env, const EvalBudget& budget) {
  switch (p->kind) {
    case PredKind::le: {
      const Interval d = sub(eval_term(p->lhs, env), eval_term(p->rhs, env));
      if (d.hi() <= 0.0) return Tri::proved;
      if (d.lo() > 0.0) return Tri::disproved;
      return Tri::unknown;
    }
    case PredKind::eq: {
      const Interval d = sub(eval_term(p->lhs, env), eval_term(p->rhs, env));
      if (d.lo() == 0.0 && d.hi() == 0.0) return Tri::proved;
      if (!contains(d, 0.0)) return Tri::disproved;
      return Tri::unknown;
    }
    case PredKind::conj: {
      const Tri a = eval_pred(p->left, env, budget);
      if (a == Tri::disproved) return Tri::disproved;
      return tri_and(a, eval_pred(p->right, env, budget));
    }
    case PredKind::disj: {
      const Tri a = eval_pred(p->left, env, budget);
      if (a == Tri::proved) return Tri::proved;
      return tri_or(a, eval_pred(p->right, env, budget));
    }
    case PredKind::forall:
      return detail::eval_forall(p, env, budget);
  }
  throw Error("unreachable predicate kind");
}

// Plain-double check of a predicate at a point; used by sampling tests and
// reports, not by any soundness-critical path.
inline bool holds_at(const PredPtr& p, const PointEnv& env, double slack = 0.0) {
  switch (p->kind) {
    case PredKind::le:
      return eval_term_point(p->lhs, env) <= eval_term_point(p->rhs, env) + slack;
    case PredKind::eq:
      return std::fabs(eval_term_point(p->lhs, env) - eval_term_point(p->rhs, env)) <= slack;
    case PredKind::conj:
      return holds_at(p->left, env, slack) && holds_at(p->right, env, slack);
    case PredKind::disj:
      return holds_at(p->left, env, slack) || holds_at(p->right, env, slack);
    case PredKind::forall: {
      PointEnv sub = env;
      const int n = 64;
      for (int i = 0; i <= n; ++i) {
        const double x = p->domain.lo() + (p->domain.hi() - p->domain.lo()) * i / n;
        sub[p->var] = x;
        if (!holds_at(p->left, sub, slack)) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace realind
