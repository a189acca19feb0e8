// ASTs of the closed-formula language.
//
// Terms are built from continuous total function symbols only; predicates
// from <=, ==, conjunction, disjunction and bounded universal
// quantification. Strict comparison, negation and existential quantification
// are not representable, so every predicate denotes a topologically closed
// set by construction. Division is deliberately absent from the term
// grammar: quotients can break closedness of solution sets and introduce
// partiality (numeric case studies compute their quotients outside the DSL).
#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "realind/errors.hpp"
#include "realind/interval.hpp"

namespace realind {

enum class TermKind {
  constant,
  variable,
  add,
  sub,
  mul,
  neg,
  abs,
  sin,
  cos,
  exp,
  min,
  max,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  double value = 0.0;  // constant
  std::string name;    // variable
  TermPtr lhs, rhs;    // children; rhs empty for unary nodes
};

inline TermPtr constant(double v) {
  if (!std::isfinite(v)) throw DomainError("constants must be finite");
  return std::make_shared<Term>(Term{TermKind::constant, v, {}, nullptr, nullptr});
}

inline TermPtr variable(std::string name) {
  return std::make_shared<Term>(
      Term{TermKind::variable, 0.0, std::move(name), nullptr, nullptr});
}

namespace detail {

inline TermPtr term_node(TermKind k, TermPtr a, TermPtr b = nullptr) {
  return std::make_shared<Term>(Term{k, 0.0, {}, std::move(a), std::move(b)});
}

}  // namespace detail

inline TermPtr add(TermPtr a, TermPtr b) { return detail::term_node(TermKind::add, std::move(a), std::move(b)); }
inline TermPtr sub(TermPtr a, TermPtr b) { return detail::term_node(TermKind::sub, std::move(a), std::move(b)); }
inline TermPtr mul(TermPtr a, TermPtr b) { return detail::term_node(TermKind::mul, std::move(a), std::move(b)); }
inline TermPtr min(TermPtr a, TermPtr b) { return detail::term_node(TermKind::min, std::move(a), std::move(b)); }
inline TermPtr max(TermPtr a, TermPtr b) { return detail::term_node(TermKind::max, std::move(a), std::move(b)); }
inline TermPtr neg(TermPtr a) { return detail::term_node(TermKind::neg, std::move(a)); }
inline TermPtr abs(TermPtr a) { return detail::term_node(TermKind::abs, std::move(a)); }
inline TermPtr sin(TermPtr a) { return detail::term_node(TermKind::sin, std::move(a)); }
inline TermPtr cos(TermPtr a) { return detail::term_node(TermKind::cos, std::move(a)); }
inline TermPtr exp(TermPtr a) { return detail::term_node(TermKind::exp, std::move(a)); }

enum class PredKind {
  le,      // lhs <= rhs
  eq,      // lhs == rhs
  conj,    // left /\ right
  disj,    // left \/ right
  forall,  // forall var in domain: body
};

struct Predicate;
using PredPtr = std::shared_ptr<const Predicate>;

struct Predicate {
  PredKind kind;
  TermPtr lhs, rhs;     // atoms
  PredPtr left, right;  // connectives; `left` doubles as the forall body
  std::string var;      // forall
  Interval domain{0.0, 0.0};
};

inline PredPtr le(TermPtr a, TermPtr b) {
  return std::make_shared<Predicate>(
      Predicate{PredKind::le, std::move(a), std::move(b), nullptr, nullptr, {}, Interval()});
}

inline PredPtr eq(TermPtr a, TermPtr b) {
  return std::make_shared<Predicate>(
      Predicate{PredKind::eq, std::move(a), std::move(b), nullptr, nullptr, {}, Interval()});
}

inline PredPtr conj(PredPtr a, PredPtr b) {
  return std::make_shared<Predicate>(
      Predicate{PredKind::conj, nullptr, nullptr, std::move(a), std::move(b), {}, Interval()});
}

inline PredPtr disj(PredPtr a, PredPtr b) {
  return std::make_shared<Predicate>(
      Predicate{PredKind::disj, nullptr, nullptr, std::move(a), std::move(b), {}, Interval()});
}

inline PredPtr forall(std::string var, Interval domain, PredPtr body) {
  return std::make_shared<Predicate>(Predicate{
      PredKind::forall, nullptr, nullptr, std::move(body), nullptr, std::move(var), domain});
}

// Three-valued verdict of an interval evaluation. `proved` means the
// predicate holds at every point of the evaluation box, `disproved` that it
// fails at every point; `unknown` is always a permitted answer.
enum class Tri { proved, disproved, unknown };

constexpr Tri tri_and(Tri a, Tri b) {
  if (a == Tri::disproved || b == Tri::disproved) return Tri::disproved;
  if (a == Tri::proved && b == Tri::proved) return Tri::proved;
  return Tri::unknown;
}

constexpr Tri tri_or(Tri a, Tri b) {
  if (a == Tri::proved || b == Tri::proved) return Tri::proved;
  if (a == Tri::disproved && b == Tri::disproved) return Tri::disproved;
  return Tri::unknown;
}

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::proved: return "proved";
    case Tri::disproved: return "disproved";
    default: return "unknown";
  }
}

namespace detail {

// constants compared bit-exactly so printing/parsing round trips are strict
inline bool same_double(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace detail

inline bool equals(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::constant:
      return detail::same_double(a->value, b->value);
    case TermKind::variable:
      return a->name == b->name;
    default:
      return equals(a->lhs, b->lhs) && equals(a->rhs, b->rhs);
  }
}

inline bool equals(const PredPtr& a, const PredPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PredKind::le:
    case PredKind::eq:
      return equals(a->lhs, b->lhs) && equals(a->rhs, b->rhs);
    case PredKind::conj:
    case PredKind::disj:
      return equals(a->left, b->left) && equals(a->right, b->right);
    case PredKind::forall:
      return a->var == b->var &&
             detail::same_double(a->domain.lo(), b->domain.lo()) &&
             detail::same_double(a->domain.hi(), b->domain.hi()) &&
             equals(a->left, b->left);
  }
  return false;
}

inline void collect_free_vars(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == TermKind::variable) {
    out.insert(t->name);
    return;
  }
  collect_free_vars(t->lhs, out);
  collect_free_vars(t->rhs, out);
}

inline void collect_free_vars(const PredPtr& p, std::set<std::string>& out) {
  if (!p) return;
  switch (p->kind) {
    case PredKind::le:
    case PredKind::eq:
      collect_free_vars(p->lhs, out);
      collect_free_vars(p->rhs, out);
      return;
    case PredKind::conj:
    case PredKind::disj:
      collect_free_vars(p->left, out);
      collect_free_vars(p->right, out);
      return;
    case PredKind::forall: {
      std::set<std::string> inner;
      collect_free_vars(p->left, inner);
      inner.erase(p->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

inline std::set<std::string> free_vars(const PredPtr& p) {
  std::set<std::string> out;
  collect_free_vars(p, out);
  return out;
}

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  collect_free_vars(t, out);
  return out;
}

}  // namespace realind
