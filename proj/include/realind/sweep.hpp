// The real-induction sweep.
//
// A closed property that holds at the start point and propagates from every
// certified frontier c over some [c, c+eps] holds up to the target. The
// sweep executes that argument: a step oracle proposes eps together with a
// certificate, the engine independently validates the certificate before
// accepting the node, and when the step sizes stall it proposes a jump to
// the extrapolated supremum, certifies the property across the bracket
// (closedness is what makes the supremum a member), and records a limit
// node. The result is a replayable trace measured by an ordinal w*k + n.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "realind/errors.hpp"
#include "realind/eval.hpp"
#include "realind/trace.hpp"

namespace realind {

struct Step {
  double epsilon;
  Certificate cert;
};

struct GiveUp {
  std::string reason;
};

using StepResult = std::variant<Step, GiveUp>;

// The hereditary-step contract. Implementations must return certificates
// establishing the property on [frontier, frontier + epsilon]; the engine
// re-validates before acceptance. Oracles that track internal state (e.g. a
// solution enclosure) advance it in on_accept, which also fires for limit
// jumps certified via certify_jump.
class StepOracle {
 public:
  virtual ~StepOracle() = default;
  virtual StepResult propose(double frontier) = 0;
  virtual std::optional<Certificate> certify_jump(double from, double to) {
    (void)from;
    (void)to;
    return std::nullopt;
  }
  virtual void on_accept(double from, double to) {
    (void)from;
    (void)to;
  }
};

struct FrontierStep {
  double from;
  double epsilon;
};

// Limit detection: when the last stall_window steps are all below the stall
// threshold and strictly decreasing, extrapolate the geometric tail
//   l = c + eps * r / (1 - r),  r = eps_n / eps_{n-1}
// (c the current frontier) and clamp to the target. The proposal is
// advisory; the sweep only jumps after certifying the property on the whole
// bracket, so extrapolation error cannot compromise soundness.
inline std::optional<double> detect_limit(const std::vector<FrontierStep>& history,
                                          const SweepPolicy& policy, double target) {
  const std::size_t m = std::max<std::size_t>(static_cast<std::size_t>(policy.stall_window), 2);
  if (history.size() < m) return std::nullopt;
  const std::size_t begin = history.size() - m;
  for (std::size_t i = begin; i < history.size(); ++i) {
    if (!(history[i].epsilon < policy.stall_threshold)) return std::nullopt;
    if (i > begin && !(history[i].epsilon < history[i - 1].epsilon)) return std::nullopt;
  }
  const double eps = history.back().epsilon;
  const double prev = history[history.size() - 2].epsilon;
  const double r = eps / prev;
  if (!(r > 0.0) || !(r < 1.0)) return std::nullopt;
  const double frontier = history.back().from + history.back().epsilon;
  const double proposal = frontier + eps * (r / (1.0 - r));
  if (!std::isfinite(proposal) || !(proposal > frontier)) return std::nullopt;
  return std::min(proposal, target);
}

struct CertCheck {
  bool ok = false;
  bool rigorous = false;
  std::string reason;
};

// Engine-side certificate validation. DSL certificates replay through the
// evaluator; analytic certificates must satisfy the recorded step inequality
//   f_lo * (1 - h*alpha_hi) + h * (beta_lo - delta) >= 0,  1 - h*alpha_hi >= 0
// evaluated in interval arithmetic (the full chain recomputation against the
// coefficient terms happens in check_trace); witness certificates are
// sample evidence only and mark the trace non-rigorous.
inline CertCheck validate_certificate(const Certificate& cert, double from, double to,
                                      const ProblemDesc& problem) {
  if (const auto* dsl = std::get_if<DslEvalCert>(&cert)) {
    const auto* prob = std::get_if<DslProblem>(&problem);
    if (!prob) return {false, true, "dsl certificate for a non-dsl problem"};
    if (!equals(dsl->predicate, prob->predicate))
      return {false, true, "certificate predicate differs from the problem predicate"};
    if (dsl->box.size() != 1)
      return {false, true, "certificate box must bind exactly the induction variable"};
    const auto it = dsl->box.find(prob->var);
    if (it == dsl->box.end())
      return {false, true, "certificate box does not bind the induction variable"};
    if (!(it->second.lo() == from && it->second.hi() == to))
      return {false, true, "certificate box does not cover the step exactly"};
    if (eval_pred(dsl->predicate, dsl->box, dsl->budget) != Tri::proved)
      return {false, true, "predicate not proved over the step box"};
    return {true, true, {}};
  }
  if (const auto* ana = std::get_if<AnalyticCert>(&cert)) {
    if (!std::holds_alternative<OdeProblem>(problem))
      return {false, true, "analytic certificate for a non-ode problem"};
    if (ana->tag != "ode-positivity-step")
      return {false, true, "unknown analytic certificate tag '" + ana->tag + "'"};
    for (const char* key :
         {"h", "f_lo", "f_hi", "box_lo", "box_hi", "alpha_hi", "beta_lo", "delta"})
      if (!ana->data.count(key))
        return {false, true, std::string("analytic certificate misses field '") + key + "'"};
    const double h = ana->data.at("h");
    if (!(h > 0.0) || from + h != to)
      return {false, true, "certificate step size is inconsistent with the node"};
    const double f_lo = ana->data.at("f_lo");
    const double alpha_hi = ana->data.at("alpha_hi");
    const double beta_lo = ana->data.at("beta_lo");
    const double delta = ana->data.at("delta");
    if (!(f_lo >= 0.0)) return {false, true, "frontier enclosure dips below zero"};
    if (!(alpha_hi >= 0.0) || !(beta_lo > 0.0) || !(delta >= 0.0))
      return {false, true, "coefficient bounds violate the sign hypotheses"};
    try {
      const Interval damping = sub(Interval(1.0), mul(Interval(h), Interval(alpha_hi)));
      if (damping.lo() < 0.0) return {false, true, "step too large: 1 - h*alpha_hi < 0"};
      const Interval bound =
          add(mul(Interval(f_lo), damping),
              mul(Interval(h), sub(Interval(beta_lo), Interval(delta))));
      if (bound.lo() < 0.0) return {false, true, "positivity bound is not established"};
    } catch (const DomainError& e) {
      return {false, true, std::string("bound recomputation failed: ") + e.what()};
    }
    return {true, true, {}};
  }
  const auto& wit = std::get<NumericWitnessCert>(cert);
  const auto* prob = std::get_if<WitnessProblem>(&problem);
  if (!prob) return {false, false, "witness certificate for a rigorous problem"};
  if (wit.samples.empty()) return {false, false, "witness certificate has no samples"};
  const double slack = 1e-9 * std::max(1.0, std::fabs(to) + std::fabs(from));
  for (const auto& [t, v] : wit.samples) {
    if (t < from - slack || t > to + slack)
      return {false, false, "witness sample outside the step"};
    if (!(v >= -prob->tolerance))
      return {false, false, "witness sample violates the tracked bound"};
  }
  return {true, false, {}};
}

namespace detail {

inline std::optional<Certificate> jump_certificate(const ProblemDesc& problem,
                                                   StepOracle& oracle, double from,
                                                   double to, const SweepPolicy& policy) {
  if (const auto* dsl = std::get_if<DslProblem>(&problem)) {
    return Certificate(DslEvalCert{
        dsl->predicate, {{dsl->var, Interval(from, to)}}, policy.budget});
  }
  return oracle.certify_jump(from, to);
}

}  // namespace detail

inline ProofTrace sweep(const ProblemDesc& problem, double start, double target,
                        StepOracle& oracle, const SweepPolicy& policy = {}) {
  if (!(start <= target)) throw InvalidInputError("sweep target lies below the start point");
  if (const auto* dsl = std::get_if<DslProblem>(&problem)) {
    const Env at_start{{dsl->var, Interval(start)}};
    if (eval_pred(dsl->predicate, at_start, policy.budget) != Tri::proved)
      throw InvalidInputError("property is not certifiable at the start point");
  }

  ProofTrace trace{problem, start, target, policy, {}, std::nullopt};
  double frontier = start;
  std::vector<FrontierStep> history;
  int limit_nodes = 0;
  std::int64_t proposals = 0;

  const auto fail = [&](std::string reason) {
    trace.failure = SweepFailure{frontier, std::move(reason)};
    return trace;
  };

  while (frontier < target) {
    if (const auto proposal = detect_limit(history, policy, target)) {
      // land strictly inside the certified closure unless we can finish
      double to = *proposal;
      if (to < target) to = detail::next_down(to);
      if (to > frontier) {
        if (limit_nodes >= policy.max_limit_nodes) return fail("ordinal budget exhausted");
        bool jumped = false;
        if (auto cert = detail::jump_certificate(problem, oracle, frontier, to, policy)) {
          const CertCheck chk = validate_certificate(*cert, frontier, to, problem);
          if (chk.ok) {
            trace.nodes.push_back({NodeKind::limit, frontier, to, to - frontier,
                                   std::move(*cert), policy.stall_window});
            oracle.on_accept(frontier, to);
            frontier = to;
            ++limit_nodes;
            history.clear();
            jumped = true;
          }
        }
        if (jumped) continue;
      }
      // proposal unusable: require a fresh stall window before retrying
      history.clear();
    }

    if (++proposals > policy.max_steps) return fail("step budget exhausted");
    StepResult result = oracle.propose(frontier);
    if (const auto* g = std::get_if<GiveUp>(&result))
      return fail("oracle gave up: " + g->reason);
    Step step = std::get<Step>(std::move(result));
    if (!(step.epsilon > 0.0)) return fail("oracle proposed a nonpositive step");
    const double to = frontier + step.epsilon;
    if (!(to > frontier)) return fail("step too small to advance the frontier");
    const CertCheck chk = validate_certificate(step.cert, frontier, to, problem);
    if (!chk.ok) return fail("certificate rejected: " + chk.reason);
    trace.nodes.push_back(
        {NodeKind::successor, frontier, to, step.epsilon, std::move(step.cert), 0});
    oracle.on_accept(frontier, to);
    history.push_back({frontier, step.epsilon});
    frontier = to;
  }
  return trace;
}

}  // namespace realind
