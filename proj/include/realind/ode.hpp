// Nonnegativity of solutions of f'(x) = -alpha(x) f(x) + beta(x),
// f(a) = b >= 0, with alpha >= 0 and beta > 0, certified constructively.
//
// Each step first validates a trajectory box B over [c, c+h] by interval
// Picard iteration (B must absorb value(c) + [0,h]*G(B) with
// G(y) = -alpha*y + beta), then establishes nonnegativity over the whole
// step from the decomposition
//   f(c+h') = f(c) (1 - h' alpha(c)) + h' (beta(c) + d(h'))
// via the bound f_lo*(1 - h*alpha_hi) + h*(beta_lo - delta) >= 0, where
// delta = width(G(B)) dominates |d(h')| (both the averaged slope and the
// slope at c lie in G(B)). The accepted steps drive the induction sweep, so
// the result is an ordinary proof trace that replays independently.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "realind/errors.hpp"
#include "realind/eval.hpp"
#include "realind/sweep.hpp"
#include "realind/syntax.hpp"

namespace realind {

inline constexpr const char* kOdeStepTag = "ode-positivity-step";

// A coefficient function: either term-backed (interval-extendable, rigorous)
// or an arbitrary callback (point evaluation only, non-rigorous mode).
class CoeffFn {
 public:
  static CoeffFn from_term(TermPtr term, std::string var) {
    CoeffFn f;
    f.term_ = std::move(term);
    f.var_ = std::move(var);
    return f;
  }

  static CoeffFn from_function(std::function<double(double)> fn) {
    CoeffFn f;
    f.fn_ = std::move(fn);
    return f;
  }

  bool rigorous() const { return term_ != nullptr; }

  Interval enclose(const Interval& t) const {
    if (!term_)
      throw InvalidInputError("callback coefficients have no interval extension");
    return eval_term(term_, Env{{var_, t}});
  }

  double operator()(double t) const {
    if (term_) return eval_term_point(term_, PointEnv{{var_, t}});
    return fn_(t);
  }

  const TermPtr& term() const { return term_; }
  const std::string& var() const { return var_; }

 private:
  TermPtr term_;
  std::string var_;
  std::function<double(double)> fn_;
};

struct Ivp {
  double start;    // a
  double initial;  // b, >= 0
  CoeffFn alpha;
  CoeffFn beta;
  double horizon;  // T

  Ivp(double a, double b, CoeffFn alpha_fn, CoeffFn beta_fn, double T)
      : start(a), initial(b), alpha(std::move(alpha_fn)), beta(std::move(beta_fn)), horizon(T) {
    if (!(b >= 0.0)) throw InvalidInputError("initial value must be nonnegative");
    if (!(T >= a)) throw InvalidInputError("horizon lies before the start point");
  }
};

inline Ivp make_ivp(const std::string& alpha_text, const std::string& beta_text, double b,
                    double a, double T) {
  TermPtr alpha = parse_term(alpha_text);
  TermPtr beta = parse_term(beta_text);
  std::set<std::string> vars = free_vars(alpha);
  for (const auto& v : free_vars(beta)) vars.insert(v);
  if (vars.size() > 1)
    throw InvalidInputError("coefficient terms must share a single variable");
  const std::string var = vars.empty() ? std::string("x") : *vars.begin();
  return Ivp(a, b, CoeffFn::from_term(alpha, var), CoeffFn::from_term(beta, var), T);
}

struct SolutionEnclosure {
  double time;
  Interval value;     // encloses f(time)
  Interval step_box;  // encloses f over the step that produced this value
};

struct ValidatedStep {
  SolutionEnclosure next;
  Interval flow;         // G over the validated trajectory box
  Interval alpha_range;  // coefficient enclosures over the step
  Interval beta_range;
  double remainder;      // delta: upper bound on |d(h')| for h' in [0, h]
};

namespace detail {

inline Interval inflate(const Interval& x) {
  const double pad = 0.125 * width(x) + 1e-12;
  return Interval(next_down(x.lo() - pad), next_up(x.hi() + pad));
}

// Enclosure of g(a, h) = (1 - e^{-a h}) / a, the constant-coefficient
// response factor; g(0, h) = h, and 0 <= g <= h for a >= 0.
inline Interval response_factor(double a, double h) {
  if (a == 0.0) return Interval(h);
  const Interval raw = div_checked(
      sub(Interval(1.0), realind::exp(neg(mul(Interval(a), Interval(h))))), Interval(a));
  return Interval(std::max(0.0, raw.lo()), std::min(raw.hi(), next_up(h)));
}

}  // namespace detail

// One validated step. Returns nullopt when no trajectory box absorbs the
// Picard image after inflation retries (caller halves h). Throws
// CoefficientDomainError when a coefficient enclosure breaks its sign
// precondition on the step box.
inline std::optional<ValidatedStep> enclose_step(const SolutionEnclosure& enc, double h,
                                                 const Ivp& ivp) {
  if (!(h > 0.0)) throw InvalidInputError("step size must be positive");
  const Interval tbox(enc.time, enc.time + h);
  const Interval alpha_range = ivp.alpha.enclose(tbox);
  const Interval beta_range = ivp.beta.enclose(tbox);
  if (alpha_range.lo() < 0.0)
    throw CoefficientDomainError("alpha enclosure dips below zero on the step box");
  if (!(beta_range.lo() > 0.0))
    throw CoefficientDomainError("beta enclosure is not strictly positive on the step box");

  const auto g = [&](const Interval& y) { return sub(beta_range, mul(alpha_range, y)); };
  const Interval span(0.0, h);
  try {
    Interval box = add(enc.value, mul(span, g(enc.value)));
    for (int attempt = 0; attempt < 24; ++attempt) {
      const Interval image = add(enc.value, mul(span, g(box)));
      if (subset(image, box)) {
        const Interval flow = g(image);
        Interval next_value = add(enc.value, mul(Interval(h), flow));
        if (enc.value.lo() >= 0.0) {
          // The first-order endpoint update compounds the enclosure width by
          // e^T over a long horizon because the damping term enters with the
          // wrong sign. With a nonnegative start the frozen-coefficient
          // comparison solutions bound the flow from both sides:
          //   f(c+h) in [ f_lo e^{-a_hi h} + b_lo g(a_hi, h),
          //               f_hi e^{-a_lo h} + b_hi g(a_lo, h) ]
          // (the flow is antitone in alpha and monotone in beta while the
          // solution stays nonnegative, which beta > 0 guarantees here).
          const Interval decay_fast =
              realind::exp(neg(mul(Interval(h), Interval(alpha_range.hi()))));
          const Interval decay_slow =
              realind::exp(neg(mul(Interval(h), Interval(alpha_range.lo()))));
          const double lower = add(mul(Interval(enc.value.lo()), decay_fast),
                                   mul(Interval(beta_range.lo()),
                                       detail::response_factor(alpha_range.hi(), h)))
                                   .lo();
          const double upper = add(mul(Interval(enc.value.hi()), decay_slow),
                                   mul(Interval(beta_range.hi()),
                                       detail::response_factor(alpha_range.lo(), h)))
                                   .hi();
          next_value = intersect(next_value, Interval(lower, upper));
          next_value = intersect(next_value, image);
        }
        return ValidatedStep{SolutionEnclosure{enc.time + h, next_value, image}, flow,
                             alpha_range, beta_range, width(flow)};
      }
      box = detail::inflate(hull(box, image));
    }
  } catch (const DomainError&) {
    // endpoint overflow while the box diverges: same outcome as no fixpoint
  }
  return std::nullopt;
}

struct StepPositivity {
  bool ok = false;
  std::string reason;
};

// The positivity side condition, evaluated in interval arithmetic so a pass
// is rigorous.
inline StepPositivity positivity_condition(const Interval& value_at_c, double h,
                                           const ValidatedStep& step) {
  if (value_at_c.lo() < 0.0) return {false, "frontier enclosure dips below zero"};
  const Interval damping = sub(Interval(1.0), mul(Interval(h), Interval(step.alpha_range.hi())));
  if (damping.lo() < 0.0) return {false, "1 - h*alpha_hi < 0"};
  const Interval bound =
      add(mul(Interval(value_at_c.lo()), damping),
          mul(Interval(h), sub(Interval(step.beta_range.lo()), Interval(step.remainder))));
  if (bound.lo() < 0.0) return {false, "positivity bound not established"};
  return {true, {}};
}

// Step oracle realizing the hereditary step of the positivity argument:
// search a geometric grid h0, h0/2, ... for the largest h whose step both
// validates and keeps the solution provably nonnegative across the step.
class PositivityOracle final : public StepOracle {
 public:
  explicit PositivityOracle(Ivp ivp, double h0 = 0.0, double h_min = 1e-12)
      : ivp_(std::move(ivp)),
        state_{ivp_.start, Interval(ivp_.initial), Interval(ivp_.initial)},
        h_min_(h_min) {
    h0_ = h0 > 0.0 ? h0 : std::min(0.1, (ivp_.horizon - ivp_.start) / 10.0);
    if (!(h0_ > 0.0)) h0_ = 0.1;
  }

  StepResult propose(double frontier) override {
    if (frontier != state_.time)
      return GiveUp{"frontier desynchronized from the enclosure state"};
    for (double h = h0_; h >= h_min_; h *= 0.5) {
      auto attempt = try_step(h);
      if (!attempt) continue;
      pending_ = attempt->next;
      return Step{h, make_cert(h, *attempt)};
    }
    return GiveUp{"no step above h_min keeps the solution provably nonnegative"};
  }

  std::optional<Certificate> certify_jump(double from, double to) override {
    if (from != state_.time) return std::nullopt;
    const double h = to - from;
    if (!(h > 0.0)) return std::nullopt;
    auto attempt = try_step(h);
    if (!attempt) return std::nullopt;
    pending_ = attempt->next;
    return make_cert(h, *attempt);
  }

  void on_accept(double from, double to) override {
    (void)from;
    if (pending_ && pending_->time == to) state_ = *pending_;
    pending_.reset();
  }

  const SolutionEnclosure& state() const { return state_; }

 private:
  std::optional<ValidatedStep> try_step(double h) {
    auto step = enclose_step(state_, h, ivp_);
    if (!step) return std::nullopt;
    if (!positivity_condition(state_.value, h, *step).ok) return std::nullopt;
    return step;
  }

  Certificate make_cert(double h, const ValidatedStep& step) const {
    return AnalyticCert{kOdeStepTag,
                        {{"h", h},
                         {"f_lo", state_.value.lo()},
                         {"f_hi", state_.value.hi()},
                         {"box_lo", step.next.step_box.lo()},
                         {"box_hi", step.next.step_box.hi()},
                         {"alpha_hi", step.alpha_range.hi()},
                         {"beta_lo", step.beta_range.lo()},
                         {"delta", step.remainder},
                         {"end_lo", step.next.value.lo()},
                         {"end_hi", step.next.value.hi()}}};
  }

  Ivp ivp_;
  SolutionEnclosure state_;
  double h0_;
  double h_min_;
  std::optional<SolutionEnclosure> pending_;
};

// Certify f >= 0 on [a, T] by running the induction sweep with the
// positivity oracle. `reached` status means the bound is established on the
// whole horizon.
inline ProofTrace verify_nonnegative(const Ivp& ivp, const SweepPolicy& policy = {},
                                     double h0 = 0.0, double h_min = 1e-12) {
  if (!ivp.alpha.rigorous() || !ivp.beta.rigorous())
    throw InvalidInputError("rigorous verification needs term-backed coefficients");
  PositivityOracle oracle(ivp, h0, h_min);
  const ProblemDesc problem =
      OdeProblem{ivp.alpha.term(), ivp.beta.term(), ivp.alpha.var(), ivp.initial};
  return sweep(problem, ivp.start, ivp.horizon, oracle, policy);
}

// Classical fourth-order integration of the same equation; a deterministic,
// non-rigorous cross-check (and plot feed). Works with callback coefficients
// and does not screen coefficient signs.
inline std::vector<std::pair<double, double>> solve_rk4(const Ivp& ivp, double dt) {
  if (!(dt > 0.0)) throw InvalidInputError("dt must be positive");
  const auto rhs = [&](double t, double y) { return -ivp.alpha(t) * y + ivp.beta(t); };
  std::vector<std::pair<double, double>> out;
  double t = ivp.start;
  double y = ivp.initial;
  out.push_back({t, y});
  while (t < ivp.horizon) {
    const double h = std::min(dt, ivp.horizon - t);
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    out.push_back({t, y});
  }
  return out;
}

// Replay the analytic-certificate chain of an ode trace from scratch: fresh
// coefficient enclosures, fresh Picard validation and fresh positivity
// bounds over the stored step grid. Stored payload numbers are reporting
// data, not trusted inputs.
inline TraceCheckReport check_ode_chain(const ProofTrace& trace) {
  const auto* prob = std::get_if<OdeProblem>(&trace.problem);
  if (!prob) return {false, false, -1, "trace problem is not an ode problem"};
  Ivp ivp(trace.start, prob->initial, CoeffFn::from_term(prob->alpha, prob->var),
          CoeffFn::from_term(prob->beta, prob->var), trace.target);
  SolutionEnclosure enc{trace.start, Interval(prob->initial), Interval(prob->initial)};
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const TraceNode& node = trace.nodes[i];
    const auto* cert = std::get_if<AnalyticCert>(&node.cert);
    if (!cert || cert->tag != kOdeStepTag)
      return {false, true, static_cast<std::ptrdiff_t>(i),
              "node does not carry an ode step certificate"};
    const double h = node.epsilon;
    std::optional<ValidatedStep> step;
    try {
      step = enclose_step(enc, h, ivp);
    } catch (const Error& e) {
      return {false, true, static_cast<std::ptrdiff_t>(i),
              std::string("replay failed: ") + e.what()};
    }
    if (!step)
      return {false, true, static_cast<std::ptrdiff_t>(i),
              "step does not validate on replay"};
    const StepPositivity pos = positivity_condition(enc.value, h, *step);
    if (!pos.ok)
      return {false, true, static_cast<std::ptrdiff_t>(i), "replay: " + pos.reason};
    enc = step->next;
  }
  return {true, true, -1, {}};
}

}  // namespace realind
