// Planar motion at constant speed with a bounded turn rate, and the
// minimum-distance envelope attained by the constant-max-turn circle.
//
//   x' = v cos(theta),  y' = v sin(theta),  theta' = u(t),  |u| <= rho
//
// The module simulates trajectories under piecewise-constant turn-rate
// controls, checks the polar-coordinate invariants that drive the envelope
// argument, searches bang-bang controls for envelope violations, and
// replays the reduction of envelope dominance to scalar ODE positivity in
// numeric-witness mode.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "realind/errors.hpp"
#include "realind/ode.hpp"
#include "realind/sweep.hpp"

namespace realind {

struct Params {
  double v;    // speed
  double rho;  // max |theta'|
};

struct ControlPiece {
  double duration;
  double u;
};

struct Control {
  double theta0 = 0.0;
  std::vector<ControlPiece> pieces;
};

inline Control constant_control(double u, double duration, double theta0 = 0.0) {
  return Control{theta0, {{duration, u}}};
}

struct TrajectorySample {
  double t;
  double x, y;
  double theta;
  double R;          // distance to the origin
  double alpha_pol;  // polar angle of the position
  double Rp;         // R' = v cos(theta - alpha_pol); NaN while undefined
  double alphap;     // alpha' = v sin(theta - alpha_pol) / R; NaN while undefined
};

namespace detail {

struct KinState {
  double x, y, theta;
};

inline void rk4_kin(KinState& s, double v, double u, double h) {
  // theta advances linearly, so the stages use exact headings
  const auto dx = [&](double th) { return v * std::cos(th); };
  const auto dy = [&](double th) { return v * std::sin(th); };
  const double th0 = s.theta;
  const double th1 = s.theta + 0.5 * h * u;
  const double th2 = s.theta + h * u;
  s.x += h / 6.0 * (dx(th0) + 4.0 * dx(th1) + dx(th2));
  s.y += h / 6.0 * (dy(th0) + 4.0 * dy(th1) + dy(th2));
  s.theta += h * u;
}

}  // namespace detail

// Integrate the motion and sample it at multiples of dt. Substeps are split
// at control switch times so each RK4 step sees a constant turn rate.
inline std::vector<TrajectorySample> simulate(const Params& p, const Control& c, double T,
                                              double dt) {
  if (!(p.v > 0.0) || !(p.rho > 0.0)) throw InvalidInputError("v and rho must be positive");
  if (!(T > 0.0) || !(dt > 0.0)) throw InvalidInputError("T and dt must be positive");
  double total = 0.0;
  for (const auto& piece : c.pieces) {
    if (!(piece.duration > 0.0)) throw InvalidInputError("control piece duration must be positive");
    if (std::fabs(piece.u) > p.rho)
      throw ControlBoundViolated("turn rate " + std::to_string(piece.u) +
                                 " exceeds the bound " + std::to_string(p.rho));
    total += piece.duration;
  }
  if (total + 1e-12 < T) throw ControlTooShort("control covers only [0, " + std::to_string(total) + ")");

  std::vector<double> switches;  // cumulative switch times inside (0, T)
  {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < c.pieces.size(); ++i) {
      acc += c.pieces[i].duration;
      if (acc < T) switches.push_back(acc);
    }
  }
  const auto turn_rate_at = [&](double t) {
    double acc = 0.0;
    for (const auto& piece : c.pieces) {
      acc += piece.duration;
      if (t < acc) return piece.u;
    }
    return c.pieces.back().u;
  };

  const double t_min = 10.0 * dt;
  const auto n_samples = static_cast<std::size_t>(std::floor(T / dt * (1.0 + 1e-12)));
  std::vector<TrajectorySample> out;
  out.reserve(n_samples + 1);

  detail::KinState s{0.0, 0.0, c.theta0};
  const auto push_sample = [&](double t) {
    TrajectorySample smp{};
    smp.t = t;
    smp.x = s.x;
    smp.y = s.y;
    smp.theta = s.theta;
    smp.R = std::hypot(s.x, s.y);
    smp.alpha_pol = (smp.R > 0.0) ? std::atan2(s.y, s.x) : 0.0;
    if (t > t_min && smp.R > 1e-12) {
      smp.Rp = p.v * std::cos(s.theta - smp.alpha_pol);
      smp.alphap = p.v * std::sin(s.theta - smp.alpha_pol) / smp.R;
    } else {
      smp.Rp = std::numeric_limits<double>::quiet_NaN();
      smp.alphap = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(smp);
  };

  push_sample(0.0);
  std::size_t next_switch = 0;
  for (std::size_t k = 1; k <= n_samples; ++k) {
    const double t0 = (k - 1) * dt;
    const double t1 = k * dt;
    double t = t0;
    while (t < t1) {
      double stop = t1;
      while (next_switch < switches.size() && switches[next_switch] <= t) ++next_switch;
      if (next_switch < switches.size() && switches[next_switch] < stop)
        stop = switches[next_switch];
      const double h = stop - t;
      if (!(h > 0.0)) break;
      detail::rk4_kin(s, p.v, turn_rate_at(0.5 * (t + stop)), h);
      t = stop;
    }
    push_sample(t1);
  }
  return out;
}

// Minimum-distance envelope (2v/rho) |sin(rho t / 2)|, the distance reached
// by the constant-max-turn circle; defined on [0, 2*pi/rho] (beyond that the
// point can close a full circle and return to the origin).
inline double envelope(const Params& p, double t) {
  const double limit = 2.0 * std::numbers::pi / p.rho;
  if (t < 0.0 || t > limit)
    throw DomainError("envelope is defined for t in [0, 2*pi/rho]");
  return (2.0 * p.v / p.rho) * std::fabs(std::sin(0.5 * p.rho * t));
}

struct LemmaReport {
  double max_identity_residual = 0.0;  // |(R alpha')^2 + R'^2 - v^2|
  double max_abs_alphap = 0.0;         // expect <= rho/2 below the proof horizon
  double min_rp = std::numeric_limits<double>::infinity();  // expect > 0 there
  double max_rp_fd_residual = 0.0;     // |R' - finite-difference dR/dt|
  std::size_t checked = 0;             // samples with defined polar rates, t < 2/rho
  std::size_t skipped = 0;             // samples beyond the proof horizon
};

inline LemmaReport check_lemma_invariants(const std::vector<TrajectorySample>& samples,
                                          const Params& p) {
  LemmaReport rep;
  if (samples.size() < 2) return rep;
  const double dt = samples[1].t - samples[0].t;
  const double horizon = 2.0 / p.rho;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (std::isnan(s.Rp) || std::isnan(s.alphap)) continue;
    if (!(s.t < horizon)) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    const double identity = (s.R * s.alphap) * (s.R * s.alphap) + s.Rp * s.Rp - p.v * p.v;
    rep.max_identity_residual = std::max(rep.max_identity_residual, std::fabs(identity));
    rep.max_abs_alphap = std::max(rep.max_abs_alphap, std::fabs(s.alphap));
    rep.min_rp = std::min(rep.min_rp, s.Rp);
    if (i > 0 && i + 1 < samples.size() && !std::isnan(samples[i - 1].Rp) &&
        !std::isnan(samples[i + 1].Rp)) {
      const double fd = (samples[i + 1].R - samples[i - 1].R) / (2.0 * dt);
      rep.max_rp_fd_residual = std::max(rep.max_rp_fd_residual, std::fabs(s.Rp - fd));
    }
  }
  return rep;
}

struct EnvelopeReport {
  double min_margin = std::numeric_limits<double>::infinity();
  double argmin_t = 0.0;
  Control control;                 // control attaining the minimum margin
  long control_index = -1;         // 0: straight baseline, 1: circle baseline, 2+: random
  unsigned controls_evaluated = 0;
  unsigned n = 0;
  std::uint64_t seed = 0;
  double T = 0.0, dt = 0.0;
  bool rigorous = false;           // sampled margins only
  std::vector<std::pair<double, double>> worst_margins;  // (t, margin) of the argmin control
};

namespace detail {

inline Control random_bang_bang(std::mt19937_64& rng, const Params& p, double T,
                                unsigned pieces, double dt) {
  std::uniform_real_distribution<double> unif(0.0, T);
  std::uniform_int_distribution<int> level(-1, 1);
  std::vector<double> cuts;
  for (unsigned i = 0; i + 1 < pieces; ++i) cuts.push_back(unif(rng));
  std::sort(cuts.begin(), cuts.end());
  Control c;
  double prev = 0.0;
  for (double cut : cuts) {
    if (cut - prev > 1e-9) {
      c.pieces.push_back({cut - prev, level(rng) * p.rho});
      prev = cut;
    } else {
      (void)level(rng);  // keep the stream aligned regardless of the cut layout
    }
  }
  c.pieces.push_back({T - prev + dt, level(rng) * p.rho});
  return c;
}

}  // namespace detail

// Seeded random search over bang-bang controls (values in {-rho, 0, +rho})
// plus the straight-line and circle baselines; reports the minimum of
// R(t) - envelope(t) over all samples with t in (0, T].
inline EnvelopeReport adversarial_search(const Params& p, unsigned n, std::uint64_t seed,
                                         double T, double dt, unsigned pieces = 4,
                                         bool conjecture_horizon = false) {
  const double horizon = conjecture_horizon ? 2.0 * std::numbers::pi / p.rho : 2.0 / p.rho;
  if (!(T < horizon))
    throw InvalidInputError(conjecture_horizon
                                ? "T must stay below the conjecture horizon 2*pi/rho"
                                : "T must stay below the proof horizon 2/rho");
  if (pieces == 0) throw InvalidInputError("piece count must be positive");

  std::mt19937_64 rng(seed);
  std::vector<Control> controls;
  controls.push_back(constant_control(0.0, T + dt));
  controls.push_back(constant_control(p.rho, T + dt));
  for (unsigned i = 0; i < n; ++i)
    controls.push_back(detail::random_bang_bang(rng, p, T, pieces, dt));

  EnvelopeReport rep;
  rep.n = n;
  rep.seed = seed;
  rep.T = T;
  rep.dt = dt;
  for (std::size_t idx = 0; idx < controls.size(); ++idx) {
    const auto samples = simulate(p, controls[idx], T, dt);
    for (std::size_t k = 1; k < samples.size(); ++k) {
      const double margin = samples[k].R - envelope(p, samples[k].t);
      if (margin < rep.min_margin) {
        rep.min_margin = margin;
        rep.argmin_t = samples[k].t;
        rep.control_index = static_cast<long>(idx);
      }
    }
    ++rep.controls_evaluated;
  }
  if (rep.control_index >= 0) {
    rep.control = controls[static_cast<std::size_t>(rep.control_index)];
    const auto samples = simulate(p, rep.control, T, dt);
    rep.worst_margins.reserve(samples.size() - 1);
    for (std::size_t k = 1; k < samples.size(); ++k)
      rep.worst_margins.push_back({samples[k].t, samples[k].R - envelope(p, samples[k].t)});
  }
  return rep;
}

// Numeric replay of the reduction of envelope dominance to ODE positivity.
// With rho' = rho + eps and F_eps(t) = (2v/rho') |sin(rho' t / 2)|, the gap
// S = R - F_eps satisfies S' = -A S + B with
//   A = alpha'^2 (R + F_eps) / (R' + F_eps'),
//   B = ((rho'/2)^2 - alpha'^2) F_eps^2 / (R' + F_eps'),
// so S >= 0 follows from the positivity argument once A >= 0 and B > 0. The
// coefficients come from simulated data, hence the run is witness-mode and
// the resulting trace is flagged non-rigorous.
struct EnvelopeReduction {
  ProofTrace trace;
  std::vector<double> t;  // sample times with defined coefficients
  std::vector<double> s;  // gap S at those times
  std::vector<double> a;  // decay coefficient A
  std::vector<double> b;  // forcing coefficient B
  double min_a = std::numeric_limits<double>::infinity();
  double min_b = std::numeric_limits<double>::infinity();
  double min_denominator = std::numeric_limits<double>::infinity();
};

namespace detail {

class SampledWitnessOracle final : public StepOracle {
 public:
  SampledWitnessOracle(std::vector<double> times, std::vector<double> values,
                       std::vector<double> decay, std::vector<double> forcing,
                       double tolerance, std::size_t stride)
      : times_(std::move(times)),
        values_(std::move(values)),
        decay_(std::move(decay)),
        forcing_(std::move(forcing)),
        tol_(tolerance),
        stride_(std::max<std::size_t>(1, stride)) {}

  StepResult propose(double frontier) override {
    const std::size_t i0 = index_of(frontier);
    if (i0 + 1 >= times_.size()) {
      // rounding in the frontier accumulation can stop an ulp short of the
      // last sample; the residual difference is exact, so one closing step
      // with the final sample as evidence finishes the sweep
      const double rest = times_.back() - frontier;
      if (!(rest > 0.0)) return GiveUp{"no samples remain past the frontier"};
      NumericWitnessCert cert{{{times_.back(), values_.back()}}};
      return Step{rest, Certificate(std::move(cert))};
    }
    if (std::fabs(times_[i0] - frontier) > 0.25 * grid_step())
      return GiveUp{"frontier left the sample grid"};
    std::size_t i1 = std::min(times_.size() - 1, i0 + stride_);
    // shrink the window until the damping factor of the step bound stays
    // nonnegative, mirroring the "h small enough" side condition
    while (i1 > i0 + 1) {
      const double h = times_[i1] - times_[i0];
      if (1.0 - h * window_max(decay_, i0, i1) >= 0.0) break;
      i1 = i0 + (i1 - i0) / 2;
    }
    const double h = times_[i1] - times_[i0];
    const double damping = 1.0 - h * window_max(decay_, i0, i1);
    const double bound = values_[i0] * damping + h * window_min(forcing_, i0, i1);
    if (damping < 0.0 || bound < -tol_)
      return GiveUp{"step bound fails at t = " + std::to_string(times_[i0])};
    NumericWitnessCert cert;
    for (std::size_t j = i0; j <= i1; ++j) {
      if (!(values_[j] >= -tol_))
        return GiveUp{"sampled gap dips below tolerance at t = " + std::to_string(times_[j])};
      cert.samples.push_back({times_[j], values_[j]});
    }
    return Step{h, Certificate(std::move(cert))};
  }

 private:
  double grid_step() const { return times_.size() > 1 ? times_[1] - times_[0] : 1.0; }

  std::size_t index_of(double t) const {
    const double step = grid_step();
    const auto idx = static_cast<std::ptrdiff_t>(std::llround((t - times_[0]) / step));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        idx, 0, static_cast<std::ptrdiff_t>(times_.size()) - 1));
  }

  static double window_max(const std::vector<double>& v, std::size_t i0, std::size_t i1) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = i0; j <= i1; ++j) m = std::max(m, v[j]);
    return m;
  }

  static double window_min(const std::vector<double>& v, std::size_t i0, std::size_t i1) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = i0; j <= i1; ++j) m = std::min(m, v[j]);
    return m;
  }

  std::vector<double> times_, values_, decay_, forcing_;
  double tol_;
  std::size_t stride_;
};

}  // namespace detail

inline EnvelopeReduction envelope_comparison_via_positivity(const Params& p, const Control& c,
                                                            double eps, double T, double dt,
                                                            double d_min = 1e-6,
                                                            double tolerance = 1e-9) {
  if (!(eps > 0.0)) throw InvalidInputError("eps must be positive");
  if (!(T < 2.0 / p.rho)) throw InvalidInputError("T must stay below the proof horizon 2/rho");
  const double rho2 = p.rho + eps;
  if (!(T < std::numbers::pi / rho2))
    throw InvalidInputError("eps pushes the inflated envelope past its monotone arc");

  const auto samples = simulate(p, c, T, dt);
  const double t_min = 10.0 * dt;
  const auto f_eps = [&](double t) {
    return (2.0 * p.v / rho2) * std::fabs(std::sin(0.5 * rho2 * t));
  };
  const auto f_eps_prime = [&](double t) { return p.v * std::cos(0.5 * rho2 * t); };

  const std::size_t n = samples.size();
  std::vector<double> times(n), gap(n), decay(n), forcing(n);
  std::ptrdiff_t first_valid = -1;
  EnvelopeReduction red;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    times[i] = s.t;
    gap[i] = s.R - f_eps(s.t);
    if (std::isnan(s.Rp) || s.t <= t_min) continue;
    const double denom = s.Rp + f_eps_prime(s.t);
    red.min_denominator = std::min(red.min_denominator, denom);
    if (!(denom >= d_min))
      throw DenominatorTooSmallError("R' + F_eps' fell to " + std::to_string(denom) +
                                     " at t = " + std::to_string(s.t));
    const double fe = f_eps(s.t);
    const double a_i = s.alphap * s.alphap * (s.R + fe) / denom;
    const double b_i = (0.25 * rho2 * rho2 - s.alphap * s.alphap) * fe * fe / denom;
    if (!(a_i >= 0.0))
      throw CoefficientSignViolation("decay coefficient A(t) >= 0 fails at t = " +
                                     std::to_string(s.t));
    if (!(b_i > 0.0))
      throw CoefficientSignViolation("forcing coefficient B(t) > 0 fails at t = " +
                                     std::to_string(s.t));
    decay[i] = a_i;
    forcing[i] = b_i;
    if (first_valid < 0) first_valid = static_cast<std::ptrdiff_t>(i);
    red.t.push_back(s.t);
    red.s.push_back(gap[i]);
    red.a.push_back(a_i);
    red.b.push_back(b_i);
    red.min_a = std::min(red.min_a, a_i);
    red.min_b = std::min(red.min_b, b_i);
  }
  if (first_valid < 0)
    throw InvalidInputError("no samples past t_min; decrease dt or extend T");
  // the polar rates are undefined near the origin: extend the coefficients
  // constantly onto the initial samples
  for (std::ptrdiff_t i = 0; i < first_valid; ++i) {
    decay[static_cast<std::size_t>(i)] = decay[static_cast<std::size_t>(first_valid)];
    forcing[static_cast<std::size_t>(i)] = forcing[static_cast<std::size_t>(first_valid)];
  }

  const std::size_t stride = std::max<std::size_t>(1, n / 64);
  detail::SampledWitnessOracle oracle(times, gap, decay, forcing, tolerance, stride);
  const ProblemDesc problem = WitnessProblem{
      "envelope gap S = R - F_eps tracked along sampled coefficients", tolerance};
  red.trace = sweep(problem, times.front(), times.back(), oracle,
                    SweepPolicy{.max_steps = static_cast<std::int64_t>(4 * n + 16)});
  return red;
}

}  // namespace realind
