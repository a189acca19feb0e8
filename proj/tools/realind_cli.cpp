// Command-line front end.
//
//   realind sweep      --pred FILE --oracle SPEC --from A --to X
//   realind ode        --alpha TERM --beta TERM --b B --from A --to T
//   realind kin-sim    --v V --rho R --control SPEC --T T --dt DT
//   realind kin-search --v V --rho R --T T --dt DT --n N --seed S
//   realind kin-reduce --v V --rho R --control SPEC --eps E --T T --dt DT
//   realind check      TRACE.json
//
// Exit codes: 0 success/verified, 2 domain failure, 1 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "realind/realind.hpp"

namespace {

using namespace realind;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string out_dir_default() {
  if (const char* env = std::getenv("REALIND_OUT")) return env;
  return ".";
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

struct PolicyFlags {
  SweepPolicy policy;

  void attach(CLI::App* cmd) {
    cmd->add_option("--stall-window", policy.stall_window,
                    "steps of shrinking size before a limit proposal")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stall-threshold", policy.stall_threshold,
                    "step size below which the sweep counts as stalling")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-steps", policy.max_steps, "successor-step budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-limit-nodes", policy.max_limit_nodes,
                    "limit-node budget (ordinal cap w*k)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eval-depth", policy.budget.max_depth,
                    "bisection depth per quantifier / step evaluation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eval-boxes", policy.budget.max_boxes,
                    "leaf-box budget per quantifier")
        ->check(CLI::PositiveNumber);
  }
};

std::unique_ptr<StepOracle> make_dsl_oracle(const std::string& spec, const PredPtr& pred,
                                            const std::string& var, const EvalBudget& budget) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const") {
    const double eps = std::stod(rest);
    if (!(eps > 0)) throw InvalidInputError("const oracle needs a positive step");
    return std::make_unique<ConstEpsOracle>(eps, pred, var, budget);
  }
  if (kind == "affine") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw InvalidInputError("affine oracle spec is affine:k,m for f(c) = (k+c)/m");
    const double k = std::stod(rest.substr(0, comma));
    const double m = std::stod(rest.substr(comma + 1));
    if (m == 0) throw InvalidInputError("affine oracle divisor must be nonzero");
    return std::make_unique<AffineMapOracle>(k, m, pred, var, budget);
  }
  if (kind == "table") {
    std::ifstream in(rest);
    if (!in) throw Error("cannot read oracle table '" + rest + "'");
    std::vector<std::pair<double, double>> rows;
    double c = 0, eps = 0;
    while (in >> c >> eps) rows.push_back({c, eps});
    if (rows.empty()) throw InvalidInputError("oracle table is empty");
    return std::make_unique<TableOracle>(std::move(rows), pred, var, budget);
  }
  throw InvalidInputError("unknown oracle '" + kind + "' (const:EPS, affine:K,M, table:FILE)");
}

Control parse_control(const std::string& spec, double theta0) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  Control c;
  c.theta0 = theta0;
  if (kind == "const") {
    c.pieces.push_back({1e9, std::stod(rest)});  // effectively unbounded piece
    return c;
  }
  if (kind == "pieces") {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto sep = item.find(':');
      if (sep == std::string::npos)
        throw InvalidInputError("control piece must be DURATION:TURN_RATE");
      c.pieces.push_back({std::stod(item.substr(0, sep)), std::stod(item.substr(sep + 1))});
    }
    if (c.pieces.empty()) throw InvalidInputError("control has no pieces");
    return c;
  }
  throw InvalidInputError("unknown control '" + kind + "' (const:U or pieces:D:U,D:U,...)");
}

void report_trace(const ProofTrace& trace) {
  std::cout << "status: " << (trace.reached() ? "reached" : "failed") << '\n';
  if (!trace.reached())
    std::cout << "  at " << format_double(trace.failure->at) << ": " << trace.failure->reason
              << '\n';
  std::cout << "nodes: " << trace.nodes.size() << '\n';
  std::cout << "ordinal: " << to_string(ordinal_of(trace)) << '\n';
  std::cout << "rigorous: " << (trace.rigorous() ? "yes" : "no") << '\n';
}

int cmd_sweep(const std::string& pred_path, const std::string& oracle_spec, double from,
              double to, const SweepPolicy& policy, const std::string& out_dir, bool csv) {
  const PredPtr pred = parse(read_file(pred_path));
  const auto vars = free_vars(pred);
  if (vars.size() > 1)
    throw InvalidInputError("sweep predicate must use a single free variable");
  const std::string var = vars.empty() ? "x" : *vars.begin();
  auto oracle = make_dsl_oracle(oracle_spec, pred, var, policy.budget);
  const ProofTrace trace = sweep(DslProblem{pred, var}, from, to, *oracle, policy);
  save_trace(out_path(out_dir, "trace.json"), trace);
  if (csv) write_nodes_csv(out_path(out_dir, "trace.csv"), trace);
  report_trace(trace);
  return trace.reached() ? 0 : 2;
}

int cmd_ode(const std::string& alpha, const std::string& beta, double b, double from,
            double to, double h0, double h_min, double dt, const SweepPolicy& policy,
            const std::string& out_dir, bool csv) {
  const Ivp ivp = make_ivp(alpha, beta, b, from, to);
  const ProofTrace trace = verify_nonnegative(ivp, policy, h0, h_min);
  save_trace(out_path(out_dir, "trace.json"), trace);
  if (csv) write_nodes_csv(out_path(out_dir, "trace.csv"), trace);

  // dense non-rigorous cross-check
  const auto rk4 = solve_rk4(ivp, dt);
  double min_f = rk4.front().second;
  for (const auto& [t, f] : rk4) min_f = std::min(min_f, f);
  if (csv) {
    std::ofstream out(out_path(out_dir, "rk4.csv"));
    out << "t,f\n";
    for (const auto& [t, f] : rk4) out << format_double(t) << ',' << format_double(f) << '\n';
    std::ofstream enc(out_path(out_dir, "enclosure.csv"));
    enc << "t,f_lo,f_hi\n";
    enc << format_double(ivp.start) << ',' << format_double(ivp.initial) << ','
        << format_double(ivp.initial) << '\n';
    for (const auto& n : trace.nodes) {
      const auto& cert = std::get<AnalyticCert>(n.cert);
      enc << format_double(n.to) << ',' << format_double(cert.data.at("end_lo")) << ','
          << format_double(cert.data.at("end_hi")) << '\n';
    }
  }
  report_trace(trace);
  std::cout << "rk4 min f: " << format_double(min_f) << '\n';
  return trace.reached() ? 0 : 2;
}

int cmd_kin_sim(double v, double rho, double theta0, const std::string& control_spec,
                double T, double dt, const std::string& out_dir) {
  const Params p{v, rho};
  const Control c = parse_control(control_spec, theta0);
  const auto samples = simulate(p, c, T, dt);
  const double env_limit = 2.0 * std::numbers::pi / rho;
  std::ofstream out(out_path(out_dir, "trajectory.csv"));
  out << "t,x,y,theta,R,alpha_pol,Rp,alphap,F,margin\n";
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << format_double(s.theta) << ',' << format_double(s.R) << ','
        << format_double(s.alpha_pol) << ',';
    out << (std::isnan(s.Rp) ? "" : format_double(s.Rp)) << ','
        << (std::isnan(s.alphap) ? "" : format_double(s.alphap)) << ',';
    if (s.t <= env_limit) {
      const double f = envelope(p, s.t);
      out << format_double(f) << ',' << format_double(s.R - f) << '\n';
    } else {
      out << ",\n";
    }
  }
  std::cout << "samples: " << samples.size() << '\n';
  std::cout << "final R: " << format_double(samples.back().R) << '\n';
  return 0;
}

int cmd_kin_search(double v, double rho, double T, double dt, unsigned n, std::uint64_t seed,
                   unsigned pieces, bool conjecture, double fail_below,
                   const std::string& out_dir) {
  const Params p{v, rho};
  const auto rep = adversarial_search(p, n, seed, T, dt, pieces, conjecture);
  json control_pieces = json::array();
  for (const auto& piece : rep.control.pieces)
    control_pieces.push_back({piece.duration, piece.u});
  const json out = {{"min_margin", rep.min_margin},
                    {"argmin_t", rep.argmin_t},
                    {"control", {{"theta0", rep.control.theta0}, {"pieces", control_pieces}}},
                    {"control_index", rep.control_index},
                    {"controls_evaluated", rep.controls_evaluated},
                    {"n", rep.n},
                    {"seed", rep.seed},
                    {"T", rep.T},
                    {"dt", rep.dt},
                    {"rigorous", rep.rigorous}};
  {
    std::ofstream f(out_path(out_dir, "report.json"));
    f << out.dump(2) << '\n';
  }
  {
    std::ofstream f(out_path(out_dir, "worst.csv"));
    f << "t,margin\n";
    for (const auto& [t, m] : rep.worst_margins)
      f << format_double(t) << ',' << format_double(m) << '\n';
  }
  std::cout << "controls: " << rep.controls_evaluated << '\n';
  std::cout << "min margin: " << format_double(rep.min_margin) << " at t = "
            << format_double(rep.argmin_t) << '\n';
  if (rep.min_margin < fail_below) {
    std::cerr << "margin fell below " << format_double(fail_below) << '\n';
    return 2;
  }
  return 0;
}

int cmd_kin_reduce(double v, double rho, double theta0, const std::string& control_spec,
                   double eps, double T, double dt, const std::string& out_dir) {
  const Params p{v, rho};
  const Control c = parse_control(control_spec, theta0);
  const auto red = envelope_comparison_via_positivity(p, c, eps, T, dt);
  save_trace(out_path(out_dir, "trace.json"), red.trace);
  {
    std::ofstream f(out_path(out_dir, "reduction.csv"));
    f << "t,S,A,B\n";
    for (std::size_t i = 0; i < red.t.size(); ++i)
      f << format_double(red.t[i]) << ',' << format_double(red.s[i]) << ','
        << format_double(red.a[i]) << ',' << format_double(red.b[i]) << '\n';
  }
  report_trace(red.trace);
  std::cout << "min A: " << format_double(red.min_a) << ", min B: " << format_double(red.min_b)
            << ", min denominator: " << format_double(red.min_denominator) << '\n';
  return red.trace.reached() ? 0 : 2;
}

int cmd_check(const std::string& path) {
  const LoadedTrace loaded = load_trace(path);
  if (!loaded.integrity_ok) {
    std::cout << "FAIL: integrity digest mismatch (file was edited)\n";
    return 2;
  }
  if (!loaded.metadata_ok) {
    std::cout << "FAIL: stored ordinal/rigor metadata disagrees with the nodes\n";
    return 2;
  }
  const auto report = check_trace(loaded.trace);
  if (!report.ok) {
    std::cout << "FAIL";
    if (report.failed_node >= 0) std::cout << " at node " << report.failed_node;
    std::cout << ": " << report.message << '\n';
    return 2;
  }
  std::cout << report.message << " (" << loaded.trace.nodes.size() << " nodes, ordinal "
            << to_string(ordinal_of(loaded.trace)) << ")\n";
  return report.rigorous ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"validated real-induction toolkit"};
  app.require_subcommand(1);

  std::string out_dir = out_dir_default();
  app.add_option("--out", out_dir, "output directory (default $REALIND_OUT or .)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep",
      "run a real-induction sweep on a predicate; writes trace.json and trace.csv "
      "(index,kind,from,to,epsilon,cert_kind)");
  std::string pred_path, oracle_spec;
  double from = 0.0, to = 1.0;
  bool no_csv = false;
  PolicyFlags sweep_policy;
  sweep_cmd->add_option("--pred", pred_path, "predicate file (.pred)")->required();
  sweep_cmd->add_option("--oracle", oracle_spec, "const:EPS | affine:K,M | table:FILE")->required();
  sweep_cmd->add_option("--from", from, "start point")->required();
  sweep_cmd->add_option("--to", to, "target")->required();
  sweep_cmd->add_flag("--no-csv", no_csv, "skip the node CSV");
  sweep_policy.attach(sweep_cmd);

  // ode
  auto* ode_cmd = app.add_subcommand("ode",
      "certify f >= 0 for f' = -alpha f + beta; writes trace.json/.csv, "
      "enclosure.csv (t,f_lo,f_hi) and rk4.csv (t,f)");
  std::string alpha_text, beta_text;
  double ode_b = 0.0, ode_from = 0.0, ode_to = 1.0, ode_h0 = 0.0, ode_hmin = 1e-12,
         ode_dt = 1e-3;
  bool ode_no_csv = false;
  PolicyFlags ode_policy;
  ode_cmd->add_option("--alpha", alpha_text, "coefficient term, e.g. \"1\" or \"abs(sin(x))\"")
      ->required();
  ode_cmd->add_option("--beta", beta_text, "coefficient term, must stay positive")->required();
  ode_cmd->add_option("--b", ode_b, "initial value (>= 0)")->required();
  ode_cmd->add_option("--from", ode_from, "start point")->required();
  ode_cmd->add_option("--to", ode_to, "horizon")->required();
  ode_cmd->add_option("--h0", ode_h0, "trial step (default min(0.1, span/10))");
  ode_cmd->add_option("--h-min", ode_hmin, "give up below this step size");
  ode_cmd->add_option("--dt", ode_dt, "rk4 cross-check step");
  ode_cmd->add_flag("--no-csv", ode_no_csv, "skip CSV outputs");
  ode_policy.attach(ode_cmd);

  // kin-sim
  auto* sim_cmd = app.add_subcommand("kin-sim",
      "simulate a bounded-turn-rate trajectory; writes trajectory.csv "
      "(t,x,y,theta,R,alpha_pol,Rp,alphap,F,margin)");
  double v = 1.0, rho = 1.0, theta0 = 0.0, T = 1.0, dt = 1e-3;
  std::string control_spec = "const:0";
  sim_cmd->add_option("--v", v, "speed")->required();
  sim_cmd->add_option("--rho", rho, "turn-rate bound")->required();
  sim_cmd->add_option("--theta0", theta0, "initial heading");
  sim_cmd->add_option("--control", control_spec, "const:U or pieces:D:U,D:U,...");
  sim_cmd->add_option("--T", T, "horizon")->required();
  sim_cmd->add_option("--dt", dt, "sample step");

  // kin-search
  auto* search_cmd =
      app.add_subcommand("kin-search",
      "adversarial search for envelope violations; writes report.json and "
      "worst.csv (t,margin)");
  double s_v = 1.0, s_rho = 1.0, s_T = 1.999, s_dt = 1e-3, fail_below = -1e-6;
  unsigned s_n = 1000, s_pieces = 4;
  std::uint64_t s_seed = 0;
  bool conjecture = false;
  search_cmd->add_option("--v", s_v, "speed")->required();
  search_cmd->add_option("--rho", s_rho, "turn-rate bound")->required();
  search_cmd->add_option("--T", s_T, "horizon (below 2/rho unless --conjecture-horizon)")
      ->required();
  search_cmd->add_option("--dt", s_dt, "sample step");
  search_cmd->add_option("--n", s_n, "random controls");
  search_cmd->add_option("--seed", s_seed, "rng seed");
  search_cmd->add_option("--pieces", s_pieces, "pieces per random control");
  search_cmd->add_flag("--conjecture-horizon", conjecture,
                       "allow T up to 2*pi/rho (exploratory)");
  search_cmd->add_option("--fail-below", fail_below, "exit 2 when the margin drops below this");

  // kin-reduce
  auto* reduce_cmd = app.add_subcommand(
      "kin-reduce",
      "replay the reduction of envelope dominance to ode positivity; writes "
      "trace.json and reduction.csv (t,S,A,B)");
  double r_v = 1.0, r_rho = 1.0, r_theta0 = 0.0, r_eps = 0.1, r_T = 1.9, r_dt = 1e-3;
  std::string r_control = "const:0";
  reduce_cmd->add_option("--v", r_v, "speed")->required();
  reduce_cmd->add_option("--rho", r_rho, "turn-rate bound")->required();
  reduce_cmd->add_option("--theta0", r_theta0, "initial heading");
  reduce_cmd->add_option("--control", r_control, "const:U or pieces:D:U,D:U,...");
  reduce_cmd->add_option("--eps", r_eps, "envelope inflation rho' = rho + eps")->required();
  reduce_cmd->add_option("--T", r_T, "horizon (below 2/rho)")->required();
  reduce_cmd->add_option("--dt", r_dt, "sample step");

  // check
  auto* check_cmd = app.add_subcommand("check", "replay and verify a stored trace");
  std::string trace_path;
  check_cmd->add_option("trace", trace_path, "trace JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // stable exit-code contract: any usage problem is 1, --help is 0
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sweep_cmd->parsed())
      return cmd_sweep(pred_path, oracle_spec, from, to, sweep_policy.policy, out_dir, !no_csv);
    if (ode_cmd->parsed())
      return cmd_ode(alpha_text, beta_text, ode_b, ode_from, ode_to, ode_h0, ode_hmin, ode_dt,
                     ode_policy.policy, out_dir, !ode_no_csv);
    if (sim_cmd->parsed()) return cmd_kin_sim(v, rho, theta0, control_spec, T, dt, out_dir);
    if (search_cmd->parsed())
      return cmd_kin_search(s_v, s_rho, s_T, s_dt, s_n, s_seed, s_pieces, conjecture,
                            fail_below, out_dir);
    if (reduce_cmd->parsed())
      return cmd_kin_reduce(r_v, r_rho, r_theta0, r_control, r_eps, r_T, r_dt, out_dir);
    if (check_cmd->parsed()) return cmd_check(trace_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
