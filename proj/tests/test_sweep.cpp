#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "realind/oracles.hpp"
#include "realind/syntax.hpp"
#include "realind/verify.hpp"

using namespace realind;

namespace {

ProblemDesc unit_problem() {
  return DslProblem{parse("0 <= x /\\ x <= 1"), "x"};
}

ProofTrace run_geometric(SweepPolicy policy = {}) {
  const auto problem = unit_problem();
  const auto& dsl = std::get<DslProblem>(problem);
  AffineMapOracle oracle(1.0, 2.0, dsl.predicate, dsl.var, policy.budget);
  return sweep(problem, 0.0, 1.0, oracle, policy);
}

}  // namespace

TEST_CASE("geometric halving reaches 1 through a single limit node") {
  const ProofTrace trace = run_geometric();
  REQUIRE(trace.reached());
  std::size_t limits = 0;
  for (const auto& n : trace.nodes)
    if (n.kind == NodeKind::limit) ++limits;
  CHECK(limits == 1);
  CHECK(trace.nodes.back().kind == NodeKind::limit);
  CHECK(trace.nodes.back().to == 1.0);
  CHECK(to_string(ordinal_of(trace)) == "w");
  // successor frontiers follow 1 - 1/2^n
  for (std::size_t i = 0; i + 1 < trace.nodes.size(); ++i) {
    const double expected = 1.0 - std::ldexp(1.0, -static_cast<int>(i) - 1);
    CHECK(std::fabs(trace.nodes[i].to - expected) <= 1e-12);
  }
  CHECK(trace.rigorous());
  CHECK(check_trace(trace).ok);
}

TEST_CASE("constant steps tile the target without limit nodes") {
  const auto problem = DslProblem{parse("0 <= x /\\ x <= 2"), "x"};
  ConstEpsOracle oracle(0.25, problem.predicate, "x", {});
  const ProofTrace trace = sweep(problem, 0.0, 1.0, oracle);
  REQUIRE(trace.reached());
  REQUIRE(trace.nodes.size() == 4);
  for (const auto& n : trace.nodes) CHECK(n.kind == NodeKind::successor);
  CHECK(to_string(ordinal_of(trace)) == "4");
  CHECK(trace.nodes.back().to == 1.0);
}

TEST_CASE("a step past the property boundary is rejected at the frontier") {
  const auto problem = DslProblem{parse("x <= 0.5"), "x"};
  ConstEpsOracle oracle(0.4, problem.predicate, "x", {});
  const ProofTrace trace = sweep(problem, 0.0, 1.0, oracle);
  REQUIRE_FALSE(trace.reached());
  CHECK(trace.failure->at == 0.4);
  CHECK(trace.failure->reason.find("certificate rejected") != std::string::npos);
  REQUIRE(trace.nodes.size() == 1);
  CHECK(trace.nodes[0].to == 0.4);
  // the partial trace still replays
  CHECK(check_trace(trace).ok);
}

TEST_CASE("preconditions: ordering and start-point certification") {
  const auto problem = unit_problem();
  const auto& dsl = std::get<DslProblem>(problem);
  ConstEpsOracle oracle(0.25, dsl.predicate, dsl.var, {});
  CHECK_THROWS_AS(sweep(problem, 1.0, 0.0, oracle, {}), InvalidInputError);
  CHECK_THROWS_AS(sweep(problem, 2.0, 3.0, oracle, {}), InvalidInputError);
}

TEST_CASE("budget policies terminate hopeless sweeps") {
  const auto problem = unit_problem();
  const auto& dsl = std::get<DslProblem>(problem);
  SweepPolicy policy;
  policy.max_steps = 64;
  policy.stall_window = 100;  // keep limit detection out of the way
  // eps so small the frontier crawls: the step budget must fire
  ConstEpsOracle oracle(1e-9, dsl.predicate, dsl.var, policy.budget);
  const ProofTrace trace = sweep(problem, 0.0, 1.0, oracle, policy);
  REQUIRE_FALSE(trace.reached());
  CHECK(trace.failure->reason == "step budget exhausted");
}

TEST_CASE("detect_limit extrapolates geometric stalls and ignores the rest") {
  SweepPolicy policy;
  policy.stall_window = 4;
  policy.stall_threshold = 1e-3;

  std::vector<FrontierStep> geometric;
  double c = 0.0;
  double eps = 1e-4;
  for (int i = 0; i < 8; ++i) {
    geometric.push_back({c, eps});
    c += eps;
    eps *= 0.5;
  }
  const auto proposal = detect_limit(geometric, policy, 10.0);
  REQUIRE(proposal.has_value());
  const double tail = geometric.back().epsilon;
  const double sup = geometric.back().from + geometric.back().epsilon + tail;
  CHECK(std::fabs(*proposal - sup) <= 1e-12);

  std::vector<FrontierStep> constant;
  for (int i = 0; i < 8; ++i) constant.push_back({i * 1e-4, 1e-4});
  CHECK_FALSE(detect_limit(constant, policy, 10.0).has_value());

  std::vector<FrontierStep> growing;
  double eps2 = 1e-6;
  double c2 = 0.0;
  for (int i = 0; i < 8; ++i) {
    growing.push_back({c2, eps2});
    c2 += eps2;
    eps2 *= 2.0;
  }
  CHECK_FALSE(detect_limit(growing, policy, 10.0).has_value());

  CHECK_FALSE(detect_limit({}, policy, 10.0).has_value());
}

TEST_CASE("proposals are clamped to the target") {
  SweepPolicy policy;
  policy.stall_window = 4;
  policy.stall_threshold = 1.0;
  std::vector<FrontierStep> hist;
  double c = 0.0, eps = 0.5;
  for (int i = 0; i < 6; ++i) {
    hist.push_back({c, eps});
    c += eps;
    eps *= 0.5;
  }
  const auto proposal = detect_limit(hist, policy, c + 1e-6);
  REQUIRE(proposal.has_value());
  CHECK(*proposal == c + 1e-6);
}

TEST_CASE("traces tile the interval and rebuild deterministically") {
  const ProofTrace a = run_geometric();
  const ProofTrace b = run_geometric();
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].from == b.nodes[i].from);
    CHECK(a.nodes[i].to == b.nodes[i].to);
    CHECK(a.nodes[i].kind == b.nodes[i].kind);
  }
  double frontier = a.start;
  for (const auto& n : a.nodes) {
    CHECK(n.from == frontier);
    frontier = n.to;
  }
  CHECK(frontier >= a.target);
}

TEST_CASE("a reached rigorous trace never contradicts dense sampling") {
  const ProofTrace trace = run_geometric();
  REQUIRE(trace.reached());
  REQUIRE(trace.rigorous());
  const auto& dsl = std::get<DslProblem>(trace.problem);
  long violations = 0;
  const long n = 100000;
  for (long i = 0; i <= n; ++i) {
    const double x = trace.start + (trace.target - trace.start) * i / n;
    if (!holds_at(dsl.predicate, {{dsl.var, x}})) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("check_trace flags a widened node") {
  ProofTrace trace = run_geometric();
  REQUIRE(trace.reached());
  // widen one interior node: the tiling breaks at its successor
  auto& node = trace.nodes[2];
  node.to = node.to + 0.01;
  const auto report = check_trace(trace);
  CHECK_FALSE(report.ok);
  CHECK(report.failed_node >= 2);
}

TEST_CASE("check_trace flags an out-of-box certificate") {
  ProofTrace trace = run_geometric();
  auto& node = trace.nodes[1];
  auto cert = std::get<DslEvalCert>(node.cert);
  cert.box["x"] = Interval(cert.box["x"].lo(), cert.box["x"].hi() + 0.5);
  node.cert = cert;
  const auto report = check_trace(trace);
  CHECK_FALSE(report.ok);
  CHECK(report.failed_node == 1);
}

TEST_CASE("check_trace flags a status lie") {
  ProofTrace trace = run_geometric();
  trace.failure = SweepFailure{trace.nodes.back().to, "edited"};
  CHECK_FALSE(check_trace(trace).ok);
}

TEST_CASE("witness certificates downgrade the verdict to non-rigorous") {
  ProofTrace trace;
  trace.problem = WitnessProblem{"sampled gap", 1e-9};
  trace.start = 0.0;
  trace.target = 0.5;
  trace.nodes.push_back({NodeKind::successor, 0.0, 0.5, 0.5,
                         NumericWitnessCert{{{0.0, 0.1}, {0.25, 0.2}, {0.5, 0.3}}}, 0});
  const auto report = check_trace(trace);
  CHECK(report.ok);
  CHECK_FALSE(report.rigorous);
  CHECK(report.message == "non-rigorous pass");

  // a sample below tolerance must fail the replay
  std::get<NumericWitnessCert>(trace.nodes[0].cert).samples[1].second = -1e-3;
  CHECK_FALSE(check_trace(trace).ok);
}
