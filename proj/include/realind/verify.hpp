// Independent replay of proof traces.
//
// check_trace re-verifies a trace without trusting the engine that produced
// it: structure first (nodes tile [start, frontier] exactly, step sizes are
// consistent, the recorded status matches the nodes), then every certificate
// (DSL certificates re-evaluate, analytic chains recompute from the
// coefficient terms, witness certificates re-check their samples and
// downgrade the verdict to a non-rigorous pass).
#pragma once

#include <string>
#include <variant>

#include "realind/ode.hpp"
#include "realind/sweep.hpp"
#include "realind/trace.hpp"

namespace realind {

namespace detail {

inline TraceCheckReport structural_check(const ProofTrace& trace) {
  double frontier = trace.start;
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const TraceNode& n = trace.nodes[i];
    const auto at = static_cast<std::ptrdiff_t>(i);
    if (n.from != frontier)
      return {false, true, at, "node does not start at the previous frontier"};
    if (!(n.epsilon > 0.0)) return {false, true, at, "node step size is not positive"};
    if (n.from + n.epsilon != n.to)
      return {false, true, at, "node endpoints are inconsistent with the step size"};
    if (!(n.to > n.from)) return {false, true, at, "node does not advance the frontier"};
    if (n.kind == NodeKind::limit && n.stall_len <= 0)
      return {false, true, at, "limit node lacks its stall window"};
    frontier = n.to;
  }
  if (trace.reached()) {
    if (frontier < trace.target)
      return {false, true, -1, "status says reached but the nodes stop short of the target"};
  } else {
    if (trace.failure->at != frontier)
      return {false, true, -1, "failure frontier does not match the last node"};
    if (frontier >= trace.target)
      return {false, true, -1, "status says failed but the nodes reach the target"};
  }
  return {true, true, -1, {}};
}

}  // namespace detail

inline TraceCheckReport check_trace(const ProofTrace& trace) {
  TraceCheckReport report = detail::structural_check(trace);
  if (!report.ok) return report;

  if (std::holds_alternative<OdeProblem>(trace.problem)) {
    TraceCheckReport chain = check_ode_chain(trace);
    if (!chain.ok) return chain;
  } else {
    for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
      const TraceNode& n = trace.nodes[i];
      const CertCheck chk = validate_certificate(n.cert, n.from, n.to, trace.problem);
      if (!chk.ok)
        return {false, chk.rigorous, static_cast<std::ptrdiff_t>(i), chk.reason};
    }
  }

  report.rigorous = trace.rigorous();
  report.message = report.rigorous ? "rigorous pass" : "non-rigorous pass";
  return report;
}

}  // namespace realind
