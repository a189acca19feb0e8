// Proof traces: certified step/limit node sequences produced by the
// induction sweep, with their certificates and the policy that bounded the
// run. Traces are immutable values once produced.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "realind/ast.hpp"
#include "realind/eval.hpp"
#include "realind/interval.hpp"
#include "realind/ordinal.hpp"

namespace realind {

struct SweepPolicy {
  int stall_window = 8;           // consecutive shrinking steps before a limit proposal
  double stall_threshold = 1e-9;  // step sizes below this count as stalling
  std::int64_t max_steps = 1000000;
  int max_limit_nodes = 64;       // ordinal budget: at most w*64
  EvalBudget budget{};
};

// A rigorous certificate that replays through the DSL evaluator.
struct DslEvalCert {
  PredPtr predicate;
  std::map<std::string, Interval> box;
  EvalBudget budget;
};

// A rigorous certificate carrying recomputable bound data (validated
// integration steps).
struct AnalyticCert {
  std::string tag;
  std::map<std::string, double> data;
};

// Non-rigorous evidence: sampled values of the tracked quantity.
struct NumericWitnessCert {
  std::vector<std::pair<double, double>> samples;  // (t, value)
};

using Certificate = std::variant<DslEvalCert, AnalyticCert, NumericWitnessCert>;

inline bool certificate_rigorous(const Certificate& c) {
  return !std::holds_alternative<NumericWitnessCert>(c);
}

inline const char* certificate_kind(const Certificate& c) {
  if (std::holds_alternative<DslEvalCert>(c)) return "dsl-eval";
  if (std::holds_alternative<AnalyticCert>(c)) return "analytic";
  return "numeric-witness";
}

enum class NodeKind { successor, limit };

struct TraceNode {
  NodeKind kind;
  double from;
  double to;
  double epsilon;  // oracle step size; to == from + epsilon as stored
  Certificate cert;
  int stall_len = 0;  // limit nodes: length of the stall window behind the jump
};

// What the trace is about: a DSL predicate in one variable, a scalar linear
// initial value problem (nonnegativity of its solution), or a sampled
// quantity with a numeric tolerance.
struct DslProblem {
  PredPtr predicate;
  std::string var;
};

struct OdeProblem {
  TermPtr alpha, beta;  // coefficient terms in `var`
  std::string var;
  double initial;       // value at the start point, >= 0
};

struct WitnessProblem {
  std::string description;
  double tolerance = 1e-9;
};

using ProblemDesc = std::variant<DslProblem, OdeProblem, WitnessProblem>;

struct SweepFailure {
  double at;
  std::string reason;
};

struct ProofTrace {
  ProblemDesc problem;
  double start = 0.0;
  double target = 0.0;
  SweepPolicy policy;
  std::vector<TraceNode> nodes;
  std::optional<SweepFailure> failure;  // empty means the target was reached

  bool reached() const { return !failure.has_value(); }

  double frontier() const { return nodes.empty() ? start : nodes.back().to; }

  bool rigorous() const {
    for (const auto& n : nodes)
      if (!certificate_rigorous(n.cert)) return false;
    return true;
  }
};

// Ordinal measure of a trace: w * (limit nodes) + (successors after the last
// limit node).
inline Ordinal ordinal_of(const ProofTrace& trace) {
  std::uint64_t limits = 0;
  std::uint64_t tail = 0;
  for (const auto& n : trace.nodes) {
    if (n.kind == NodeKind::limit) {
      ++limits;
      tail = 0;
    } else {
      ++tail;
    }
  }
  return Ordinal::omega_times_plus(limits, tail);
}

struct TraceCheckReport {
  bool ok = true;
  bool rigorous = true;
  std::ptrdiff_t failed_node = -1;  // -1: no node-level failure
  std::string message;
};

}  // namespace realind
