// Trace files: canonical JSON with an integrity digest, plus CSV exports.
//
// The JSON layout is
//   { "format": "realind-trace-v1",
//     "predicate": {problem description: canonical AST or oracle tag},
//     "a": ..., "target": ..., "policy": {...},
//     "nodes": [ {kind, from, to, epsilon, cert...}, ... ],
//     "status": {...}, "ordinal": "w*k+n", "rigorous": bool,
//     "integrity": "fnv1a64:..." }
// The digest covers the canonical dump of everything except itself, so any
// single-field edit of a stored trace is detectable even when the edited
// value would still replay.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "realind/syntax.hpp"
#include "realind/trace.hpp"

namespace realind {

using json = nlohmann::ordered_json;

inline json term_to_json(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::constant: return {{"op", "const"}, {"value", t->value}};
    case TermKind::variable: return {{"op", "var"}, {"name", t->name}};
    case TermKind::add: return {{"op", "add"}, {"lhs", term_to_json(t->lhs)}, {"rhs", term_to_json(t->rhs)}};
    case TermKind::sub: return {{"op", "sub"}, {"lhs", term_to_json(t->lhs)}, {"rhs", term_to_json(t->rhs)}};
    case TermKind::mul: return {{"op", "mul"}, {"lhs", term_to_json(t->lhs)}, {"rhs", term_to_json(t->rhs)}};
    case TermKind::min: return {{"op", "min"}, {"lhs", term_to_json(t->lhs)}, {"rhs", term_to_json(t->rhs)}};
    case TermKind::max: return {{"op", "max"}, {"lhs", term_to_json(t->lhs)}, {"rhs", term_to_json(t->rhs)}};
    case TermKind::neg: return {{"op", "neg"}, {"arg", term_to_json(t->lhs)}};
    case TermKind::abs: return {{"op", "abs"}, {"arg", term_to_json(t->lhs)}};
    case TermKind::sin: return {{"op", "sin"}, {"arg", term_to_json(t->lhs)}};
    case TermKind::cos: return {{"op", "cos"}, {"arg", term_to_json(t->lhs)}};
    case TermKind::exp: return {{"op", "exp"}, {"arg", term_to_json(t->lhs)}};
  }
  throw MalformedTraceError("unreachable term kind");
}

inline TermPtr term_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op"))
    throw MalformedTraceError("term node is not a tagged object");
  const std::string op = j.at("op");
  if (op == "const") return constant(j.at("value").get<double>());
  if (op == "var") return variable(j.at("name").get<std::string>());
  if (op == "neg") return neg(term_from_json(j.at("arg")));
  if (op == "abs") return abs(term_from_json(j.at("arg")));
  if (op == "sin") return sin(term_from_json(j.at("arg")));
  if (op == "cos") return cos(term_from_json(j.at("arg")));
  if (op == "exp") return exp(term_from_json(j.at("arg")));
  TermPtr lhs = term_from_json(j.at("lhs"));
  TermPtr rhs = term_from_json(j.at("rhs"));
  if (op == "add") return add(std::move(lhs), std::move(rhs));
  if (op == "sub") return sub(std::move(lhs), std::move(rhs));
  if (op == "mul") return mul(std::move(lhs), std::move(rhs));
  if (op == "min") return min(std::move(lhs), std::move(rhs));
  if (op == "max") return max(std::move(lhs), std::move(rhs));
  throw MalformedTraceError("unknown term op '" + op + "'");
}

inline json predicate_to_json(const PredPtr& p) {
  switch (p->kind) {
    case PredKind::le:
      return {{"op", "le"}, {"lhs", term_to_json(p->lhs)}, {"rhs", term_to_json(p->rhs)}};
    case PredKind::eq:
      return {{"op", "eq"}, {"lhs", term_to_json(p->lhs)}, {"rhs", term_to_json(p->rhs)}};
    case PredKind::conj:
      return {{"op", "and"}, {"left", predicate_to_json(p->left)}, {"right", predicate_to_json(p->right)}};
    case PredKind::disj:
      return {{"op", "or"}, {"left", predicate_to_json(p->left)}, {"right", predicate_to_json(p->right)}};
    case PredKind::forall:
      return {{"op", "forall"},
              {"var", p->var},
              {"domain", {p->domain.lo(), p->domain.hi()}},
              {"body", predicate_to_json(p->left)}};
  }
  throw MalformedTraceError("unreachable predicate kind");
}

inline PredPtr predicate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op"))
    throw MalformedTraceError("predicate node is not a tagged object");
  const std::string op = j.at("op");
  if (op == "le") return le(term_from_json(j.at("lhs")), term_from_json(j.at("rhs")));
  if (op == "eq") return eq(term_from_json(j.at("lhs")), term_from_json(j.at("rhs")));
  if (op == "and") return conj(predicate_from_json(j.at("left")), predicate_from_json(j.at("right")));
  if (op == "or") return disj(predicate_from_json(j.at("left")), predicate_from_json(j.at("right")));
  if (op == "forall") {
    const auto& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 2)
      throw MalformedTraceError("forall domain must be a two-element array");
    return forall(j.at("var").get<std::string>(),
                  Interval(dom[0].get<double>(), dom[1].get<double>()),
                  predicate_from_json(j.at("body")));
  }
  throw MalformedTraceError("unknown predicate op '" + op + "'");
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_of(const json& body) {
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << fnv1a64(body.dump());
  return out.str();
}

inline json budget_to_json(const EvalBudget& b) {
  return {{"max_depth", b.max_depth}, {"max_boxes", b.max_boxes}};
}

inline EvalBudget budget_from_json(const json& j) {
  EvalBudget b;
  b.max_depth = j.at("max_depth").get<int>();
  b.max_boxes = j.at("max_boxes").get<std::int64_t>();
  return b;
}

}  // namespace detail

inline json certificate_to_json(const Certificate& cert) {
  if (const auto* dsl = std::get_if<DslEvalCert>(&cert)) {
    json box = json::object();
    for (const auto& [name, iv] : dsl->box) box[name] = {iv.lo(), iv.hi()};
    return {{"kind", "dsl-eval"}, {"box", std::move(box)},
            {"budget", detail::budget_to_json(dsl->budget)}};
  }
  if (const auto* ana = std::get_if<AnalyticCert>(&cert)) {
    return {{"kind", "analytic"}, {"tag", ana->tag}, {"data", ana->data}};
  }
  const auto& wit = std::get<NumericWitnessCert>(cert);
  json samples = json::array();
  for (const auto& [t, v] : wit.samples) samples.push_back({t, v});
  return {{"kind", "numeric-witness"}, {"samples", std::move(samples)}};
}

// The DSL certificate predicate is the problem predicate by construction, so
// reconstruction needs it as context.
inline Certificate certificate_from_json(const json& j, const ProblemDesc& problem) {
  const std::string kind = j.at("kind");
  if (kind == "dsl-eval") {
    const auto* prob = std::get_if<DslProblem>(&problem);
    if (!prob) throw MalformedTraceError("dsl certificate inside a non-dsl trace");
    DslEvalCert cert;
    cert.predicate = prob->predicate;
    cert.budget = detail::budget_from_json(j.at("budget"));
    for (const auto& [name, iv] : j.at("box").items()) {
      if (!iv.is_array() || iv.size() != 2)
        throw MalformedTraceError("certificate box entry must be [lo, hi]");
      cert.box.emplace(name, Interval(iv[0].get<double>(), iv[1].get<double>()));
    }
    return cert;
  }
  if (kind == "analytic") {
    AnalyticCert cert;
    cert.tag = j.at("tag").get<std::string>();
    for (const auto& [key, value] : j.at("data").items())
      cert.data.emplace(key, value.get<double>());
    return cert;
  }
  if (kind == "numeric-witness") {
    NumericWitnessCert cert;
    for (const auto& pair : j.at("samples")) {
      if (!pair.is_array() || pair.size() != 2)
        throw MalformedTraceError("witness sample must be [t, value]");
      cert.samples.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return cert;
  }
  throw MalformedTraceError("unknown certificate kind '" + kind + "'");
}

inline json problem_to_json(const ProblemDesc& problem) {
  if (const auto* dsl = std::get_if<DslProblem>(&problem)) {
    return {{"kind", "dsl"}, {"var", dsl->var}, {"ast", predicate_to_json(dsl->predicate)},
            {"text", print(dsl->predicate)}};
  }
  if (const auto* ode = std::get_if<OdeProblem>(&problem)) {
    return {{"kind", "ode"}, {"var", ode->var}, {"alpha", print(ode->alpha)},
            {"beta", print(ode->beta)}, {"initial", ode->initial}};
  }
  const auto& wit = std::get<WitnessProblem>(problem);
  return {{"kind", "witness"}, {"description", wit.description}, {"tolerance", wit.tolerance}};
}

inline ProblemDesc problem_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "dsl")
    return DslProblem{predicate_from_json(j.at("ast")), j.at("var").get<std::string>()};
  if (kind == "ode")
    return OdeProblem{parse_term(j.at("alpha").get<std::string>()),
                      parse_term(j.at("beta").get<std::string>()),
                      j.at("var").get<std::string>(), j.at("initial").get<double>()};
  if (kind == "witness")
    return WitnessProblem{j.at("description").get<std::string>(),
                          j.at("tolerance").get<double>()};
  throw MalformedTraceError("unknown problem kind '" + kind + "'");
}

inline json policy_to_json(const SweepPolicy& p) {
  return {{"stall_window", p.stall_window},
          {"stall_threshold", p.stall_threshold},
          {"max_steps", p.max_steps},
          {"max_limit_nodes", p.max_limit_nodes},
          {"budget", detail::budget_to_json(p.budget)}};
}

inline SweepPolicy policy_from_json(const json& j) {
  SweepPolicy p;
  p.stall_window = j.at("stall_window").get<int>();
  p.stall_threshold = j.at("stall_threshold").get<double>();
  p.max_steps = j.at("max_steps").get<std::int64_t>();
  p.max_limit_nodes = j.at("max_limit_nodes").get<int>();
  p.budget = detail::budget_from_json(j.at("budget"));
  return p;
}

inline json trace_to_json(const ProofTrace& trace) {
  json nodes = json::array();
  for (const auto& n : trace.nodes) {
    json node = {{"kind", n.kind == NodeKind::limit ? "limit" : "successor"},
                 {"from", n.from},
                 {"to", n.to},
                 {"epsilon", n.epsilon},
                 {"cert", certificate_to_json(n.cert)}};
    if (n.kind == NodeKind::limit) node["stall_len"] = n.stall_len;
    nodes.push_back(std::move(node));
  }
  json status;
  if (trace.reached()) {
    status = {{"reached", true}};
  } else {
    status = {{"reached", false}, {"at", trace.failure->at}, {"reason", trace.failure->reason}};
  }
  return {{"format", "realind-trace-v1"},
          {"predicate", problem_to_json(trace.problem)},
          {"a", trace.start},
          {"target", trace.target},
          {"policy", policy_to_json(trace.policy)},
          {"nodes", std::move(nodes)},
          {"status", std::move(status)},
          {"ordinal", to_string(ordinal_of(trace))},
          {"rigorous", trace.rigorous()}};
}

inline ProofTrace trace_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "realind-trace-v1")
      throw MalformedTraceError("unsupported trace format");
    ProofTrace trace;
    trace.problem = problem_from_json(j.at("predicate"));
    trace.start = j.at("a").get<double>();
    trace.target = j.at("target").get<double>();
    trace.policy = policy_from_json(j.at("policy"));
    for (const auto& node : j.at("nodes")) {
      const std::string kind = node.at("kind").get<std::string>();
      if (kind != "limit" && kind != "successor")
        throw MalformedTraceError("unknown node kind '" + kind + "'");
      TraceNode n{kind == "limit" ? NodeKind::limit : NodeKind::successor,
                  node.at("from").get<double>(), node.at("to").get<double>(),
                  node.at("epsilon").get<double>(),
                  certificate_from_json(node.at("cert"), trace.problem),
                  node.value("stall_len", 0)};
      trace.nodes.push_back(std::move(n));
    }
    const auto& status = j.at("status");
    if (!status.at("reached").get<bool>())
      trace.failure = SweepFailure{status.at("at").get<double>(),
                                   status.at("reason").get<std::string>()};
    return trace;
  } catch (const json::exception& e) {
    throw MalformedTraceError(std::string("trace json: ") + e.what());
  }
}

struct LoadedTrace {
  ProofTrace trace;
  bool integrity_ok = false;   // digest matches the stored fields
  bool metadata_ok = false;    // ordinal/rigor claims match the nodes
  std::string ordinal_claim;
};

inline void save_trace(const std::string& path, const ProofTrace& trace) {
  json body = trace_to_json(trace);
  body["integrity"] = detail::digest_of(body);
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << body.dump(2) << '\n';
}

inline LoadedTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedTraceError(std::string("trace json: ") + e.what());
  }
  LoadedTrace loaded;
  std::string stored_digest = j.value("integrity", std::string{});
  json body = j;
  body.erase("integrity");
  loaded.trace = trace_from_json(body);
  loaded.integrity_ok = !stored_digest.empty() && stored_digest == detail::digest_of(body);
  loaded.ordinal_claim = j.value("ordinal", std::string{});
  loaded.metadata_ok = loaded.ordinal_claim == to_string(ordinal_of(loaded.trace)) &&
                       j.value("rigorous", !loaded.trace.rigorous()) == loaded.trace.rigorous();
  return loaded;
}

// One row per node: index, kind, from, to, epsilon, cert_kind.
inline void write_nodes_csv(const std::string& path, const ProofTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "index,kind,from,to,epsilon,cert_kind\n";
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const auto& n = trace.nodes[i];
    out << i << ',' << (n.kind == NodeKind::limit ? "limit" : "successor") << ','
        << format_double(n.from) << ',' << format_double(n.to) << ','
        << format_double(n.epsilon) << ',' << certificate_kind(n.cert) << '\n';
  }
}

}  // namespace realind
