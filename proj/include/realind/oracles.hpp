// Built-in step oracles for DSL-described properties. Each proposal carries
// a DSL certificate over the step box; the engine replays it before
// acceptance, so an oracle cannot smuggle in an unsound step.
#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "realind/sweep.hpp"

namespace realind {

class DslStepOracle : public StepOracle {
 public:
  DslStepOracle(PredPtr predicate, std::string var, EvalBudget budget)
      : predicate_(std::move(predicate)), var_(std::move(var)), budget_(budget) {}

  std::optional<Certificate> certify_jump(double from, double to) override {
    return make_cert(from, to);
  }

 protected:
  Certificate make_cert(double from, double to) const {
    return DslEvalCert{predicate_, {{var_, Interval(from, to)}}, budget_};
  }

 private:
  PredPtr predicate_;
  std::string var_;
  EvalBudget budget_;
};

class ConstEpsOracle final : public DslStepOracle {
 public:
  ConstEpsOracle(double epsilon, PredPtr predicate, std::string var, EvalBudget budget)
      : DslStepOracle(std::move(predicate), std::move(var), budget), epsilon_(epsilon) {}

  StepResult propose(double frontier) override {
    return Step{epsilon_, make_cert(frontier, frontier + epsilon_)};
  }

 private:
  double epsilon_;
};

// Frontier map c -> (k + c) / m; the step size is the gap to the image.
class AffineMapOracle final : public DslStepOracle {
 public:
  AffineMapOracle(double k, double m, PredPtr predicate, std::string var, EvalBudget budget)
      : DslStepOracle(std::move(predicate), std::move(var), budget), k_(k), m_(m) {}

  StepResult propose(double frontier) override {
    const double next = (k_ + frontier) / m_;
    const double epsilon = next - frontier;
    if (!(epsilon > 0.0))
      return GiveUp{"affine map does not advance past " + std::to_string(frontier)};
    return Step{epsilon, make_cert(frontier, frontier + epsilon)};
  }

 private:
  double k_, m_;
};

// Step sizes looked up from a sorted (threshold, epsilon) table: the entry
// with the largest threshold <= frontier applies.
class TableOracle final : public DslStepOracle {
 public:
  TableOracle(std::vector<std::pair<double, double>> rows, PredPtr predicate,
              std::string var, EvalBudget budget)
      : DslStepOracle(std::move(predicate), std::move(var), budget), rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end());
  }

  StepResult propose(double frontier) override {
    const double* epsilon = nullptr;
    for (const auto& [threshold, eps] : rows_) {
      if (threshold <= frontier) epsilon = &eps;
      else break;
    }
    if (!epsilon) return GiveUp{"no table entry at or below the frontier"};
    return Step{*epsilon, make_cert(frontier, frontier + *epsilon)};
  }

 private:
  std::vector<std::pair<double, double>> rows_;
};

}  // namespace realind
