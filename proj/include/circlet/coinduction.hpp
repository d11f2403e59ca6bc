#pragma once

// Circular coinduction: destructor derivatives, freezing at the top and
// special-context hypotheses.

#include <deque>
#include <string>
#include <vector>

#include "circlet/proof.hpp"
#include "circlet/spec.hpp"

namespace circlet {

/// [* lhs *] = [* rhs *] with every variable universally quantified.
FrozenGoal wrap_goal(const Equation& e, const Specification& spec);
/// Sort of the wrapped sides.
Sort goal_sort(const FrozenGoal& g, const Specification& spec);

/// δ[e] for every derivative context applicable at the goal's sort.
std::vector<FrozenGoal> coin_derivatives(const FrozenGoal& g, const Specification& spec);
/// γ[e] for every special context whose hole sort fits; the context's own
/// variables are renamed apart from the goal's.
std::vector<FrozenGoal> special_instances(const FrozenGoal& g, const Specification& spec);

/// Compositions hd(tl^i(*)) style: visible-result contexts of depth <= depth.
std::vector<Context> coin_experiments_up_to(const Sort& s, std::size_t depth, const Specification& spec);

class CoinductionState {
 public:
  CoinductionState(Specification spec, std::vector<Equation> goals, Limits limits,
                   std::vector<Equation> proved = {});

  Outcome outcome() const { return outcome_; }
  bool done() const { return outcome_ != Outcome::running; }
  const TraceStep& step();
  ProofResult run();
  ProofResult result() const;

  const Specification& spec() const { return spec_; }
  const std::vector<Hypothesis>& hypotheses() const { return F_; }
  const std::deque<GoalNode>& goals() const { return G_; }
  const std::vector<TraceStep>& trace() const { return trace_; }
  const std::vector<Equation>& initial_goals() const { return initial_; }
  const std::vector<Equation>& proved() const { return proved_; }
  const Limits& limits() const { return limits_; }
  const std::optional<FrozenGoal>& failed() const { return failed_; }
  const std::string& message() const { return message_; }

 private:
  void finish(Outcome o, std::optional<FrozenGoal> failed, std::string msg, TraceStep& st);
  void add_hypothesis(TraceStep& st, const FrozenGoal& h, int node, const std::string& kind,
                      const std::string& label);

  Specification spec_;
  RuleBase base_;
  Limits limits_;
  std::vector<Equation> initial_;
  std::vector<Equation> proved_;
  std::vector<Hypothesis> F_;
  std::deque<GoalNode> G_;
  std::vector<TraceStep> trace_;
  int next_node_ = 0;
  Outcome outcome_ = Outcome::running;
  std::optional<FrozenGoal> failed_;
  std::string message_;
  std::size_t derives_ = 0;
  std::size_t reduces_ = 0;
  double seconds_ = 0;
};

ProofResult prove_coinduction(const Specification& spec, const std::vector<Equation>& goals,
                              const Limits& limits = {}, const std::vector<Equation>& proved = {});

}  // namespace circlet
