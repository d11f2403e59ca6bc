#pragma once

// Types shared by both circular calculi: hypotheses, goal nodes, trace steps.

#include <optional>
#include <string>
#include <vector>

#include "circlet/rewrite.hpp"
#include "circlet/term.hpp"

namespace circlet {

struct Hypothesis {
  FrozenGoal eq;
  int node = -1;     // goal node it came from
  std::string kind;  // goal, H, H*, H', special
  std::string label; // e.g. "n₁ ∼ n"
};

struct GoalNode {
  FrozenGoal goal;
  int id = 0;
  int parent = -1;
  std::string edge;  // derivative label on the edge from the parent
};

enum class Outcome { running, success, stuck, budget_exceeded };
const char* outcome_name(Outcome o);

struct Limits {
  std::size_t max_derive = 50;
  std::size_t max_steps = 2000;
  Budget budget;
};

struct TraceStep {
  std::size_t index = 0;  // 1-based
  std::string calculus;   // induction | coinduction
  std::string rule;       // Reduce, Derive, Simplify, Stuck, BudgetExceeded
  int node = -1;
  FrozenGoal goal;
  std::optional<FrozenGoal> rewritten;  // normalized (Derive) or simplified (Simplify)
  std::optional<Term> derived_var;
  std::vector<Term> fv;
  std::vector<Hypothesis> f_added;
  std::vector<FrozenGoal> h, h_star, h_prime, gamma;
  std::vector<GoalNode> g_added;
  std::vector<int> used_hypotheses;  // indices into F
  std::vector<Hypothesis> f_before;
  std::vector<GoalNode> g_before;
  std::string message;
};

struct ProofResult {
  Outcome outcome = Outcome::running;
  std::vector<TraceStep> trace;
  std::vector<Hypothesis> hypotheses;
  std::optional<FrozenGoal> failed;
  std::string message;
  std::size_t derives = 0;
  std::size_t reduces = 0;
  double seconds = 0;
};

std::vector<FrozenGoal> equations_of(const std::vector<Hypothesis>& hs);
/// Lowest common ancestor of the given nodes in a derivation tree described
/// by parent links; -1 when they do not share a root.
int lowest_common_ancestor(const std::vector<int>& nodes, const std::vector<int>& parent_of);

}  // namespace circlet
