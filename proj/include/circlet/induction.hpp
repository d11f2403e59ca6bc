#pragma once

// Circular induction: constructor derivatives, incarnations, the H / H* / H'
// hypothesis sets and the Reduce / Derive calculi.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "circlet/proof.hpp"
#include "circlet/spec.hpp"

namespace circlet {

enum class InductionMode { basic, extended, subsort };
const char* mode_name(InductionMode m);
std::optional<InductionMode> parse_mode(const std::string& s);

struct IncarnationEdge {
  Term child;
  Term parent;
  bool same_sort = false;  // ~ as well as ~*
};

/// y' ~ y and y' ~* y links between frozen constants. Every incarnation has
/// exactly one parent, the constant it was derived from.
class IncarnationGraph {
 public:
  void add(const Term& child, const Term& parent, bool same_sort);
  const std::vector<IncarnationEdge>& edges() const { return edges_; }
  std::optional<Term> parent(const Term& c) const;
  int generation(const Term& c) const;
  bool same(const Term& child, const Term& parent) const;          // child ~ parent
  bool star_plus(const Term& child, const Term& ancestor) const;   // child ~*+ ancestor
  /// Proper ancestors along ~*, nearest first.
  std::vector<Term> ancestors(const Term& c) const;
  bool acyclic() const;

 private:
  std::vector<IncarnationEdge> edges_;
  std::map<Term, std::size_t> parent_edge_;
};

/// Allocates frozen-constant names: n -> n₁ -> n₂ for incarnations of the
/// same sort, a base borrowed from an existing constant of the sort (or the
/// sort's initial) for the others.
class FreshNamer {
 public:
  void reserve(const Term& c, const Sort& base_sort);
  bool used(const std::string& base, int index) const { return used_.count({base, index}) > 0; }
  Term same_sort(const Term& parent);
  Term cross_sort(const Term& parent, const Sort& sort);
  /// Base name for a goal variable, primed until it is unused.
  std::string initial_base(const std::string& var_name) const;

 private:
  int next_index(const std::string& base) const;
  std::set<std::pair<std::string, int>> used_;
  std::map<Sort, std::string> base_for_sort_;
};

/// Source constant and fresh subsort bookkeeping for subsort mode.
struct SourceMap {
  std::map<Term, Term> source;  // constant -> its source
  std::map<Term, Sort> subsort; // source -> s<source>
};

struct DerivedGoal {
  FrozenGoal goal;
  OpPtr constructor;
  Term target;
  std::vector<Term> fresh;
  std::vector<IncarnationEdge> edges;
  std::string label;  // "0", "s(_)", ...
};

/// δ_{c,y} for every constructor c of y's sort, in declaration order.
std::vector<DerivedGoal> derive_on(const FrozenGoal& g, const Term& y, const Specification& spec,
                                   FreshNamer& namer);
/// Every δ_{c,y} with y in g.fvar of inductive sort.
std::vector<DerivedGoal> derivatives_for(const FrozenGoal& g, const Specification& spec, FreshNamer& namer);

/// Ground constructor terms of depth <= depth; non-inductive sorts use their
/// declared constants.
std::vector<Term> constructor_terms(const Sort& s, std::size_t depth, const Specification& spec);

struct Experiment {
  std::vector<std::pair<Term, Term>> binding;  // frozen constant or variable -> ground term
  std::size_t depth() const;
  FrozenGoal apply(const FrozenGoal& g) const;
};
std::vector<Experiment> experiments_up_to(const std::vector<Term>& ys, std::size_t depth,
                                          const Specification& spec);

struct DerivationStep {
  OpPtr op;     // constructor, or constant of a non-inductive sort
  Term target;  // frozen constant it replaces
};
struct Decomposition {
  std::vector<DerivationStep> chain;
  FrozenGoal result;
};
/// The der(θ) recursion: a chain of derivative applications whose composite
/// on g equals θ[g].
Decomposition decompose(const Experiment& theta, const FrozenGoal& g, const Specification& spec);

std::vector<FrozenGoal> h_set(const FrozenGoal& g, const std::vector<Term>& fv, const IncarnationGraph& graph);
std::vector<FrozenGoal> h_star(const std::vector<FrozenGoal>& F, const std::vector<Term>& fv,
                               const IncarnationGraph& graph, const Signature& sig);
/// Generic hypothesis over fresh-subsort variables for the goal derived on y.
FrozenGoal h_prime(const FrozenGoal& g, const Term& y, const SourceMap& sources, const Specification& spec);

/// Argument positions of non-constructor operators where some equation has
/// a non-variable pattern.
std::set<std::pair<int, std::size_t>> inductive_positions(const Specification& spec);
/// The frozen constant a Derive on g works on.
std::optional<Term> select_variable(const FrozenGoal& g, const Specification& spec,
                                    const std::set<std::pair<int, std::size_t>>& positions);

/// Goal-level simplification with the specification's simplification rules.
/// Returns nullopt when no rule applies.
std::optional<FrozenGoal> simplify_goal(const FrozenGoal& g, const Specification& spec,
                                        const RuleBase& base, const std::vector<FrozenGoal>& hyps,
                                        const Budget& budget);

class InductionState {
 public:
  InductionState(Specification spec, std::vector<Equation> goals, InductionMode mode, Limits limits,
                 std::vector<Equation> proved = {});

  Outcome outcome() const { return outcome_; }
  bool done() const { return outcome_ != Outcome::running; }
  /// Applies one rule; returns the recorded step.
  const TraceStep& step();
  ProofResult run();
  ProofResult result() const;

  const Specification& spec() const { return spec_; }
  const std::vector<Hypothesis>& hypotheses() const { return F_; }
  const std::deque<GoalNode>& goals() const { return G_; }
  const IncarnationGraph& graph() const { return graph_; }
  const SourceMap& sources() const { return sources_; }
  const std::vector<TraceStep>& trace() const { return trace_; }
  InductionMode mode() const { return mode_; }
  std::size_t derives() const { return derives_; }
  /// Generic forms of the initial goals found by subsort-mode Derive steps,
  /// indexed like initial_goals(); empty goals where none was found.
  const std::vector<FrozenGoal>& generic_forms() const { return generic_forms_; }
  const std::vector<Equation>& initial_goals() const { return initial_; }
  const std::vector<Equation>& proved() const { return proved_; }
  const Limits& limits() const { return limits_; }
  const std::optional<FrozenGoal>& failed() const { return failed_; }
  const std::string& message() const { return message_; }

 private:
  void enrich(DerivedGoal& d, const Term& target);
  /// An earlier goal or hypothesis that `g` repeats, renamed, under shared
  /// constructors (the basic calculus can never close such a goal).
  std::optional<FrozenGoal> repeated_goal(const FrozenGoal& g, int node) const;
  Term subsort_var(const Term& c) const;
  void finish(Outcome o, std::optional<FrozenGoal> failed, std::string msg, TraceStep& st);
  int new_node(const FrozenGoal& g, int parent, const std::string& edge);
  void add_hypothesis(TraceStep& st, const FrozenGoal& h, int node, const std::string& kind,
                      const std::string& label);

  Specification spec_;
  RuleBase base_;
  InductionMode mode_;
  Limits limits_;
  std::vector<Equation> initial_;
  std::vector<Equation> proved_;
  std::vector<Hypothesis> F_;
  std::deque<GoalNode> G_;
  IncarnationGraph graph_;
  SourceMap sources_;
  FreshNamer namer_;
  std::set<std::pair<int, std::size_t>> positions_;
  std::vector<int> parent_of_;
  std::vector<FrozenGoal> node_goal_;
  std::map<int, std::size_t> root_goal_;  // node -> index of the initial goal
  std::vector<FrozenGoal> generic_forms_;
  std::vector<TraceStep> trace_;
  Outcome outcome_ = Outcome::running;
  std::optional<FrozenGoal> failed_;
  std::string message_;
  std::size_t derives_ = 0;
  std::size_t reduces_ = 0;
  double seconds_ = 0;
};

ProofResult prove_induction(const Specification& spec, const std::vector<Equation>& goals,
                            InductionMode mode = InductionMode::subsort, const Limits& limits = {},
                            const std::vector<Equation>& proved = {});

}  // namespace circlet
