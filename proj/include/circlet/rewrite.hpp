#pragma once

// Rewriting entailment: orient equations, compute bounded normal forms and
// compare them.

#include <string>
#include <unordered_map>
#include <vector>

#include "circlet/spec.hpp"
#include "circlet/term.hpp"

namespace circlet {

enum class RuleOrigin { spec_equation, frozen_hypothesis, condition_assumption, proved_property };

const char* rule_origin_name(RuleOrigin o);

struct RewriteRule {
  Term lhs;
  Term rhs;
  Condition condition;
  RuleOrigin origin = RuleOrigin::spec_equation;
};

struct Budget {
  std::size_t max_rewrite_steps = 10000;
  std::size_t max_term_size = 10000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rejection {
  std::string equation;
  std::string reason;
};

struct OrientResult {
  std::vector<RewriteRule> rules;
  std::vector<Rejection> rejected;
};

/// Left-to-right rule for a specification equation, or the reason it is unusable.
std::optional<RewriteRule> orient_equation(const Term& lhs, const Term& rhs, const Condition& cond,
                                           RuleOrigin origin, std::string* why = nullptr);
/// Larger side (by symbol count) becomes the lhs; ties keep the written order.
std::optional<RewriteRule> orient_hypothesis(const Term& lhs, const Term& rhs, const Condition& cond,
                                             std::string* why = nullptr);

OrientResult orient(const std::vector<Equation>& spec_equations,
                    const std::vector<FrozenGoal>& hypotheses = {});

class Rewriter {
 public:
  Rewriter(const Signature& sig, Budget budget);
  void add_rule(RewriteRule r);
  void add_rules(const std::vector<RewriteRule>& rs);
  const std::vector<RewriteRule>& rules() const { return rules_; }

  /// Leftmost-innermost normal form. Throws BudgetExceeded.
  Term normal_form(const Term& t);
  std::size_t steps_used() const { return steps_; }
  /// Indices of rules that fired at least once.
  const std::vector<std::size_t>& fired() const { return fired_; }

 private:
  Term rewrite_root(const Term& t, bool& changed);
  bool conditions_hold(const Condition& c, const Substitution& s);
  void count_step(const Term& result);

  const Signature& sig_;
  Budget budget_;
  std::vector<RewriteRule> rules_;
  std::unordered_map<int, std::vector<std::size_t>> by_head_;
  std::unordered_map<Term, Term, TermHash> cache_;
  std::size_t steps_ = 0;
  std::vector<std::size_t> fired_;
};

enum class Verdict { proved, not_proved, budget_exceeded };
const char* verdict_name(Verdict v);

struct EntailResult {
  Verdict verdict = Verdict::not_proved;
  Term lhs_nf;
  Term rhs_nf;
  std::size_t steps = 0;
  std::vector<std::size_t> hypotheses_used;  // indices into the hypothesis list
};

/// Base rules of a specification plus extra proved equations.
struct RuleBase {
  std::vector<RewriteRule> rules;
  std::vector<Rejection> rejected;
};
RuleBase make_rule_base(const Specification& spec, const std::vector<Equation>& extra = {});

/// B ∪ F ⊢ g: the goal's variables become fresh constants, its condition
/// becomes rules, and both sides are normalized.
EntailResult entails(const Signature& sig, const RuleBase& base, const std::vector<FrozenGoal>& hyps,
                     const FrozenGoal& goal, const Budget& budget);
EntailResult entails(const Specification& spec, const std::vector<FrozenGoal>& hyps,
                     const FrozenGoal& goal, const Budget& budget = {});
/// Convenience for plain equations (no frozen constants).
EntailResult entails(const Specification& spec, const Equation& goal, const Budget& budget = {});

/// Fresh constant standing for a goal variable during one entailment.
Term skolem(const Term& var);

}  // namespace circlet
