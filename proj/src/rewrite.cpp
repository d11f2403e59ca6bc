#include "circlet/rewrite.hpp"

#include <algorithm>
#include <cstdint>

#include "circlet/print.hpp"

namespace circlet {

const char* rule_origin_name(RuleOrigin o) {
  switch (o) {
    case RuleOrigin::spec_equation: return "spec-equation";
    case RuleOrigin::frozen_hypothesis: return "frozen-hypothesis";
    case RuleOrigin::condition_assumption: return "condition-assumption";
    case RuleOrigin::proved_property: return "proved-property";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::proved: return "Proved";
    case Verdict::not_proved: return "NotProved";
    case Verdict::budget_exceeded: return "BudgetExceeded";
  }
  return "?";
}

namespace {

bool subset_vars(const std::vector<Term>& small, const std::vector<Term>& big) {
  return std::all_of(small.begin(), small.end(), [&](const Term& v) {
    return std::find(big.begin(), big.end(), v) != big.end();
  });
}

std::string eq_text(const Term& l, const Term& r) { return to_string(l) + " = " + to_string(r); }

}  // namespace

std::optional<RewriteRule> orient_equation(const Term& lhs, const Term& rhs, const Condition& cond,
                                           RuleOrigin origin, std::string* why) {
  auto reject = [&](const std::string& reason) -> std::optional<RewriteRule> {
    if (why) *why = reason;
    return std::nullopt;
  };
  if (lhs.is_var()) return reject("left-hand side is a variable");
  if (lhs == rhs) return reject("both sides are identical");
  std::vector<Term> lv = vars_of(lhs), used = vars_of(rhs);
  for (const auto& [u, v] : cond) {
    collect_vars(u, used);
    collect_vars(v, used);
  }
  if (!subset_vars(used, lv)) return reject("right-hand side or condition has variables not in the left-hand side");
  return RewriteRule{lhs, rhs, cond, origin};
}

std::optional<RewriteRule> orient_hypothesis(const Term& lhs, const Term& rhs, const Condition& cond,
                                             std::string* why) {
  if (rhs.size() > lhs.size()) return orient_equation(rhs, lhs, cond, RuleOrigin::frozen_hypothesis, why);
  return orient_equation(lhs, rhs, cond, RuleOrigin::frozen_hypothesis, why);
}

OrientResult orient(const std::vector<Equation>& spec_equations, const std::vector<FrozenGoal>& hypotheses) {
  OrientResult out;
  std::string why;
  for (const auto& e : spec_equations) {
    if (auto r = orient_equation(e.lhs, e.rhs, e.condition, RuleOrigin::spec_equation, &why))
      out.rules.push_back(std::move(*r));
    else
      out.rejected.push_back({eq_text(e.lhs, e.rhs), why});
  }
  for (const auto& h : hypotheses) {
    if (auto r = orient_hypothesis(h.lhs, h.rhs, h.condition, &why))
      out.rules.push_back(std::move(*r));
    else
      out.rejected.push_back({eq_text(h.lhs, h.rhs), why});
  }
  return out;
}

// ---------------------------------------------------------------- rewriter

Rewriter::Rewriter(const Signature& sig, Budget budget) : sig_(sig), budget_(budget) {}

void Rewriter::add_rule(RewriteRule r) {
  by_head_[r.lhs.is_app() ? r.lhs.op()->id : -1].push_back(rules_.size());
  rules_.push_back(std::move(r));
  cache_.clear();
}

void Rewriter::add_rules(const std::vector<RewriteRule>& rs) {
  for (const auto& r : rs) add_rule(r);
}

void Rewriter::count_step(const Term& result) {
  if (++steps_ > budget_.max_rewrite_steps)
    throw BudgetExceeded("rewrite step budget of " + std::to_string(budget_.max_rewrite_steps) + " exceeded");
  if (result.size() > budget_.max_term_size)
    throw BudgetExceeded("term size budget of " + std::to_string(budget_.max_term_size) + " exceeded");
}

bool Rewriter::conditions_hold(const Condition& c, const Substitution& s) {
  for (const auto& [u, v] : c)
    if (!(normal_form(s.apply(u)) == normal_form(s.apply(v)))) return false;
  return true;
}

Term Rewriter::rewrite_root(const Term& t, bool& changed) {
  changed = false;
  int key = t.is_app() ? t.op()->id : -1;
  auto it = by_head_.find(key);
  if (it == by_head_.end()) return t;
  for (std::size_t idx : it->second) {
    const RewriteRule& r = rules_[idx];
    std::optional<Term> result;
    match_each(r.lhs, t, sig_, {}, [&](const Substitution& s) {
      if (!r.condition.empty() && !conditions_hold(r.condition, s)) return false;
      result = s.apply(r.rhs);
      return true;
    });
    // AC heads: let the rule act on part of the argument multiset.
    if (!result && t.is_app() && t.op()->assoc && r.lhs.is_app() && t.args().size() > r.lhs.args().size()) {
      const OpPtr& op = t.op();
      Term ext = Term::var("%rest", op->arg_sorts[0]);
      std::vector<Term> pat_args = r.lhs.args();
      pat_args.push_back(ext);
      Term pattern = Term::app(op, pat_args);
      match_each(pattern, t, sig_, {}, [&](const Substitution& s) {
        if (!r.condition.empty() && !conditions_hold(r.condition, s)) return false;
        result = Term::app(op, {s.apply(r.rhs), s.apply(ext)});
        return true;
      });
    }
    if (result) {
      if (std::find(fired_.begin(), fired_.end(), idx) == fired_.end()) fired_.push_back(idx);
      count_step(*result);
      changed = true;
      return *result;
    }
  }
  return t;
}

Term Rewriter::normal_form(const Term& input) {
  if (auto hit = cache_.find(input); hit != cache_.end()) return hit->second;
  Term t = input;
  for (;;) {
    if (t.is_app() && !t.args().empty()) {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(normal_form(a));
        changed = changed || !(args.back() == a);
      }
      if (changed) t = Term::app(t.op(), std::move(args));
    }
    bool changed = false;
    Term next = rewrite_root(t, changed);
    if (!changed) break;
    t = next;
  }
  cache_.emplace(input, t);
  return t;
}

// ---------------------------------------------------------------- entailment

RuleBase make_rule_base(const Specification& spec, const std::vector<Equation>& extra) {
  RuleBase base;
  OrientResult o = orient(spec.equations);
  base.rules = std::move(o.rules);
  base.rejected = std::move(o.rejected);
  std::string why;
  for (const auto& e : extra) {
    if (auto r = orient_hypothesis(e.lhs, e.rhs, e.condition, &why)) {
      r->origin = RuleOrigin::proved_property;
      base.rules.push_back(std::move(*r));
    } else {
      base.rejected.push_back({eq_text(e.lhs, e.rhs), why});
    }
  }
  return base;
}

Term skolem(const Term& var) { return Term::fresh("#" + var.name(), var.sort()); }

EntailResult entails(const Signature& sig, const RuleBase& base, const std::vector<FrozenGoal>& hyps,
                     const FrozenGoal& goal, const Budget& budget) {
  Substitution sk;
  std::vector<Term> vars = vars_of(goal.lhs);
  collect_vars(goal.rhs, vars);
  for (const auto& [u, v] : goal.condition) {
    collect_vars(u, vars);
    collect_vars(v, vars);
  }
  for (const auto& v : vars) sk.bind(v, skolem(v));

  Rewriter rw(sig, budget);
  rw.add_rules(base.rules);
  std::vector<std::size_t> hyp_of_rule(base.rules.size(), SIZE_MAX);
  for (std::size_t i = 0; i < hyps.size(); ++i)
    if (auto r = orient_hypothesis(hyps[i].lhs, hyps[i].rhs, hyps[i].condition)) {
      rw.add_rule(std::move(*r));
      hyp_of_rule.push_back(i);
    }
  for (const auto& [u, v] : goal.condition)
    if (auto r = orient_equation(sk.apply(u), sk.apply(v), {}, RuleOrigin::condition_assumption))
      rw.add_rule(std::move(*r));

  EntailResult res;
  try {
    res.lhs_nf = rw.normal_form(sk.apply(goal.lhs));
    res.rhs_nf = rw.normal_form(sk.apply(goal.rhs));
    res.verdict = res.lhs_nf == res.rhs_nf ? Verdict::proved : Verdict::not_proved;
  } catch (const BudgetExceeded&) {
    res.verdict = Verdict::budget_exceeded;
  }
  res.steps = rw.steps_used();
  for (std::size_t idx : rw.fired())
    if (idx < hyp_of_rule.size() && hyp_of_rule[idx] != SIZE_MAX) res.hypotheses_used.push_back(hyp_of_rule[idx]);
  std::sort(res.hypotheses_used.begin(), res.hypotheses_used.end());
  return res;
}

EntailResult entails(const Specification& spec, const std::vector<FrozenGoal>& hyps, const FrozenGoal& goal,
                     const Budget& budget) {
  return entails(spec.sig, make_rule_base(spec), hyps, goal, budget);
}

EntailResult entails(const Specification& spec, const Equation& goal, const Budget& budget) {
  FrozenGoal g;
  g.lhs = goal.lhs;
  g.rhs = goal.rhs;
  g.condition = goal.condition;
  g.other_vars = goal.all_vars();
  return entails(spec, {}, g, budget);
}

}  // namespace circlet
