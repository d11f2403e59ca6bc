#include "circlet/coinduction.hpp"

#include <algorithm>
#include <chrono>

#include "circlet/print.hpp"

namespace circlet {

namespace {

Term unwrap(const Term& t) { return t.is_app() && t.op()->freeze ? t.args()[0] : t; }
Term wrap(const Term& t) { return Term::app(freeze_operator(), {t}); }

FrozenGoal wrapped(const Term& l, const Term& r, const Condition& c, const FrozenGoal& like) {
  FrozenGoal g;
  g.lhs = wrap(l);
  g.rhs = wrap(r);
  g.condition = c;
  g.other_vars = vars_of(g.lhs);
  collect_vars(g.rhs, g.other_vars);
  for (const auto& [u, v] : c) {
    collect_vars(u, g.other_vars);
    collect_vars(v, g.other_vars);
  }
  g.origin = like.origin;
  return g;
}

Term rename_var(const Term& v, const std::vector<Term>& taken) {
  std::string name = v.name();
  auto clash = [&](const std::string& n) {
    return std::any_of(taken.begin(), taken.end(), [&](const Term& t) { return t.name() == n; });
  };
  while (clash(name)) name += "'";
  return Term::var(name, v.sort());
}

}  // namespace

FrozenGoal wrap_goal(const Equation& e, const Specification& spec) {
  Equation f = freeze_top(e, spec.hidden_sorts());
  FrozenGoal g;
  g.lhs = f.lhs;
  g.rhs = f.rhs;
  g.condition = f.condition;
  g.other_vars = e.all_vars();
  g.origin = e;
  return g;
}

Sort goal_sort(const FrozenGoal& g, const Specification& spec) {
  return spec.sig.base_sort(least_sort(unwrap(g.lhs), spec.sig));
}

std::vector<FrozenGoal> coin_derivatives(const FrozenGoal& g, const Specification& spec) {
  std::vector<FrozenGoal> out;
  Sort s = goal_sort(g, spec);
  if (!spec.is_hidden(s)) return out;
  Term l = unwrap(g.lhs), r = unwrap(g.rhs);
  for (const auto& d : spec.derivatives_for(s)) out.push_back(wrapped(d.plug(l), d.plug(r), g.condition, g));
  return out;
}

std::vector<FrozenGoal> special_instances(const FrozenGoal& g, const Specification& spec) {
  std::vector<FrozenGoal> out;
  Sort s = goal_sort(g, spec);
  Term l = unwrap(g.lhs), r = unwrap(g.rhs);
  for (const auto& gamma : spec.specials) {
    if (!spec.sig.leq(s, gamma.hole_sort)) continue;
    Context c = gamma;
    std::vector<Term> taken = g.other_vars;
    for (const auto& v : vars_of(gamma.body)) {
      if (v.name() == "*") continue;
      Term nv = rename_var(v, taken);
      taken.push_back(nv);
      if (!(nv == v)) c.body = replace(c.body, v, nv);
    }
    out.push_back(wrapped(c.plug(l), c.plug(r), g.condition, g));
  }
  return out;
}

std::vector<Context> coin_experiments_up_to(const Sort& s, std::size_t depth, const Specification& spec) {
  if (!spec.is_hidden(s)) throw TermError("coinductive experiments need a hidden sort, got " + s);
  std::vector<Context> out;
  // Frontier of hidden-result contexts, starting from the bare hole.
  std::vector<Term> frontier{Context::hole(s)};
  for (std::size_t d = 1; d <= depth && !frontier.empty(); ++d) {
    std::vector<Term> next;
    for (const auto& inner : frontier) {
      Sort is = spec.sig.base_sort(least_sort(inner, spec.sig));
      for (const auto& der : spec.derivatives_for(is)) {
        Term t = der.plug(inner);
        Sort rs = spec.sig.base_sort(least_sort(t, spec.sig));
        if (spec.is_hidden(rs)) next.push_back(t);
        else out.push_back(Context::make(t));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- calculus

CoinductionState::CoinductionState(Specification spec, std::vector<Equation> goals, Limits limits,
                                   std::vector<Equation> proved)
    : spec_(std::move(spec)), limits_(limits), initial_(std::move(goals)) {
  proved_ = proved;
  base_ = make_rule_base(spec_, proved_);
  for (const auto& e : initial_) {
    e.validate(spec_.sig);
    G_.push_back(GoalNode{wrap_goal(e, spec_), next_node_++, -1, ""});
  }
  if (G_.empty()) outcome_ = Outcome::success;
}

void CoinductionState::add_hypothesis(TraceStep& st, const FrozenGoal& h, int node, const std::string& kind,
                                      const std::string& label) {
  Hypothesis hyp{h, node, kind, label};
  st.f_added.push_back(hyp);
  if (std::none_of(F_.begin(), F_.end(), [&](const Hypothesis& x) { return x.eq == h; })) F_.push_back(std::move(hyp));
}

void CoinductionState::finish(Outcome o, std::optional<FrozenGoal> failed, std::string msg, TraceStep& st) {
  outcome_ = o;
  failed_ = std::move(failed);
  message_ = std::move(msg);
  st.message = message_;
}

const TraceStep& CoinductionState::step() {
  auto t0 = std::chrono::steady_clock::now();
  TraceStep st;
  st.index = trace_.size() + 1;
  st.calculus = "coinduction";
  if (done()) {
    st.rule = outcome_name(outcome_);
    st.message = message_;
    trace_.push_back(std::move(st));
    return trace_.back();
  }
  st.f_before = F_;
  st.g_before.assign(G_.begin(), G_.end());
  GoalNode node = G_.front();
  G_.pop_front();
  st.node = node.id;
  st.goal = node.goal;
  std::vector<FrozenGoal> eqs = equations_of(F_);

  EntailResult er = entails(spec_.sig, base_, eqs, node.goal, limits_.budget);
  if (er.verdict == Verdict::proved) {
    st.rule = "Reduce";
    for (auto i : er.hypotheses_used) st.used_hypotheses.push_back(static_cast<int>(i));
    ++reduces_;
    if (G_.empty()) finish(Outcome::success, std::nullopt, "Proof succeeded.", st);
  } else {
    FrozenGoal norm = node.goal;
    try {
      Rewriter rw(spec_.sig, limits_.budget);
      rw.add_rules(base_.rules);
      norm.lhs = rw.normal_form(norm.lhs);
      norm.rhs = rw.normal_form(norm.rhs);
    } catch (const BudgetExceeded&) {
      norm = node.goal;
    }
    Sort s = goal_sort(norm, spec_);
    if (!spec_.is_hidden(s)) {
      st.rule = "Stuck";
      st.rewritten = norm;
      G_.push_front(node);
      finish(Outcome::stuck, norm, "Visible goal " + to_string(norm) + " failed during coinduction.", st);
    } else if (derives_ >= limits_.max_derive) {
      st.rule = "BudgetExceeded";
      G_.push_front(node);
      finish(Outcome::budget_exceeded, node.goal,
             "Derive limit of " + std::to_string(limits_.max_derive) + " reached on goal " + to_string(node.goal) +
                 ".",
             st);
    } else {
      st.rule = "Derive";
      st.rewritten = norm;
      ++derives_;
      add_hypothesis(st, norm, node.id, "goal", "");
      st.gamma = special_instances(norm, spec_);
      for (const auto& g : st.gamma) add_hypothesis(st, g, node.id, "special", "");
      std::vector<GoalNode> children;
      std::vector<Context> ders = spec_.derivatives_for(s);
      std::vector<FrozenGoal> derived = coin_derivatives(norm, spec_);
      for (std::size_t i = 0; i < derived.size(); ++i) {
        const Term& body = ders[i].body;
        std::string label = body.is_app() ? body.op()->name : to_string(body);
        children.push_back(GoalNode{derived[i], next_node_++, node.id, label});
      }
      for (auto it = children.rbegin(); it != children.rend(); ++it) G_.push_front(*it);
      st.g_added = children;
    }
  }
  if (outcome_ == Outcome::running && trace_.size() + 1 >= limits_.max_steps)
    finish(Outcome::budget_exceeded, G_.empty() ? std::nullopt : std::optional<FrozenGoal>(G_.front().goal),
           "Step limit of " + std::to_string(limits_.max_steps) + " reached.", st);
  trace_.push_back(std::move(st));
  seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace_.back();
}

ProofResult CoinductionState::run() {
  while (!done()) step();
  return result();
}

ProofResult CoinductionState::result() const {
  ProofResult r;
  r.outcome = outcome_;
  r.trace = trace_;
  r.hypotheses = F_;
  r.failed = failed_;
  r.message = message_;
  r.derives = derives_;
  r.reduces = reduces_;
  r.seconds = seconds_;
  return r;
}

ProofResult prove_coinduction(const Specification& spec, const std::vector<Equation>& goals, const Limits& limits,
                              const std::vector<Equation>& proved) {
  CoinductionState st(spec, goals, limits, proved);
  return st.run();
}

}  // namespace circlet
