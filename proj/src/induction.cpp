#include "circlet/induction.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>

#include "circlet/print.hpp"

namespace circlet {

const char* mode_name(InductionMode m) {
  switch (m) {
    case InductionMode::basic: return "basic";
    case InductionMode::extended: return "extended";
    case InductionMode::subsort: return "subsort";
  }
  return "?";
}

std::optional<InductionMode> parse_mode(const std::string& s) {
  if (s == "basic") return InductionMode::basic;
  if (s == "extended") return InductionMode::extended;
  if (s == "subsort") return InductionMode::subsort;
  return std::nullopt;
}

// ---------------------------------------------------------------- incarnations

void IncarnationGraph::add(const Term& child, const Term& parent, bool same_sort) {
  if (parent_edge_.count(child)) return;
  parent_edge_[child] = edges_.size();
  edges_.push_back({child, parent, same_sort});
}

std::optional<Term> IncarnationGraph::parent(const Term& c) const {
  auto it = parent_edge_.find(c);
  if (it == parent_edge_.end()) return std::nullopt;
  return edges_[it->second].parent;
}

int IncarnationGraph::generation(const Term& c) const {
  int g = 0;
  for (auto p = parent(c); p; p = parent(*p)) ++g;
  return g;
}

bool IncarnationGraph::same(const Term& child, const Term& parent) const {
  auto it = parent_edge_.find(child);
  return it != parent_edge_.end() && edges_[it->second].same_sort && edges_[it->second].parent == parent;
}

bool IncarnationGraph::star_plus(const Term& child, const Term& ancestor) const {
  for (auto p = parent(child); p; p = parent(*p))
    if (*p == ancestor) return true;
  return false;
}

std::vector<Term> IncarnationGraph::ancestors(const Term& c) const {
  std::vector<Term> out;
  for (auto p = parent(c); p; p = parent(*p)) out.push_back(*p);
  return out;
}

bool IncarnationGraph::acyclic() const {
  for (const auto& e : edges_)
    if (e.child.generation() <= e.parent.generation()) return false;
  return true;
}

// ---------------------------------------------------------------- naming

void FreshNamer::reserve(const Term& c, const Sort& base_sort) {
  used_.insert({c.name(), c.index()});
  base_for_sort_.emplace(base_sort, c.name());
}

int FreshNamer::next_index(const std::string& base) const {
  int idx = 0;
  for (auto it = used_.lower_bound({base, 0}); it != used_.end() && it->first == base; ++it)
    idx = std::max(idx, it->second);
  return idx + 1;
}

Term FreshNamer::same_sort(const Term& parent) {
  Term c = Term::frozen(parent.name(), next_index(parent.name()), parent.sort(), parent.generation() + 1);
  used_.insert({c.name(), c.index()});
  return c;
}

Term FreshNamer::cross_sort(const Term& parent, const Sort& sort) {
  std::string base;
  if (auto it = base_for_sort_.find(sort); it != base_for_sort_.end()) {
    base = it->second;
  } else {
    base = sort.empty() ? "x" : std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(sort[0]))));
  }
  int idx = used(base, 0) ? next_index(base) : 0;
  Term c = Term::frozen(base, idx, sort, parent.generation() + 1);
  reserve(c, sort);
  return c;
}

std::string FreshNamer::initial_base(const std::string& var_name) const {
  std::string base = frozen_base_name(var_name);
  auto taken = [&](const std::string& b) {
    auto it = used_.lower_bound({b, 0});
    return it != used_.end() && it->first == b;
  };
  while (taken(base)) base += "'";
  return base;
}

// ---------------------------------------------------------------- derivatives

namespace {

Term resort(const Term& t, const Term& c) {
  if (t.is_frozen()) return t == c ? c : t;
  if (!t.is_app() || t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(resort(a, c));
  return Term::app(t.op(), std::move(args));
}

FrozenGoal resort_goal(const FrozenGoal& g, const Term& c) {
  FrozenGoal out = g;
  if (!occurs(c, g.lhs) && !occurs(c, g.rhs) &&
      std::none_of(g.condition.begin(), g.condition.end(),
                   [&](const auto& p) { return occurs(c, p.first) || occurs(c, p.second); }))
    return out;
  out.lhs = resort(g.lhs, c);
  out.rhs = resort(g.rhs, c);
  for (auto& [u, v] : out.condition) {
    u = resort(u, c);
    v = resort(v, c);
  }
  for (auto& y : out.fvar)
    if (y == c) y = c;
  return out;
}

bool occurs_in_goal(const Term& c, const FrozenGoal& g) {
  if (occurs(c, g.lhs) || occurs(c, g.rhs)) return true;
  for (const auto& [u, v] : g.condition)
    if (occurs(c, u) || occurs(c, v)) return true;
  return false;
}

std::string ctor_label(const OpPtr& op) { return op->name; }

}  // namespace

std::vector<DerivedGoal> derive_on(const FrozenGoal& g, const Term& y, const Specification& spec,
                                   FreshNamer& namer) {
  std::vector<DerivedGoal> out;
  const Sort base = spec.sig.base_sort(y.sort());
  for (const OpPtr& c : spec.constructors_of(base)) {
    DerivedGoal d;
    d.constructor = c;
    d.target = y;
    d.label = ctor_label(c);
    std::vector<Term> args;
    for (const Sort& a : c->arg_sorts) {
      Term f = a == base ? namer.same_sort(y) : namer.cross_sort(y, a);
      d.fresh.push_back(f);
      d.edges.push_back({f, y, a == base});
      args.push_back(f);
    }
    d.goal = substitute_frozen(g, y, Term::app(c, args));
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DerivedGoal> derivatives_for(const FrozenGoal& g, const Specification& spec, FreshNamer& namer) {
  std::vector<DerivedGoal> out;
  for (const auto& y : g.fvar) {
    if (!spec.is_inductive(spec.sig.base_sort(y.sort()))) continue;
    auto ds = derive_on(g, y, spec, namer);
    out.insert(out.end(), ds.begin(), ds.end());
  }
  return out;
}

// ---------------------------------------------------------------- experiments

std::vector<Term> constructor_terms(const Sort& s, std::size_t depth, const Specification& spec) {
  std::map<std::pair<Sort, std::size_t>, std::vector<Term>> memo;
  std::function<const std::vector<Term>&(const Sort&, std::size_t)> terms =
      [&](const Sort& sort, std::size_t d) -> const std::vector<Term>& {
    auto key = std::make_pair(sort, d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> out;
    if (d >= 1) {
      if (!spec.is_inductive(sort)) {
        for (const auto& op : spec.sig.ops())
          if (op->arity() == 0 && !op->freeze && op->result_sort == sort) out.push_back(Term::constant(op));
      } else {
        for (const auto& c : spec.constructors_of(sort)) {
          if (c->arity() == 0) {
            out.push_back(Term::constant(c));
            continue;
          }
          std::vector<const std::vector<Term>*> pools;
          bool empty = false;
          for (const auto& a : c->arg_sorts) {
            pools.push_back(&terms(spec.sig.base_sort(a), d - 1));
            empty = empty || pools.back()->empty();
          }
          if (empty) continue;
          std::vector<std::size_t> pick(pools.size(), 0);
          for (;;) {
            std::vector<Term> args;
            for (std::size_t i = 0; i < pools.size(); ++i) args.push_back((*pools[i])[pick[i]]);
            out.push_back(Term::app(c, std::move(args)));
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == pools[i]->size()) pick[i++] = 0;
            if (i == pick.size()) break;
          }
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  std::vector<Term> out = terms(spec.sig.base_sort(s), depth);
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Experiment::depth() const {
  std::size_t d = 0;
  for (const auto& [k, v] : binding) d = std::max(d, v.depth());
  return d;
}

FrozenGoal Experiment::apply(const FrozenGoal& g) const {
  FrozenGoal out = g;
  for (const auto& [k, v] : binding) {
    if (k.is_frozen()) {
      out = substitute_frozen(out, k, v);
    } else {
      out.lhs = replace(out.lhs, k, v);
      out.rhs = replace(out.rhs, k, v);
      for (auto& [u, w] : out.condition) {
        u = replace(u, k, v);
        w = replace(w, k, v);
      }
    }
  }
  return out;
}

std::vector<Experiment> experiments_up_to(const std::vector<Term>& ys, std::size_t depth,
                                          const Specification& spec) {
  std::vector<std::vector<Term>> pools;
  for (const auto& y : ys) {
    pools.push_back(constructor_terms(y.sort(), depth, spec));
    if (pools.back().empty()) return {};
  }
  std::vector<Experiment> out;
  std::vector<std::size_t> pick(pools.size(), 0);
  for (;;) {
    Experiment e;
    for (std::size_t i = 0; i < ys.size(); ++i) e.binding.emplace_back(ys[i], pools[i][pick[i]]);
    out.push_back(std::move(e));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == pools[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

Decomposition decompose(const Experiment& theta, const FrozenGoal& g, const Specification& spec) {
  FreshNamer namer;
  auto reserve_all = [&](const FrozenGoal& goal) {
    std::vector<Term> cs;
    collect_frozen(goal.lhs, cs);
    collect_frozen(goal.rhs, cs);
    for (const auto& [u, v] : goal.condition) {
      collect_frozen(u, cs);
      collect_frozen(v, cs);
    }
    for (const auto& c : cs) namer.reserve(c, spec.sig.base_sort(c.sort()));
  };
  reserve_all(g);

  Decomposition out;
  out.result = g;
  std::vector<std::pair<Term, Term>> work(theta.binding.begin(), theta.binding.end());
  while (!work.empty()) {
    auto [y, value] = work.front();
    work.erase(work.begin());
    if (!value.is_app()) throw TermError("experiments bind constructor terms only");
    const OpPtr& c = value.op();
    if (!spec.is_inductive(spec.sig.base_sort(y.sort()))) {
      out.chain.push_back({c, y});
      out.result = substitute_frozen(out.result, y, value);
      continue;
    }
    out.chain.push_back({c, y});
    bool found = false;
    for (auto& d : derive_on(out.result, y, spec, namer)) {
      if (d.constructor != c) continue;
      out.result = d.goal;
      for (std::size_t i = 0; i < d.fresh.size(); ++i) work.emplace_back(d.fresh[i], value.args()[i]);
      found = true;
      break;
    }
    if (!found) throw TermError("no derivative for constructor " + c->name);
  }
  return out;
}

// ---------------------------------------------------------------- hypothesis sets

std::vector<FrozenGoal> h_set(const FrozenGoal& g, const std::vector<Term>& fv, const IncarnationGraph& graph) {
  std::vector<FrozenGoal> out;
  for (const auto& y2 : fv)
    for (const auto& y : g.fvar)
      if (graph.same(y2, y) && occurs_in_goal(y, g)) out.push_back(substitute_frozen(g, y, y2));
  return out;
}

std::vector<FrozenGoal> h_star(const std::vector<FrozenGoal>& F, const std::vector<Term>& fv,
                               const IncarnationGraph& graph, const Signature& sig) {
  std::vector<FrozenGoal> out;
  for (const auto& f : F)
    for (const auto& y : f.fvar) {
      if (!occurs_in_goal(y, f)) continue;
      for (const auto& y2 : fv)
        if (graph.star_plus(y2, y) && sig.base_sort(y2.sort()) == sig.base_sort(y.sort()))
          out.push_back(substitute_frozen(f, y, y2));
    }
  return out;
}

namespace {

std::string upper(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

Term generic_var(const Term& c, const Sort& subsort) {
  return Term::var(upper(c.name()) + "#" + std::to_string(c.index()), subsort);
}

}  // namespace

FrozenGoal h_prime(const FrozenGoal& g, const Term& y, const SourceMap& sources, const Specification& spec) {
  FrozenGoal out = g;
  std::vector<Term> generalized;
  for (const auto& c : g.fvar) {
    if (!spec.is_inductive(spec.sig.base_sort(c.sort()))) continue;
    auto src = sources.source.find(c);
    if (src == sources.source.end()) continue;
    bool is_source = src->second == c;
    if (!is_source && !(c == y)) continue;
    auto sub = sources.subsort.find(src->second);
    if (sub == sources.subsort.end()) continue;
    Term v = generic_var(c, sub->second);
    out.lhs = replace(out.lhs, c, v);
    out.rhs = replace(out.rhs, c, v);
    for (auto& [u, w] : out.condition) {
      u = replace(u, c, v);
      w = replace(w, c, v);
    }
    out.other_vars.push_back(v);
    generalized.push_back(c);
  }
  out.fvar.erase(std::remove_if(out.fvar.begin(), out.fvar.end(),
                                [&](const Term& c) {
                                  return std::find(generalized.begin(), generalized.end(), c) != generalized.end();
                                }),
                 out.fvar.end());
  return out;
}

// ---------------------------------------------------------------- variable selection

namespace {
// Argument order of comm operators is canonical, so any position counts.
constexpr std::size_t kAnyPosition = static_cast<std::size_t>(-1);
}  // namespace

std::set<std::pair<int, std::size_t>> inductive_positions(const Specification& spec) {
  std::set<std::pair<int, std::size_t>> out;
  for (const auto& e : spec.equations) {
    if (!e.lhs.is_app() || e.lhs.op()->constructor) continue;
    for (std::size_t i = 0; i < e.lhs.args().size(); ++i)
      if (!e.lhs.args()[i].is_var()) out.insert({e.lhs.op()->id, e.lhs.op()->comm ? kAnyPosition : i});
  }
  return out;
}

std::optional<Term> select_variable(const FrozenGoal& g, const Specification& spec,
                                    const std::set<std::pair<int, std::size_t>>& positions) {
  auto candidate = [&](const Term& t) {
    return t.is_frozen() && std::find(g.fvar.begin(), g.fvar.end(), t) != g.fvar.end() &&
           spec.is_inductive(spec.sig.base_sort(t.sort()));
  };
  std::optional<Term> found, fallback;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    if (found) return;
    if (candidate(t) && !fallback) fallback = t;
    if (!t.is_app()) return;
    bool defined = !t.op()->constructor;
    for (std::size_t i = 0; i < t.args().size() && !found; ++i) {
      const Term& a = t.args()[i];
      if (defined && candidate(a) &&
          (positions.count({t.op()->id, i}) || positions.count({t.op()->id, kAnyPosition}))) {
        found = a;
        return;
      }
      visit(a);
    }
  };
  visit(g.lhs);
  visit(g.rhs);
  for (const auto& [u, v] : g.condition) {
    visit(u);
    visit(v);
  }
  return found ? found : fallback;
}

// ---------------------------------------------------------------- simplification

namespace {

Rewriter make_rewriter(const Signature& sig, const RuleBase& base, const std::vector<FrozenGoal>& hyps,
                       const Budget& budget) {
  Rewriter rw(sig, budget);
  rw.add_rules(base.rules);
  for (const auto& h : hyps)
    if (auto r = orient_hypothesis(h.lhs, h.rhs, h.condition)) rw.add_rule(std::move(*r));
  return rw;
}

// One step of reading a spec equation right to left at the root of t.
std::vector<Term> expansions(const Term& t, const Specification& spec) {
  std::vector<Term> out;
  for (const auto& e : spec.equations) {
    if (e.rhs.is_var() || !e.condition.empty()) continue;
    std::vector<Term> lv = vars_of(e.lhs), rv = vars_of(e.rhs);
    bool covered = std::all_of(lv.begin(), lv.end(),
                               [&](const Term& v) { return std::find(rv.begin(), rv.end(), v) != rv.end(); });
    if (!covered) continue;
    match_each(e.rhs, t, spec.sig, {}, [&](const Substitution& s) {
      Term x = s.apply(e.lhs);
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      return false;
    });
  }
  return out;
}

}  // namespace

std::optional<FrozenGoal> simplify_goal(const FrozenGoal& g, const Specification& spec, const RuleBase& base,
                                        const std::vector<FrozenGoal>& hyps, const Budget& budget) {
  if (spec.simplifications.empty()) return std::nullopt;
  std::vector<Term> lefts{g.lhs}, rights{g.rhs};
  for (const auto& x : expansions(g.lhs, spec)) lefts.push_back(x);
  for (const auto& x : expansions(g.rhs, spec)) rights.push_back(x);

  Rewriter rw = make_rewriter(spec.sig, base, hyps, budget);
  std::optional<Term> nl, nr;
  auto same_nf = [&](const Term& a, const Term& original, std::optional<Term>& cache) {
    if (a == original) return true;
    try {
      if (!cache) cache = rw.normal_form(original);
      return rw.normal_form(a) == *cache;
    } catch (const BudgetExceeded&) {
      return false;
    }
  };

  for (const auto& rule : spec.simplifications) {
    for (const auto& l : lefts)
      for (const auto& r : rights) {
        std::optional<FrozenGoal> result;
        match_each(rule.premise.lhs, l, spec.sig, {}, [&](const Substitution& s1) {
          return match_each(rule.premise.rhs, r, spec.sig, s1, [&](const Substitution& s) {
            FrozenGoal c = g;
            c.lhs = s.apply(rule.conclusion.lhs);
            c.rhs = s.apply(rule.conclusion.rhs);
            if (c.lhs.size() + c.rhs.size() >= g.lhs.size() + g.rhs.size()) return false;
            if (!same_nf(l, g.lhs, nl) || !same_nf(r, g.rhs, nr)) return false;
            c.fvar.clear();
            for (const auto& y : g.fvar)
              if (occurs_in_goal(y, c)) c.fvar.push_back(y);
            result = std::move(c);
            return true;
          });
        });
        if (result) return result;
      }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- calculus

InductionState::InductionState(Specification spec, std::vector<Equation> goals, InductionMode mode, Limits limits,
                               std::vector<Equation> proved)
    : spec_(std::move(spec)), mode_(mode), limits_(limits), initial_(std::move(goals)) {
  proved_ = proved;
  base_ = make_rule_base(spec_, proved_);
  positions_ = inductive_positions(spec_);
  generic_forms_.resize(initial_.size());
  for (std::size_t i = 0; i < initial_.size(); ++i) {
    Equation e = initial_[i];
    e.validate(spec_.sig);
    FrozenGoal g;
    {
      Substitution sigma;
      for (const auto& y : e.inductive_vars) {
        Sort base = spec_.sig.base_sort(y.sort());
        Term c = Term::frozen(namer_.initial_base(y.name()), 0, y.sort(), 0);
        namer_.reserve(c, base);
        sigma.bind(y, c);
        g.fvar.push_back(c);
      }
      g.lhs = sigma.apply(e.lhs);
      g.rhs = sigma.apply(e.rhs);
      for (const auto& [u, v] : e.condition) g.condition.emplace_back(sigma.apply(u), sigma.apply(v));
      g.other_vars = e.other_vars;
      g.origin = e;
    }
    if (mode_ == InductionMode::subsort) {
      for (const Term& c : std::vector<Term>(g.fvar)) {
        Sort base = spec_.sig.base_sort(c.sort());
        if (!spec_.is_inductive(base)) continue;
        Sort sub = spec_.sig.add_fresh_subsort(base, frozen_display(c.name(), c.index()));
        Term rs = Term::frozen(c.name(), c.index(), sub, c.generation());
        sources_.source[rs] = rs;
        sources_.subsort[rs] = sub;
        g = resort_goal(g, rs);
      }
    }
    int id = new_node(g, -1, "");
    root_goal_[id] = i;
    G_.push_back(GoalNode{g, id, -1, ""});
  }
  if (G_.empty()) outcome_ = Outcome::success;
}

int InductionState::new_node(const FrozenGoal& g, int parent, const std::string&) {
  parent_of_.push_back(parent);
  node_goal_.push_back(g);
  int id = static_cast<int>(parent_of_.size()) - 1;
  if (parent >= 0) {
    if (auto it = root_goal_.find(parent); it != root_goal_.end()) root_goal_[id] = it->second;
  }
  return id;
}

void InductionState::add_hypothesis(TraceStep& st, const FrozenGoal& h, int node, const std::string& kind,
                                    const std::string& label) {
  Hypothesis hyp{h, node, kind, label};
  st.f_added.push_back(hyp);
  bool dup = std::any_of(F_.begin(), F_.end(), [&](const Hypothesis& x) { return x.eq == h; });
  if (!dup) F_.push_back(std::move(hyp));
}

void InductionState::finish(Outcome o, std::optional<FrozenGoal> failed, std::string msg, TraceStep& st) {
  outcome_ = o;
  failed_ = std::move(failed);
  message_ = std::move(msg);
  st.message = message_;
}

Term InductionState::subsort_var(const Term& c) const {
  auto src = sources_.source.at(c);
  return generic_var(c, sources_.subsort.at(src));
}

void InductionState::enrich(DerivedGoal& d, const Term& target) {
  for (auto& f : d.fresh) {
    Sort base = spec_.sig.base_sort(f.sort());
    if (!spec_.is_inductive(base)) continue;
    std::optional<Term> src;
    std::vector<Term> chain{target};
    for (const auto& a : graph_.ancestors(target)) chain.push_back(a);
    for (const auto& a : chain)
      if (spec_.sig.base_sort(a.sort()) == base) src = a;
    if (src) {
      src = sources_.source.count(*src) ? sources_.source.at(*src) : *src;
    }
    Term rs;
    if (src && sources_.subsort.count(*src)) {
      rs = Term::frozen(f.name(), f.index(), sources_.subsort.at(*src), f.generation());
      sources_.source[rs] = *src;
    } else {
      Sort sub = spec_.sig.add_fresh_subsort(base, frozen_display(f.name(), f.index()));
      rs = Term::frozen(f.name(), f.index(), sub, f.generation());
      sources_.source[rs] = rs;
      sources_.subsort[rs] = sub;
    }
    d.goal = resort_goal(d.goal, rs);
    for (auto& e : d.edges) {
      if (e.child == rs) e.child = rs;
    }
    f = rs;
  }
}

namespace {

// Pairs left over after peeling constructor applications shared by both sides.
void residues(const Term& a, const Term& b, std::vector<std::pair<Term, Term>>& out) {
  if (a == b) return;
  if (a.is_app() && b.is_app() && a.op() == b.op() && a.op()->constructor && !a.op()->comm) {
    for (std::size_t i = 0; i < a.args().size(); ++i) residues(a.args()[i], b.args()[i], out);
    return;
  }
  out.emplace_back(a, b);
}

bool variant(const Term& a, const Term& b, std::map<Term, Term>& fwd, std::map<Term, Term>& back) {
  if (a.is_frozen() || b.is_frozen()) {
    if (!a.is_frozen() || !b.is_frozen()) return false;
    auto f = fwd.emplace(a, b).first;
    auto r = back.emplace(b, a).first;
    return f->second == b && r->second == a;
  }
  if (a.kind() != b.kind()) return false;
  if (!a.is_app()) return a == b;
  if (a.op() != b.op() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!variant(a.args()[i], b.args()[i], fwd, back)) return false;
  return true;
}

bool variant_of(const std::pair<Term, Term>& r, const FrozenGoal& g) {
  if (!g.condition.empty()) return false;
  std::map<Term, Term> f1, b1, f2, b2;
  return (variant(r.first, g.lhs, f1, b1) && variant(r.second, g.rhs, f1, b1)) ||
         (variant(r.first, g.rhs, f2, b2) && variant(r.second, g.lhs, f2, b2));
}

}  // namespace

std::optional<FrozenGoal> InductionState::repeated_goal(const FrozenGoal& g, int node) const {
  if (!g.condition.empty()) return std::nullopt;
  std::vector<std::pair<Term, Term>> rs;
  residues(g.lhs, g.rhs, rs);
  if (rs.empty() || (rs.size() == 1 && rs[0].first == g.lhs && rs[0].second == g.rhs)) return std::nullopt;
  std::vector<const FrozenGoal*> earlier;
  for (int n = parent_of_[static_cast<std::size_t>(node)]; n >= 0; n = parent_of_[static_cast<std::size_t>(n)])
    earlier.push_back(&node_goal_[static_cast<std::size_t>(n)]);
  for (const auto& h : F_) earlier.push_back(&h.eq);
  for (const auto& r : rs) {
    std::vector<Term> cs;
    collect_frozen(r.first, cs);
    collect_frozen(r.second, cs);
    if (cs.empty()) continue;
    for (const FrozenGoal* e : earlier)
      if (variant_of(r, *e)) return *e;
  }
  return std::nullopt;
}

const TraceStep& InductionState::step() {
  auto t0 = std::chrono::steady_clock::now();
  TraceStep st;
  st.index = trace_.size() + 1;
  st.calculus = "induction";
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
    // B ∪ F normal form, variables kept in place.
    FrozenGoal norm = node.goal;
    try {
      Rewriter rw = make_rewriter(spec_.sig, base_, eqs, limits_.budget);
      norm.lhs = rw.normal_form(norm.lhs);
      norm.rhs = rw.normal_form(norm.rhs);
      for (auto& [u, v] : norm.condition) {
        u = rw.normal_form(u);
        v = rw.normal_form(v);
      }
    } catch (const BudgetExceeded&) {
      norm = node.goal;
    }
    norm.fvar.clear();
    for (const auto& y : node.goal.fvar)
      if (occurs_in_goal(y, norm)) norm.fvar.push_back(y);

    std::optional<FrozenGoal> simplified;
    if (!spec_.simplifications.empty()) simplified = simplify_goal(norm, spec_, base_, eqs, limits_.budget);

    if (simplified && !(*simplified == node.goal)) {
      st.rule = "Simplify";
      st.rewritten = *simplified;
      int id = new_node(*simplified, node.id, "simplify");
      GoalNode child{*simplified, id, node.id, "simplify"};
      st.g_added.push_back(child);
      G_.push_front(child);
    } else if (auto rep = repeated_goal(norm, node.id)) {
      // The goal holds an earlier goal, renamed, under constructors, and no
      // hypothesis covers the renamed constants: deriving would only replay it.
      st.rule = "Stuck";
      st.rewritten = norm;
      G_.push_front(node);
      finish(Outcome::stuck, node.goal,
             "Goal " + to_string(node.goal) + " failed during induction: it repeats " + to_string(*rep) +
                 " with no hypothesis for its frozen constants.",
             st);
    } else if (derives_ >= limits_.max_derive) {
      st.rule = "BudgetExceeded";
      std::vector<int> open{node.id};
      for (const auto& n : G_) open.push_back(n.id);
      int lca = lowest_common_ancestor(open, parent_of_);
      FrozenGoal failed = lca >= 0 ? node_goal_[static_cast<std::size_t>(lca)] : node.goal;
      G_.push_front(node);
      finish(Outcome::budget_exceeded, failed,
             "Derive limit of " + std::to_string(limits_.max_derive) + " reached on goal " + to_string(failed) + ".",
             st);
    } else if (auto y = select_variable(norm, spec_, positions_); !y) {
      st.rule = "Stuck";
      st.rewritten = norm;
      G_.push_front(node);
      finish(Outcome::stuck, norm, "Goal " + to_string(norm) + " failed during induction.", st);
    } else {
      st.rule = "Derive";
      st.rewritten = norm;
      st.derived_var = *y;
      ++derives_;
      auto derived = derive_on(norm, *y, spec_, namer_);
      if (mode_ == InductionMode::subsort)
        for (auto& d : derived) enrich(d, *y);
      for (const auto& d : derived) {
        for (const auto& e : d.edges) graph_.add(e.child, e.parent, e.same_sort);
        for (const auto& f : d.fresh) st.fv.push_back(f);
      }
      switch (mode_) {
        case InductionMode::basic:
        case InductionMode::extended: {
          add_hypothesis(st, norm, node.id, "goal", "");
          st.h = h_set(norm, st.fv, graph_);
          if (mode_ == InductionMode::extended) st.h_star = h_star(eqs, st.fv, graph_, spec_.sig);
          for (const auto& h : st.h) add_hypothesis(st, h, node.id, "H", "");
          for (const auto& h : st.h_star) add_hypothesis(st, h, node.id, "H*", "");
          break;
        }
        case InductionMode::subsort: {
          FrozenGoal gen = h_prime(norm, *y, sources_, spec_);
          st.h_prime.push_back(gen);
          add_hypothesis(st, gen, node.id, "H'", "");
          if (auto it = root_goal_.find(node.id); it != root_goal_.end() && !generic_forms_[it->second].lhs.valid()) {
            if (parent_of_[static_cast<std::size_t>(node.id)] < 0) generic_forms_[it->second] = gen;
          }
          break;
        }
      }
      for (auto& h : st.f_added) {
        for (const auto& c : st.fv) {
          auto p = graph_.parent(c);
          if (!p || !occurs_in_goal(c, h.eq)) continue;
          if (!h.label.empty()) h.label += ", ";
          h.label += frozen_display(c.name(), c.index()) + (graph_.same(c, *p) ? " ∼ " : " ∼* ") +
                     frozen_display(p->name(), p->index());
        }
        for (auto& f : F_)
          if (f.eq == h.eq && f.label.empty()) f.label = h.label;
      }
      std::vector<GoalNode> children;
      for (const auto& d : derived) {
        int id = new_node(d.goal, node.id, d.label);
        children.push_back(GoalNode{d.goal, id, node.id, d.label});
      }
      for (auto it = children.rbegin(); it != children.rend(); ++it) G_.push_front(*it);
      st.g_added = children;
    }
  }
  if (outcome_ == Outcome::running && trace_.size() + 1 >= limits_.max_steps) {
    finish(Outcome::budget_exceeded, G_.empty() ? std::nullopt : std::optional<FrozenGoal>(G_.front().goal),
           "Step limit of " + std::to_string(limits_.max_steps) + " reached.", st);
  }
  trace_.push_back(std::move(st));
  seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace_.back();
}

ProofResult InductionState::run() {
  while (!done()) step();
  return result();
}

ProofResult InductionState::result() const {
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

ProofResult prove_induction(const Specification& spec, const std::vector<Equation>& goals, InductionMode mode,
                            const Limits& limits, const std::vector<Equation>& proved) {
  InductionState st(spec, goals, mode, limits, proved);
  return st.run();
}

}  // namespace circlet
