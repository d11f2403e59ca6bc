#include <doctest.h>

#include <algorithm>

#include "circlet/induction.hpp"
#include "circlet/print.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

std::vector<std::string> rules(const ProofResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.trace) out.push_back(s.rule);
  return out;
}

std::vector<std::string> texts(const std::vector<Hypothesis>& hs) {
  std::vector<std::string> out;
  for (const auto& h : hs) out.push_back(to_string(h.eq));
  return out;
}

ProofResult prove(const std::string& spec_name, const std::string& goal, InductionMode mode) {
  auto spec = testing::corpus(spec_name);
  return prove_induction(spec, {parse_goal(goal, spec)}, mode);
}

}  // namespace

TEST_CASE("NATSUM commutativity follows the tabled rule sequence") {
  auto r = prove("NATSUM", "sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)", InductionMode::basic);
  CHECK(r.outcome == Outcome::success);
  CHECK(rules(r) == std::vector<std::string>{"Derive", "Derive", "Reduce", "Reduce", "Derive", "Reduce", "Reduce"});
  CHECK(texts(r.hypotheses) == std::vector<std::string>{
                                   "sum(m,n) = sum(n,m)",
                                   "sum(m,n₁) = sum(n₁,m)",
                                   "m = sum(0,m)",
                                   "m₁ = sum(0,m₁)",
                                   "s(sum(n₁,m)) = sum(s(n₁),m)",
                                   "s(sum(n₁,m₂)) = sum(s(n₁),m₂)",
                               });
}

TEST_CASE("max(N,N) = N needs one Derive") {
  auto r = prove("NATSUM", "max(N:Nat, N:Nat) = N:Nat", InductionMode::basic);
  CHECK(r.outcome == Outcome::success);
  CHECK(r.derives == 1);
  CHECK(r.reduces == 2);
  auto h = texts(r.hypotheses);
  CHECK(std::find(h.begin(), h.end(), "max(n₁,n₁) = n₁") != h.end());
}

TEST_CASE("derivatives substitute each constructor pattern") {
  auto spec = testing::corpus("NATSUM");
  FrozenGoal g = freeze_goal(parse_goal("sum(0, N:Nat) = N:Nat", spec));
  FreshNamer namer;
  namer.reserve(g.fvar[0], "Nat");
  auto ds = derive_on(g, g.fvar[0], spec, namer);
  REQUIRE(ds.size() == 2);
  CHECK(to_string(ds[0].goal) == "sum(0,0) = 0");
  CHECK(to_string(ds[1].goal) == "sum(0,s(n₁)) = s(n₁)");
  REQUIRE(ds[1].edges.size() == 1);
  CHECK(ds[1].edges[0].same_sort);
  CHECK(ds[1].fresh.size() == 1);
}

TEST_CASE("incarnation graph tracks ancestry") {
  IncarnationGraph g;
  Term n = Term::frozen("n", 0, "Nat"), n1 = Term::frozen("n", 1, "Nat", 1), n2 = Term::frozen("n", 2, "Nat", 2);
  Term l = Term::frozen("l", 0, "TList", 3);
  g.add(n1, n, true);
  g.add(n2, n1, true);
  g.add(l, n2, false);
  CHECK(g.same(n1, n));
  CHECK_FALSE(g.same(n2, n));
  CHECK(g.star_plus(n2, n));
  CHECK(g.star_plus(l, n));
  CHECK_FALSE(g.star_plus(n, n2));
  CHECK(g.ancestors(l) == std::vector<Term>{n2, n1, n});
  CHECK(g.generation(n2) == 2);
  CHECK(g.acyclic());
}

TEST_CASE("constructor experiments enumerate ground instances by depth") {
  auto spec = testing::corpus("NATSUM");
  auto e1 = experiments_up_to({Term::var("N", "Nat")}, 2, spec);
  std::vector<std::string> got;
  for (const auto& e : e1) got.push_back(to_string(e.binding[0].second));
  CHECK(got == std::vector<std::string>{"0", "s(0)"});
  CHECK(constructor_terms("Nat", 3, spec).size() == 3);
  auto pairs = experiments_up_to({Term::var("M", "Nat"), Term::var("N", "Nat")}, 3, spec);
  CHECK(pairs.size() == 9);
}

TEST_CASE("decomposition reproduces the experiment") {
  auto spec = testing::corpus("TREE");
  FrozenGoal g = freeze_goal(parse_goal("mirror(mirror(L:TList)) = L:TList", spec));
  auto exps = experiments_up_to(g.fvar, 3, spec);
  REQUIRE_FALSE(exps.empty());
  for (const auto& e : exps) {
    auto d = decompose(e, g, spec);
    CHECK(d.result.lhs == e.apply(g).lhs);
    CHECK(d.result.rhs == e.apply(g).rhs);
  }
}

TEST_CASE("inductive positions and variable selection") {
  auto spec = testing::corpus("NATSUM");
  auto pos = inductive_positions(spec);
  int sum_id = spec.sig.resolve("sum", {"Nat", "Nat"})->id;
  CHECK(pos.count({sum_id, 1}) == 1);
  CHECK(pos.count({sum_id, 0}) == 0);
  FrozenGoal g = freeze_goal(parse_goal("sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)", spec));
  auto y = select_variable(g, spec, pos);
  REQUIRE(y);
  CHECK(to_string(*y) == "n");
}

TEST_CASE("simplification cancels a common summand") {
  auto spec = testing::corpus("FIB");
  FrozenGoal g = freeze_goal(parse_goal("np(X:Nat) + fib(Y:Nat) = fib(Z:Nat) + fib(Y:Nat)", spec));
  auto base = make_rule_base(spec);
  auto s = simplify_goal(g, spec, base, {}, Budget{});
  REQUIRE(s);
  CHECK(to_string(*s) == "np(x) = fib(z)");
  FrozenGoal none = freeze_goal(parse_goal("np(X:Nat) = fib(Z:Nat)", spec));
  CHECK_FALSE(simplify_goal(none, spec, base, {}, Budget{}));
}

TEST_CASE("TREE mirror across modes") {
  const std::string goal = "mirror(mirror(L:TList)) = L:TList";
  auto basic = prove("TREE", goal, InductionMode::basic);
  CHECK(basic.outcome == Outcome::stuck);
  REQUIRE(basic.failed);
  CHECK(to_string(*basic.failed) == "[mirror(mirror(tr(e₁,l₃)))] = [tr(e₁,l₃)]");

  auto ext = prove("TREE", goal, InductionMode::extended);
  CHECK(ext.outcome == Outcome::success);
  auto sub = prove("TREE", goal, InductionMode::subsort);
  CHECK(sub.outcome == Outcome::success);
  std::vector<std::string> generic;
  for (const auto& h : sub.hypotheses)
    if (h.kind == "H'") generic.push_back(to_string(h.eq));
  CHECK(std::find(generic.begin(), generic.end(), "mirror(mirror(L#0:TList<l>)) = L#0:TList<l>") != generic.end());
  CHECK(std::find(generic.begin(), generic.end(), "[mirror(mirror(T#0:Tree<t>))] = [T#0:Tree<t>]") != generic.end());
}

TEST_CASE("FIB goal goes through the simplification rule") {
  auto r = prove("FIB", "sum<k>(N:Nat) = np(s(N:Nat))", InductionMode::subsort);
  CHECK(r.outcome == Outcome::success);
  bool seen = false;
  for (const auto& s : r.trace)
    if (s.rule == "Simplify" && s.rewritten && to_string(*s.rewritten) == "fib(s(n₁)) = s(np(n₁))") seen = true;
  CHECK(seen);
}

TEST_CASE("Derive limit gives BudgetExceeded") {
  auto spec = testing::corpus("NATSUM");
  Limits lim;
  lim.max_derive = 2;
  auto r = prove_induction(spec, {parse_goal("sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)", spec)}, InductionMode::basic,
                           lim);
  CHECK(r.outcome == Outcome::budget_exceeded);
  CHECK(r.derives == 2);
  REQUIRE(r.failed);
  CHECK(to_string(*r.failed) == "sum(m,s(n₁)) = sum(s(n₁),m)");
}

TEST_CASE("a false goal gets stuck") {
  auto r = prove("NATSUM", "sum(N:Nat, N:Nat) = N:Nat", InductionMode::subsort);
  CHECK(r.outcome == Outcome::stuck);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("stepping matches a full run") {
  auto spec = testing::corpus("NATSUM");
  std::vector<Equation> goals{parse_goal("sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)", spec)};
  InductionState st(spec, goals, InductionMode::extended, {});
  while (!st.done()) st.step();
  auto full = prove_induction(spec, goals, InductionMode::extended);
  REQUIRE(st.trace().size() == full.trace.size());
  for (std::size_t i = 0; i < full.trace.size(); ++i) CHECK(st.trace()[i].rule == full.trace[i].rule);
}

TEST_CASE("lowest common ancestor over parent links") {
  std::vector<int> parent{-1, 0, 0, 1, 1, 2};
  CHECK(lowest_common_ancestor({3, 4}, parent) == 1);
  CHECK(lowest_common_ancestor({3, 5}, parent) == 0);
  CHECK(lowest_common_ancestor({4}, parent) == 4);
}

TEST_CASE("mode names parse") {
  CHECK(parse_mode("basic") == InductionMode::basic);
  CHECK(parse_mode("subsort") == InductionMode::subsort);
  CHECK_FALSE(parse_mode("bogus"));
  CHECK(std::string(mode_name(InductionMode::extended)) == "extended");
}
