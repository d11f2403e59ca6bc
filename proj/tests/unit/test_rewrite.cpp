#include <doctest.h>

#include "circlet/print.hpp"
#include "circlet/rewrite.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

// Independent evaluator for ground NATSUM terms: counts successors.
int eval_nat(const Term& t) {
  const std::string& f = t.name();
  if (f == "0") return 0;
  if (f == "s") return eval_nat(t.args()[0]) + 1;
  int a = eval_nat(t.args()[0]), b = eval_nat(t.args()[1]);
  if (f == "sum") return a + b;
  if (f == "max") return a > b ? a : b;
  throw std::runtime_error("unexpected " + f);
}

Term numeral(int k, const Specification& spec) {
  Term t = Term::constant(spec.sig.resolve("0", {}));
  for (int i = 0; i < k; ++i) t = Term::app(spec.sig.resolve("s", {"Nat"}), {t});
  return t;
}

Term normal_form(const Term& t, const Specification& spec) {
  Rewriter rw(spec.sig, Budget{});
  rw.add_rules(make_rule_base(spec).rules);
  return rw.normal_form(t);
}

}  // namespace

TEST_CASE("ground NATSUM normal forms agree with arithmetic") {
  auto spec = testing::corpus("NATSUM");
  CHECK(to_string(normal_form(parse_term("sum(s(0), s(0))", spec), spec)) == "s(s(0))");
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      for (const char* f : {"sum", "max"}) {
        Term t = Term::app(spec.sig.resolve(f, {"Nat", "Nat"}), {numeral(a, spec), numeral(b, spec)});
        CHECK(normal_form(t, spec) == numeral(eval_nat(t), spec));
      }
    }
}

TEST_CASE("orientation rejects rules with extra variables") {
  auto spec = testing::corpus("NATSUM");
  Term lhs = parse_term("sum(M:Nat, 0)", spec);
  Term rhs = parse_term("N:Nat", spec);
  std::string why;
  CHECK_FALSE(orient_equation(lhs, rhs, {}, RuleOrigin::spec_equation, &why));
  CHECK_FALSE(why.empty());
  CHECK_FALSE(orient_equation(rhs, lhs, {}, RuleOrigin::spec_equation, &why));
}

TEST_CASE("hypotheses are oriented from the larger side") {
  auto spec = testing::corpus("NATSUM");
  Term small = parse_term("M:Nat", spec);
  Term big = parse_term("sum(0, M:Nat)", spec);
  auto r = orient_hypothesis(small, big, {});
  REQUIRE(r);
  CHECK(r->lhs == big);
  CHECK(r->rhs == small);
}

TEST_CASE("entailment skolemizes goal variables") {
  auto spec = testing::corpus("NATSUM");
  auto r = entails(spec, parse_goal("sum(M:Nat, s(0)) = s(M:Nat)", spec));
  CHECK(r.verdict == Verdict::proved);
  auto no = entails(spec, parse_goal("sum(0, M:Nat) = M:Nat", spec));
  CHECK(no.verdict == Verdict::not_proved);
  CHECK(skolem(Term::var("M", "Nat")).is_fresh());
}

TEST_CASE("entailment uses frozen hypotheses and reports them") {
  auto spec = testing::corpus("NATSUM");
  FrozenGoal hyp = freeze_goal(parse_goal("sum(0, N:Nat) = N:Nat", spec));
  OpPtr s = spec.sig.resolve("s", {"Nat"});
  Term n = hyp.fvar[0];
  FrozenGoal goal = substitute_frozen(hyp, n, Term::app(s, {n}));
  auto r = entails(spec, {hyp}, goal);
  CHECK(r.verdict == Verdict::proved);
  CHECK(r.hypotheses_used == std::vector<std::size_t>{0});
  auto bare = entails(spec, {}, goal);
  CHECK(bare.verdict == Verdict::not_proved);
}

TEST_CASE("conditions become assumptions") {
  auto spec = testing::corpus("NATSUM");
  auto r = entails(spec, parse_goal("max(M:Nat, N:Nat) = s(0) if M:Nat = s(0) /\\ N:Nat = 0", spec));
  CHECK(r.verdict == Verdict::proved);
}

TEST_CASE("rewrite budget is enforced") {
  auto spec = parse_spec({"spec L sort A . op a : -> A . op f : A -> A . eq f(a) = f(f(a)) . end"});
  Budget b;
  b.max_rewrite_steps = 50;
  auto r = entails(spec, parse_goal("f(a) = a", spec), b);
  CHECK(r.verdict == Verdict::budget_exceeded);
}

TEST_CASE("AC rewriting reaches the permuted normal form") {
  auto spec = testing::corpus("FIB");
  auto r = entails(spec, parse_goal("fib(s(s(0))) + M:Nat = s(M:Nat)", spec));
  CHECK(r.verdict == Verdict::proved);
}
