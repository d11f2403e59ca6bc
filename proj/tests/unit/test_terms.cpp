#include <doctest.h>

#include <set>

#include "circlet/print.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

void subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  if (t.is_app())
    for (const auto& a : t.args()) subterms(a, out);
}

}  // namespace

TEST_CASE("subsort order is reflexive and transitive") {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_sort("C");
  sig.add_subsort("A", "B");
  sig.add_subsort("B", "C");
  CHECK(sig.leq("A", "A"));
  CHECK(sig.leq("A", "C"));
  CHECK_FALSE(sig.leq("C", "A"));
  CHECK(sig.connected("A", "C"));
  CHECK_THROWS_AS(sig.add_subsort("C", "A"), TermError);
}

TEST_CASE("fresh subsorts sit below their base only") {
  Signature sig;
  sig.add_sort("Nat");
  Sort s = sig.add_fresh_subsort("Nat", "n");
  CHECK(s == "Nat<n>");
  CHECK(sig.leq(s, "Nat"));
  CHECK_FALSE(sig.leq("Nat", s));
  CHECK(sig.base_sort(s) == "Nat");
  CHECK(sig.add_fresh_subsort("Nat", "n") == s);
}

TEST_CASE("AC canonical form makes argument order irrelevant") {
  auto spec = testing::corpus("FIB");
  Term a = parse_term("fib(N:Nat) + (0 + s(M:Nat))", spec);
  Term b = parse_term("(s(M:Nat) + fib(N:Nat)) + 0", spec);
  CHECK(a == b);
  CHECK(a.args().size() == 3);
}

TEST_CASE("frozen constants compare by name and index") {
  Term a = Term::frozen("n", 1, "Nat", 1);
  Term b = Term::frozen("n", 1, "Nat<n>", 3);
  Term c = Term::frozen("n", 2, "Nat", 1);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(to_string(a) == "n₁");
  CHECK(frozen_display("l", 3) == "l₃");
}

TEST_CASE("substitutions refuse frozen keys") {
  Substitution s;
  CHECK_THROWS(s.bind(Term::frozen("n", 0, "Nat"), Term::var("X", "Nat")));
  Term x = Term::var("X", "Nat");
  s.bind(x, Term::frozen("n", 0, "Nat"));
  CHECK(s.apply(x) == Term::frozen("n", 0, "Nat"));
}

TEST_CASE("matching a frozen constant needs the same constant") {
  auto spec = testing::corpus("NATSUM");
  Term n = Term::frozen("n", 0, "Nat");
  OpPtr s = spec.sig.resolve("s", {"Nat"});
  CHECK(match_first(n, n, spec.sig));
  CHECK_FALSE(match_first(n, Term::app(s, {n}), spec.sig));
  Term pat = parse_term("s(M:Nat)", spec);
  auto sub = match_first(pat, Term::app(s, {n}), spec.sig);
  REQUIRE(sub);
  CHECK(*sub->lookup(Term::var("M", "Nat")) == n);
}

TEST_CASE("comm matching agrees with brute force enumeration") {
  auto spec = testing::corpus("FIB");
  Term pat = parse_term("M:Nat + s(N:Nat)", spec);
  Term subj = parse_term("s(0) + 0", spec);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& m : match(pat, subj, spec.sig))
    got.insert({to_string(*m.lookup(Term::var("M", "Nat"))), to_string(*m.lookup(Term::var("N", "Nat")))});

  std::vector<Term> cands;
  subterms(subj, cands);
  std::set<std::pair<std::string, std::string>> want;
  for (const auto& m : cands)
    for (const auto& n : cands) {
      Substitution s;
      s.bind(Term::var("M", "Nat"), m);
      s.bind(Term::var("N", "Nat"), n);
      if (s.apply(pat) == subj) want.insert({to_string(m), to_string(n)});
    }
  CHECK(got == want);
  CHECK(want == std::set<std::pair<std::string, std::string>>{{"0", "0"}});
}

TEST_CASE("AC matching splits flattened arguments") {
  auto spec = testing::corpus("FIB");
  Term pat = parse_term("M:Nat + fib(N:Nat)", spec);
  Term subj = parse_term("fib(0) + np(0) + s(0)", spec);
  auto all = match(pat, subj, spec.sig);
  REQUIRE(all.size() == 1);
  CHECK(to_string(*all[0].lookup(Term::var("M", "Nat"))) == to_string(parse_term("np(0) + s(0)", spec)));
}

TEST_CASE("match audit counts substitutions and never frozen bindings") {
  auto spec = testing::corpus("NATSUM");
  reset_match_audit();
  Term pat = parse_term("sum(M:Nat, s(N:Nat))", spec);
  OpPtr s = spec.sig.resolve("s", {"Nat"});
  OpPtr sum = spec.sig.resolve("sum", {"Nat", "Nat"});
  Term subj = Term::app(sum, {Term::frozen("m", 0, "Nat"), Term::app(s, {Term::frozen("n", 1, "Nat")})});
  CHECK(match_first(pat, subj, spec.sig));
  auto a = match_audit();
  CHECK(a.substitutions >= 1);
  CHECK(a.frozen_bindings == 0);
}

TEST_CASE("contexts hold exactly one hole") {
  auto spec = testing::corpus("STREAM");
  Context c = Context::make(parse_term("hd(tl(*:Stream))", spec));
  CHECK(c.hole_sort == "Stream");
  CHECK(to_string(c.plug(parse_term("zeros", spec))) == "hd(tl(zeros))");
  CHECK_THROWS_AS(Context::make(parse_term("hd(zeros)", spec)), TermError);
  CHECK_THROWS_AS(Context::make(parse_term("zip(*:Stream, *:Stream)", spec)), TermError);
}

TEST_CASE("freezing replaces inductive variables") {
  auto spec = testing::corpus("NATSUM");
  Equation e = parse_goal("sum(0, N:Nat) = N:Nat", spec);
  FrozenGoal g = freeze_goal(e);
  CHECK(to_string(g) == "sum(0,n) = n");
  REQUIRE(g.fvar.size() == 1);
  CHECK(unfreeze(g) == e);
  CHECK(frozen_base_name("N") == "n");
}

TEST_CASE("freeze_top wraps both sides") {
  auto spec = testing::corpus("STREAM");
  Equation e = parse_goal("zip(zeros, ones) = zo", spec);
  Equation f = freeze_top(e, spec.hidden_sorts());
  CHECK(to_string(f) == "[* zip(zeros,ones) *] = [* zo *]");
  CHECK(f.lhs.sort() == kFrozenSort);
}

TEST_CASE("equation validation catches sort clashes") {
  auto spec = testing::corpus("STREAMNAT");
  CHECK_THROWS(parse_goal("hd(S:Stream) = S:Stream", spec));
}
