#include <doctest.h>

#include "circlet/coinduction.hpp"
#include "circlet/print.hpp"
#include "support.hpp"

using namespace circlet;

TEST_CASE("goals are frozen at the top") {
  auto spec = testing::corpus("STREAM");
  FrozenGoal g = wrap_goal(parse_goal("zip(zeros, ones) = zo", spec), spec);
  CHECK(to_string(g) == "[* zip(zeros,ones) *] = [* zo *]");
  CHECK(goal_sort(g, spec) == "Stream");
}

TEST_CASE("derivatives and special instances of a hidden goal") {
  auto spec = testing::corpus("STREAM");
  FrozenGoal g = wrap_goal(parse_goal("zip(zeros, ones) = zo", spec), spec);
  auto ds = coin_derivatives(g, spec);
  REQUIRE(ds.size() == 2);
  CHECK(to_string(ds[0]) == "[* hd(zip(zeros,ones)) *] = [* hd(zo) *]");
  CHECK(to_string(ds[1]) == "[* tl(zip(zeros,ones)) *] = [* tl(zo) *]");
  auto sp = special_instances(g, spec);
  CHECK(sp.size() == 2);
  FrozenGoal v = wrap_goal(parse_goal("hd(zo) = 0", spec), spec);
  CHECK(coin_derivatives(v, spec).empty());
}

TEST_CASE("coinductive experiments of bounded depth") {
  auto spec = testing::corpus("STREAM");
  std::vector<std::string> got;
  for (const auto& c : coin_experiments_up_to("Stream", 3, spec)) got.push_back(to_string(c));
  CHECK(got == std::vector<std::string>{"hd(*:Stream)", "hd(tl(*:Stream))", "hd(tl(tl(*:Stream)))"});
}

TEST_CASE("zip(zeros, ones) = zo closes with a back edge") {
  auto spec = testing::corpus("STREAM");
  auto r = prove_coinduction(spec, {parse_goal("zip(zeros, ones) = zo", spec)});
  CHECK(r.outcome == Outcome::success);
  CHECK(r.derives == 2);
  CHECK(r.reduces == 3);
  REQUIRE_FALSE(r.trace.empty());
  const auto& last = r.trace.back();
  CHECK(last.rule == "Reduce");
  CHECK(last.used_hypotheses == std::vector<int>{0});
}

TEST_CASE("unequal streams are never proved") {
  auto spec = testing::corpus("STREAM");
  for (const char* goal : {"zo = oz", "zeros = oz"}) {
    CAPTURE(goal);
    auto r = prove_coinduction(spec, {parse_goal(goal, spec)});
    CHECK(r.outcome != Outcome::success);
    CHECK(r.derives <= 50);
  }
  auto r = prove_coinduction(spec, {parse_goal("zeros = oz", spec)});
  CHECK(r.outcome == Outcome::stuck);
  CHECK(r.message == "Visible goal [* 0 *] = [* 1 *] failed during coinduction.");
}

TEST_CASE("special contexts admit congruence steps") {
  auto spec = testing::corpus("STREAM");
  auto r = prove_coinduction(spec, {parse_goal("zip(zeros, zeros) = zeros", spec)});
  CHECK(r.outcome == Outcome::success);
}

TEST_CASE("STREAMNAT zeros is a left unit only after the Nat lemma") {
  auto spec = testing::corpus("STREAMNAT");
  Equation g = parse_goal("zeros + S:Stream = S:Stream", spec);
  auto stuck = prove_coinduction(spec, {g});
  CHECK(stuck.outcome == Outcome::stuck);
  REQUIRE(stuck.failed);
  CHECK(to_string(*stuck.failed) == "[* sum(0,hd(S:Stream)) *] = [* hd(S:Stream) *]");
  auto ok = prove_coinduction(spec, {g}, {}, {parse_goal("sum(0, N:Nat) = N:Nat", spec)});
  CHECK(ok.outcome == Outcome::success);
}
