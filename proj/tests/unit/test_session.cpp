#include <doctest.h>

#include "circlet/print.hpp"
#include "circlet/session.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

Session streamnat() { return Session(testing::corpus_text("STREAMNAT.cspec"), "STREAMNAT.cspec"); }

std::vector<std::string> ledger(const Session& s) {
  std::vector<std::string> out;
  for (const auto& p : s.proved()) out.push_back(to_string(p.eq));
  return out;
}

json without_history(json j) {
  j.erase("snapshots");
  j.erase("events");
  return j;
}

}  // namespace

TEST_CASE("combined coinduction and induction session") {
  Session s = streamnat();
  s.add_goal("zeros + S:Stream = S:Stream");
  auto r1 = s.run_tactic(*Tactic::parse("coinduction"));
  CHECK(r1.outcome == Outcome::stuck);
  CHECK(s.status() == SessionStatus::stuck);
  auto fg = s.failure_goal();
  REQUIRE(fg);
  CHECK(to_string(*fg) == "sum(0,hd(S:Stream)) = hd(S:Stream)");

  s.save_state();
  CHECK(s.pending().empty());
  Equation g = s.generalize("hd(S:Stream)", "N:Nat");
  CHECK(to_string(g) == "sum(0,N:Nat) = N:Nat");
  auto r2 = s.run_tactic(*Tactic::parse("induction"));
  CHECK(r2.outcome == Outcome::success);
  s.load_state();
  REQUIRE(s.pending().size() == 1);
  auto r3 = s.run_tactic(*Tactic::parse("coinduction"));
  CHECK(r3.outcome == Outcome::success);
  CHECK(s.status() == SessionStatus::done);
  CHECK(ledger(s) == std::vector<std::string>{"sum(0,N#0:Nat<n>) = N#0:Nat<n>", "sum(0,N:Nat) = N:Nat",
                                              "zeros + S:Stream = S:Stream"});
  CHECK(s.proved()[0].generic);
}

TEST_CASE("save then load restores the described state") {
  Session s = streamnat();
  s.add_goal("zeros + S:Stream = S:Stream");
  s.run_tactic(*Tactic::parse("coinduction"));
  json before = without_history(s.describe());
  s.save_state("a");
  s.add_goal("sum(0, N:Nat) = N:Nat");
  s.load_state("a");
  CHECK(without_history(s.describe()) == before);
  CHECK(s.snapshot_names() == std::vector<std::string>{"a"});
}

TEST_CASE("loading without a snapshot is an error") {
  Session s = streamnat();
  CHECK_THROWS_WITH_AS(s.load_state(), "no saved proof state", SessionError);
  CHECK_THROWS_AS(s.load_state("missing"), SessionError);
}

TEST_CASE("generalization errors") {
  Session s = streamnat();
  CHECK_THROWS_WITH_AS(s.generalize("hd(S:Stream)", "N:Nat"), "no failed goal to generalize", SessionError);
  s.add_goal("zeros + S:Stream = S:Stream");
  s.run_tactic(*Tactic::parse("coinduction"));
  CHECK_THROWS_WITH_AS(s.generalize("tl(S:Stream)", "N:Nat"), "subterm not found", SessionError);
  CHECK_THROWS_AS(s.generalize("hd(S:Stream)", "S:Stream"), SessionError);
  CHECK_THROWS_AS(s.generalize("hd(S:Stream)", "X:Stream"), SessionError);
  Equation g = s.generalize_at(1, {}, "N:Nat");
  CHECK(to_string(g) == "sum(0,N:Nat) = N:Nat");
}

TEST_CASE("single steps and tactics agree") {
  Session a = streamnat(), b = streamnat();
  a.add_goal("sum(0, N:Nat) = N:Nat");
  b.add_goal("sum(0, N:Nat) = N:Nat");
  a.start(*Tactic::parse("induction"));
  std::size_t n = 0;
  while (a.proving()) {
    a.step();
    ++n;
  }
  auto r = b.run_tactic(*Tactic::parse("induction"));
  CHECK(n == r.steps);
  CHECK(ledger(a) == ledger(b));
}

TEST_CASE("automatic tactic picks the calculus by goal sort") {
  Session s = streamnat();
  s.add_goal("sum(0, N:Nat) = N:Nat");
  auto r = s.run_tactic(*Tactic::parse("auto"));
  CHECK(r.calculus == "induction");
  s.add_goal("zeros + zeros = zeros");
  auto c = s.run_tactic(*Tactic::parse("auto"));
  CHECK(c.calculus == "coinduction");
  CHECK(c.outcome == Outcome::success);
}

TEST_CASE("settings change limits and mode") {
  Session s = streamnat();
  s.set("max-derive", "7");
  s.set("mode", "basic");
  CHECK(s.limits().max_derive == 7);
  CHECK(s.mode() == InductionMode::basic);
  CHECK_THROWS_AS(s.set("max-derive", "zero"), SessionError);
  CHECK_THROWS_AS(s.set("colour", "red"), SessionError);
}

TEST_CASE("export replays into an equal session") {
  Session s = streamnat();
  s.add_goal("zeros + S:Stream = S:Stream");
  s.run_tactic(*Tactic::parse("coinduction"));
  s.save_state();
  s.generalize("hd(S:Stream)", "N:Nat");
  json ex = s.export_json();
  CHECK(ex["schema"] == "circlet.export/1");
  Session t = Session::import_json(ex);
  CHECK(t.describe() == s.describe());
  CHECK(t.digest() == s.digest());
}

TEST_CASE("starting without goals fails") {
  Session s = streamnat();
  CHECK_THROWS_WITH_AS(s.start(*Tactic::parse("induction")), "no pending goals", SessionError);
  CHECK_FALSE(Tactic::parse("coinduction", "basic"));
  CHECK_FALSE(Tactic::parse("magic"));
}
