#include <doctest.h>

#include "circlet/script.hpp"
#include "support.hpp"

using namespace circlet;

TEST_CASE("commands parse in both spellings") {
  auto a = parse_command("(add goal sum(0, N:Nat) = N:Nat .)");
  REQUIRE(a);
  CHECK(a->kind == CommandKind::add_goal);
  CHECK(a->text == "sum(0, N:Nat) = N:Nat");
  auto b = parse_command("induction extended");
  REQUIRE(b);
  CHECK(b->kind == CommandKind::induction);
  CHECK(b->mode == InductionMode::extended);
  CHECK(b->canonical() == "(induction extended .)");
  auto g = parse_command("(generalize hd(S:Stream) to N:Nat .)");
  REQUIRE(g);
  CHECK(g->text == "hd(S:Stream)");
  CHECK(g->text2 == "N:Nat");
  CommandError err;
  CHECK_FALSE(parse_command("(frobnicate .)", &err));
  CHECK_FALSE(err.message.empty());
}

TEST_CASE("scripts split on commands and skip comments") {
  std::string text =
      "--- comment\n(add goal\n  zeros + S:Stream = S:Stream .)\n*** another\n(coinduction .)\n";
  auto chunks = split_script(text, false);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].line == 2);
  CHECK(chunks[1].line == 5);
  auto plain = split_script("add goal zeros + zeros = zeros\n\ncoinduction\n", true);
  CHECK(plain.size() == 2);
  CHECK(command_complete("(coinduction .)"));
  CHECK_FALSE(command_complete("(add goal sum(0,"));
}

TEST_CASE("batch runs report exit codes") {
  Session ok(testing::corpus_text("STREAMNAT.cspec"));
  auto r = run_batch(ok, testing::corpus_text("streamnat.circ"), false, {std::nullopt});
  CHECK(r.exit_code == 0);
  CHECK(r.transcript.find("Proved properties:\n  sum(0,N#0:Nat<n>) = N#0:Nat<n>\n") != std::string::npos);

  Session stuck(testing::corpus_text("STREAM.cspec"));
  auto s = run_batch(stuck, testing::corpus_text("zeros_oz.circ"), false, {std::nullopt});
  CHECK(s.exit_code == 2);
  CHECK(s.transcript.find("Visible goal [* 0 *] = [* 1 *] failed during coinduction.") != std::string::npos);

  Session bad(testing::corpus_text("STREAM.cspec"));
  auto e = run_batch(bad, "(add goal frob = zeros .)\n(coinduction .)\n", false, {std::nullopt});
  CHECK(e.exit_code == 1);
  CHECK(e.transcript.find("Error:") != std::string::npos);

  Session budget(testing::corpus_text("NATSUM.cspec"));
  auto b = run_batch(budget, "(set max-derive 1 .)\n(add goal sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat) .)\n(induction .)\n",
                     false, {std::nullopt});
  CHECK(b.exit_code == 3);
}

TEST_CASE("runner echoes and prints the trace") {
  Session s(testing::corpus_text("NATSUM.cspec"));
  ScriptRunner r(s);
  std::string out = r.execute_text("(add goal max(N:Nat, N:Nat) = N:Nat .)");
  CHECK(out.find("Goal added: max(N:Nat,N:Nat) = N:Nat") != std::string::npos);
  out = r.execute_text("(induction basic .)");
  CHECK(out.find("[Derive]") != std::string::npos);
  CHECK(out.find("Proof succeeded.") != std::string::npos);
  CHECK(r.exit_code() == 0);
  CHECK(help_text().find("generalize") != std::string::npos);
}
