#include <doctest.h>

#include "circlet/print.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

DiagCode first_code(const std::string& text) {
  try {
    parse_spec({text, "t.cspec"});
  } catch (const ParseError& e) {
    REQUIRE_FALSE(e.diagnostics().empty());
    return e.diagnostics().front().code;
  }
  FAIL("expected a parse error");
  return DiagCode::warning;
}

}  // namespace

TEST_CASE("every corpus spec survives a print/parse round trip") {
  for (const char* name : {"NATSUM", "TREE", "FIB", "STREAM", "STREAMNAT"}) {
    CAPTURE(name);
    auto a = testing::corpus(name);
    std::string once = print_spec(a);
    auto b = parse_spec({once, "printed"});
    CHECK(print_spec(b) == once);
    CHECK(b.equations.size() == a.equations.size());
    CHECK(b.derivatives.size() == a.derivatives.size());
    CHECK(b.specials.size() == a.specials.size());
    CHECK(b.simplifications.size() == a.simplifications.size());
  }
}

TEST_CASE("corpus specs declare what the provers need") {
  auto nat = testing::corpus("NATSUM");
  CHECK(nat.is_inductive("Nat"));
  CHECK(nat.constructors_of("Nat").size() == 2);
  auto st = testing::corpus("STREAM");
  CHECK(st.is_hidden("Stream"));
  CHECK_FALSE(st.is_hidden("Bit"));
  CHECK(st.derivatives_for("Stream").size() == 2);
  CHECK(st.specials.size() == 2);
  auto fib = testing::corpus("FIB");
  CHECK(fib.simplifications.size() == 1);
  auto tree = testing::corpus("TREE");
  CHECK(tree.sig.ops_named("mirror", 1).size() == 2);
}

TEST_CASE("overloaded operators resolve by argument sort") {
  auto spec = testing::corpus("TREE");
  Term t = parse_term("mirror([a])", spec);
  CHECK(t.sort() == "Tree");
  Term l = parse_term("mirror([[a]])", spec);
  CHECK(l.sort() == "TList");
  CHECK(to_string(parse_term("L1:TList ; nil", spec)) == "L1:TList ; nil");
}

TEST_CASE("goal variables split into inductive and other") {
  auto spec = testing::corpus("STREAMNAT");
  Equation e = parse_goal("sum(0, hd(S:Stream)) = hd(S:Stream)", spec);
  CHECK(e.inductive_vars.empty());
  CHECK(e.other_vars.size() == 1);
  Equation f = parse_goal("sum(0, N:Nat) = N:Nat", spec);
  CHECK(f.inductive_vars.size() == 1);
  Equation g = parse_goal("sum(0, N!:Nat) = N!:Nat", spec);
  CHECK(g.inductive_vars.empty());
}

TEST_CASE("unannotated variable repeats reuse the first sort") {
  auto spec = testing::corpus("NATSUM");
  Equation e = parse_goal("sum(M:Nat, N:Nat) = sum(N, M)", spec);
  CHECK(to_string(e) == "sum(M:Nat,N:Nat) = sum(N:Nat,M:Nat)");
}

TEST_CASE("conditional goals print their condition") {
  auto spec = testing::corpus("NATSUM");
  Equation e = parse_goal("max(M:Nat, N:Nat) = N:Nat if max(N:Nat, M:Nat) = N:Nat", spec);
  CHECK(e.condition.size() == 1);
  CHECK(to_string(e).find(" if ") != std::string::npos);
}

TEST_CASE("diagnostics carry codes and positions") {
  CHECK(first_code("spec X sort A . op f : A -> B . end") == DiagCode::unknown_symbol);
  CHECK(first_code("spec X sort A . op f A -> A . end") == DiagCode::syntax);
  CHECK(first_code("spec X sort A . op a : -> A . special a . end") == DiagCode::special_context);
  try {
    parse_spec({"spec X\n  sort A .\n  op f : A -> Q .\nend\n", "t.cspec"});
    FAIL("no error");
  } catch (const ParseError& e) {
    const auto& d = e.diagnostics().front();
    CHECK(d.line == 3);
    CHECK(d.column > 0);
    CHECK(d.str().rfind("t.cspec:3:", 0) == 0);
  }
}

TEST_CASE("unknown symbols in goals raise parse errors") {
  auto spec = testing::corpus("NATSUM");
  CHECK_THROWS_AS(parse_goal("frob(0) = 0", spec), ParseError);
  CHECK_THROWS_AS(parse_goal("sum(0,0) =", spec), ParseError);
}
