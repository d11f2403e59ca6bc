#include <doctest.h>

#include <sstream>

#include "circlet/print.hpp"
#include "circlet/trace.hpp"
#include "circlet/wire.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + what.size())) ++n;
  return n;
}

ProofTrace natsum_trace() {
  auto spec = testing::corpus("NATSUM");
  InductionState st(spec, {parse_goal("sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)", spec)}, InductionMode::basic, {});
  st.run();
  return trace_of(st);
}

ProofTrace zip_trace() {
  auto spec = testing::corpus("STREAM");
  CoinductionState st(spec, {parse_goal("zip(zeros, ones) = zo", spec)}, {});
  st.run();
  return trace_of(st);
}

}  // namespace

TEST_CASE("table has one row per rule and aligned borders") {
  std::string t = render_table(natsum_trace());
  CHECK(count(t, "[Derive]") == 3);
  CHECK(count(t, "[Reduce]") == 4);
  CHECK(t.find("Outcome: Success") != std::string::npos);
  std::istringstream in(t);
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '+') continue;
    if (!width) width = display_width(line);
    CHECK(display_width(line) == width);
  }
  CHECK(width > 0);
}

TEST_CASE("dot graph for zip has derivative edges and one back edge") {
  std::string d = render_dot(zip_trace());
  CHECK(d.rfind("digraph", 0) == 0);
  CHECK(count(d, "label=\"hd\"") == 2);
  CHECK(count(d, "label=\"tl\"") == 2);
  CHECK(count(d, "style=dashed") == 1);
}

TEST_CASE("an empty trace renders as an empty document") {
  ProofTrace empty;
  CHECK(render_table(empty).empty());
}

TEST_CASE("data records replay to the same run") {
  for (auto tr : {natsum_trace(), zip_trace()}) {
    std::string data = render_data(tr);
    std::istringstream in(data);
    std::string first;
    std::getline(in, first);
    auto h = json::parse(first);
    CHECK(h["schema"] == "circlet.trace/1");
    CHECK(h["type"] == "header");
    auto spec = testing::corpus(tr.calculus == "induction" ? "NATSUM" : "STREAM");
    auto rep = replay(data, spec);
    CHECK_MESSAGE(rep.ok, rep.mismatch);
    CHECK(rep.steps == tr.steps.size());
  }
}

TEST_CASE("replay notices a tampered record") {
  auto tr = natsum_trace();
  std::string data = render_data(tr);
  auto p = data.find("\"Reduce\"");
  REQUIRE(p != std::string::npos);
  data.replace(p, 8, "\"Derive\"");
  auto rep = replay(data, testing::corpus("NATSUM"));
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.mismatch.empty());
}

TEST_CASE("trace format names") {
  CHECK(parse_trace_format("dot") == TraceFormat::dot);
  CHECK(parse_trace_format("jsonl") == TraceFormat::data);
  CHECK_FALSE(parse_trace_format("svg"));
  CHECK(display_width("n₁ ∅") == 4);
}

TEST_CASE("terms and equations round trip through JSON") {
  auto spec = testing::corpus("TREE");
  for (const char* g : {"mirror(mirror(L:TList)) = L:TList", "mirror(tr(a, L1:TList ; L2:TList)) = tr(a, nil)",
                        "mirror([E:Elt]) = [E:Elt]"}) {
    CAPTURE(g);
    Equation e = parse_goal(g, spec);
    json j = equation_json(e);
    Specification sp = spec;
    Equation back = equation_from_json(j, sp);
    CHECK(to_string(back) == to_string(e));
    CHECK(back.inductive_vars.size() == e.inductive_vars.size());
  }
  Term c = Term::frozen("n", 2, "Nat", 2);
  json j = term_json(c);
  CHECK(j["kind"] == "frozen");
  CHECK(j["text"] == "n₂");
}

TEST_CASE("fresh subsorts are recreated when decoding") {
  auto spec = testing::corpus("NATSUM");
  json j = term_json(Term::var("N#0", "Nat<n>"));
  Specification sp = spec;
  Term t = term_from_json(j, sp);
  CHECK(t.sort() == "Nat<n>");
  CHECK(sp.sig.leq("Nat<n>", "Nat"));
}

TEST_CASE("step records carry the rule and the goal") {
  auto tr = zip_trace();
  json s = step_json(tr.steps.back());
  CHECK(s["rule"] == "Reduce");
  CHECK(s["used_hypotheses"] == json::array({0}));
  CHECK(s["calculus"] == "coinduction");
}
