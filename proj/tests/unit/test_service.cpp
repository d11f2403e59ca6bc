#include <doctest.h>

#include "circlet/service.hpp"
#include "support.hpp"

using namespace circlet;

namespace {

Response call(Service& s, const std::string& method, const std::string& path, const json& body = nullptr,
              std::map<std::string, std::string> query = {}) {
  return s.handle(method, path, query, body.is_null() ? "" : body.dump());
}

std::string create(Service& s, const std::string& spec) {
  auto r = call(s, "POST", "/sessions", {{"spec", testing::corpus_text(spec + ".cspec")}, {"origin", spec}});
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

}  // namespace

TEST_CASE("single stepping NATSUM commutativity") {
  Service svc;
  std::string id = create(svc, "NATSUM");
  CHECK(call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)"}}).status == 200);
  std::vector<std::string> seq;
  for (int i = 0; i < 7; ++i) {
    auto r = call(svc, "POST", "/sessions/" + id + "/step", {{"tactic", "induction"}, {"mode", "basic"}});
    REQUIRE(r.status == 200);
    seq.push_back(r.body["delta"]["rule"]);
  }
  CHECK(seq == std::vector<std::string>{"Derive", "Derive", "Reduce", "Reduce", "Derive", "Reduce", "Reduce"});
  auto st = call(svc, "GET", "/sessions/" + id);
  CHECK(st.body["status"] == "done");
  CHECK(st.body["continuation"].is_null());
}

TEST_CASE("stuck coinduction and generalization over HTTP") {
  Service svc;
  std::string id = create(svc, "STREAMNAT");
  call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "zeros + S:Stream = S:Stream"}});
  auto r = call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "coinduction"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["status"] == "stuck");
  CHECK(r.body["failure"]["text"].get<std::string>().find("sum(0,hd(S:Stream))") != std::string::npos);
  CHECK(call(svc, "POST", "/sessions/" + id + "/snapshots", {{"name", "before"}}).status == 201);
  auto g = call(svc, "POST", "/sessions/" + id + "/generalize", {{"subterm", "hd(S:Stream)"}, {"var", "N:Nat"}});
  REQUIRE(g.status == 200);
  CHECK(g.body["goal"]["text"] == "sum(0,N:Nat) = N:Nat");
  CHECK(call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "induction"}}).body["status"] == "done");
  CHECK(call(svc, "POST", "/sessions/" + id + "/snapshots/before/load").status == 200);
  auto fin = call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "coinduction"}});
  CHECK(fin.body["status"] == "done");
  CHECK(fin.body["proved"].size() == 3);
}

TEST_CASE("error statuses") {
  Service svc;
  CHECK(call(svc, "GET", "/sessions/s9999").status == 404);
  CHECK(call(svc, "GET", "/nowhere").status == 404);
  CHECK(svc.handle("POST", "/sessions", {}, "{not json").status == 400);
  auto bad = call(svc, "POST", "/sessions", {{"spec", "spec X sort A . op f : A -> B . end"}});
  CHECK(bad.status == 422);
  CHECK(bad.body["diagnostics"][0]["code"] == "unknown-symbol");
  std::string id = create(svc, "NATSUM");
  CHECK(call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "frob(0) = 0"}}).status == 422);
  CHECK(call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "induction"}}).status == 422);
  CHECK(call(svc, "POST", "/sessions/" + id + "/snapshots/nope/load").status == 404);
  {
    auto hold = svc.try_hold(id);
    REQUIRE(hold);
    CHECK(call(svc, "GET", "/sessions/" + id).status == 409);
  }
  CHECK(call(svc, "GET", "/sessions/" + id).status == 200);
}

TEST_CASE("continuation tokens split long tactics") {
  Service svc(2);
  std::string id = create(svc, "NATSUM");
  call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)"}});
  auto r = call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "induction"}, {"mode", "basic"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["steps_taken"] == 2);
  std::string token = r.body["continuation"];
  CHECK(token == id + "@2");
  std::size_t total = 2;
  while (r.body["status"] == "proving") {
    r = call(svc, "POST", "/sessions/" + id + "/tactic", {{"continuation", r.body["continuation"]}});
    REQUIRE(r.status == 200);
    total += r.body["steps_taken"].get<std::size_t>();
  }
  CHECK(total == 7);
  CHECK(r.body["status"] == "done");
  CHECK(call(svc, "POST", "/sessions/" + id + "/tactic", {{"continuation", token}}).status == 409);
}

TEST_CASE("trace export and session import") {
  Service svc;
  std::string id = create(svc, "STREAM");
  call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "zip(zeros, ones) = zo"}});
  call(svc, "POST", "/sessions/" + id + "/tactic", {{"tactic", "coinduction"}});
  auto t = call(svc, "GET", "/sessions/" + id + "/trace", nullptr, {{"format", "dot"}});
  REQUIRE(t.status == 200);
  CHECK(t.body["schema"] == "circlet.trace-export/1");
  CHECK(t.body["document"].get<std::string>().rfind("digraph", 0) == 0);
  CHECK(call(svc, "GET", "/sessions/" + id + "/trace", nullptr, {{"format", "svg"}}).status == 422);
  auto ex = call(svc, "GET", "/sessions/" + id + "/export");
  auto imp = call(svc, "POST", "/sessions", {{"import", ex.body}});
  REQUIRE(imp.status == 201);
  CHECK(imp.body["proved"] == call(svc, "GET", "/sessions/" + id).body["proved"]);
  CHECK(call(svc, "GET", "/sessions").body["sessions"].size() == 2);
}

TEST_CASE("structured goals are accepted") {
  Service svc;
  std::string id = create(svc, "NATSUM");
  auto a = call(svc, "POST", "/sessions/" + id + "/goals", {{"text", "max(N:Nat, N:Nat) = N:Nat"}});
  json eq = a.body["goal"];
  std::string id2 = create(svc, "NATSUM");
  auto b = call(svc, "POST", "/sessions/" + id2 + "/goals", {{"equation", eq}});
  REQUIRE(b.status == 200);
  CHECK(b.body["goal"]["text"] == eq["text"]);
}
