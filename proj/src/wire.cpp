#include "circlet/wire.hpp"

#include "circlet/print.hpp"

namespace circlet {

namespace {

void ensure_sort(const Sort& s, Specification& spec) {
  if (spec.sig.has_sort(s)) return;
  auto lt = s.find('<');
  if (lt == std::string::npos || s.back() != '>') throw TermError("unknown sort " + s);
  spec.sig.add_fresh_subsort(s.substr(0, lt), s.substr(lt + 1, s.size() - lt - 2));
}

json condition_json(const Condition& c) {
  json out = json::array();
  for (const auto& [u, v] : c) out.push_back({{"lhs", term_json(u)}, {"rhs", term_json(v)}});
  return out;
}

json terms_json(const std::vector<Term>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(term_json(t));
  return out;
}

}  // namespace

json term_json(const Term& t) {
  json j;
  j["text"] = to_string(t);
  switch (t.kind()) {
    case TermKind::variable:
      j["kind"] = "var";
      j["name"] = t.name();
      j["sort"] = t.sort();
      break;
    case TermKind::fresh:
      j["kind"] = "fresh";
      j["name"] = t.name();
      j["sort"] = t.sort();
      break;
    case TermKind::frozen:
      j["kind"] = "frozen";
      j["name"] = t.name();
      j["index"] = t.index();
      j["generation"] = t.generation();
      j["sort"] = t.sort();
      break;
    case TermKind::app: {
      j["kind"] = "app";
      j["op"] = t.op()->name;
      j["sort"] = t.sort();
      json args = json::array();
      for (const auto& a : t.args()) args.push_back(term_json(a));
      j["args"] = std::move(args);
      break;
    }
  }
  return j;
}

Term term_from_json(const json& j, Specification& spec) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "var" || kind == "fresh" || kind == "frozen") {
    Sort s = j.at("sort").get<std::string>();
    if (!(kind == "var" && j.at("name") == "*")) ensure_sort(s, spec);
    std::string name = j.at("name").get<std::string>();
    if (kind == "var") return Term::var(name, s);
    if (kind == "fresh") return Term::fresh(name, s);
    return Term::frozen(name, j.at("index").get<int>(), s, j.value("generation", 0));
  }
  if (kind != "app") throw TermError("unknown term kind " + kind);
  std::vector<Term> args;
  std::vector<Sort> sorts;
  for (const auto& a : j.at("args")) {
    args.push_back(term_from_json(a, spec));
    sorts.push_back(args.back().sort());
  }
  const std::string name = j.at("op").get<std::string>();
  if (name == freeze_operator()->name && args.size() == 1) return Term::app(freeze_operator(), std::move(args));
  if (sorts.size() > 2) sorts.resize(2);
  OpPtr op = spec.sig.resolve(name, sorts);
  return Term::app(op, std::move(args));
}

json equation_json(const Equation& e) {
  return {{"text", to_string(e)},
          {"lhs", term_json(e.lhs)},
          {"rhs", term_json(e.rhs)},
          {"condition", condition_json(e.condition)},
          {"inductive_vars", terms_json(e.inductive_vars)},
          {"other_vars", terms_json(e.other_vars)}};
}

Equation equation_from_json(const json& j, Specification& spec) {
  Equation e;
  e.lhs = term_from_json(j.at("lhs"), spec);
  e.rhs = term_from_json(j.at("rhs"), spec);
  for (const auto& c : j.value("condition", json::array()))
    e.condition.emplace_back(term_from_json(c.at("lhs"), spec), term_from_json(c.at("rhs"), spec));
  for (const auto& v : j.value("inductive_vars", json::array())) e.inductive_vars.push_back(term_from_json(v, spec));
  for (const auto& v : j.value("other_vars", json::array())) e.other_vars.push_back(term_from_json(v, spec));
  return e;
}

json goal_json(const FrozenGoal& g) {
  return {{"text", to_string(g)},
          {"lhs", term_json(g.lhs)},
          {"rhs", term_json(g.rhs)},
          {"condition", condition_json(g.condition)},
          {"fvar", terms_json(g.fvar)}};
}

json hypothesis_json(const Hypothesis& h) {
  json j = goal_json(h.eq);
  j["node"] = h.node;
  j["kind"] = h.kind;
  if (!h.label.empty()) j["label"] = h.label;
  return j;
}

json node_json(const GoalNode& n) {
  json j = goal_json(n.goal);
  j["id"] = n.id;
  j["parent"] = n.parent;
  if (!n.edge.empty()) j["edge"] = n.edge;
  return j;
}

json step_json(const TraceStep& s) {
  json j;
  j["step"] = s.index;
  j["calculus"] = s.calculus;
  j["rule"] = s.rule;
  j["node"] = s.node;
  if (s.goal.lhs.valid()) j["goal"] = goal_json(s.goal);
  if (s.rewritten) j["rewritten"] = goal_json(*s.rewritten);
  if (s.derived_var) j["derived_var"] = term_json(*s.derived_var);
  if (!s.fv.empty()) j["fv"] = terms_json(s.fv);
  json f = json::array();
  for (const auto& h : s.f_added) f.push_back(hypothesis_json(h));
  j["f_added"] = std::move(f);
  json g = json::array();
  for (const auto& n : s.g_added) g.push_back(node_json(n));
  j["g_added"] = std::move(g);
  auto goals = [](const std::vector<FrozenGoal>& gs) {
    json a = json::array();
    for (const auto& x : gs) a.push_back(x.lhs.valid() ? json(to_string(x)) : json(nullptr));
    return a;
  };
  if (!s.h.empty()) j["h"] = goals(s.h);
  if (!s.h_star.empty()) j["h_star"] = goals(s.h_star);
  if (!s.h_prime.empty()) j["h_prime"] = goals(s.h_prime);
  if (!s.gamma.empty()) j["gamma"] = goals(s.gamma);
  if (!s.used_hypotheses.empty()) j["used_hypotheses"] = s.used_hypotheses;
  if (!s.message.empty()) j["message"] = s.message;
  return j;
}

}  // namespace circlet
