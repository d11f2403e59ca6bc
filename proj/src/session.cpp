#include "circlet/session.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>

#include "circlet/print.hpp"

namespace circlet {

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void collect_terms(const Equation& e, std::vector<Term>& vars) {
  collect_vars(e.lhs, vars);
  collect_vars(e.rhs, vars);
  for (const auto& [u, v] : e.condition) {
    collect_vars(u, vars);
    collect_vars(v, vars);
  }
}

bool occurs_in(const Term& sub, const Equation& e) {
  if (occurs(sub, e.lhs) || occurs(sub, e.rhs)) return true;
  return std::any_of(e.condition.begin(), e.condition.end(),
                     [&](const auto& p) { return occurs(sub, p.first) || occurs(sub, p.second); });
}

Equation generic_equation(const FrozenGoal& g) {
  Equation e;
  e.lhs = g.lhs;
  e.rhs = g.rhs;
  e.condition = g.condition;
  collect_terms(e, e.other_vars);
  return e;
}

template <class F>
decltype(auto) visit_state(std::variant<std::monostate, InductionState, CoinductionState>& v, F&& f) {
  if (auto* s = std::get_if<InductionState>(&v)) return f(*s);
  return f(std::get<CoinductionState>(v));
}

}  // namespace

std::optional<Tactic> Tactic::parse(const std::string& name, const std::string& mode) {
  Tactic t;
  if (name == "induction") {
    t.kind = TacticKind::induction;
    if (!mode.empty()) {
      t.mode = parse_mode(mode);
      if (!t.mode) return std::nullopt;
    }
    return t;
  }
  if (!mode.empty()) return std::nullopt;
  if (name == "coinduction") t.kind = TacticKind::coinduction;
  else if (name == "auto") t.kind = TacticKind::automatic;
  else return std::nullopt;
  return t;
}

std::string Tactic::str() const {
  switch (kind) {
    case TacticKind::induction: return mode ? std::string("induction ") + mode_name(*mode) : "induction";
    case TacticKind::coinduction: return "coinduction";
    case TacticKind::automatic: return "auto";
  }
  return "?";
}

const char* status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::idle: return "idle";
    case SessionStatus::proving: return "proving";
    case SessionStatus::stuck: return "stuck";
    case SessionStatus::done: return "done";
  }
  return "?";
}

Session::Session(const std::string& spec_text, const std::string& origin)
    : spec_text_(spec_text), origin_(origin), spec_(parse_spec({spec_text, origin})) {}

std::string Session::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : spec_text_) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Equation Session::add_goal(const std::string& text) {
  Equation e = parse_goal(text, spec_);
  e.validate(spec_.sig);
  pending_.push_back(e);
  log({{"op", "add_goal"}, {"text", text}});
  return e;
}

void Session::add_goal(const Equation& e) {
  e.validate(spec_.sig);
  pending_.push_back(e);
  log({{"op", "add_goal"}, {"equation", equation_json(e)}});
}

std::vector<Equation> Session::proved_equations() const {
  std::vector<Equation> out;
  for (const auto& p : proved_) out.push_back(p.eq);
  return out;
}

void Session::adopt_sorts(const Equation& e) {
  std::vector<Term> vars;
  collect_terms(e, vars);
  for (const auto& v : vars) {
    const Sort& s = v.sort();
    if (spec_.sig.has_sort(s)) continue;
    auto lt = s.find('<');
    if (lt == std::string::npos) throw SessionError("unknown sort " + s);
    spec_.sig.add_fresh_subsort(s.substr(0, lt), s.substr(lt + 1, s.size() - lt - 2));
  }
}

void Session::start(const Tactic& t) {
  if (proving()) throw SessionError("a proof is already running");
  if (pending_.empty()) throw SessionError("no pending goals");
  auto hidden = [&](const Equation& e) {
    return spec_.is_hidden(spec_.sig.base_sort(least_sort(e.lhs, spec_.sig)));
  };
  TacticKind kind = t.kind;
  if (kind == TacticKind::automatic)
    kind = hidden(pending_.front()) ? TacticKind::coinduction : TacticKind::induction;
  std::vector<Equation> goals, rest;
  for (const auto& e : pending_) {
    if (t.kind != TacticKind::automatic || hidden(e) == (kind == TacticKind::coinduction)) goals.push_back(e);
    else rest.push_back(e);
  }
  try {
    if (kind == TacticKind::coinduction)
      active_.emplace<CoinductionState>(spec_, goals, limits_, proved_equations());
    else
      active_.emplace<InductionState>(spec_, goals, t.mode.value_or(mode_), limits_, proved_equations());
  } catch (const TermError& e) {
    active_ = std::monostate{};
    throw SessionError(e.what());
  }
  in_proof_ = std::move(goals);
  pending_ = std::move(rest);
  status_ = SessionStatus::proving;
  report_.reset();
  json op{{"op", "start"}, {"tactic", t.str()}};
  log(std::move(op));
  if (visit_state(active_, [](auto& s) { return s.done(); })) finish();
}

const TraceStep& Session::do_step() {
  if (!proving()) throw SessionError("no proof is running");
  const TraceStep& st = visit_state(active_, [](auto& s) -> const TraceStep& { return s.step(); });
  if (visit_state(active_, [](auto& s) { return s.done(); })) finish();
  return st;
}

const TraceStep& Session::step() {
  const TraceStep& st = do_step();
  log({{"op", "step"}});
  return st;
}

std::size_t Session::advance(std::size_t cap) {
  if (!proving()) throw SessionError("no proof is running");
  std::size_t n = 0;
  while (proving() && n < cap) {
    do_step();
    ++n;
  }
  log({{"op", "advance"}, {"cap", cap}});
  return n;
}

TacticReport Session::run_tactic(const Tactic& t) {
  start(t);
  if (proving()) advance();
  return *report_;
}

void Session::finish() {
  TacticReport r;
  ProofTrace tr;
  std::vector<FrozenGoal> generic;
  if (auto* s = std::get_if<InductionState>(&active_)) {
    tr = trace_of(*s);
    generic = s->generic_forms();
  } else {
    tr = trace_of(std::get<CoinductionState>(active_));
  }
  r.calculus = tr.calculus;
  r.outcome = tr.outcome;
  r.message = tr.message;
  r.failed = tr.failed;
  r.steps = tr.steps.size();
  traces_.push_back(std::move(tr));

  auto add = [&](const Equation& e, bool is_generic) {
    bool known = std::any_of(proved_.begin(), proved_.end(), [&](const ProvedProperty& p) { return p.eq == e; });
    if (known) return;
    proved_.push_back({e, is_generic});
    r.proved.push_back(e);
  };
  if (r.outcome == Outcome::success) {
    for (const auto& g : generic) {
      if (!g.lhs.valid()) continue;
      Equation e = generic_equation(g);
      adopt_sorts(e);
      add(e, true);
    }
    for (const auto& e : in_proof_) add(e, false);
    in_proof_.clear();
    failure_.reset();
    status_ = pending_.empty() ? SessionStatus::done : SessionStatus::idle;
    events_.push_back("Proof succeeded.");
  } else {
    pending_.insert(pending_.begin(), in_proof_.begin(), in_proof_.end());
    in_proof_.clear();
    failure_ = r.failed;
    status_ = SessionStatus::stuck;
    events_.push_back(r.message);
  }
  report_ = std::move(r);
}

// ---------------------------------------------------------------- generalize

std::optional<Equation> Session::failure_goal() const {
  if (!failure_) return std::nullopt;
  std::function<Term(const Term&)> thaw = [&](const Term& t) -> Term {
    if (t.is_frozen())
      return Term::var(upper(t.name()) + (t.index() > 0 ? std::to_string(t.index()) : ""),
                       spec_.sig.base_sort(t.sort()));
    if (!t.is_app()) return t;
    if (t.op()->freeze) return thaw(t.args()[0]);
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(thaw(a));
    return Term::app(t.op(), std::move(args));
  };
  Equation e;
  e.lhs = thaw(failure_->lhs);
  e.rhs = thaw(failure_->rhs);
  for (const auto& [u, v] : failure_->condition) e.condition.emplace_back(thaw(u), thaw(v));
  return parse_goal(to_string(e), spec_);
}

Equation Session::resolve_goal(const std::optional<Equation>& goal) const {
  if (goal) return *goal;
  auto f = failure_goal();
  if (!f) throw SessionError("no failed goal to generalize");
  return *f;
}

Equation Session::replace_in_goal(const Equation& g, const Term& sub, const std::string& var_text) {
  if (!occurs_in(sub, g)) throw SessionError("subterm not found");
  std::vector<Term> vars;
  collect_terms(g, vars);
  VarEnv env;
  Term var = parse_term(var_text, spec_, &env);
  if (!var.is_var()) throw SessionError("generalization target must be a variable, got " + var_text);
  if (std::any_of(vars.begin(), vars.end(), [&](const Term& v) { return v.name() == var.name(); }))
    throw SessionError("variable " + var.name() + " already occurs in the goal");
  Sort ss = least_sort(sub, spec_.sig);
  if (!spec_.sig.leq(ss, var.sort()))
    throw SessionError("sort mismatch: subterm has sort " + ss + ", variable has sort " + var.sort());
  Equation e;
  e.lhs = replace(g.lhs, sub, var);
  e.rhs = replace(g.rhs, sub, var);
  for (const auto& [u, v] : g.condition) e.condition.emplace_back(replace(u, sub, var), replace(v, sub, var));
  Equation out = parse_goal(to_string(e), spec_);
  auto it = std::find(pending_.begin(), pending_.end(), g);
  if (it != pending_.end()) pending_.erase(it);
  pending_.push_back(out);
  return out;
}

Equation Session::generalize(const std::string& subterm, const std::string& var, const std::optional<Equation>& goal) {
  Equation g = resolve_goal(goal);
  VarEnv env;
  std::vector<Term> vars;
  collect_terms(g, vars);
  for (const auto& v : vars) env.sorts[v.name()] = v.sort();
  Term sub = parse_term(subterm, spec_, &env);
  Equation out = replace_in_goal(g, sub, var);
  json op{{"op", "generalize"}, {"subterm", subterm}, {"var", var}};
  if (goal) op["goal"] = equation_json(*goal);
  log(std::move(op));
  return out;
}

Equation Session::generalize_at(int side, const std::vector<std::size_t>& path, const std::string& var,
                                const std::optional<Equation>& goal) {
  Equation g = resolve_goal(goal);
  if (side != 0 && side != 1) throw SessionError("side must be 0 (lhs) or 1 (rhs)");
  Term t = side == 0 ? g.lhs : g.rhs;
  for (std::size_t i : path) {
    if (!t.is_app() || i >= t.args().size()) throw SessionError("subterm not found");
    t = t.args()[i];
  }
  Equation out = replace_in_goal(g, t, var);
  json op{{"op", "generalize_at"}, {"side", side}, {"path", path}, {"var", var}};
  if (goal) op["goal"] = equation_json(*goal);
  log(std::move(op));
  return out;
}

// ---------------------------------------------------------------- snapshots

void Session::save_state(const std::string& name) {
  snapshots_.push_back({name, pending_, in_proof_, active_, traces_, report_, failure_, status_, limits_, mode_});
  pending_.clear();
  in_proof_.clear();
  active_ = std::monostate{};
  report_.reset();
  status_ = SessionStatus::idle;
  events_.push_back("Proof state saved.");
  log({{"op", "save"}, {"name", name}});
}

void Session::load_state(const std::string& name) {
  auto it = std::find_if(snapshots_.rbegin(), snapshots_.rend(),
                         [&](const Snapshot& s) { return name.empty() || s.name == name; });
  if (it == snapshots_.rend())
    throw SessionError(name.empty() ? "no saved proof state" : "unknown snapshot " + name);
  const Snapshot& s = *it;
  pending_ = s.pending;
  in_proof_ = s.in_proof;
  active_ = s.active;
  traces_ = s.traces;
  report_ = s.report;
  failure_ = s.failure;
  status_ = s.status;
  limits_ = s.limits;
  mode_ = s.mode;
  // Goals proved since the save are not asked for again.
  auto proved = proved_equations();
  pending_.erase(std::remove_if(pending_.begin(), pending_.end(),
                                [&](const Equation& e) {
                                  return std::find(proved.begin(), proved.end(), e) != proved.end();
                                }),
                 pending_.end());
  if (status_ == SessionStatus::stuck && pending_.empty()) status_ = SessionStatus::done;
  events_.push_back("Proof state loaded.");
  log({{"op", "load"}, {"name", name}});
}

std::vector<std::string> Session::snapshot_names() const {
  std::vector<std::string> out;
  for (const auto& s : snapshots_) out.push_back(s.name);
  return out;
}

void Session::set(const std::string& key, const std::string& value) {
  if (key == "mode") {
    auto m = parse_mode(value);
    if (!m) throw SessionError("unknown induction mode " + value);
    mode_ = *m;
  } else {
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      long long v = std::stoll(value, &used);
      if (used != value.size() || v <= 0) throw std::invalid_argument(value);
      n = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw SessionError("expected a positive number for " + key + ", got " + value);
    }
    if (key == "max-derive") limits_.max_derive = n;
    else if (key == "max-rewrite") limits_.budget.max_rewrite_steps = n;
    else if (key == "max-steps") limits_.max_steps = n;
    else if (key == "max-term-size") limits_.budget.max_term_size = n;
    else throw SessionError("unknown setting " + key);
  }
  log({{"op", "set"}, {"key", key}, {"value", value}});
}

// ---------------------------------------------------------------- views

ProofTrace Session::trace() const {
  if (auto* s = std::get_if<InductionState>(&active_)) return trace_of(*s);
  if (auto* s = std::get_if<CoinductionState>(&active_)) return trace_of(*s);
  return {};
}

std::vector<Hypothesis> Session::hypotheses() const {
  if (auto* s = std::get_if<InductionState>(&active_)) return s->hypotheses();
  if (auto* s = std::get_if<CoinductionState>(&active_)) return s->hypotheses();
  return {};
}

std::vector<GoalNode> Session::goals() const {
  if (auto* s = std::get_if<InductionState>(&active_)) return {s->goals().begin(), s->goals().end()};
  if (auto* s = std::get_if<CoinductionState>(&active_)) return {s->goals().begin(), s->goals().end()};
  return {};
}

json Session::describe() const {
  json j{{"schema", "circlet.session/1"}, {"digest", digest()}, {"status", status_name(status_)},
         {"mode", mode_name(mode_)}};
  j["limits"] = {{"max_derive", limits_.max_derive},
                 {"max_steps", limits_.max_steps},
                 {"max_rewrite", limits_.budget.max_rewrite_steps},
                 {"max_term_size", limits_.budget.max_term_size}};
  j["pending"] = json::array();
  for (const auto& e : pending_) j["pending"].push_back(equation_json(e));
  j["in_proof"] = json::array();
  for (const auto& e : in_proof_) j["in_proof"].push_back(equation_json(e));
  j["proved"] = json::array();
  for (const auto& p : proved_) {
    json e = equation_json(p.eq);
    e["generic"] = p.generic;
    j["proved"].push_back(std::move(e));
  }
  j["F"] = json::array();
  for (const auto& h : hypotheses()) j["F"].push_back(hypothesis_json(h));
  j["G"] = json::array();
  for (const auto& n : goals()) j["G"].push_back(node_json(n));
  ProofTrace tr = trace();
  j["calculus"] = tr.calculus.empty() ? json(nullptr) : json(tr.calculus);
  j["steps"] = tr.steps.size();
  if (report_) {
    json r{{"calculus", report_->calculus},
           {"outcome", outcome_name(report_->outcome)},
           {"message", report_->message},
           {"steps", report_->steps}};
    r["failed"] = report_->failed ? goal_json(*report_->failed) : json(nullptr);
    r["proved"] = json::array();
    for (const auto& e : report_->proved) r["proved"].push_back(equation_json(e));
    j["report"] = std::move(r);
  } else {
    j["report"] = nullptr;
  }
  j["failure"] = failure_ ? goal_json(*failure_) : json(nullptr);
  j["snapshots"] = snapshot_names();
  j["events"] = events_;
  return j;
}

json Session::export_json() const {
  return {{"schema", "circlet.export/1"}, {"spec", spec_text_}, {"origin", origin_}, {"ops", oplog_}};
}

Session Session::import_json(const json& j) {
  if (j.value("schema", "") != "circlet.export/1") throw SessionError("unsupported export schema");
  Session s(j.at("spec").get<std::string>(), j.value("origin", "<inline>"));
  for (const auto& op : j.at("ops")) {
    const std::string kind = op.at("op").get<std::string>();
    auto goal = [&]() -> std::optional<Equation> {
      if (!op.contains("goal")) return std::nullopt;
      return equation_from_json(op["goal"], s.spec_);
    };
    if (kind == "add_goal") {
      if (op.contains("text")) s.add_goal(op["text"].get<std::string>());
      else s.add_goal(equation_from_json(op["equation"], s.spec_));
    } else if (kind == "start") {
      std::string t = op.at("tactic").get<std::string>();
      auto sp = t.find(' ');
      auto tac = Tactic::parse(t.substr(0, sp), sp == std::string::npos ? "" : t.substr(sp + 1));
      if (!tac) throw SessionError("bad tactic in export: " + t);
      s.start(*tac);
    } else if (kind == "step") {
      s.step();
    } else if (kind == "advance") {
      s.advance(op.at("cap").get<std::size_t>());
    } else if (kind == "generalize") {
      s.generalize(op.at("subterm").get<std::string>(), op.at("var").get<std::string>(), goal());
    } else if (kind == "generalize_at") {
      s.generalize_at(op.at("side").get<int>(), op.at("path").get<std::vector<std::size_t>>(),
                      op.at("var").get<std::string>(), goal());
    } else if (kind == "save") {
      s.save_state(op.at("name").get<std::string>());
    } else if (kind == "load") {
      s.load_state(op.at("name").get<std::string>());
    } else if (kind == "set") {
      s.set(op.at("key").get<std::string>(), op.at("value").get<std::string>());
    } else {
      throw SessionError("unknown operation in export: " + kind);
    }
  }
  return s;
}

}  // namespace circlet
