#include "circlet/service.hpp"

#include <cstdio>

#include "circlet/print.hpp"

namespace circlet {

namespace {

Response error(int status, const std::string& message, json diagnostics = json::array()) {
  return {status, {{"schema", "circlet.error/1"}, {"error", message}, {"diagnostics", std::move(diagnostics)}}};
}

json diagnostics_json(const ParseError& e) {
  json out = json::array();
  for (const auto& d : e.diagnostics())
    out.push_back({{"code", diag_code_name(d.code)},
                   {"line", d.line},
                   {"column", d.column},
                   {"message", d.message},
                   {"text", d.str()}});
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) out.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::optional<Equation> goal_param(const json& body, Session& s) {
  if (!body.contains("goal") || body["goal"].is_null()) return std::nullopt;
  const json& g = body["goal"];
  if (g.is_string()) return parse_goal(g.get<std::string>(), s.spec());
  Specification sp = s.spec();
  return equation_from_json(g, sp);
}

}  // namespace

std::size_t Service::session_count() const {
  std::lock_guard<std::mutex> lk(mu_);
  return sessions_.size();
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::optional<std::unique_lock<std::mutex>> Service::try_hold(const std::string& id) {
  auto e = find(id);
  if (!e) return std::nullopt;
  std::unique_lock<std::mutex> lk(e->mu, std::try_to_lock);
  if (!lk.owns_lock()) return std::nullopt;
  return lk;
}

std::string Service::continuation(const std::string& id, const Session& s) const {
  return id + "@" + std::to_string(s.trace().steps.size());
}

json Service::state(const std::string& id, const Session& s) const {
  json j = s.describe();
  j["id"] = id;
  j["continuation"] = s.proving() ? json(continuation(id, s)) : json(nullptr);
  return j;
}

Response Service::create(const json& body) {
  std::optional<Session> s;
  if (body.contains("import")) {
    s.emplace(Session::import_json(body["import"]));
  } else {
    if (!body.contains("spec") || !body["spec"].is_string()) return error(422, "body needs a \"spec\" string");
    s.emplace(body["spec"].get<std::string>(), body.value("origin", "<request>"));
  }
  std::string id;
  auto entry = std::make_shared<Entry>(std::move(*s));
  {
    std::lock_guard<std::mutex> lk(mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%04zu", next_id_++);
    id = buf;
    sessions_[id] = entry;
  }
  json j = state(id, entry->session);
  return {201, j};
}

Response Service::handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body_text) {
  json body = json::object();
  if (!body_text.empty()) {
    try {
      body = json::parse(body_text);
    } catch (const json::exception& e) {
      return error(400, std::string("malformed JSON: ") + e.what());
    }
  }
  std::vector<std::string> parts = split_path(path);
  try {
    if (parts.size() == 1 && parts[0] == "sessions") {
      if (method == "POST") return create(body);
      if (method == "GET") {
        json ids = json::array();
        std::lock_guard<std::mutex> lk(mu_);
        for (const auto& [id, _] : sessions_) ids.push_back(id);
        return {200, {{"sessions", ids}}};
      }
      return error(405, "method not allowed");
    }
    if (parts.size() < 2 || parts[0] != "sessions") return error(404, "no such route " + path);
    const std::string& id = parts[1];
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    std::unique_lock<std::mutex> lk(entry->mu, std::try_to_lock);
    if (!lk.owns_lock()) return error(409, "another request is running on session " + id);
    std::string rest;
    for (std::size_t i = 2; i < parts.size(); ++i) rest += "/" + parts[i];
    return dispatch(*entry, id, method, rest, query, body);
  } catch (const ParseError& e) {
    return error(422, e.what(), diagnostics_json(e));
  } catch (const TermError& e) {
    return error(422, e.what());
  } catch (const SessionError& e) {
    return error(422, e.what());
  } catch (const json::exception& e) {
    return error(422, std::string("bad request body: ") + e.what());
  }
}

Response Service::dispatch(Entry& e, const std::string& id, const std::string& method, const std::string& rest,
                           const std::map<std::string, std::string>& query, const json& body) {
  Session& s = e.session;
  auto ok = [&](int status = 200, json extra = json::object()) {
    json j = state(id, s);
    for (auto& [k, v] : extra.items()) j[k] = v;
    return Response{status, j};
  };
  auto start_from = [&](const json& b) {
    auto t = Tactic::parse(b.value("tactic", "auto"), b.value("mode", ""));
    if (!t) throw SessionError("unknown tactic " + b.value("tactic", "") + " " + b.value("mode", ""));
    s.start(*t);
  };

  if (method == "GET" && rest.empty()) return ok();
  if (method == "GET" && rest == "/trace") {
    auto q = query.find("format");
    std::string fmt = q == query.end() ? "table" : q->second;
    auto f = parse_trace_format(fmt);
    if (!f) return error(422, "unknown trace format " + fmt);
    return {200, {{"schema", "circlet.trace-export/1"}, {"format", trace_format_name(*f)},
                  {"document", render(s.trace(), *f)}, {"state", state(id, s)}}};
  }
  if (method == "GET" && rest == "/export") return {200, s.export_json()};
  if (method != "POST") return error(rest.empty() ? 405 : 404, "no such route " + method + " " + rest);

  if (rest == "/goals") {
    if (body.contains("equation")) {
      Specification sp = s.spec();
      s.add_goal(equation_from_json(body["equation"], sp));
    } else {
      s.add_goal(body.at("text").get<std::string>());
    }
    return ok(200, {{"goal", equation_json(s.pending().back())}});
  }
  if (rest == "/tactic") {
    if (body.contains("continuation") && !body["continuation"].is_null()) {
      if (!s.proving() || body["continuation"].get<std::string>() != continuation(id, s))
        return error(409, "stale continuation token");
    } else {
      start_from(body);
    }
    std::size_t cap = std::min<std::size_t>(body.value("max_steps", step_cap_), step_cap_);
    if (cap == 0) cap = 1;
    std::size_t n = s.proving() ? s.advance(cap) : 0;
    json extra{{"steps_taken", n}};
    return ok(200, extra);
  }
  if (rest == "/step") {
    if (!s.proving()) start_from(body);
    if (!s.proving()) return ok(200, {{"delta", nullptr}});
    std::size_t before = s.trace().steps.size();
    s.step();
    ProofTrace tr = s.trace();
    json delta = tr.steps.size() > before ? step_json(tr.steps.back()) : json(nullptr);
    return ok(200, {{"delta", delta}});
  }
  if (rest == "/generalize") {
    std::optional<Equation> goal = goal_param(body, s);
    Equation g = body.contains("path")
                     ? s.generalize_at(body.value("side", 0), body["path"].get<std::vector<std::size_t>>(),
                                       body.at("var").get<std::string>(), goal)
                     : s.generalize(body.at("subterm").get<std::string>(), body.at("var").get<std::string>(), goal);
    return ok(200, {{"goal", equation_json(g)}});
  }
  if (rest == "/snapshots") {
    s.save_state(body.value("name", ""));
    return ok(201);
  }
  const std::string prefix = "/snapshots/";
  if (rest.rfind(prefix, 0) == 0 && rest.size() > prefix.size() + 5 &&
      rest.compare(rest.size() - 5, 5, "/load") == 0) {
    std::string name = rest.substr(prefix.size(), rest.size() - prefix.size() - 5);
    if (name == "_") name.clear();
    try {
      s.load_state(name);
    } catch (const SessionError& err) {
      return error(404, err.what());
    }
    return ok();
  }
  return error(404, "no such route " + rest);
}

}  // namespace circlet
