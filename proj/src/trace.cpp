#include "circlet/trace.hpp"

#include <map>
#include <sstream>
#include <variant>

#include "circlet/print.hpp"
#include "circlet/wire.hpp"

namespace circlet {

namespace {

template <class State>
ProofTrace collect(const State& s, std::string calculus, std::string mode) {
  ProofTrace t;
  t.calculus = std::move(calculus);
  t.mode = std::move(mode);
  t.goals = s.initial_goals();
  t.proved = s.proved();
  t.limits = s.limits();
  t.steps = s.trace();
  t.final_f = s.hypotheses();
  t.final_g.assign(s.goals().begin(), s.goals().end());
  t.outcome = s.outcome();
  t.message = s.message();
  t.failed = s.failed();
  return t;
}

std::vector<std::string> f_lines(const std::vector<Hypothesis>& f) {
  std::vector<std::string> out;
  for (const auto& h : f) out.push_back(to_string(h.eq));
  return out;
}

std::vector<std::string> g_lines(const std::vector<GoalNode>& g) {
  std::vector<std::string> out;
  for (const auto& n : g) out.push_back(to_string(n.goal));
  return out;
}

// F and G after step i: the next step's "before" snapshot, or the final state.
std::vector<Hypothesis> f_after(const ProofTrace& t, std::size_t i) {
  return i + 1 < t.steps.size() ? t.steps[i + 1].f_before : t.final_f;
}
std::vector<GoalNode> g_after(const ProofTrace& t, std::size_t i) {
  return i + 1 < t.steps.size() ? t.steps[i + 1].g_before : t.final_g;
}

std::string pad(const std::string& s, std::size_t w) {
  std::size_t d = display_width(s);
  return d >= w ? s : s + std::string(w - d, ' ');
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

json limits_json(const Limits& l) {
  return {{"max_derive", l.max_derive},
          {"max_steps", l.max_steps},
          {"max_rewrite", l.budget.max_rewrite_steps},
          {"max_term_size", l.budget.max_term_size}};
}

Limits limits_from_json(const json& j) {
  Limits l;
  l.max_derive = j.value("max_derive", l.max_derive);
  l.max_steps = j.value("max_steps", l.max_steps);
  l.budget.max_rewrite_steps = j.value("max_rewrite", l.budget.max_rewrite_steps);
  l.budget.max_term_size = j.value("max_term_size", l.budget.max_term_size);
  return l;
}

}  // namespace

ProofTrace trace_of(const InductionState& s) { return collect(s, "induction", mode_name(s.mode())); }
ProofTrace trace_of(const CoinductionState& s) { return collect(s, "coinduction", ""); }

std::optional<TraceFormat> parse_trace_format(const std::string& s) {
  if (s == "table") return TraceFormat::table;
  if (s == "dot") return TraceFormat::dot;
  if (s == "data" || s == "structured-data" || s == "jsonl") return TraceFormat::data;
  return std::nullopt;
}

const char* trace_format_name(TraceFormat f) {
  switch (f) {
    case TraceFormat::table: return "table";
    case TraceFormat::dot: return "dot";
    case TraceFormat::data: return "data";
  }
  return "?";
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string render_table(const ProofTrace& t) {
  if (t.steps.empty() && t.goals.empty()) return "";
  struct Row {
    std::string num;
    std::vector<std::string> f, g;
    std::string rule;
  };
  std::vector<Row> rows;
  std::vector<std::string> prev_f;
  bool first = true;
  auto f_cell = [&](const std::vector<Hypothesis>& f) {
    std::vector<std::string> lines = f_lines(f);
    std::vector<std::string> cell;
    if (!first && lines == prev_f) cell = {"idem"};
    else if (lines.empty()) cell = {"∅"};
    else cell = lines;
    prev_f = lines;
    first = false;
    return cell;
  };
  auto g_cell = [](const std::vector<GoalNode>& g) {
    std::vector<std::string> lines = g_lines(g);
    if (lines.empty()) lines = {"∅"};
    return lines;
  };
  for (const auto& st : t.steps) {
    if (st.f_before.empty() && st.g_before.empty() && st.node < 0) continue;  // step after completion
    rows.push_back({std::to_string(st.index) + ".", f_cell(st.f_before), g_cell(st.g_before), "[" + st.rule + "]"});
  }
  rows.push_back({"", f_cell(t.final_f), g_cell(t.final_g), ""});

  std::size_t wn = 1, wf = 1, wg = 1, wr = 4;
  for (const auto& r : rows) {
    wn = std::max(wn, display_width(r.num));
    for (const auto& l : r.f) wf = std::max(wf, display_width(l));
    for (const auto& l : r.g) wg = std::max(wg, display_width(l));
    wr = std::max(wr, display_width(r.rule));
  }
  auto rule_line = [&] {
    return "+" + std::string(wn + 2, '-') + "+" + std::string(wf + 2, '-') + "+" + std::string(wg + 2, '-') + "+" +
           std::string(wr + 2, '-') + "+\n";
  };
  std::ostringstream out;
  out << rule_line();
  out << "| " << pad("#", wn) << " | " << pad("F", wf) << " | " << pad("G", wg) << " | " << pad("Rule", wr) << " |\n";
  out << rule_line();
  for (const auto& r : rows) {
    std::size_t h = std::max(r.f.size(), r.g.size());
    for (std::size_t i = 0; i < h; ++i) {
      out << "| " << pad(i == 0 ? r.num : "", wn) << " | " << pad(i < r.f.size() ? r.f[i] : "", wf) << " | "
          << pad(i < r.g.size() ? r.g[i] : "", wg) << " | " << pad(i == 0 ? r.rule : "", wr) << " |\n";
    }
    out << rule_line();
  }
  if (t.outcome != Outcome::running) {
    out << "Outcome: " << outcome_name(t.outcome) << "\n";
  }
  return out.str();
}

std::string render_dot(const ProofTrace& t) {
  if (t.steps.empty() && t.goals.empty()) return "";
  std::ostringstream out;
  out << "digraph proof {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  std::map<int, std::string> nodes;
  std::vector<GoalNode> order;
  auto add = [&](const GoalNode& n) {
    if (nodes.count(n.id)) return;
    nodes[n.id] = to_string(n.goal);
    order.push_back(n);
  };
  if (!t.steps.empty())
    for (const auto& n : t.steps.front().g_before) add(n);
  for (const auto& st : t.steps)
    for (const auto& n : st.g_added) add(n);
  for (const auto& n : t.final_g) add(n);

  std::map<int, std::string> closing;
  for (const auto& st : t.steps)
    if (st.node >= 0 && (st.rule == "Reduce" || st.rule == "Stuck" || st.rule == "BudgetExceeded"))
      closing[st.node] = st.rule;
  for (const auto& n : order) {
    out << "  n" << n.id << " [label=\"" << dot_escape(nodes[n.id]) << "\"";
    auto it = closing.find(n.id);
    if (it != closing.end() && it->second != "Reduce") out << ", color=red";
    out << "];\n";
  }
  for (const auto& n : order)
    if (n.parent >= 0) out << "  n" << n.parent << " -> n" << n.id << " [label=\"" << dot_escape(n.edge) << "\"];\n";
  for (const auto& st : t.steps) {
    if (st.rule != "Reduce") continue;
    for (int i : st.used_hypotheses) {
      if (i < 0 || static_cast<std::size_t>(i) >= st.f_before.size()) continue;
      const Hypothesis& h = st.f_before[static_cast<std::size_t>(i)];
      if (h.node < 0) continue;
      std::string label = h.label.empty() ? "hyp" : h.label;
      out << "  n" << st.node << " -> n" << h.node << " [style=dashed, constraint=false, label=\"" << dot_escape(label)
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string render_data(const ProofTrace& t) {
  if (t.steps.empty() && t.goals.empty()) return "";
  std::ostringstream out;
  json header{{"schema", "circlet.trace/1"}, {"type", "header"}, {"calculus", t.calculus}, {"mode", t.mode}};
  header["goals"] = json::array();
  for (const auto& e : t.goals) header["goals"].push_back(equation_json(e));
  header["proved"] = json::array();
  for (const auto& e : t.proved) header["proved"].push_back(equation_json(e));
  header["limits"] = limits_json(t.limits);
  out << header.dump() << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    json j = step_json(t.steps[i]);
    j["type"] = "step";
    j["f"] = f_lines(f_after(t, i));
    j["g"] = g_lines(g_after(t, i));
    out << j.dump() << "\n";
  }
  json fin{{"type", "final"}, {"outcome", outcome_name(t.outcome)}, {"message", t.message}};
  fin["failed"] = t.failed ? goal_json(*t.failed) : json(nullptr);
  out << fin.dump() << "\n";
  return out.str();
}

std::string render(const ProofTrace& t, TraceFormat f) {
  switch (f) {
    case TraceFormat::table: return render_table(t);
    case TraceFormat::dot: return render_dot(t);
    case TraceFormat::data: return render_data(t);
  }
  return "";
}

ReplayReport replay(const std::string& data, const Specification& spec) {
  ReplayReport rep;
  std::istringstream in(data);
  std::string line;
  std::vector<json> records;
  try {
    while (std::getline(in, line))
      if (!line.empty()) records.push_back(json::parse(line));
  } catch (const json::exception& e) {
    rep.mismatch = std::string("malformed record: ") + e.what();
    return rep;
  }
  if (records.empty()) {
    rep.ok = true;
    return rep;
  }
  const json& h = records.front();
  if (h.value("schema", "") != "circlet.trace/1") {
    rep.mismatch = "unsupported schema";
    return rep;
  }
  Specification sp = spec;
  std::vector<Equation> goals, proved;
  try {
    for (const auto& g : h.at("goals")) goals.push_back(equation_from_json(g, sp));
    for (const auto& g : h.at("proved")) proved.push_back(equation_from_json(g, sp));
  } catch (const std::exception& e) {
    rep.mismatch = std::string("cannot rebuild goals: ") + e.what();
    return rep;
  }
  Limits limits = limits_from_json(h.value("limits", json::object()));

  std::variant<std::monostate, InductionState, CoinductionState> state;
  if (h.value("calculus", "") == "coinduction") {
    state.emplace<CoinductionState>(sp, goals, limits, proved);
  } else {
    auto mode = parse_mode(h.value("mode", "subsort"));
    if (!mode) {
      rep.mismatch = "unknown induction mode";
      return rep;
    }
    state.emplace<InductionState>(sp, goals, *mode, limits, proved);
  }
  auto run_step = [&](auto& s) -> std::pair<std::vector<std::string>, std::vector<std::string>> {
    const TraceStep& st = s.step();
    (void)st;
    std::vector<GoalNode> g(s.goals().begin(), s.goals().end());
    return {f_lines(s.hypotheses()), g_lines(g)};
  };
  auto rule_of = [&](auto& s) { return s.trace().back().rule; };
  auto outcome_of = [&](auto& s) { return std::string(outcome_name(s.outcome())); };

  for (std::size_t i = 1; i < records.size(); ++i) {
    const json& r = records[i];
    const std::string type = r.value("type", "");
    if (type == "step") {
      auto [f, g] = std::visit(
          [&](auto& s) -> std::pair<std::vector<std::string>, std::vector<std::string>> {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) return {};
            else return run_step(s);
          },
          state);
      std::string rule = std::visit(
          [&](auto& s) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) return "";
            else return rule_of(s);
          },
          state);
      ++rep.steps;
      std::string where = "step " + std::to_string(rep.steps) + ": ";
      if (rule != r.value("rule", "")) {
        rep.mismatch = where + "rule " + rule + " vs recorded " + r.value("rule", "");
        return rep;
      }
      if (f != r.at("f").get<std::vector<std::string>>()) {
        rep.mismatch = where + "F differs";
        return rep;
      }
      if (g != r.at("g").get<std::vector<std::string>>()) {
        rep.mismatch = where + "G differs";
        return rep;
      }
    } else if (type == "final") {
      std::string o = std::visit(
          [&](auto& s) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) return "";
            else return outcome_of(s);
          },
          state);
      if (o != r.value("outcome", "")) {
        rep.mismatch = "outcome " + o + " vs recorded " + r.value("outcome", "");
        return rep;
      }
    }
  }
  rep.ok = true;
  return rep;
}

}  // namespace circlet
