#include "circlet/script.hpp"

#include <sstream>

#include "circlet/print.hpp"

namespace circlet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// "rest" after skipping n leading words of s.
std::string after_words(const std::string& s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    i = s.find_first_not_of(" \t\r\n", i);
    if (i == std::string::npos) return "";
    i = s.find_first_of(" \t\r\n", i);
    if (i == std::string::npos) return "";
  }
  return trim(s.substr(i));
}

bool comment_line(const std::string& l) {
  std::string t = trim(l);
  return t.rfind("---", 0) == 0 || t.rfind("***", 0) == 0 || t.rfind("#", 0) == 0;
}

}  // namespace

std::string Command::canonical() const {
  std::string body;
  switch (kind) {
    case CommandKind::add_goal: body = "add goal " + text; break;
    case CommandKind::induction: body = mode ? std::string("induction ") + mode_name(*mode) : "induction"; break;
    case CommandKind::coinduction: body = "coinduction"; break;
    case CommandKind::automatic: body = "auto"; break;
    case CommandKind::generalize: body = "generalize " + text + " to " + text2; break;
    case CommandKind::save_state: body = "save proof state" + (text.empty() ? "" : " " + text); break;
    case CommandKind::load_state: body = "load proof state" + (text.empty() ? "" : " " + text); break;
    case CommandKind::set: body = "set " + text + " " + text2; break;
    case CommandKind::show_trace: body = "show trace" + (text.empty() ? "" : " " + text); break;
    case CommandKind::show_proved: body = "show proved"; break;
    case CommandKind::show_goals: body = "show goals"; break;
    case CommandKind::help: body = "help"; break;
    case CommandKind::quit: body = "quit"; break;
  }
  return "(" + body + " .)";
}

std::optional<Command> parse_command(const std::string& raw, CommandError* err) {
  auto fail = [&](std::string m) -> std::optional<Command> {
    if (err) err->message = std::move(m);
    return std::nullopt;
  };
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') return fail("missing closing parenthesis");
    s = trim(s.substr(1, s.size() - 2));
    if (s.empty() || s.back() != '.') return fail("command must end with ' .'");
    s = trim(s.substr(0, s.size() - 1));
  } else if (!s.empty() && s.back() == '.') {
    s = trim(s.substr(0, s.size() - 1));
  }
  std::vector<std::string> w = words(s);
  if (w.empty()) return fail("empty command");
  Command c;
  const std::string& k = w[0];
  if (k == "add" && w.size() >= 3 && w[1] == "goal") {
    c.kind = CommandKind::add_goal;
    c.text = after_words(s, 2);
  } else if (k == "induction" && w.size() <= 2) {
    c.kind = CommandKind::induction;
    if (w.size() == 2) {
      c.mode = parse_mode(w[1]);
      if (!c.mode) return fail("unknown induction mode '" + w[1] + "' (basic, extended, subsort)");
    }
  } else if (k == "coinduction" && w.size() == 1) {
    c.kind = CommandKind::coinduction;
  } else if (k == "auto" && w.size() == 1) {
    c.kind = CommandKind::automatic;
  } else if (k == "generalize") {
    std::string rest = after_words(s, 1);
    std::size_t at = rest.rfind(" to ");
    if (at == std::string::npos) return fail("usage: (generalize SUBTERM to VAR:Sort .)");
    c.kind = CommandKind::generalize;
    c.text = trim(rest.substr(0, at));
    c.text2 = trim(rest.substr(at + 4));
    if (c.text.empty() || c.text2.empty()) return fail("usage: (generalize SUBTERM to VAR:Sort .)");
  } else if ((k == "save" || k == "load") && w.size() >= 3 && w.size() <= 4 && w[1] == "proof" && w[2] == "state") {
    c.kind = k == "save" ? CommandKind::save_state : CommandKind::load_state;
    if (w.size() == 4) c.text = w[3];
  } else if (k == "set" && w.size() == 3) {
    c.kind = CommandKind::set;
    c.text = w[1];
    c.text2 = w[2];
  } else if (k == "show" && w.size() >= 2 && w[1] == "trace" && w.size() <= 3) {
    c.kind = CommandKind::show_trace;
    if (w.size() == 3) {
      if (!parse_trace_format(w[2])) return fail("unknown trace format '" + w[2] + "' (table, dot, data)");
      c.text = w[2];
    }
  } else if (k == "show" && w.size() == 2 && w[1] == "proved") {
    c.kind = CommandKind::show_proved;
  } else if (k == "show" && w.size() == 2 && w[1] == "goals") {
    c.kind = CommandKind::show_goals;
  } else if (k == "help" && w.size() == 1) {
    c.kind = CommandKind::help;
  } else if ((k == "quit" || k == "q") && w.size() == 1) {
    c.kind = CommandKind::quit;
  } else {
    return fail("unknown command '" + s + "'");
  }
  return c;
}

std::vector<ScriptChunk> split_script(const std::string& text, bool plain, CommandError* err) {
  std::vector<ScriptChunk> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string buf;
  int start = 0, depth = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (buf.empty() && (trim(line).empty() || comment_line(line))) continue;
    if (plain && buf.empty() && trim(line).front() != '(') {
      out.push_back({trim(line), lineno});
      continue;
    }
    for (char ch : line) {
      if (buf.empty() && depth == 0) {
        if (ch == ' ' || ch == '\t' || ch == '\r') continue;
        if (ch != '(') {
          if (err) *err = {"expected '(' to start a command", lineno};
          return {};
        }
        start = lineno;
      }
      buf += ch;
      if (ch == '(') ++depth;
      if (ch == ')' && --depth == 0) {
        out.push_back({buf, start});
        buf.clear();
      }
    }
    if (!buf.empty()) buf += '\n';
  }
  if (!buf.empty()) {
    if (err) *err = {"unterminated command", start};
    return {};
  }
  return out;
}

bool command_complete(const std::string& buffer) {
  std::string t = trim(buffer);
  if (t.empty()) return false;
  if (t.front() != '(') return true;  // bare commands are one line
  int depth = 0;
  for (char ch : t) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
  }
  return depth <= 0;
}

std::string help_text() {
  return "Commands:\n"
         "  (add goal EQUATION .)            queue a goal, e.g. (add goal sum(M:Nat,N:Nat) = sum(N:Nat,M:Nat) .)\n"
         "  (induction [basic|extended|subsort] .)\n"
         "  (coinduction .)\n"
         "  (auto .)                         coinduction for hidden sorts, induction otherwise\n"
         "  (generalize SUBTERM to VAR:Sort .)  generalize the last failed goal\n"
         "  (save proof state [NAME] .)\n"
         "  (load proof state [NAME] .)\n"
         "  (set max-derive|max-rewrite|max-steps|max-term-size N .)\n"
         "  (set mode basic|extended|subsort .)\n"
         "  (show trace [table|dot|data] .)\n"
         "  (show proved .)\n"
         "  (show goals .)\n"
         "  (help .)\n"
         "  (quit .)\n";
}

std::vector<std::string> command_words() {
  return {"add",   "goal",  "induction", "coinduction", "auto",  "generalize", "to",       "save",
          "load",  "proof", "state",     "set",         "show",  "trace",      "proved",   "goals",
          "help",  "quit",  "basic",     "extended",    "subsort", "table",    "dot",      "data",
          "max-derive", "max-rewrite", "max-steps", "max-term-size", "mode"};
}

// ---------------------------------------------------------------- runner

std::string ScriptRunner::proved_block() const {
  std::string out = "Proved properties:\n";
  for (const auto& p : session_.proved()) out += "  " + to_string(p.eq) + "\n";
  return out;
}

std::string ScriptRunner::tactic(const Tactic& t) {
  TacticReport r = session_.run_tactic(t);
  std::string out;
  if (opts_.trace) out += render(session_.trace(), *opts_.trace);
  switch (r.outcome) {
    case Outcome::success:
      out += "Proof succeeded.\n" + proved_block();
      break;
    case Outcome::stuck:
    case Outcome::budget_exceeded:
    case Outcome::running:
      out += r.message + "\n";
      break;
  }
  return out;
}

std::string ScriptRunner::execute(const Command& c) {
  std::string out = c.canonical() + "\n";
  try {
    switch (c.kind) {
      case CommandKind::add_goal: {
        Equation e = session_.add_goal(c.text);
        out += "Goal added: " + to_string(e) + "\n";
        break;
      }
      case CommandKind::induction: {
        Tactic t{TacticKind::induction, c.mode};
        out += tactic(t);
        break;
      }
      case CommandKind::coinduction: out += tactic({TacticKind::coinduction, std::nullopt}); break;
      case CommandKind::automatic: out += tactic({TacticKind::automatic, std::nullopt}); break;
      case CommandKind::generalize: {
        Equation e = session_.generalize(c.text, c.text2);
        out += "Goal added: " + to_string(e) + "\n";
        break;
      }
      case CommandKind::save_state:
        session_.save_state(c.text);
        out += "Proof state saved.\n";
        break;
      case CommandKind::load_state:
        session_.load_state(c.text);
        out += "Proof state loaded.\n";
        break;
      case CommandKind::set:
        session_.set(c.text, c.text2);
        out += "Set " + c.text + " to " + c.text2 + ".\n";
        break;
      case CommandKind::show_trace: {
        TraceFormat f = c.text.empty() ? opts_.trace.value_or(TraceFormat::table) : *parse_trace_format(c.text);
        out += render(session_.trace(), f);
        break;
      }
      case CommandKind::show_proved: out += proved_block(); break;
      case CommandKind::show_goals:
        out += "Pending goals:\n";
        for (const auto& e : session_.pending()) out += "  " + to_string(e) + "\n";
        break;
      case CommandKind::help: out += help_text(); break;
      case CommandKind::quit: quit_ = true; break;
    }
  } catch (const ParseError& e) {
    error_ = true;
    for (const auto& d : e.diagnostics()) out += "Error: " + d.str() + "\n";
  } catch (const std::exception& e) {
    error_ = true;
    out += std::string("Error: ") + e.what() + "\n";
  }
  return out;
}

std::string ScriptRunner::execute_text(const std::string& text) {
  CommandError err;
  auto c = parse_command(text, &err);
  if (!c) {
    error_ = true;
    return "Error: " + err.message + "\n" + help_text();
  }
  return execute(*c);
}

int ScriptRunner::exit_code() const {
  if (error_) return 1;
  if (session_.status() == SessionStatus::done) return 0;
  if (session_.pending().empty() && !session_.proving()) return 0;
  const auto& r = session_.last_report();
  if (r && r->outcome == Outcome::budget_exceeded) return 3;
  return 2;
}

BatchResult run_batch(Session& session, const std::string& script, bool plain, RunnerOptions opts) {
  BatchResult res;
  CommandError err;
  std::vector<ScriptChunk> chunks = split_script(script, plain, &err);
  if (!err.message.empty()) {
    res.transcript = "Error: line " + std::to_string(err.line) + ": " + err.message + "\n";
    res.exit_code = 1;
    return res;
  }
  ScriptRunner runner(session, opts);
  for (const auto& ch : chunks) {
    CommandError ce;
    auto c = parse_command(ch.text, &ce);
    if (!c) {
      res.transcript += "Error: line " + std::to_string(ch.line) + ": " + ce.message + "\n" + help_text();
      res.exit_code = 1;
      return res;
    }
    res.transcript += runner.execute(*c);
    if (runner.had_error()) {
      res.exit_code = 1;
      return res;
    }
    if (runner.quit_requested()) break;
  }
  res.exit_code = runner.exit_code();
  return res;
}

}  // namespace circlet
