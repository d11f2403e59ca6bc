#pragma once

// The parenthesized command language: "(add goal E .)", "(induction .)", ...
// Shared by batch runs and the REPL so both print the same transcript.

#include <optional>
#include <string>
#include <vector>

#include "circlet/session.hpp"

namespace circlet {

enum class CommandKind {
  add_goal,
  induction,
  coinduction,
  automatic,
  generalize,
  save_state,
  load_state,
  set,
  show_trace,
  show_proved,
  show_goals,
  help,
  quit
};

struct Command {
  CommandKind kind = CommandKind::help;
  std::string text;   // goal text, subterm, snapshot name, setting key, trace format
  std::string text2;  // generalization variable, setting value
  std::optional<InductionMode> mode;

  /// "(add goal sum(0,N:Nat) = N:Nat .)"
  std::string canonical() const;
};

struct CommandError {
  std::string message;
  int line = 0;
};

/// Parses one command, with or without the surrounding "( ... .)".
std::optional<Command> parse_command(const std::string& text, CommandError* err = nullptr);

struct ScriptChunk {
  std::string text;
  int line = 0;
};
/// Splits a script into commands. Parenthesized commands may span lines;
/// with `plain` every non-empty line is a command. Lines starting with
/// "---" or "#" are comments.
std::vector<ScriptChunk> split_script(const std::string& text, bool plain, CommandError* err = nullptr);
/// True once `buffer` holds at least one complete command (REPL continuation).
bool command_complete(const std::string& buffer);

std::string help_text();
/// Command keywords, for completion.
std::vector<std::string> command_words();

struct RunnerOptions {
  std::optional<TraceFormat> trace = TraceFormat::table;  // printed after each tactic
};

class ScriptRunner {
 public:
  ScriptRunner(Session& session, RunnerOptions opts = {}) : session_(session), opts_(opts) {}

  /// Executes one command; returns the transcript text (echo included).
  std::string execute(const Command& c);
  /// Parses and executes a chunk; parse errors are reported in the text.
  std::string execute_text(const std::string& text);

  bool quit_requested() const { return quit_; }
  bool had_error() const { return error_; }
  /// 0 all goals proved, 2 stuck or unproved, 3 budget exceeded, 1 errors.
  int exit_code() const;

 private:
  std::string proved_block() const;
  std::string tactic(const Tactic& t);

  Session& session_;
  RunnerOptions opts_;
  bool quit_ = false;
  bool error_ = false;
};

struct BatchResult {
  int exit_code = 0;
  std::string transcript;
};
BatchResult run_batch(Session& session, const std::string& script, bool plain, RunnerOptions opts = {});

}  // namespace circlet
