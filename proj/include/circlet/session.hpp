#pragma once

// Interactive proof sessions: pending goals, tactics, single stepping,
// generalization, named snapshots and the proved-property ledger.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "circlet/coinduction.hpp"
#include "circlet/induction.hpp"
#include "circlet/trace.hpp"
#include "circlet/wire.hpp"

namespace circlet {

/// Misuse of a session (no pending goals, unknown snapshot, bad subterm...).
class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TacticKind { induction, coinduction, automatic };

struct Tactic {
  TacticKind kind = TacticKind::automatic;
  std::optional<InductionMode> mode;  // induction only; session default otherwise

  static std::optional<Tactic> parse(const std::string& name, const std::string& mode = "");
  std::string str() const;
};

enum class SessionStatus { idle, proving, stuck, done };
const char* status_name(SessionStatus s);

struct ProvedProperty {
  Equation eq;
  bool generic = false;  // subsort generic form of another entry
};

/// Outcome of a finished sub-proof, as reported to the user.
struct TacticReport {
  std::string calculus;
  Outcome outcome = Outcome::running;
  std::string message;
  std::optional<FrozenGoal> failed;
  std::vector<Equation> proved;  // entries appended to the ledger
  std::size_t steps = 0;
};

class Session {
 public:
  explicit Session(const std::string& spec_text, const std::string& origin = "<inline>");

  const Specification& spec() const { return spec_; }
  const std::string& spec_text() const { return spec_text_; }
  /// Hex FNV-1a digest of the spec text.
  std::string digest() const;

  Equation add_goal(const std::string& text);
  void add_goal(const Equation& e);
  const std::vector<Equation>& pending() const { return pending_; }
  const std::vector<ProvedProperty>& proved() const { return proved_; }
  std::vector<Equation> proved_equations() const;

  /// Starts a sub-proof on the pending goals. `auto` proves the goals of the
  /// first pending goal's kind (hidden sort: coinduction, else induction).
  void start(const Tactic& t);
  bool proving() const { return status_ == SessionStatus::proving; }
  /// One rule application of the running sub-proof. Finishes it when done.
  const TraceStep& step();
  /// Steps until the sub-proof ends or `cap` steps were taken; returns the count.
  std::size_t advance(std::size_t cap = static_cast<std::size_t>(-1));
  TacticReport run_tactic(const Tactic& t);
  const std::optional<TacticReport>& last_report() const { return report_; }

  /// Replaces every occurrence of `subterm` in `goal` (default: the last
  /// failed goal) by the variable `var`, queues the result and drops `goal`
  /// from the pending list.
  Equation generalize(const std::string& subterm, const std::string& var,
                      const std::optional<Equation>& goal = std::nullopt);
  /// Same, with the subterm given as an argument path into goal.lhs (side 0)
  /// or goal.rhs (side 1).
  Equation generalize_at(int side, const std::vector<std::size_t>& path, const std::string& var,
                         const std::optional<Equation>& goal = std::nullopt);
  /// The last failed goal with frozen constants turned back into variables.
  std::optional<Equation> failure_goal() const;

  /// Saves a deep copy and parks the interrupted goals.
  void save_state(const std::string& name = "");
  /// Restores the newest snapshot called `name` (or the newest at all). The
  /// proved ledger is kept.
  void load_state(const std::string& name = "");
  std::vector<std::string> snapshot_names() const;

  void set(const std::string& key, const std::string& value);
  const Limits& limits() const { return limits_; }
  void set_limits(const Limits& l) { limits_ = l; }
  InductionMode mode() const { return mode_; }
  void set_mode(InductionMode m) { mode_ = m; }

  SessionStatus status() const { return status_; }
  /// Trace of the running or most recent sub-proof; empty when none ran.
  ProofTrace trace() const;
  const std::vector<ProofTrace>& finished_traces() const { return traces_; }
  std::vector<Hypothesis> hypotheses() const;
  std::vector<GoalNode> goals() const;
  const std::vector<std::string>& events() const { return events_; }

  /// Snapshot of everything observable, for clients and equality checks.
  json describe() const;
  /// Spec text plus the operation log; import replays it.
  json export_json() const;
  static Session import_json(const json& j);

 private:
  using Active = std::variant<std::monostate, InductionState, CoinductionState>;

  void finish();
  const TraceStep& do_step();
  void log(json op) { oplog_.push_back(std::move(op)); }
  Equation resolve_goal(const std::optional<Equation>& goal) const;
  Equation replace_in_goal(const Equation& goal, const Term& sub, const std::string& var);
  void adopt_sorts(const Equation& e);

  std::string spec_text_;
  std::string origin_;
  Specification spec_;
  std::vector<Equation> pending_;
  std::vector<Equation> in_proof_;  // goals handed to the running sub-proof
  std::vector<ProvedProperty> proved_;
  Active active_;
  std::vector<ProofTrace> traces_;
  std::optional<TacticReport> report_;
  std::optional<FrozenGoal> failure_;
  SessionStatus status_ = SessionStatus::idle;
  Limits limits_;
  InductionMode mode_ = InductionMode::subsort;
  std::vector<std::string> events_;

  struct Snapshot {
    std::string name;
    std::vector<Equation> pending, in_proof;
    Active active;
    std::vector<ProofTrace> traces;
    std::optional<TacticReport> report;
    std::optional<FrozenGoal> failure;
    SessionStatus status;
    Limits limits;
    InductionMode mode;
  };
  std::vector<Snapshot> snapshots_;
  std::vector<json> oplog_;
};

}  // namespace circlet
