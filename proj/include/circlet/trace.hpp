#pragma once

// Proof traces and their renderings: an F/G/Rule table, a DOT graph and
// line-delimited JSON records that can be replayed.

#include <optional>
#include <string>
#include <vector>

#include "circlet/coinduction.hpp"
#include "circlet/induction.hpp"
#include "circlet/proof.hpp"
#include "circlet/spec.hpp"

namespace circlet {

struct ProofTrace {
  std::string calculus;  // induction | coinduction
  std::string mode;      // induction mode, empty for coinduction
  std::vector<Equation> goals;
  std::vector<Equation> proved;  // properties available to the proof
  Limits limits;
  std::vector<TraceStep> steps;
  std::vector<Hypothesis> final_f;
  std::vector<GoalNode> final_g;
  Outcome outcome = Outcome::running;
  std::string message;
  std::optional<FrozenGoal> failed;
};

ProofTrace trace_of(const InductionState& s);
ProofTrace trace_of(const CoinductionState& s);

enum class TraceFormat { table, dot, data };
std::optional<TraceFormat> parse_trace_format(const std::string& s);
const char* trace_format_name(TraceFormat f);

std::string render_table(const ProofTrace& t);
std::string render_dot(const ProofTrace& t);
/// One header record, one record per step, one closing record.
std::string render_data(const ProofTrace& t);
std::string render(const ProofTrace& t, TraceFormat f);

struct ReplayReport {
  bool ok = false;
  std::size_t steps = 0;
  std::string mismatch;
};
/// Re-runs the proof described by a render_data document and compares the
/// F and G snapshots after every step.
ReplayReport replay(const std::string& data, const Specification& spec);

/// Display width in terminal columns (code points; every glyph used is narrow).
std::size_t display_width(const std::string& s);

}  // namespace circlet
