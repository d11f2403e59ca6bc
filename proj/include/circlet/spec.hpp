#pragma once

// Specifications and the .cspec surface language.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "circlet/term.hpp"

namespace circlet {

enum class DiagCode { syntax, unknown_symbol, sort_error, special_context, warning };

const char* diag_code_name(DiagCode c);

struct Diagnostic {
  DiagCode code = DiagCode::syntax;
  int line = 0;
  int column = 0;
  std::string message;
  std::string origin;

  std::string str() const;  // origin:line:col: code: message
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// premise over conclusion; the goal is matched against the premise.
struct SimplificationRule {
  Equation premise;
  Equation conclusion;
};

struct Specification {
  std::string name;
  Signature sig;
  std::vector<Equation> equations;
  std::vector<Context> derivatives;  // coinductive destructor contexts
  std::vector<Context> specials;     // special contexts
  std::vector<SimplificationRule> simplifications;
  std::vector<Diagnostic> warnings;

  /// Constructors whose result sort is `s` or its base, in declaration order.
  std::vector<OpPtr> constructors_of(const Sort& s) const;
  bool is_inductive(const Sort& s) const;
  std::set<Sort> inductive_sorts() const;
  bool is_hidden(const Sort& s) const;
  std::set<Sort> hidden_sorts() const;
  std::vector<Context> derivatives_for(const Sort& s) const;
};

struct SpecSource {
  std::string text;
  std::string origin = "<inline>";
};

/// Throws ParseError carrying every error diagnostic found; warnings are
/// kept in Specification::warnings.
Specification parse_spec(const SpecSource& src);
Specification load_spec_file(const std::string& path);

/// Variable sorts seen so far, so unannotated repeats reuse the first annotation.
struct VarEnv {
  std::map<std::string, Sort> sorts;
  std::set<std::string> noninductive;
};

Term parse_term(const std::string& text, const Specification& spec, VarEnv* env = nullptr);
/// "lhs = rhs [if u = v /\ ...]". Inductive-sort variables go to Y unless
/// written with a trailing `!`; the rest go to Z.
Equation parse_goal(const std::string& text, const Specification& spec);

/// Canonical source text; parse_spec(print_spec(s)) reproduces s.
std::string print_spec(const Specification& spec);
std::string print_equation_source(const Equation& e);

}  // namespace circlet
