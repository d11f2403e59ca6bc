#pragma once

// Sorts, operators, signatures, terms, substitutions, contexts and the two
// freezing operators used by the circular calculi.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace circlet {

using Sort = std::string;

/// Raised for structurally ill-formed terms, equations and declarations.
class TermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Fixity { prefix, infix, outfix };

struct Operator {
  std::string name;  // declared name, e.g. "sum", "_+_", "[_]"
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  bool constructor = false;
  bool comm = false;
  bool assoc = false;
  bool freeze = false;  // the top-freezing operator of coinduction
  int id = -1;

  std::size_t arity() const { return arg_sorts.size(); }
  Fixity fixity() const;
  /// Infix symbol ("+" for "_+_") or outfix open/close tokens.
  std::string infix_symbol() const;
  std::pair<std::string, std::string> outfix_tokens() const;
};

using OpPtr = std::shared_ptr<const Operator>;

/// Sorts, the subsort order, and operator declarations.
class Signature {
 public:
  void add_sort(const Sort& s);
  bool has_sort(const Sort& s) const { return supers_.count(s) > 0; }
  /// Declares sub < super. Throws TermError if the order would become cyclic.
  void add_subsort(const Sort& sub, const Sort& super);
  bool leq(const Sort& a, const Sort& b) const;
  /// True when the two sorts share a connected component of the subsort graph.
  bool connected(const Sort& a, const Sort& b) const;
  const std::set<Sort>& declared_supersorts(const Sort& s) const;
  std::vector<Sort> sorts() const;

  /// Fresh subsort s<source> with s as its only supersort.
  Sort add_fresh_subsort(const Sort& base, const std::string& source);
  bool is_fresh_subsort(const Sort& s) const { return fresh_base_.count(s) > 0; }
  /// Strips fresh subsorts: base_sort("TList<l>") == "TList".
  Sort base_sort(const Sort& s) const;

  OpPtr add_op(Operator op);
  const std::vector<OpPtr>& ops() const { return ops_; }
  std::vector<OpPtr> ops_named(const std::string& name, std::size_t arity) const;
  bool has_op_name(const std::string& name) const;
  /// Picks the unique declaration of `name` accepting arguments of the given
  /// sorts. Throws TermError when none or several apply.
  OpPtr resolve(const std::string& name, const std::vector<Sort>& arg_sorts) const;

 private:
  void recompute_closure();

  std::map<Sort, std::set<Sort>> supers_;   // declared direct supersorts
  std::map<Sort, std::set<Sort>> closure_;  // reflexive-transitive
  std::map<Sort, Sort> fresh_base_;
  std::vector<Sort> order_;
  std::vector<OpPtr> ops_;
};

enum class TermKind : unsigned char { variable, frozen, fresh, app };

/// Immutable, shared term. AC-operator applications are kept canonical
/// (flattened and argument-sorted) so syntactic equality is AC equality.
class Term {
 public:
  Term() = default;

  static Term var(std::string name, Sort sort);
  /// Frozen constant `base` with display index (n, n1, n2...) and generation.
  static Term frozen(std::string base, int index, Sort sort, int generation = 0);
  /// Skolem constant used by entailment for universally quantified variables.
  static Term fresh(std::string name, Sort sort);
  static Term app(OpPtr op, std::vector<Term> args);
  static Term constant(OpPtr op) { return app(std::move(op), {}); }

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::variable; }
  bool is_frozen() const { return kind() == TermKind::frozen; }
  bool is_fresh() const { return kind() == TermKind::fresh; }
  bool is_app() const { return kind() == TermKind::app; }

  /// Variable/fresh name, frozen base name, or operator name.
  const std::string& name() const;
  /// Declared sort for leaves, result sort for applications.
  const Sort& sort() const;
  int index() const;
  int generation() const;
  const OpPtr& op() const;
  const std::vector<Term>& args() const;

  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;
  bool ground() const;  // no variables

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using Condition = std::vector<std::pair<Term, Term>>;

/// Least sort of a well-formed term; validates arities and argument sorts.
Sort least_sort(const Term& t, const Signature& sig);

/// The top-freezing operator [* _ *] : s -> Frozen. A single declaration
/// accepts every sort so both sides of an equation share it.
const OpPtr& freeze_operator();
inline const Sort kFrozenSort = "Frozen";

struct VarKey {
  std::string name;
  Sort sort;
  auto operator<=>(const VarKey&) const = default;
};

/// Sort-respecting map from variables to terms. Frozen constants can never
/// be keys: bind() only accepts variable terms.
class Substitution {
 public:
  void bind(const Term& var, Term value);
  const Term* lookup(const Term& var) const;
  bool contains(const Term& var) const { return lookup(var) != nullptr; }
  std::size_t size() const { return map_.size(); }
  const std::map<VarKey, Term>& bindings() const { return map_; }
  Term apply(const Term& t) const;
  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<VarKey, Term> map_;
};

/// Counts kept by the matcher: produced substitutions and bindings whose key
/// was a frozen constant (must stay zero).
struct MatchAudit {
  std::size_t substitutions = 0;
  std::size_t frozen_bindings = 0;
};
MatchAudit match_audit();
void reset_match_audit();

/// Callback for match enumeration; return true to stop.
using MatchVisitor = std::function<bool(const Substitution&)>;

/// Enumerates substitutions s with s(pattern) AC-equal to subject, extending
/// `initial`. Returns true if the visitor stopped the enumeration.
bool match_each(const Term& pattern, const Term& subject, const Signature& sig,
                const Substitution& initial, const MatchVisitor& visit);
std::vector<Substitution> match(const Term& pattern, const Term& subject,
                                const Signature& sig);
std::optional<Substitution> match_first(const Term& pattern, const Term& subject,
                                        const Signature& sig,
                                        const Substitution& initial = {});

// Structural helpers.
Term replace(const Term& t, const Term& from, const Term& to);
bool occurs(const Term& sub, const Term& t);
void collect_vars(const Term& t, std::vector<Term>& out);  // first-occurrence order
void collect_frozen(const Term& t, std::vector<Term>& out);
std::vector<Term> vars_of(const Term& t);

/// One-hole context: `body` contains exactly one occurrence of *:hole_sort.
struct Context {
  Term body;
  Sort hole_sort;

  static Term hole(const Sort& s) { return Term::var("*", s); }
  static Context make(Term body);  // throws TermError unless exactly one hole
  Term plug(const Term& t) const;
  friend bool operator==(const Context&, const Context&) = default;
};

/// (forall Y)(forall Z) lhs = rhs if condition.
struct Equation {
  Term lhs;
  Term rhs;
  Condition condition;
  std::vector<Term> inductive_vars;  // Y
  std::vector<Term> other_vars;      // Z

  std::vector<Term> all_vars() const;
  /// Checks Y/Z disjointness, coverage of free variables and sort agreement.
  void validate(const Signature& sig) const;
  friend bool operator==(const Equation&, const Equation&) = default;
};

/// An equation whose inductive variables were replaced by frozen constants.
struct FrozenGoal {
  Term lhs;
  Term rhs;
  Condition condition;
  std::vector<Term> fvar;             // frozen constants standing for Y
  std::vector<Term> other_vars;       // Z, still universally quantified
  std::optional<Equation> origin;

  friend bool operator==(const FrozenGoal& a, const FrozenGoal& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs && a.condition == b.condition;
  }
};

/// Lowercased variable name used for its frozen constant (N -> n).
std::string frozen_base_name(const std::string& var_name);

FrozenGoal freeze_goal(const Equation& e);
/// Maps every generation-0 frozen constant of the origin back to its variable.
Equation unfreeze(const FrozenGoal& g);
/// Replaces frozen constant `from` by `to` in both sides and the condition.
FrozenGoal substitute_frozen(const FrozenGoal& g, const Term& from, const Term& to);

/// Wraps both sides in the freeze operator; the condition stays unfrozen.
/// Throws TermError if a condition side has a hidden sort.
Equation freeze_top(const Equation& e, const std::set<Sort>& hidden_sorts);

}  // namespace circlet

template <>
struct std::hash<circlet::Term> {
  std::size_t operator()(const circlet::Term& t) const { return t.hash(); }
};
