#include "circlet/term.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <deque>

namespace circlet {

// ---------------------------------------------------------------- operators

Fixity Operator::fixity() const {
  if (name.size() >= 3 && name.front() == '_' && name.back() == '_') return Fixity::infix;
  if (name.find('_') != std::string::npos && name.size() > 1) return Fixity::outfix;
  return Fixity::prefix;
}

std::string Operator::infix_symbol() const {
  return fixity() == Fixity::infix ? name.substr(1, name.size() - 2) : name;
}

std::pair<std::string, std::string> Operator::outfix_tokens() const {
  auto pos = name.find('_');
  if (pos == std::string::npos) return {name, ""};
  return {name.substr(0, pos), name.substr(pos + 1)};
}

namespace {
std::atomic<int> next_op_id{1};
}

const OpPtr& freeze_operator() {
  static const OpPtr op = [] {
    Operator o;
    o.name = "[*_*]";
    o.arg_sorts = {"*"};
    o.result_sort = kFrozenSort;
    o.freeze = true;
    o.id = 0;
    return std::make_shared<const Operator>(std::move(o));
  }();
  return op;
}

// ---------------------------------------------------------------- signature

void Signature::add_sort(const Sort& s) {
  if (supers_.count(s)) return;
  supers_[s];
  order_.push_back(s);
  closure_[s] = {s};
}

void Signature::add_subsort(const Sort& sub, const Sort& super) {
  add_sort(sub);
  add_sort(super);
  if (sub == super || leq(super, sub))
    throw TermError("subsort " + sub + " < " + super + " would create a cycle");
  supers_[sub].insert(super);
  recompute_closure();
}

void Signature::recompute_closure() {
  for (const auto& [s, _] : supers_) {
    std::set<Sort> seen{s};
    std::deque<Sort> todo{s};
    while (!todo.empty()) {
      Sort cur = todo.front();
      todo.pop_front();
      for (const auto& p : supers_.at(cur))
        if (seen.insert(p).second) todo.push_back(p);
    }
    closure_[s] = std::move(seen);
  }
}

bool Signature::leq(const Sort& a, const Sort& b) const {
  if (a == b) return true;
  auto it = closure_.find(a);
  return it != closure_.end() && it->second.count(b) > 0;
}

bool Signature::connected(const Sort& a, const Sort& b) const {
  if (a == b) return true;
  std::set<Sort> seen{a};
  std::deque<Sort> todo{a};
  while (!todo.empty()) {
    Sort cur = todo.front();
    todo.pop_front();
    if (cur == b) return true;
    auto it = supers_.find(cur);
    if (it != supers_.end())
      for (const auto& p : it->second)
        if (seen.insert(p).second) todo.push_back(p);
    for (const auto& [s, ups] : supers_)
      if (ups.count(cur) && seen.insert(s).second) todo.push_back(s);
  }
  return false;
}

const std::set<Sort>& Signature::declared_supersorts(const Sort& s) const {
  static const std::set<Sort> empty;
  auto it = supers_.find(s);
  return it == supers_.end() ? empty : it->second;
}

std::vector<Sort> Signature::sorts() const { return order_; }

Sort Signature::add_fresh_subsort(const Sort& base, const std::string& source) {
  Sort name = base + "<" + source + ">";
  if (fresh_base_.count(name)) return name;
  add_sort(base);
  add_sort(name);
  supers_[name].insert(base);
  fresh_base_[name] = base;
  recompute_closure();
  return name;
}

Sort Signature::base_sort(const Sort& s) const {
  Sort cur = s;
  for (auto it = fresh_base_.find(cur); it != fresh_base_.end(); it = fresh_base_.find(cur))
    cur = it->second;
  return cur;
}

OpPtr Signature::add_op(Operator op) {
  for (const auto& s : op.arg_sorts) add_sort(s);
  add_sort(op.result_sort);
  if (op.assoc) {
    if (op.arity() != 2) throw TermError("assoc operator " + op.name + " must be binary");
    if (!op.comm) throw TermError("assoc operator " + op.name + " must also be comm");
    if (!connected(op.arg_sorts[0], op.result_sort) || !connected(op.arg_sorts[1], op.result_sort))
      throw TermError("assoc operator " + op.name + " must stay within one sort component");
  }
  if (op.comm && op.arity() != 2) throw TermError("comm operator " + op.name + " must be binary");
  for (const auto& other : ops_)
    if (other->name == op.name && other->arg_sorts == op.arg_sorts)
      throw TermError("operator " + op.name + " declared twice with the same arity");
  op.id = next_op_id++;
  auto ptr = std::make_shared<const Operator>(std::move(op));
  ops_.push_back(ptr);
  return ptr;
}

std::vector<OpPtr> Signature::ops_named(const std::string& name, std::size_t arity) const {
  std::vector<OpPtr> out;
  for (const auto& op : ops_)
    if (op->name == name && op->arity() == arity) out.push_back(op);
  return out;
}

bool Signature::has_op_name(const std::string& name) const {
  return std::any_of(ops_.begin(), ops_.end(), [&](const OpPtr& o) { return o->name == name; });
}

OpPtr Signature::resolve(const std::string& name, const std::vector<Sort>& arg_sorts) const {
  auto cands = ops_named(name, arg_sorts.size());
  if (cands.empty()) throw TermError("unknown operator " + name + "/" + std::to_string(arg_sorts.size()));
  std::vector<OpPtr> fit;
  for (const auto& op : cands) {
    bool ok = true;
    for (std::size_t i = 0; i < arg_sorts.size() && ok; ++i) ok = leq(arg_sorts[i], op->arg_sorts[i]);
    if (ok) fit.push_back(op);
  }
  if (fit.empty()) {
    std::string got;
    for (const auto& s : arg_sorts) got += (got.empty() ? "" : " ") + s;
    throw TermError("no declaration of " + name + " accepts argument sorts (" + got + ")");
  }
  // Most specific declaration wins when it is below every other candidate.
  for (const auto& op : fit) {
    bool below_all = true;
    for (const auto& other : fit)
      for (std::size_t i = 0; i < arg_sorts.size() && below_all; ++i)
        below_all = leq(op->arg_sorts[i], other->arg_sorts[i]);
    if (below_all) return op;
  }
  throw TermError("ambiguous use of operator " + name);
}

// ---------------------------------------------------------------- terms

struct Term::Node {
  TermKind kind;
  std::string name;
  Sort sort;
  int index = 0;
  int generation = 0;
  OpPtr op;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 1;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t leaf_hash(TermKind k, const std::string& name, int index) {
  std::size_t h = std::hash<std::string>{}(name);
  h = mix(h, static_cast<std::size_t>(k));
  return mix(h, static_cast<std::size_t>(index));
}

bool same_op(const OpPtr& a, const OpPtr& b) { return a == b || a->id == b->id; }

}  // namespace

Term Term::var(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::variable;
  n->name = std::move(name);
  n->sort = std::move(sort);
  n->hash = mix(leaf_hash(n->kind, n->name, 0), std::hash<std::string>{}(n->sort));
  n->ground = false;
  return Term(std::move(n));
}

Term Term::frozen(std::string base, int index, Sort sort, int generation) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::frozen;
  n->name = std::move(base);
  n->sort = std::move(sort);
  n->index = index;
  n->generation = generation;
  n->hash = leaf_hash(n->kind, n->name, index);
  return Term(std::move(n));
}

Term Term::fresh(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::fresh;
  n->name = std::move(name);
  n->sort = std::move(sort);
  n->hash = mix(leaf_hash(n->kind, n->name, 0), std::hash<std::string>{}(n->sort));
  return Term(std::move(n));
}

Term Term::app(OpPtr op, std::vector<Term> args) {
  if (!op) throw TermError("null operator");
  if (op->assoc) {
    std::vector<Term> flat;
    flat.reserve(args.size());
    for (auto& a : args) {
      if (a.is_app() && same_op(a.op(), op))
        flat.insert(flat.end(), a.args().begin(), a.args().end());
      else
        flat.push_back(std::move(a));
    }
    args = std::move(flat);
    if (args.size() < 2) throw TermError("assoc operator " + op->name + " needs two arguments");
  } else if (args.size() != op->arity()) {
    throw TermError("operator " + op->name + " expects " + std::to_string(op->arity()) +
                    " arguments, got " + std::to_string(args.size()));
  }
  if (op->comm) std::sort(args.begin(), args.end());
  auto n = std::make_shared<Node>();
  n->kind = TermKind::app;
  n->name = op->name;
  n->sort = op->result_sort;
  n->hash = mix(std::hash<std::string>{}(op->name), static_cast<std::size_t>(op->id));
  std::size_t depth = 0;
  for (const auto& a : args) {
    n->hash = mix(n->hash, a.hash());
    n->size += a.size();
    depth = std::max(depth, a.depth());
    n->ground = n->ground && a.ground();
  }
  n->depth = depth + 1;
  n->op = std::move(op);
  n->args = std::move(args);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Sort& Term::sort() const { return node_->sort; }
int Term::index() const { return node_->index; }
int Term::generation() const { return node_->generation; }
const OpPtr& Term::op() const { return node_->op; }
const std::vector<Term>& Term::args() const {
  static const std::vector<Term> none;
  return node_ ? node_->args : none;
}
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }
std::size_t Term::depth() const { return node_ ? node_->depth : 0; }
bool Term::ground() const { return !node_ || node_->ground; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::variable:
    case TermKind::fresh:
      return a.name() == b.name() && a.sort() == b.sort();
    case TermKind::frozen:
      return a.name() == b.name() && a.index() == b.index();
    case TermKind::app:
      return same_op(a.op(), b.op()) && a.args() == b.args();
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case TermKind::variable:
    case TermKind::fresh:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.sort() <=> b.sort();
    case TermKind::frozen:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.index() <=> b.index();
    case TermKind::app: {
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      if (auto c = a.op()->id <=> b.op()->id; c != 0) return c;
      return std::lexicographical_compare_three_way(a.args().begin(), a.args().end(),
                                                    b.args().begin(), b.args().end());
    }
  }
  return std::strong_ordering::equal;
}

Sort least_sort(const Term& t, const Signature& sig) {
  if (!t.valid()) throw TermError("empty term");
  if (!t.is_app()) return t.sort();
  const auto& op = *t.op();
  if (op.freeze) {
    for (const auto& a : t.args()) least_sort(a, sig);
    return op.result_sort;
  }
  if (!op.assoc && t.args().size() != op.arity())
    throw TermError("arity mismatch for " + op.name);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    Sort s = least_sort(t.args()[i], sig);
    const Sort& want = op.assoc ? op.arg_sorts[0] : op.arg_sorts[i];
    if (!sig.leq(s, want))
      throw TermError("argument " + std::to_string(i + 1) + " of " + op.name + " has sort " + s +
                      ", expected " + want);
  }
  return op.result_sort;
}

// ---------------------------------------------------------------- substitutions

namespace {
std::atomic<std::size_t> audit_substitutions{0};
std::atomic<std::size_t> audit_frozen_bindings{0};
}  // namespace

MatchAudit match_audit() { return {audit_substitutions.load(), audit_frozen_bindings.load()}; }

void reset_match_audit() {
  audit_substitutions = 0;
  audit_frozen_bindings = 0;
}

namespace detail {
void note_substitution() { ++audit_substitutions; }
}  // namespace detail

void Substitution::bind(const Term& var, Term value) {
  if (!var.is_var()) {
    if (var.is_frozen()) ++audit_frozen_bindings;
    throw TermError("only variables can be bound by a substitution");
  }
  map_[VarKey{var.name(), var.sort()}] = std::move(value);
}

const Term* Substitution::lookup(const Term& var) const {
  if (!var.is_var()) return nullptr;
  auto it = map_.find(VarKey{var.name(), var.sort()});
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty() || t.ground()) return t;
  if (t.is_var()) {
    const Term* v = lookup(t);
    return v ? *v : t;
  }
  if (!t.is_app()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back().hash() == a.hash() && args.back() == a);
  }
  return changed ? Term::app(t.op(), std::move(args)) : t;
}

// ---------------------------------------------------------------- helpers

Term replace(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (!t.is_app() || t.size() <= from.size()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(replace(a, from, to));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.op(), std::move(args)) : t;
}

bool occurs(const Term& sub, const Term& t) {
  if (t == sub) return true;
  if (!t.is_app() || t.size() <= sub.size()) return false;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return occurs(sub, a); });
}

void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_frozen(const Term& t, std::vector<Term>& out) {
  if (t.is_frozen()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_frozen(a, out);
}

std::vector<Term> vars_of(const Term& t) {
  std::vector<Term> out;
  collect_vars(t, out);
  return out;
}

// ---------------------------------------------------------------- contexts

namespace {
std::size_t count_holes(const Term& t) {
  if (t.is_var()) return t.name() == "*" ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : t.args()) n += count_holes(a);
  return n;
}

const Term* find_hole(const Term& t) {
  if (t.is_var() && t.name() == "*") return &t;
  for (const auto& a : t.args())
    if (const Term* h = find_hole(a)) return h;
  return nullptr;
}
}  // namespace

Context Context::make(Term body) {
  if (count_holes(body) != 1) throw TermError("a context needs exactly one hole *:s");
  Sort s = find_hole(body)->sort();
  return Context{std::move(body), std::move(s)};
}

Term Context::plug(const Term& t) const { return replace(body, hole(hole_sort), t); }

// ---------------------------------------------------------------- equations

std::vector<Term> Equation::all_vars() const {
  std::vector<Term> out;
  collect_vars(lhs, out);
  collect_vars(rhs, out);
  for (const auto& [u, v] : condition) {
    collect_vars(u, out);
    collect_vars(v, out);
  }
  return out;
}

void Equation::validate(const Signature& sig) const {
  for (const auto& y : inductive_vars)
    if (std::find(other_vars.begin(), other_vars.end(), y) != other_vars.end())
      throw TermError("variable " + y.name() + " is both inductive and non-inductive");
  for (const auto& v : all_vars()) {
    bool in_y = std::find(inductive_vars.begin(), inductive_vars.end(), v) != inductive_vars.end();
    bool in_z = std::find(other_vars.begin(), other_vars.end(), v) != other_vars.end();
    if (!in_y && !in_z) throw TermError("variable " + v.name() + " is not quantified");
  }
  auto check_pair = [&](const Term& a, const Term& b) {
    Sort sa = least_sort(a, sig), sb = least_sort(b, sig);
    if (!sig.connected(sa, sb))
      throw TermError("sides have unrelated sorts " + sa + " and " + sb);
  };
  check_pair(lhs, rhs);
  for (const auto& [u, v] : condition) check_pair(u, v);
}

std::string frozen_base_name(const std::string& var_name) {
  std::string out;
  for (char c : var_name) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

FrozenGoal freeze_goal(const Equation& e) {
  Substitution sigma;
  FrozenGoal g;
  for (const auto& y : e.inductive_vars) {
    Term c = Term::frozen(frozen_base_name(y.name()), 0, y.sort(), 0);
    sigma.bind(y, c);
    g.fvar.push_back(c);
  }
  g.lhs = sigma.apply(e.lhs);
  g.rhs = sigma.apply(e.rhs);
  for (const auto& [u, v] : e.condition) g.condition.emplace_back(sigma.apply(u), sigma.apply(v));
  g.other_vars = e.other_vars;
  g.origin = e;
  return g;
}

Equation unfreeze(const FrozenGoal& g) {
  if (!g.origin) throw TermError("frozen goal has no origin equation");
  Equation e = *g.origin;
  Term lhs = g.lhs, rhs = g.rhs;
  Condition cond = g.condition;
  for (const auto& y : e.inductive_vars) {
    Term c = Term::frozen(frozen_base_name(y.name()), 0, y.sort(), 0);
    lhs = replace(lhs, c, y);
    rhs = replace(rhs, c, y);
    for (auto& [u, v] : cond) {
      u = replace(u, c, y);
      v = replace(v, c, y);
    }
  }
  e.lhs = lhs;
  e.rhs = rhs;
  e.condition = cond;
  return e;
}

FrozenGoal substitute_frozen(const FrozenGoal& g, const Term& from, const Term& to) {
  FrozenGoal out = g;
  out.lhs = replace(g.lhs, from, to);
  out.rhs = replace(g.rhs, from, to);
  for (auto& [u, v] : out.condition) {
    u = replace(u, from, to);
    v = replace(v, from, to);
  }
  out.fvar.clear();
  for (const auto& y : g.fvar) {
    if (y == from) {
      if (to.is_frozen()) out.fvar.push_back(to);
      else collect_frozen(to, out.fvar);
    } else {
      out.fvar.push_back(y);
    }
  }
  return out;
}

Equation freeze_top(const Equation& e, const std::set<Sort>& hidden_sorts) {
  for (const auto& [u, v] : e.condition)
    if (hidden_sorts.count(u.sort()) || hidden_sorts.count(v.sort()))
      throw TermError("conditions of a frozen equation must be visible");
  Equation out = e;
  out.lhs = Term::app(freeze_operator(), {e.lhs});
  out.rhs = Term::app(freeze_operator(), {e.rhs});
  return out;
}

}  // namespace circlet
