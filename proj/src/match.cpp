#include <algorithm>

#include "circlet/term.hpp"

namespace circlet {

namespace detail {
void note_substitution();
}

namespace {

using Cont = std::function<bool(const Substitution&)>;

bool match_term(const Term& p, const Term& s, const Signature& sig, const Substitution& sub,
                const Cont& k);

bool match_list(const std::vector<Term>& ps, const std::vector<Term>& ss, std::size_t i,
                const Signature& sig, const Substitution& sub, const Cont& k) {
  if (i == ps.size()) return k(sub);
  return match_term(ps[i], ss[i], sig, sub, [&](const Substitution& next) {
    return match_list(ps, ss, i + 1, sig, next, k);
  });
}

bool bind_var(const Term& var, const Term& value, const Signature& sig, const Substitution& sub,
              const Cont& k) {
  if (const Term* bound = sub.lookup(var)) return *bound == value && k(sub);
  if (!sig.leq(value.sort(), var.sort())) return false;
  Substitution next = sub;
  next.bind(var, value);
  return k(next);
}

// Removes one occurrence of each element of `take` from `pool`; false if absent.
bool remove_all(std::vector<Term>& pool, const std::vector<Term>& take) {
  for (const auto& t : take) {
    auto it = std::find(pool.begin(), pool.end(), t);
    if (it == pool.end()) return false;
    pool.erase(it);
  }
  return true;
}

Term rebuild(const OpPtr& op, const std::vector<Term>& parts) {
  return parts.size() == 1 ? parts.front() : Term::app(op, parts);
}

// Distributes `rest` over the unbound variables vars[i..], every variable
// receiving a non-empty sub-multiset.
bool distribute(const OpPtr& op, const std::vector<Term>& vars, std::size_t i,
                std::vector<Term> rest, const Signature& sig, const Substitution& sub,
                const Cont& k) {
  if (i == vars.size()) return rest.empty() && k(sub);
  const Term& v = vars[i];
  if (const Term* bound = sub.lookup(v)) {
    std::vector<Term> parts = (bound->is_app() && bound->op()->id == op->id)
                                  ? bound->args()
                                  : std::vector<Term>{*bound};
    if (!remove_all(rest, parts)) return false;
    return distribute(op, vars, i + 1, std::move(rest), sig, sub, k);
  }
  std::size_t left = vars.size() - i - 1;
  if (rest.size() < left + 1) return false;
  if (left == 0) return bind_var(v, rebuild(op, rest), sig, sub, k);
  // Enumerate sub-multisets of `rest` by bitmask, skipping repeated choices.
  std::size_t n = rest.size();
  std::vector<std::vector<Term>> seen;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<Term> chosen, remaining;
    for (std::size_t j = 0; j < n; ++j) ((mask >> j) & 1 ? chosen : remaining).push_back(rest[j]);
    if (remaining.size() < left) continue;
    if (std::find(seen.begin(), seen.end(), chosen) != seen.end()) continue;
    seen.push_back(chosen);
    bool stop = bind_var(v, rebuild(op, chosen), sig, sub, [&](const Substitution& next) {
      return distribute(op, vars, i + 1, remaining, sig, next, k);
    });
    if (stop) return true;
  }
  return false;
}

bool match_ac_rigid(const OpPtr& op, const std::vector<Term>& rigid, std::size_t i,
                    const std::vector<Term>& vars, std::vector<Term> pool, const Signature& sig,
                    const Substitution& sub, const Cont& k) {
  if (i == rigid.size()) return distribute(op, vars, 0, std::move(pool), sig, sub, k);
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (j > 0 && pool[j] == pool[j - 1]) continue;
    std::vector<Term> rest = pool;
    Term target = rest[j];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    bool stop = match_term(rigid[i], target, sig, sub, [&](const Substitution& next) {
      return match_ac_rigid(op, rigid, i + 1, vars, rest, sig, next, k);
    });
    if (stop) return true;
  }
  return false;
}

bool match_term(const Term& p, const Term& s, const Signature& sig, const Substitution& sub,
                const Cont& k) {
  switch (p.kind()) {
    case TermKind::variable:
      return bind_var(p, s, sig, sub, k);
    case TermKind::frozen:
    case TermKind::fresh:
      return p == s && k(sub);
    case TermKind::app:
      break;
  }
  if (!s.is_app() || p.op()->id != s.op()->id) return false;
  if (p.ground()) return p == s && k(sub);
  const OpPtr& op = p.op();
  if (op->assoc) {
    std::vector<Term> rigid, vars;
    for (const auto& a : p.args()) (a.is_var() ? vars : rigid).push_back(a);
    if (p.args().size() > s.args().size()) return false;
    return match_ac_rigid(op, rigid, 0, vars, s.args(), sig, sub, k);
  }
  if (op->comm) {
    if (match_list(p.args(), s.args(), 0, sig, sub, k)) return true;
    if (s.args()[0] == s.args()[1]) return false;
    std::vector<Term> swapped{s.args()[1], s.args()[0]};
    return match_list(p.args(), swapped, 0, sig, sub, k);
  }
  return match_list(p.args(), s.args(), 0, sig, sub, k);
}

}  // namespace

bool match_each(const Term& pattern, const Term& subject, const Signature& sig,
                const Substitution& initial, const MatchVisitor& visit) {
  return match_term(pattern, subject, sig, initial, [&](const Substitution& s) {
    detail::note_substitution();
    return visit(s);
  });
}

std::vector<Substitution> match(const Term& pattern, const Term& subject, const Signature& sig) {
  std::vector<Substitution> out;
  match_each(pattern, subject, sig, {}, [&](const Substitution& s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return false;
  });
  return out;
}

std::optional<Substitution> match_first(const Term& pattern, const Term& subject,
                                        const Signature& sig, const Substitution& initial) {
  std::optional<Substitution> out;
  match_each(pattern, subject, sig, initial, [&](const Substitution& s) {
    out = s;
    return true;
  });
  return out;
}

}  // namespace circlet
