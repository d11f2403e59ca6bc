#include "circlet/print.hpp"

namespace circlet {

namespace {

const char* const kSubscripts[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};

bool is_infix_app(const Term& t) {
  return t.is_app() && !t.op()->freeze && t.op()->fixity() == Fixity::infix;
}

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::variable:
      out += t.name() + ":" + t.sort();
      return;
    case TermKind::frozen:
      out += frozen_display(t.name(), t.index());
      return;
    case TermKind::fresh:
      out += t.name();
      return;
    case TermKind::app:
      break;
  }
  const Operator& op = *t.op();
  if (op.freeze) {
    out += "[* ";
    print(t.args()[0], out);
    out += " *]";
    return;
  }
  switch (op.fixity()) {
    case Fixity::infix: {
      std::string sym = op.infix_symbol();
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += " " + sym + " ";
        const Term& a = t.args()[i];
        if (is_infix_app(a)) {
          out += "(";
          print(a, out);
          out += ")";
        } else {
          print(a, out);
        }
      }
      return;
    }
    case Fixity::outfix: {
      auto [open, close] = op.outfix_tokens();
      out += open;
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        print(t.args()[i], out);
      }
      out += close;
      return;
    }
    case Fixity::prefix:
      out += op.name;
      if (t.args().empty()) return;
      out += "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        print(t.args()[i], out);
      }
      out += ")";
      return;
  }
}

}  // namespace

std::string frozen_display(const std::string& base, int index) {
  if (index <= 0) return base;
  std::string digits = std::to_string(index), out = base;
  for (char c : digits) out += kSubscripts[c - '0'];
  return out;
}

std::string to_string(const Term& t) {
  if (!t.valid()) return "<empty>";
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const Condition& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " /\\ ";
    out += to_string(c[i].first) + " = " + to_string(c[i].second);
  }
  return out;
}

std::string to_string(const Equation& e) {
  std::string out = to_string(e.lhs) + " = " + to_string(e.rhs);
  if (!e.condition.empty()) out += " if " + to_string(e.condition);
  return out;
}

std::string to_string(const FrozenGoal& g) {
  std::string out = to_string(g.lhs) + " = " + to_string(g.rhs);
  if (!g.condition.empty()) out += " if " + to_string(g.condition);
  return out;
}

std::string to_string(const Context& c) { return to_string(c.body); }

}  // namespace circlet
