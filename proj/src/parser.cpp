#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "circlet/print.hpp"
#include "circlet/spec.hpp"

namespace circlet {

const char* diag_code_name(DiagCode c) {
  switch (c) {
    case DiagCode::syntax: return "syntax";
    case DiagCode::unknown_symbol: return "unknown-symbol";
    case DiagCode::sort_error: return "sort-error";
    case DiagCode::special_context: return "special-context";
    case DiagCode::warning: return "warning";
  }
  return "?";
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << (origin.empty() ? "<inline>" : origin) << ":" << line << ":" << column << ": "
     << diag_code_name(code) << ": " << message;
  return os.str();
}

namespace {
std::string join_diags(const std::vector<Diagnostic>& d) {
  std::string out;
  for (const auto& x : d) out += (out.empty() ? "" : "\n") + x.str();
  return out;
}
}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diags(diags)), diags_(std::move(diags)) {}

// ---------------------------------------------------------------- spec queries

std::vector<OpPtr> Specification::constructors_of(const Sort& s) const {
  Sort base = sig.base_sort(s);
  std::vector<OpPtr> out;
  for (const auto& op : sig.ops())
    if (op->constructor && op->result_sort == base) out.push_back(op);
  return out;
}

bool Specification::is_inductive(const Sort& s) const { return !constructors_of(s).empty(); }

std::set<Sort> Specification::inductive_sorts() const {
  std::set<Sort> out;
  for (const auto& op : sig.ops())
    if (op->constructor) out.insert(op->result_sort);
  return out;
}

bool Specification::is_hidden(const Sort& s) const {
  Sort base = sig.base_sort(s);
  return std::any_of(derivatives.begin(), derivatives.end(),
                     [&](const Context& c) { return c.hole_sort == base; });
}

std::set<Sort> Specification::hidden_sorts() const {
  std::set<Sort> out;
  for (const auto& d : derivatives) out.insert(d.hole_sort);
  return out;
}

std::vector<Context> Specification::derivatives_for(const Sort& s) const {
  std::vector<Context> out;
  for (const auto& d : derivatives)
    if (sig.leq(s, d.hole_sort)) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
  enum Kind { ident, symbol, punct, end } kind = end;
  std::string text;
  std::size_t pos = 0;
};

bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c == '#' || c >= 0x80;
}

bool symbol_char(char c) {
  return std::string_view("+-*/;<>=!&|\\^~@$%?").find(c) != std::string_view::npos;
}

bool punct_char(char c) { return std::string_view("()[],:.").find(c) != std::string_view::npos; }

struct Located {
  DiagCode code;
  std::size_t pos;
  std::string message;
};

[[noreturn]] void fail(DiagCode code, std::size_t pos, std::string msg) {
  throw Located{code, pos, std::move(msg)};
}

// Blanks out comments (***, ---, //) so offsets stay valid.
std::string strip_comments(const std::string& text) {
  std::string out = text;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool start = out.compare(i, 3, "***") == 0 || out.compare(i, 3, "---") == 0 ||
                 out.compare(i, 2, "//") == 0;
    if (!start) continue;
    while (i < out.size() && out[i] != '\n') out[i++] = ' ';
  }
  return out;
}

std::vector<Token> lex(const std::string& text, std::size_t base = 0) {
  std::vector<Token> out;
  std::size_t i = 0, n = text.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    Token t;
    t.pos = base + i;
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < n && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '<') {
        std::size_t k = j + 1;
        while (k < n && (ident_char(static_cast<unsigned char>(text[k])))) ++k;
        if (k > j + 1 && k < n && text[k] == '>') j = k + 1;
      }
      if (j < n && text[j] == '!') ++j;
      t.kind = Token::ident;
      t.text = text.substr(i, j - i);
      i = j;
    } else if (punct_char(static_cast<char>(c))) {
      t.kind = Token::punct;
      t.text = std::string(1, static_cast<char>(c));
      ++i;
    } else if (symbol_char(static_cast<char>(c))) {
      std::size_t j = i;
      while (j < n && symbol_char(text[j])) ++j;
      t.kind = Token::symbol;
      t.text = text.substr(i, j - i);
      i = j;
    } else {
      fail(DiagCode::syntax, base + i, std::string("unexpected character '") + text[i] + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------- term parser

class TermParser {
 public:
  TermParser(const std::vector<Token>& toks, std::size_t end_pos, const Specification& spec,
             VarEnv& env, bool allow_hole)
      : toks_(toks), end_pos_(end_pos), spec_(spec), env_(env), allow_hole_(allow_hole) {}

  bool at_end() const { return i_ >= toks_.size(); }
  const Token& peek() const {
    static const Token eof;
    return at_end() ? eof : toks_[i_];
  }
  std::size_t pos() const { return at_end() ? end_pos_ : toks_[i_].pos; }
  bool accept(const std::string& text) {
    if (!at_end() && toks_[i_].text == text) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(const std::string& text) {
    if (!accept(text))
      fail(DiagCode::syntax, pos(),
           "expected '" + text + "'" + (at_end() ? " before end of input" : ", found '" + peek().text + "'"));
  }

  Term term() {
    Term lhs = primary();
    while (!at_end() && is_infix(peek().text)) {
      std::size_t p = pos();
      std::string sym = toks_[i_++].text;
      Term rhs = primary();
      lhs = build("_" + sym + "_", {lhs, rhs}, p);
    }
    return lhs;
  }

 private:
  bool is_infix(const std::string& sym) const {
    for (const auto& op : spec_.sig.ops())
      if (op->fixity() == Fixity::infix && op->infix_symbol() == sym) return true;
    return false;
  }

  const Operator* outfix_for(const std::string& open) const {
    for (const auto& op : spec_.sig.ops())
      if (op->fixity() == Fixity::outfix && op->outfix_tokens().first == open) return op.get();
    return nullptr;
  }

  Term build(const std::string& name, std::vector<Term> args, std::size_t p) {
    if (!spec_.sig.has_op_name(name)) fail(DiagCode::unknown_symbol, p, "unknown operator " + name);
    std::vector<Sort> sorts;
    for (const auto& a : args) sorts.push_back(a.sort());
    try {
      return Term::app(spec_.sig.resolve(name, sorts), std::move(args));
    } catch (const TermError& e) {
      DiagCode code = spec_.sig.ops_named(name, sorts.size()).empty() ? DiagCode::unknown_symbol
                                                                       : DiagCode::sort_error;
      fail(code, p, e.what());
    }
  }

  Sort sort_name(std::size_t p) {
    if (at_end() || peek().kind != Token::ident) fail(DiagCode::syntax, pos(), "expected a sort name");
    std::string s = toks_[i_++].text;
    if (!spec_.sig.has_sort(s)) fail(DiagCode::unknown_symbol, p, "unknown sort " + s);
    return s;
  }

  Term variable(std::string name, std::size_t p) {
    bool noninductive = false;
    if (name.size() > 1 && name.back() == '!') {
      name.pop_back();
      noninductive = true;
    }
    std::optional<Sort> sort;
    if (accept(":")) sort = sort_name(pos());
    auto it = env_.sorts.find(name);
    if (it != env_.sorts.end()) {
      if (sort && *sort != it->second)
        fail(DiagCode::sort_error, p, "variable " + name + " used with sorts " + it->second + " and " + *sort);
      sort = it->second;
    }
    if (!sort) fail(DiagCode::unknown_symbol, p, "unknown symbol " + name);
    env_.sorts[name] = *sort;
    if (noninductive) env_.noninductive.insert(name);
    return Term::var(name, *sort);
  }

  Term primary() {
    std::size_t p = pos();
    if (at_end()) fail(DiagCode::syntax, p, "unexpected end of term");
    const Token& t = toks_[i_];
    if (t.text == "(") {
      ++i_;
      Term inner = term();
      expect(")");
      return inner;
    }
    if (t.text == "*" && allow_hole_) {
      ++i_;
      expect(":");
      return Context::hole(sort_name(pos()));
    }
    if (t.kind == Token::punct || t.kind == Token::symbol) {
      if (const Operator* op = outfix_for(t.text)) {
        ++i_;
        std::vector<Term> args{term()};
        while (accept(",")) args.push_back(term());
        expect(op->outfix_tokens().second);
        return build(op->name, std::move(args), p);
      }
      fail(DiagCode::syntax, p, "unexpected '" + t.text + "'");
    }
    std::string name = t.text;
    ++i_;
    if (accept("(")) {
      std::vector<Term> args{term()};
      while (accept(",")) args.push_back(term());
      expect(")");
      return build(name, std::move(args), p);
    }
    if (peek().text != ":" && !env_.sorts.count(name) && spec_.sig.has_op_name(name) &&
        !spec_.sig.ops_named(name, 0).empty())
      return build(name, {}, p);
    return variable(name, p);
  }

  const std::vector<Token>& toks_;
  std::size_t end_pos_;
  const Specification& spec_;
  VarEnv& env_;
  bool allow_hole_;
  std::size_t i_ = 0;
};

Condition parse_condition(TermParser& tp) {
  Condition cond;
  do {
    Term u = tp.term();
    tp.expect("=");
    Term v = tp.term();
    cond.emplace_back(u, v);
  } while (tp.accept("/\\"));
  return cond;
}

// lhs = rhs [if cond]; quantification is left to the caller.
Equation parse_equation(TermParser& tp) {
  Equation e;
  e.lhs = tp.term();
  tp.expect("=");
  e.rhs = tp.term();
  if (tp.accept("if")) e.condition = parse_condition(tp);
  return e;
}

void require_end(TermParser& tp) {
  if (!tp.at_end()) fail(DiagCode::syntax, tp.pos(), "unexpected '" + tp.peek().text + "'");
}

void check_equation(const Equation& e, const Specification& spec, std::size_t p) {
  try {
    e.validate(spec.sig);
  } catch (const TermError& err) {
    fail(DiagCode::sort_error, p, err.what());
  }
}

// ---------------------------------------------------------------- statements

struct LineIndex {
  std::vector<std::size_t> starts{0};
  explicit LineIndex(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') starts.push_back(i + 1);
  }
  std::pair<int, int> at(std::size_t pos) const {
    auto it = std::upper_bound(starts.begin(), starts.end(), pos);
    std::size_t line = static_cast<std::size_t>(it - starts.begin());
    return {static_cast<int>(line), static_cast<int>(pos - starts[line - 1] + 1)};
  }
};

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

class SpecBuilder {
 public:
  SpecBuilder(const SpecSource& src) : src_(src), text_(strip_comments(src.text)), lines_(text_) {}

  Specification run() {
    std::vector<Token> toks;
    try {
      toks = lex(text_);
    } catch (const Located& l) {
      report(l);
      throw ParseError(errors_);
    }
    std::size_t i = 0;
    while (i < toks.size()) {
      const Token& head = toks[i];
      if (head.text == "spec" || head.text == "fmod" || head.text == "module") {
        ++i;
        if (i < toks.size() && toks[i].kind == Token::ident) spec_.name = toks[i++].text;
        if (i < toks.size() && toks[i].text == "is") ++i;
        if (i < toks.size() && toks[i].text == ".") ++i;
        continue;
      }
      if (head.text == "end" || head.text == "endspec" || head.text == "endfm") {
        ++i;
        if (i < toks.size() && toks[i].text == ".") ++i;
        continue;
      }
      std::size_t j = i;
      while (j < toks.size() && toks[j].text != ".") ++j;
      if (j == toks.size()) {
        report({DiagCode::syntax, head.pos, "statement is missing its terminating ' .'"});
        break;
      }
      std::vector<Token> stmt(toks.begin() + static_cast<std::ptrdiff_t>(i),
                              toks.begin() + static_cast<std::ptrdiff_t>(j));
      try {
        statement(stmt, toks[j].pos);
      } catch (const Located& l) {
        report(l);
      }
      i = j + 1;
    }
    post_checks();
    if (!errors_.empty()) throw ParseError(errors_);
    return std::move(spec_);
  }

 private:
  void report(const Located& l) {
    auto [line, col] = lines_.at(l.pos);
    Diagnostic d{l.code, line, col, l.message, src_.origin};
    (l.code == DiagCode::warning ? spec_.warnings : errors_).push_back(std::move(d));
  }

  std::string raw(const std::vector<Token>& stmt, std::size_t from, std::size_t end_pos) const {
    std::size_t b = from < stmt.size() ? stmt[from].pos : end_pos;
    return text_.substr(b, end_pos - b);
  }

  void statement(const std::vector<Token>& st, std::size_t end_pos) {
    const std::string& kw = st[0].text;
    if (kw == "sort" || kw == "sorts") return sorts(st);
    if (kw == "subsort" || kw == "subsorts") return subsorts(st);
    if (kw == "op" || kw == "ops" || kw == "ctor" || kw == "ctors") return ops(st, end_pos);
    if (kw == "var" || kw == "vars") return vars(st);
    if (kw == "eq" || kw == "ceq") return equation(st, end_pos);
    if (kw == "derivative" || kw == "special") return context(st, end_pos, kw == "derivative");
    if (kw == "simplify") return simplification(st, end_pos);
    fail(DiagCode::syntax, st[0].pos, "unknown statement '" + kw + "'");
  }

  void sorts(const std::vector<Token>& st) {
    if (st.size() < 2) fail(DiagCode::syntax, st[0].pos, "expected sort names");
    for (std::size_t k = 1; k < st.size(); ++k) {
      if (st[k].kind != Token::ident) fail(DiagCode::syntax, st[k].pos, "bad sort name '" + st[k].text + "'");
      spec_.sig.add_sort(st[k].text);
    }
  }

  void subsorts(const std::vector<Token>& st) {
    // A B < C < D
    std::vector<std::vector<std::string>> chain{{}};
    for (std::size_t k = 1; k < st.size(); ++k) {
      if (st[k].text == "<") {
        chain.emplace_back();
      } else {
        if (!spec_.sig.has_sort(st[k].text))
          fail(DiagCode::unknown_symbol, st[k].pos, "unknown sort " + st[k].text);
        chain.back().push_back(st[k].text);
      }
    }
    if (chain.size() < 2 || std::any_of(chain.begin(), chain.end(), [](auto& c) { return c.empty(); }))
      fail(DiagCode::syntax, st[0].pos, "expected 'subsort A < B'");
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
      for (const auto& a : chain[k])
        for (const auto& b : chain[k + 1]) {
          try {
            spec_.sig.add_subsort(a, b);
          } catch (const TermError& e) {
            fail(DiagCode::sort_error, st[0].pos, e.what());
          }
        }
  }

  void ops(const std::vector<Token>& st, std::size_t end_pos) {
    bool ctor_kw = st[0].text == "ctor" || st[0].text == "ctors";
    std::size_t colon = 1;
    while (colon < st.size() && st[colon].text != ":") ++colon;
    if (colon == st.size() || colon == 1) fail(DiagCode::syntax, st[0].pos, "expected 'op NAMES : ARGS -> SORT'");
    std::vector<std::string> names = words(text_.substr(st[1].pos, st[colon].pos - st[1].pos));
    std::size_t k = colon + 1;
    std::vector<Sort> args;
    for (; k < st.size() && st[k].text != "->"; ++k) {
      if (!spec_.sig.has_sort(st[k].text)) fail(DiagCode::unknown_symbol, st[k].pos, "unknown sort " + st[k].text);
      args.push_back(st[k].text);
    }
    if (k == st.size()) fail(DiagCode::syntax, end_pos, "expected '->'");
    ++k;
    if (k == st.size() || !spec_.sig.has_sort(st[k].text))
      fail(DiagCode::unknown_symbol, k < st.size() ? st[k].pos : end_pos, "expected a declared result sort");
    Sort result = st[k++].text;
    bool ctor = ctor_kw, comm = false, assoc = false;
    if (k < st.size()) {
      if (st[k].text != "[") fail(DiagCode::syntax, st[k].pos, "expected attribute list");
      for (++k; k < st.size() && st[k].text != "]"; ++k) {
        const std::string& a = st[k].text;
        if (a == "ctor") ctor = true;
        else if (a == "comm") comm = true;
        else if (a == "assoc") assoc = true;
        else fail(DiagCode::syntax, st[k].pos, "unknown attribute '" + a + "'");
      }
      if (k == st.size()) fail(DiagCode::syntax, end_pos, "unterminated attribute list");
      if (k + 1 != st.size()) fail(DiagCode::syntax, st[k + 1].pos, "trailing tokens after attributes");
    }
    for (const auto& name : names) {
      Operator op;
      op.name = name;
      op.arg_sorts = args;
      op.result_sort = result;
      op.constructor = ctor;
      op.comm = comm;
      op.assoc = assoc;
      if (op.fixity() == Fixity::infix && op.arity() != 2)
        fail(DiagCode::syntax, st[1].pos, "infix operator " + name + " must be binary");
      if (op.fixity() == Fixity::outfix && op.outfix_tokens().second.empty())
        fail(DiagCode::syntax, st[1].pos, "bad mixfix name " + name);
      try {
        spec_.sig.add_op(std::move(op));
      } catch (const TermError& e) {
        fail(DiagCode::sort_error, st[1].pos, e.what());
      }
    }
  }

  void vars(const std::vector<Token>& st) {
    std::size_t colon = 1;
    while (colon < st.size() && st[colon].text != ":") ++colon;
    if (colon == st.size() || colon == 1 || colon + 2 != st.size())
      fail(DiagCode::syntax, st[0].pos, "expected 'vars NAMES : SORT'");
    const std::string& s = st[colon + 1].text;
    if (!spec_.sig.has_sort(s)) fail(DiagCode::unknown_symbol, st[colon + 1].pos, "unknown sort " + s);
    for (std::size_t k = 1; k < colon; ++k) declared_vars_.sorts[st[k].text] = s;
  }

  void equation(const std::vector<Token>& st, std::size_t end_pos) {
    std::vector<Token> body(st.begin() + 1, st.end());
    VarEnv env = declared_vars_;
    TermParser tp(body, end_pos, spec_, env, false);
    Equation e = parse_equation(tp);
    require_end(tp);
    if (e.lhs.is_var()) fail(DiagCode::syntax, st[0].pos, "equation lhs must not be a variable");
    e.other_vars = e.all_vars();
    check_equation(e, spec_, st[0].pos);
    spec_.equations.push_back(std::move(e));
  }

  void context(const std::vector<Token>& st, std::size_t end_pos, bool derivative) {
    std::vector<Token> body(st.begin() + 1, st.end());
    VarEnv env = declared_vars_;
    TermParser tp(body, end_pos, spec_, env, true);
    Term t = tp.term();
    require_end(tp);
    Context c;
    try {
      c = Context::make(t);
      least_sort(t, spec_.sig);
    } catch (const TermError& e) {
      fail(derivative ? DiagCode::sort_error : DiagCode::special_context, st[0].pos, e.what());
    }
    if (derivative) {
      spec_.derivatives.push_back(std::move(c));
    } else {
      special_pos_.push_back(st[0].pos);
      spec_.specials.push_back(std::move(c));
    }
  }

  void simplification(const std::vector<Token>& st, std::size_t end_pos) {
    std::vector<Token> body(st.begin() + 1, st.end());
    VarEnv env = declared_vars_;
    TermParser tp(body, end_pos, spec_, env, false);
    SimplificationRule r;
    r.premise = parse_equation(tp);
    tp.expect("=>");
    r.conclusion = parse_equation(tp);
    require_end(tp);
    r.premise.other_vars = r.premise.all_vars();
    r.conclusion.other_vars = r.conclusion.all_vars();
    for (const auto& v : r.conclusion.other_vars)
      if (std::find(r.premise.other_vars.begin(), r.premise.other_vars.end(), v) == r.premise.other_vars.end())
        fail(DiagCode::sort_error, st[0].pos, "conclusion variable " + v.name() + " does not occur in the premise");
    check_equation(r.premise, spec_, st[0].pos);
    check_equation(r.conclusion, spec_, st[0].pos);
    spec_.simplifications.push_back(std::move(r));
  }

  // Path from the root to the hole, excluding the hole itself.
  static bool path_to_hole(const Term& t, std::vector<OpPtr>& path) {
    if (t.is_var()) return t.name() == "*";
    if (!t.is_app()) return false;
    path.push_back(t.op());
    for (const auto& a : t.args())
      if (path_to_hole(a, path)) return true;
    path.pop_back();
    return false;
  }

  bool is_derivative_op(const OpPtr& op) const {
    return std::any_of(spec_.derivatives.begin(), spec_.derivatives.end(), [&](const Context& d) {
      return d.body.is_app() && d.body.op()->id == op->id;
    });
  }

  static bool nested_derivative(const Term& t, const SpecBuilder& b) {
    if (!t.is_app()) return false;
    if (b.is_derivative_op(t.op()))
      for (const auto& a : t.args())
        if (a.is_app() && b.is_derivative_op(a.op())) return true;
    return std::any_of(t.args().begin(), t.args().end(),
                       [&](const Term& a) { return nested_derivative(a, b); });
  }

  void post_checks() {
    for (std::size_t k = 0; k < spec_.specials.size(); ++k) {
      const Context& g = spec_.specials[k];
      std::vector<OpPtr> path;
      path_to_hole(g.body, path);
      std::size_t p = special_pos_[k];
      bool bad = std::any_of(path.begin(), path.end(), [&](const OpPtr& op) { return is_derivative_op(op); });
      if (bad) {
        report({DiagCode::special_context, p, "special context " + to_string(g.body) + " contains a derivative"});
        continue;
      }
      if (path.empty()) continue;
      const OpPtr& head = path.front();
      for (const auto& e : spec_.equations) {
        const Term& l = e.lhs;
        bool defines = l.is_app() && is_derivative_op(l.op()) && !l.args().empty() &&
                       l.args()[0].is_app() && l.args()[0].op()->id == head->id;
        if (defines && nested_derivative(e.rhs, *this)) {
          report({DiagCode::warning, p,
                  "special context " + to_string(g.body) + ": " + head->name +
                      " observes nested derivatives; it may not be special"});
          break;
        }
      }
    }
    // Inductive sorts must have ground constructor terms; other sorts are
    // assumed inhabited.
    std::set<Sort> inductive = spec_.inductive_sorts(), inhabited;
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& op : spec_.sig.ops()) {
        if (!op->constructor || inhabited.count(op->result_sort)) continue;
        bool ok = std::all_of(op->arg_sorts.begin(), op->arg_sorts.end(), [&](const Sort& a) {
          return !inductive.count(a) || inhabited.count(a);
        });
        if (ok) grew = inhabited.insert(op->result_sort).second || grew;
      }
    }
    for (const Sort& s : inductive)
      if (!inhabited.count(s))
        spec_.warnings.push_back({DiagCode::warning, 0, 0,
                                  "inductive sort " + s + " has no ground constructor term", src_.origin});
  }

  const SpecSource& src_;
  std::string text_;
  LineIndex lines_;
  Specification spec_;
  VarEnv declared_vars_;
  std::vector<std::size_t> special_pos_;
  std::vector<Diagnostic> errors_;
};

Diagnostic to_diag(const Located& l, const std::string& text, const std::string& origin) {
  auto [line, col] = LineIndex(text).at(l.pos);
  return {l.code, line, col, l.message, origin};
}

}  // namespace

Specification parse_spec(const SpecSource& src) { return SpecBuilder(src).run(); }

Specification load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError({{DiagCode::syntax, 0, 0, "cannot read file", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec({ss.str(), path});
}

Term parse_term(const std::string& text, const Specification& spec, VarEnv* env) {
  VarEnv local;
  VarEnv& e = env ? *env : local;
  try {
    auto toks = lex(text);
    TermParser tp(toks, text.size(), spec, e, true);
    Term t = tp.term();
    require_end(tp);
    return t;
  } catch (const Located& l) {
    throw ParseError({to_diag(l, text, "<term>")});
  }
}

Equation parse_goal(const std::string& text, const Specification& spec) {
  VarEnv env;
  try {
    auto toks = lex(text);
    TermParser tp(toks, text.size(), spec, env, false);
    Equation e = parse_equation(tp);
    require_end(tp);
    for (const auto& v : e.all_vars()) {
      bool inductive = spec.is_inductive(v.sort()) && !env.noninductive.count(v.name());
      (inductive ? e.inductive_vars : e.other_vars).push_back(v);
    }
    check_equation(e, spec, 0);
    return e;
  } catch (const Located& l) {
    throw ParseError({to_diag(l, text, "<goal>")});
  }
}

std::string print_equation_source(const Equation& e) { return to_string(e); }

std::string print_spec(const Specification& spec) {
  std::ostringstream os;
  os << "spec " << (spec.name.empty() ? "SPEC" : spec.name) << "\n";
  std::vector<Sort> sorts;
  for (const auto& s : spec.sig.sorts())
    if (!spec.sig.is_fresh_subsort(s)) sorts.push_back(s);
  if (!sorts.empty()) {
    os << "  sorts";
    for (const auto& s : sorts) os << " " << s;
    os << " .\n";
  }
  for (const auto& s : sorts)
    for (const auto& sup : spec.sig.declared_supersorts(s)) os << "  subsort " << s << " < " << sup << " .\n";
  for (const auto& op : spec.sig.ops()) {
    os << "  op " << op->name << " :";
    for (const auto& a : op->arg_sorts) os << " " << a;
    os << " -> " << op->result_sort;
    std::vector<std::string> attrs;
    if (op->constructor) attrs.push_back("ctor");
    if (op->assoc) attrs.push_back("assoc");
    if (op->comm) attrs.push_back("comm");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? " " : "") << attrs[i];
      os << "]";
    }
    os << " .\n";
  }
  for (const auto& e : spec.equations) os << "  eq " << print_equation_source(e) << " .\n";
  for (const auto& d : spec.derivatives) os << "  derivative " << to_string(d.body) << " .\n";
  for (const auto& g : spec.specials) os << "  special " << to_string(g.body) << " .\n";
  for (const auto& r : spec.simplifications)
    os << "  simplify " << print_equation_source(r.premise) << " => " << print_equation_source(r.conclusion)
       << " .\n";
  os << "end\n";
  return os.str();
}

}  // namespace circlet
