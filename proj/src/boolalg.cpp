#include "ck/boolalg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ck {

static BExpr mk(BoolExpr::Kind k, int v, BExpr a, BExpr b) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = k;
  e->var = v;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

BExpr bvar(int v) { return mk(BoolExpr::Var, v, nullptr, nullptr); }
BExpr bzero() { static BExpr z = mk(BoolExpr::Zero, -1, nullptr, nullptr); return z; }
BExpr bone() { static BExpr o = mk(BoolExpr::One, -1, nullptr, nullptr); return o; }
BExpr bsum(BExpr a, BExpr b) { return mk(BoolExpr::Sum, -1, std::move(a), std::move(b)); }

BExpr bprod(BExpr a, BExpr b) {
  if (a->kind == BoolExpr::One) return b;
  if (b->kind == BoolExpr::One) return a;
  return mk(BoolExpr::Prod, -1, std::move(a), std::move(b));
}

BExpr bneg(BExpr a) { return mk(BoolExpr::Neg, -1, std::move(a), nullptr); }

static Cons mkc(Constraint::Kind k, BExpr l, BExpr r, Cons a, Cons b) {
  auto c = std::make_shared<Constraint>();
  c->kind = k;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  c->a = std::move(a);
  c->b = std::move(b);
  return c;
}

Cons ceq(BExpr l, BExpr r) {
  // suppress the trivial conjunct 1=1 that arises from literal-1 labels
  if (l->kind == BoolExpr::One && r->kind == BoolExpr::One) return nullptr;
  return mkc(Constraint::Eq, std::move(l), std::move(r), nullptr, nullptr);
}

Cons cand(Cons a, Cons b) {
  if (!a) return b;
  if (!b) return a;
  return mkc(Constraint::And, nullptr, nullptr, std::move(a), std::move(b));
}

Cons cor(Cons a, Cons b) {
  if (!a || !b) return nullptr;  // true absorbs
  return mkc(Constraint::Or, nullptr, nullptr, std::move(a), std::move(b));
}

Cons cnot(Cons a) {
  if (!a) return ceq(bzero(), bone());  // not true = 0=1
  return mkc(Constraint::Not, nullptr, nullptr, std::move(a), nullptr);
}

Cons ctrue() { return nullptr; }

int VarPool::fresh() { return fresh("x" + std::to_string(names_.size() + 1)); }

int VarPool::fresh(const std::string& name) {
  std::string n = name;
  while (index_.count(n)) n += "'";
  int id = (int)names_.size();
  names_.push_back(n);
  index_[n] = id;
  return id;
}

const std::string& VarPool::name(int v) const { return names_.at(v); }

int VarPool::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

// three-valued evaluation: -1 unknown
static int eval3(const BExpr& e, const Interpretation& I) {
  switch (e->kind) {
    case BoolExpr::Var: {
      auto it = I.find(e->var);
      return it == I.end() ? -1 : it->second;
    }
    case BoolExpr::Zero: return 0;
    case BoolExpr::One: return 1;
    case BoolExpr::Sum: {
      int x = eval3(e->a, I);
      if (x == 1) return 1;
      int y = eval3(e->b, I);
      if (y == 1) return 1;
      return (x == 0 && y == 0) ? 0 : -1;
    }
    case BoolExpr::Prod: {
      int x = eval3(e->a, I);
      if (x == 0) return 0;
      int y = eval3(e->b, I);
      if (y == 0) return 0;
      return (x == 1 && y == 1) ? 1 : -1;
    }
    case BoolExpr::Neg: {
      int x = eval3(e->a, I);
      return x < 0 ? -1 : 1 - x;
    }
  }
  return -1;
}

static int eval3(const Cons& c, const Interpretation& I) {
  if (!c) return 1;
  switch (c->kind) {
    case Constraint::Eq: {
      int l = eval3(c->lhs, I), r = eval3(c->rhs, I);
      if (l < 0 || r < 0) return -1;
      return l == r ? 1 : 0;
    }
    case Constraint::And: {
      int x = eval3(c->a, I);
      if (x == 0) return 0;
      int y = eval3(c->b, I);
      if (y == 0) return 0;
      return (x == 1 && y == 1) ? 1 : -1;
    }
    case Constraint::Or: {
      int x = eval3(c->a, I);
      if (x == 1) return 1;
      int y = eval3(c->b, I);
      if (y == 1) return 1;
      return (x == 0 && y == 0) ? 0 : -1;
    }
    case Constraint::Not: {
      int x = eval3(c->a, I);
      return x < 0 ? -1 : 1 - x;
    }
  }
  return -1;
}

int eval_expr(const BExpr& e, const Interpretation& I, const VarPool& pool) {
  if (e->kind == BoolExpr::Var && !I.count(e->var)) throw UnboundVariable(pool.name(e->var));
  if (e->kind == BoolExpr::Sum || e->kind == BoolExpr::Prod) {
    int x = eval_expr(e->a, I, pool);
    int y = eval_expr(e->b, I, pool);
    return e->kind == BoolExpr::Sum ? (x | y) : (x & y);
  }
  if (e->kind == BoolExpr::Neg) return 1 - eval_expr(e->a, I, pool);
  return eval3(e, I);
}

bool eval_constraint(const Cons& c, const Interpretation& I, const VarPool& pool) {
  if (!c) return true;
  switch (c->kind) {
    case Constraint::Eq: return eval_expr(c->lhs, I, pool) == eval_expr(c->rhs, I, pool);
    case Constraint::And: {
      bool x = eval_constraint(c->a, I, pool);
      bool y = eval_constraint(c->b, I, pool);
      return x && y;
    }
    case Constraint::Or: {
      bool x = eval_constraint(c->a, I, pool);
      bool y = eval_constraint(c->b, I, pool);
      return x || y;
    }
    case Constraint::Not: return !eval_constraint(c->a, I, pool);
  }
  return false;
}

void collect_vars(const BExpr& e, std::set<int>& out) {
  if (!e) return;
  if (e->kind == BoolExpr::Var) out.insert(e->var);
  collect_vars(e->a, out);
  collect_vars(e->b, out);
}

void collect_vars(const Cons& c, std::set<int>& out) {
  if (!c) return;
  collect_vars(c->lhs, out);
  collect_vars(c->rhs, out);
  collect_vars(c->a, out);
  collect_vars(c->b, out);
}

static bool search_assign(const std::vector<Cons>& cs, const std::vector<int>& vars, size_t idx,
                          Interpretation& I, const std::function<bool(const Interpretation&)>& on) {
  int st = 1;
  for (auto& c : cs) {
    st = eval3(c, I);
    if (st == 0) return true;  // pruned, keep searching siblings
  }
  if (idx == vars.size()) {
    for (auto& c : cs)
      if (eval3(c, I) != 1) return true;  // unknown left means some var outside `vars`
    return on(I);
  }
  for (int v = 0; v <= 1; v++) {
    I[vars[idx]] = v;
    bool keep = search_assign(cs, vars, idx + 1, I, on);
    I.erase(vars[idx]);
    if (!keep) return false;
  }
  return true;
}

std::optional<Interpretation> solve(const std::vector<Cons>& cs, const VarPool& pool) {
  (void)pool;
  std::set<int> vs;
  for (auto& c : cs) collect_vars(c, vs);
  std::vector<int> vars(vs.begin(), vs.end());
  std::optional<Interpretation> found;
  Interpretation I;
  search_assign(cs, vars, 0, I, [&](const Interpretation& m) {
    found = m;
    return false;  // stop at first (lexicographically least) model
  });
  return found;
}

std::vector<Interpretation> all_solutions(const std::vector<Cons>& cs,
                                          const std::vector<int>& vars, const VarPool& pool) {
  (void)pool;
  std::vector<Interpretation> out;
  std::vector<int> vv = vars;
  std::sort(vv.begin(), vv.end());
  Interpretation I;
  search_assign(cs, vv, 0, I, [&](const Interpretation& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Debug syntax

static void pe(const BExpr& e, std::string& out, const VarPool& pool, bool factor) {
  switch (e->kind) {
    case BoolExpr::Var: out += pool.name(e->var); return;
    case BoolExpr::Zero: out += '0'; return;
    case BoolExpr::One: out += '1'; return;
    case BoolExpr::Neg:
      out += '~';
      if (e->a->kind == BoolExpr::Sum || e->a->kind == BoolExpr::Prod) {
        out += '(';
        pe(e->a, out, pool, false);
        out += ')';
      } else {
        pe(e->a, out, pool, true);
      }
      return;
    case BoolExpr::Prod:
      pe(e->a, out, pool, true);
      out += '*';
      pe(e->b, out, pool, true);
      return;
    case BoolExpr::Sum:
      if (factor) out += '(';
      pe(e->a, out, pool, false);
      out += '+';
      pe(e->b, out, pool, false);
      if (factor) out += ')';
      return;
  }
}

std::string print_expr(const BExpr& e, const VarPool& pool) {
  std::string out;
  pe(e, out, pool, false);
  return out;
}

static void pc(const Cons& c, std::string& out, const VarPool& pool, int outer) {
  if (!c) { out += "1 = 1"; return; }
  switch (c->kind) {
    case Constraint::Eq:
      out += print_expr(c->lhs, pool);
      out += " = ";
      out += print_expr(c->rhs, pool);
      return;
    case Constraint::And: {
      if (outer > 1) out += '(';
      pc(c->a, out, pool, 1);
      out += " & ";
      pc(c->b, out, pool, 1);
      if (outer > 1) out += ')';
      return;
    }
    case Constraint::Or: {
      if (outer > 0) out += '(';
      pc(c->a, out, pool, 0);
      out += " || ";
      pc(c->b, out, pool, 0);
      if (outer > 0) out += ')';
      return;
    }
    case Constraint::Not:
      out += "!(";
      pc(c->a, out, pool, 0);
      out += ')';
      return;
  }
}

std::string print_constraint(const Cons& c, const VarPool& pool) {
  std::string out;
  pc(c, out, pool, 0);
  return out;
}

namespace {

struct CParser {
  const std::string& s;
  size_t i = 0;
  VarPool& pool;
  CParser(const std::string& src, VarPool& p) : s(src), pool(p) {}

  void ws() { while (i < s.size() && std::isspace((unsigned char)s[i])) i++; }
  bool eat(char c) { ws(); if (i < s.size() && s[i] == c) { i++; return true; } return false; }
  bool eat2(const char* two) {
    ws();
    if (s.compare(i, 2, two) == 0) { i += 2; return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& m) { throw ParseErrorAt(m, i); }
  struct ParseErrorAt : std::runtime_error {
    ParseErrorAt(const std::string& m, size_t at)
        : std::runtime_error("constraint syntax error: " + m + " at " + std::to_string(at)) {}
  };

  BExpr expr() {  // sum
    BExpr e = term();
    while (eat('+')) e = bsum(e, term());
    return e;
  }
  BExpr term() {  // product; '*' optional between factors? keep explicit
    BExpr e = factor();
    while (eat('*')) e = bprod(e, factor());
    return e;
  }
  BExpr factor() {
    ws();
    if (eat('~')) return bneg(factor());
    if (eat('(')) {
      BExpr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (i < s.size() && (s[i] == '0' || s[i] == '1')) {
      char c = s[i++];
      return c == '0' ? bzero() : bone();
    }
    if (i < s.size() && (std::isalpha((unsigned char)s[i]) || s[i] == '_')) {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' || s[j] == '\''))
        j++;
      std::string n = s.substr(i, j - i);
      i = j;
      int v = pool.find(n);
      if (v < 0) v = pool.fresh(n);
      return bvar(v);
    }
    fail("expected expression");
  }

  Cons disj() {
    Cons c = conj();
    while (eat2("||")) c = cor(c, conj());
    return c;
  }
  Cons conj() {
    Cons c = atom();
    while (true) {
      ws();
      if (i < s.size() && s[i] == '&') { i++; c = cand(c, atom()); }
      else break;
    }
    return c;
  }
  Cons atom() {
    ws();
    if (eat('!')) {
      if (!eat('(')) fail("expected '(' after '!'");
      Cons c = disj();
      if (!eat(')')) fail("expected ')'");
      return cnot(c);
    }
    if (i < s.size() && s[i] == '(') {
      // lookahead: parenthesized constraint vs expression — try constraint
      size_t save = i;
      i++;
      try {
        Cons c = disj();
        if (!eat(')')) throw ParseErrorAt("expected ')'", i);
        return c;
      } catch (...) {
        i = save;
      }
    }
    BExpr l = expr();
    if (!eat('=')) fail("expected '='");
    BExpr r = expr();
    auto c = ceq(l, r);
    return c ? c : mkc(Constraint::Eq, bone(), bone(), nullptr, nullptr);
  }
};

}  // namespace

Cons parse_constraint(const std::string& text, VarPool& pool) {
  CParser p(text, pool);
  Cons c = p.disj();
  p.ws();
  if (p.i != text.size())
    throw std::runtime_error("constraint syntax error: trailing input at " + std::to_string(p.i));
  return c;
}

}  // namespace ck
