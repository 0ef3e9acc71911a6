#include "ck/blp.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace ck {

UTermPtr UTerm::mk_var(int label) {
  auto t = std::make_shared<UTerm>();
  t->var = true;
  t->label = label;
  return t;
}

UTermPtr UTerm::mk_fn(std::string f, std::vector<UTermPtr> args) {
  auto t = std::make_shared<UTerm>();
  t->var = false;
  t->functor = std::move(f);
  t->args = std::move(args);
  return t;
}

bool uterm_eq(const UTermPtr& a, const UTermPtr& b) {
  if (a->var != b->var) return false;
  if (a->var) return a->label == b->label;
  if (a->functor != b->functor || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); i++)
    if (!uterm_eq(a->args[i], b->args[i])) return false;
  return true;
}

int LabelPool::fresh(const std::string& hint) {
  std::string n = hint;
  int k = 1;
  while (used_.count(n)) n = hint + std::to_string(++k);
  used_[n] = (int)names_.size();
  names_.push_back(n);
  return (int)names_.size() - 1;
}

std::string print_uterm(const UTermPtr& t, const LabelPool& pool) {
  if (t->var) return pool.name(t->label);
  std::string out = t->functor;
  if (!t->args.empty()) {
    out += "(";
    for (size_t i = 0; i < t->args.size(); i++) {
      if (i) out += ",";
      out += print_uterm(t->args[i], pool);
    }
    out += ")";
  }
  return out;
}

std::string print_uatom(const UAtom& a, const LabelPool& pool) {
  std::string out = a.rel;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); i++) {
      if (i) out += ",";
      out += print_uterm(a.args[i], pool);
    }
    out += ")";
  }
  return out;
}

std::string print_goal(const GoalPtr& g, const LabelPool& pool) {
  switch (g->kind) {
    case Goal::AtomG: return print_uatom(g->atom, pool);
    case Goal::Conj: return "(" + print_goal(g->a, pool) + ", " + print_goal(g->b, pool) + ")";
    case Goal::Disj: return "(" + print_goal(g->a, pool) + "; " + print_goal(g->b, pool) + ")";
    case Goal::Impl: {
      std::string d = g->hyp->kind == DClause::Fact
                          ? print_uatom(g->hyp->head, pool)
                          : "(" + print_goal(g->hyp->body, pool) + " => " +
                                print_uatom(g->hyp->head, pool) + ")";
      return "(" + d + " => " + print_goal(g->a, pool) + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing (Prolog-like)

namespace {

struct PTok {
  enum Kind { Ident, Var, LP, RP, Comma, Semi, Turn, Dot, Arrow, End } kind;
  std::string text;
  size_t pos;
};

struct PLex {
  const std::string& s;
  size_t i = 0;
  explicit PLex(const std::string& src) : s(src) {}

  PTok next() {
    while (i < s.size()) {
      if (std::isspace((unsigned char)s[i])) { i++; continue; }
      if (s[i] == '%') {
        while (i < s.size() && s[i] != '\n') i++;
        continue;
      }
      break;
    }
    size_t at = i;
    if (i >= s.size()) return {PTok::End, "", at};
    char c = s[i];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
      std::string id = s.substr(i, j - i);
      i = j;
      bool var = std::isupper((unsigned char)id[0]) || id[0] == '_';
      return {var ? PTok::Var : PTok::Ident, id, at};
    }
    switch (c) {
      case '(': i++; return {PTok::LP, "(", at};
      case ')': i++; return {PTok::RP, ")", at};
      case ',': i++; return {PTok::Comma, ",", at};
      case ';': i++; return {PTok::Semi, ";", at};
      case '.': i++; return {PTok::Dot, ".", at};
      case ':':
        if (s.compare(i, 2, ":-") == 0) { i += 2; return {PTok::Turn, ":-", at}; }
        break;
      case '=':
        if (s.compare(i, 2, "=>") == 0) { i += 2; return {PTok::Arrow, "=>", at}; }
        break;
      default: break;
    }
    throw BLPParseError("program syntax error at offset " + std::to_string(at));
  }
};

struct PParse {
  PLex lex;
  PTok tok;
  explicit PParse(const std::string& s) : lex(s) { tok = lex.next(); }
  void adv() { tok = lex.next(); }
  [[noreturn]] void fail(const std::string& m) {
    throw BLPParseError(m + " at offset " + std::to_string(tok.pos));
  }

  UTermPtr term() {
    if (tok.kind == PTok::Var) {
      // object variables ride as 0-ary capitalized functors until labelling
      std::string v = tok.text;
      adv();
      return UTerm::mk_fn(v, {});
    }
    if (tok.kind != PTok::Ident) fail("expected term");
    std::string f = tok.text;
    adv();
    std::vector<UTermPtr> args;
    if (tok.kind == PTok::LP) {
      adv();
      while (true) {
        args.push_back(term());
        if (tok.kind == PTok::Comma) { adv(); continue; }
        break;
      }
      if (tok.kind != PTok::RP) fail("expected ')'");
      adv();
    }
    return UTerm::mk_fn(f, std::move(args));
  }

  UAtom atom() {
    if (tok.kind != PTok::Ident) fail("expected predicate (lowercase); disjunctive or variable heads are outside the definite fragment");
    UAtom a;
    a.rel = tok.text;
    adv();
    if (tok.kind == PTok::LP) {
      adv();
      while (true) {
        a.args.push_back(term());
        if (tok.kind == PTok::Comma) { adv(); continue; }
        break;
      }
      if (tok.kind != PTok::RP) fail("expected ')'");
      adv();
    }
    return a;
  }

  GoalPtr goal_disj() {
    GoalPtr g = goal_conj();
    while (tok.kind == PTok::Semi) {
      adv();
      auto r = goal_conj();
      auto n = std::make_shared<Goal>();
      n->kind = Goal::Disj;
      n->a = g;
      n->b = r;
      g = n;
    }
    return g;
  }

  GoalPtr goal_conj() {
    GoalPtr g = goal_unit();
    while (tok.kind == PTok::Comma) {
      adv();
      auto r = goal_unit();
      auto n = std::make_shared<Goal>();
      n->kind = Goal::Conj;
      n->a = g;
      n->b = r;
      g = n;
    }
    return g;
  }

  GoalPtr goal_unit() {
    if (tok.kind == PTok::LP) {
      adv();
      GoalPtr g = goal_disj();
      if (tok.kind != PTok::RP) fail("expected ')'");
      adv();
      if (tok.kind == PTok::Arrow) {
        // (goal) => goal is outside the fragment unless the left is a clause
        fail("hypothetical goals take a definite clause on the left");
      }
      return g;
    }
    UAtom a = atom();
    if (tok.kind == PTok::Arrow) {
      adv();
      GoalPtr body = goal_unit();
      auto d = std::make_shared<DClause>();
      d->kind = DClause::Fact;
      d->head = a;
      auto n = std::make_shared<Goal>();
      n->kind = Goal::Impl;
      n->hyp = d;
      n->a = body;
      return n;
    }
    auto n = std::make_shared<Goal>();
    n->kind = Goal::AtomG;
    n->atom = a;
    return n;
  }
};

void collect_goal_vars(const UTermPtr& t, std::vector<std::string>& out) {
  if (!t->var && !t->functor.empty() && std::isupper((unsigned char)t->functor[0]) &&
      t->args.empty()) {
    if (std::find(out.begin(), out.end(), t->functor) == out.end()) out.push_back(t->functor);
  }
  for (auto& a : t->args) collect_goal_vars(a, out);
}

void collect_goal_vars(const GoalPtr& g, std::vector<std::string>& out) {
  if (g->kind == Goal::AtomG) {
    for (auto& a : g->atom.args) collect_goal_vars(a, out);
    return;
  }
  if (g->kind == Goal::Impl) {
    for (auto& a : g->hyp->head.args) collect_goal_vars(a, out);
    if (g->hyp->body) collect_goal_vars(g->hyp->body, out);
    collect_goal_vars(g->a, out);
    return;
  }
  collect_goal_vars(g->a, out);
  collect_goal_vars(g->b, out);
}

UTermPtr subst_term(const UTermPtr& t, const std::map<std::string, UTermPtr>& m) {
  if (!t->var && t->args.empty()) {
    auto it = m.find(t->functor);
    if (it != m.end()) return it->second;
    return t;
  }
  if (t->var) return t;
  std::vector<UTermPtr> args;
  for (auto& a : t->args) args.push_back(subst_term(a, m));
  return UTerm::mk_fn(t->functor, std::move(args));
}

UAtom subst_atom(const UAtom& a, const std::map<std::string, UTermPtr>& m) {
  UAtom out;
  out.rel = a.rel;
  for (auto& t : a.args) out.args.push_back(subst_term(t, m));
  return out;
}

GoalPtr subst_goal(const GoalPtr& g, const std::map<std::string, UTermPtr>& m);

DClausePtr subst_clause(const DClausePtr& d, const std::map<std::string, UTermPtr>& m) {
  auto n = std::make_shared<DClause>();
  n->kind = d->kind;
  n->head = subst_atom(d->head, m);
  if (d->body) n->body = subst_goal(d->body, m);
  return n;
}

GoalPtr subst_goal(const GoalPtr& g, const std::map<std::string, UTermPtr>& m) {
  auto n = std::make_shared<Goal>();
  n->kind = g->kind;
  if (g->kind == Goal::AtomG) {
    n->atom = subst_atom(g->atom, m);
    return n;
  }
  if (g->kind == Goal::Impl) {
    n->hyp = subst_clause(g->hyp, m);
    n->a = subst_goal(g->a, m);
    return n;
  }
  n->a = subst_goal(g->a, m);
  n->b = subst_goal(g->b, m);
  return n;
}

}  // namespace

Program parse_program(const std::string& text) {
  Program p;
  PParse pp(text);
  while (pp.tok.kind != PTok::End) {
    UAtom head = pp.atom();
    if (pp.tok.kind == PTok::Semi)
      pp.fail("disjunctive heads are outside the definite fragment");
    auto d = std::make_shared<DClause>();
    d->head = head;
    if (pp.tok.kind == PTok::Turn) {
      pp.adv();
      d->kind = DClause::Rule;
      d->body = pp.goal_disj();
    } else {
      d->kind = DClause::Fact;
    }
    if (pp.tok.kind != PTok::Dot) pp.fail("expected '.'");
    pp.adv();
    p.clauses.push_back(d);
  }
  return p;
}

GoalPtr parse_goal(const std::string& text) {
  PParse pp(text);
  GoalPtr g = pp.goal_disj();
  if (pp.tok.kind == PTok::Dot) pp.adv();
  if (pp.tok.kind != PTok::End) pp.fail("trailing input");
  return g;
}

// ---------------------------------------------------------------------------
// Constraints and unification

UConsPtr UCons::eq(UTermPtr l, UTermPtr r) {
  auto c = std::make_shared<UCons>();
  c->kind = Eq;
  c->l = std::move(l);
  c->r = std::move(r);
  return c;
}

UConsPtr UCons::conj(std::vector<UConsPtr> kids) {
  auto c = std::make_shared<UCons>();
  c->kind = And;
  c->kids = std::move(kids);
  return c;
}

UConsPtr UCons::disj(std::vector<UConsPtr> kids) {
  auto c = std::make_shared<UCons>();
  c->kind = Or;
  c->kids = std::move(kids);
  return c;
}

UConsPtr UCons::falsum() {
  auto c = std::make_shared<UCons>();
  c->kind = False;
  return c;
}

UConsPtr UCons::truth() {
  auto c = std::make_shared<UCons>();
  c->kind = True;
  return c;
}

std::string print_ucons(const UConsPtr& c, const LabelPool& pool) {
  switch (c->kind) {
    case UCons::Eq: return print_uterm(c->l, pool) + " = " + print_uterm(c->r, pool);
    case UCons::False: return "false";
    case UCons::True: return "true";
    case UCons::And:
    case UCons::Or: {
      std::string sep = c->kind == UCons::And ? " & " : " || ";
      std::string out = "(";
      for (size_t i = 0; i < c->kids.size(); i++) {
        if (i) out += sep;
        out += print_ucons(c->kids[i], pool);
      }
      return out + ")";
    }
  }
  return "?";
}

namespace {

UTermPtr walk(UTermPtr t, const USubst& s) {
  while (t->var) {
    auto it = s.find(t->label);
    if (it == s.end()) return t;
    t = it->second;
  }
  return t;
}

bool occurs(int v, const UTermPtr& t, const USubst& s) {
  UTermPtr u = walk(t, s);
  if (u->var) return u->label == v;
  for (auto& a : u->args)
    if (occurs(v, a, s)) return true;
  return false;
}

bool unify(const UTermPtr& a0, const UTermPtr& b0, USubst& s) {
  UTermPtr a = walk(a0, s), b = walk(b0, s);
  if (a->var && b->var && a->label == b->label) return true;
  if (a->var) {
    if (occurs(a->label, b, s)) return false;
    s[a->label] = b;
    return true;
  }
  if (b->var) return unify(b, a, s);
  if (a->functor != b->functor || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); i++)
    if (!unify(a->args[i], b->args[i], s)) return false;
  return true;
}

UTermPtr resolve(const UTermPtr& t, const USubst& s) {
  UTermPtr u = walk(t, s);
  if (u->var) return u;
  std::vector<UTermPtr> args;
  for (auto& a : u->args) args.push_back(resolve(a, s));
  return UTerm::mk_fn(u->functor, std::move(args));
}

void dfs_solve(const UConsPtr& c, std::vector<std::pair<UTermPtr, UTermPtr>>& eqs,
               const std::function<void()>& done) {
  switch (c->kind) {
    case UCons::True: done(); return;
    case UCons::False: return;
    case UCons::Eq:
      eqs.emplace_back(c->l, c->r);
      done();
      eqs.pop_back();
      return;
    case UCons::And: {
      std::function<void(size_t)> go = [&](size_t i) {
        if (i == c->kids.size()) {
          done();
          return;
        }
        dfs_solve(c->kids[i], eqs, [&] { go(i + 1); });
      };
      go(0);
      return;
    }
    case UCons::Or:
      for (auto& k : c->kids) dfs_solve(k, eqs, done);
      return;
  }
}

void collect_labels(const UTermPtr& t, std::set<int>& out) {
  if (t->var) {
    out.insert(t->label);
    return;
  }
  for (auto& a : t->args) collect_labels(a, out);
}

void collect_labels(const UConsPtr& c, std::set<int>& out) {
  if (c->kind == UCons::Eq) {
    collect_labels(c->l, out);
    collect_labels(c->r, out);
  }
  for (auto& k : c->kids) collect_labels(k, out);
}

}  // namespace

std::vector<USubst> solve_unification(const UConsPtr& c, const LabelPool& pool) {
  (void)pool;
  std::vector<USubst> out;
  std::set<int> labels;
  collect_labels(c, labels);
  std::vector<std::pair<UTermPtr, UTermPtr>> eqs;
  dfs_solve(c, eqs, [&] {
    USubst s;
    for (auto& [l, r] : eqs)
      if (!unify(l, r, s)) return;
    // resolve to an idempotent substitution over every label that occurs
    USubst full;
    for (int v : labels) full[v] = resolve(UTerm::mk_var(v), s);
    out.push_back(full);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

struct BLPReducer {
  LabelPool& pool;
  const std::vector<DClausePtr>& schema;  // the fixed program
  std::vector<DClausePtr> extra;          // hypotheses added by impR

  static bool is_ground_term(const UTermPtr& t) {
    if (t->var) return true;  // labels are fine; object vars are 0-ary uppercase
    if (t->args.empty() && !t->functor.empty() && std::isupper((unsigned char)t->functor[0]))
      return false;
    for (auto& a : t->args)
      if (!is_ground_term(a)) return false;
    return true;
  }

  static bool clause_closed(const DClausePtr& d) {
    bool ok = true;
    for (auto& a : d->head.args) ok = ok && is_ground_term(a);
    if (d->body) ok = ok && goal_closed(d->body);
    return ok;
  }

  static bool goal_closed(const GoalPtr& g) {
    if (g->kind == Goal::AtomG) {
      for (auto& a : g->atom.args)
        if (!is_ground_term(a)) return false;
      return true;
    }
    if (g->kind == Goal::Impl) return clause_closed(g->hyp) && goal_closed(g->a);
    return goal_closed(g->a) && goal_closed(g->b);
  }

  DClausePtr label_copy(const DClausePtr& d, const std::string& hint) {
    std::vector<std::string> vars;
    for (auto& a : d->head.args) collect_goal_vars(a, vars);
    if (d->body) collect_goal_vars(d->body, vars);
    std::map<std::string, UTermPtr> m;
    for (size_t i = 0; i < vars.size(); i++)
      m[vars[i]] = UTerm::mk_var(pool.fresh(hint + std::to_string(i + 1)));
    return subst_clause(d, m);
  }

  BLPRedPtr cleaf(const UConsPtr& c) {
    auto n = std::make_shared<BLPRed>();
    n->is_constraint = true;
    n->constraint = c;
    return n;
  }

  UConsPtr atom_equations(const UAtom& a, const UAtom& b) {
    if (a.rel != b.rel || a.args.size() != b.args.size()) return UCons::falsum();
    std::vector<UConsPtr> eqs;
    for (size_t i = 0; i < a.args.size(); i++) eqs.push_back(UCons::eq(a.args[i], b.args[i]));
    if (eqs.empty()) return UCons::truth();
    if (eqs.size() == 1) return eqs[0];
    return UCons::conj(std::move(eqs));
  }

  using Emit = std::function<bool(const BLPRedPtr&)>;

  BLPRedPtr node(const std::string& rule, const GoalPtr& g, const DClausePtr& added,
                 std::vector<BLPRedPtr> kids) {
    auto n = std::make_shared<BLPRed>();
    n->rule = rule;
    n->goal = g;
    n->added = added;
    n->kids = std::move(kids);
    return n;
  }

  bool gen(const GoalPtr& g, int depth, const Emit& emit) {
    if (depth <= 0) return true;

    switch (g->kind) {
      case Goal::Impl: {
        extra.push_back(g->hyp);
        bool cont = gen(g->a, depth - 1, [&](const BLPRedPtr& k) {
          return emit(node("impR", g, g->hyp, {k}));
        });
        extra.pop_back();
        return cont;
      }
      case Goal::Conj:
        return gen(g->a, depth - 1, [&](const BLPRedPtr& k1) {
          return gen(g->b, depth - 1, [&](const BLPRedPtr& k2) {
            return emit(node("andR", g, nullptr, {k1, k2}));
          });
        });
      case Goal::Disj: {
        bool cont = gen(g->a, depth - 1, [&](const BLPRedPtr& k) {
          return emit(node("orR1", g, nullptr, {k}));
        });
        if (!cont) return false;
        return gen(g->b, depth - 1, [&](const BLPRedPtr& k) {
          return emit(node("orR2", g, nullptr, {k}));
        });
      }
      case Goal::AtomG: break;
    }

    // ax: the meta-disjunction over every matching program fact
    {
      std::vector<UConsPtr> branches;
      auto add = [&](const DClausePtr& d) {
        if (d->kind != DClause::Fact || d->head.rel != g->atom.rel) return;
        if (!clause_closed(d)) return;
        branches.push_back(atom_equations(d->head, g->atom));
      };
      for (auto& d : schema) add(d);
      for (auto& d : extra) add(d);
      UConsPtr c = branches.empty()        ? UCons::falsum()
                   : branches.size() == 1 ? branches[0]
                                          : UCons::disj(std::move(branches));
      if (!emit(node("ax", g, nullptr, {cleaf(c)}))) return false;
    }

    // backchaining: open program clauses are copied with fresh labels
    // (forallL) and resolved (impL); every resolution takes its own copy, so
    // copies never accumulate. Hypotheses resolve directly.
    auto resolve = [&](const DClausePtr& d, int d2, const Emit& emit2) {
      UConsPtr c = atom_equations(d->head, g->atom);
      if (c->kind == UCons::False) return true;
      return gen(d->body, d2 - 1, [&](const BLPRedPtr& k) {
        return emit2(node("impL", g, nullptr, {k, cleaf(c)}));
      });
    };
    for (auto& d : schema) {
      if (d->kind != DClause::Rule || d->head.rel != g->atom.rel) continue;
      if (clause_closed(d)) {
        if (!resolve(d, depth, emit)) return false;
        continue;
      }
      if (depth < 2) continue;
      DClausePtr copy = label_copy(d, "n");
      bool cont = resolve(copy, depth - 1, [&](const BLPRedPtr& k) {
        return emit(node("forallL", g, copy, {k}));
      });
      if (!cont) return false;
    }
    for (auto& d : extra) {
      if (d->kind != DClause::Rule || d->head.rel != g->atom.rel) continue;
      if (!clause_closed(d)) continue;
      if (!resolve(d, depth, emit)) return false;
    }
    return true;
  }
};

}  // namespace

void reduce_lbu(const Query& q, int depth, LabelPool& pool,
                const std::function<bool(const BLPRedPtr&)>& sink) {
  // existential step: goal variables become fresh labels
  std::vector<std::string> vars;
  collect_goal_vars(q.goal, vars);
  std::map<std::string, UTermPtr> m;
  for (size_t i = 0; i < vars.size(); i++)
    m[vars[i]] = UTerm::mk_var(pool.fresh("m" + std::to_string(i + 1)));
  GoalPtr labelled = subst_goal(q.goal, m);

  BLPReducer r{pool, q.program.clauses};
  if (vars.empty()) {
    r.gen(labelled, depth, sink);
    return;
  }
  r.gen(labelled, depth, [&](const BLPRedPtr& k) {
    auto n = std::make_shared<BLPRed>();
    n->rule = "existsR";
    n->goal = labelled;
    n->kids = {k};
    return sink(n);
  });
}

// ---------------------------------------------------------------------------
// Valuation and checking

namespace {

UTermPtr apply_subst(const UTermPtr& t, const USubst& s) {
  if (t->var) {
    auto it = s.find(t->label);
    return it == s.end() ? t : it->second;
  }
  if (t->args.empty()) return t;
  std::vector<UTermPtr> args;
  for (auto& a : t->args) args.push_back(apply_subst(a, s));
  return UTerm::mk_fn(t->functor, std::move(args));
}

UAtom apply_subst(const UAtom& a, const USubst& s) {
  UAtom out;
  out.rel = a.rel;
  for (auto& t : a.args) out.args.push_back(apply_subst(t, s));
  return out;
}

GoalPtr apply_subst_goal(const GoalPtr& g, const USubst& s);

DClausePtr apply_subst_clause(const DClausePtr& d, const USubst& s) {
  auto n = std::make_shared<DClause>();
  n->kind = d->kind;
  n->head = apply_subst(d->head, s);
  if (d->body) n->body = apply_subst_goal(d->body, s);
  return n;
}

GoalPtr apply_subst_goal(const GoalPtr& g, const USubst& s) {
  auto n = std::make_shared<Goal>();
  n->kind = g->kind;
  if (g->kind == Goal::AtomG) {
    n->atom = apply_subst(g->atom, s);
    return n;
  }
  if (g->kind == Goal::Impl) {
    n->hyp = apply_subst_clause(g->hyp, s);
    n->a = apply_subst_goal(g->a, s);
    return n;
  }
  n->a = apply_subst_goal(g->a, s);
  if (g->b) n->b = apply_subst_goal(g->b, s);
  return n;
}

LBNodePtr valuate_blp(const BLPRedPtr& r, const USubst& s) {
  auto n = std::make_shared<LBNode>();
  n->rule = r->rule;
  if (r->goal) n->goal = apply_subst_goal(r->goal, s);
  if (r->added) n->added = apply_subst_clause(r->added, s);
  for (auto& k : r->kids) {
    if (k->is_constraint) continue;  // constraints are deleted by the valuation
    n->kids.push_back(valuate_blp(k, s));
  }
  return n;
}

void collect_constraints(const BLPRedPtr& r, std::vector<UConsPtr>& out) {
  if (r->is_constraint) {
    out.push_back(r->constraint);
    return;
  }
  for (auto& k : r->kids) collect_constraints(k, out);
}

bool atom_ground_eq(const UAtom& a, const UAtom& b) {
  if (a.rel != b.rel || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!uterm_eq(a.args[i], b.args[i])) return false;
  return true;
}

bool clause_instance_of(const DClausePtr& inst, const DClausePtr& schema);

bool term_instance_of(const UTermPtr& inst, const UTermPtr& schema,
                      std::map<std::string, UTermPtr>& bind) {
  if (!schema->var && schema->args.empty() && !schema->functor.empty() &&
      std::isupper((unsigned char)schema->functor[0])) {
    auto it = bind.find(schema->functor);
    if (it != bind.end()) return uterm_eq(it->second, inst);
    bind[schema->functor] = inst;
    return true;
  }
  if (schema->var || inst->var) return schema->var && inst->var && schema->label == inst->label;
  if (schema->functor != inst->functor || schema->args.size() != inst->args.size()) return false;
  for (size_t i = 0; i < schema->args.size(); i++)
    if (!term_instance_of(inst->args[i], schema->args[i], bind)) return false;
  return true;
}

bool goal_instance_of(const GoalPtr& inst, const GoalPtr& schema,
                      std::map<std::string, UTermPtr>& bind) {
  if (inst->kind != schema->kind) return false;
  if (inst->kind == Goal::AtomG) {
    if (inst->atom.rel != schema->atom.rel ||
        inst->atom.args.size() != schema->atom.args.size())
      return false;
    for (size_t i = 0; i < inst->atom.args.size(); i++)
      if (!term_instance_of(inst->atom.args[i], schema->atom.args[i], bind)) return false;
    return true;
  }
  if (inst->kind == Goal::Impl)
    return goal_instance_of(inst->a, schema->a, bind) &&
           clause_instance_of(inst->hyp, schema->hyp);
  return goal_instance_of(inst->a, schema->a, bind) &&
         (!schema->b || goal_instance_of(inst->b, schema->b, bind));
}

bool clause_instance_of(const DClausePtr& inst, const DClausePtr& schema) {
  std::map<std::string, UTermPtr> bind;
  if (inst->kind != schema->kind) return false;
  if (inst->head.rel != schema->head.rel || inst->head.args.size() != schema->head.args.size())
    return false;
  for (size_t i = 0; i < inst->head.args.size(); i++)
    if (!term_instance_of(inst->head.args[i], schema->head.args[i], bind)) return false;
  if (schema->body) return goal_instance_of(inst->body, schema->body, bind);
  return true;
}

struct LBChecker {
  const Program& prog;
  std::string* diag;
  const LabelPool* pool;

  bool fail(const std::string& m) {
    if (diag) *diag = m;
    return false;
  }

  bool node(const LBNodePtr& t, std::vector<DClausePtr> avail) {
    const std::string& r = t->rule;
    if (r == "existsR") {
      if (t->kids.size() != 1) return fail("existsR arity");
      return node(t->kids[0], avail);
    }
    if (r == "impR") {
      if (t->goal->kind != Goal::Impl || t->kids.size() != 1) return fail("impR shape");
      avail.push_back(t->goal->hyp);
      return node(t->kids[0], avail);
    }
    if (r == "andR") {
      if (t->goal->kind != Goal::Conj || t->kids.size() != 2) return fail("andR shape");
      return node(t->kids[0], avail) && node(t->kids[1], avail);
    }
    if (r == "orR1" || r == "orR2") {
      if (t->goal->kind != Goal::Disj || t->kids.size() != 1) return fail("orR shape");
      return node(t->kids[0], avail);
    }
    if (r == "forallL") {
      if (t->kids.size() != 1 || !t->added) return fail("forallL shape");
      bool found = false;
      for (auto& d : prog.clauses)
        if (clause_instance_of(t->added, d)) found = true;
      if (!found) return fail("forallL: copy is not an instance of a program clause");
      avail.push_back(t->added);
      return node(t->kids[0], avail);
    }
    if (r == "impL") {
      if (t->goal->kind != Goal::AtomG || t->kids.size() != 1) return fail("impL shape");
      // some available rule clause has exactly this head and the premiss is
      // its body
      auto goal_eq = [&](const GoalPtr& a, const GoalPtr& b) {
        std::map<std::string, UTermPtr> bind;
        return goal_instance_of(a, b, bind);
      };
      for (auto& d : avail) {
        if (d->kind != DClause::Rule) continue;
        if (!atom_ground_eq(d->head, t->goal->atom)) continue;
        if (goal_eq(t->kids[0]->goal, d->body)) return node(t->kids[0], avail);
      }
      // ground program rules may be used without an explicit copy
      for (auto& d : prog.clauses) {
        if (d->kind != DClause::Rule) continue;
        if (atom_ground_eq(d->head, t->goal->atom) && goal_eq(t->kids[0]->goal, d->body))
          return node(t->kids[0], avail);
      }
      return fail("impL: no available clause with this head");
    }
    if (r == "ax") {
      if (t->goal->kind != Goal::AtomG || !t->kids.empty()) return fail("ax shape");
      for (auto& d : avail)
        if (d->kind == DClause::Fact && atom_ground_eq(d->head, t->goal->atom)) return true;
      for (auto& d : prog.clauses)
        if (d->kind == DClause::Fact && atom_ground_eq(d->head, t->goal->atom)) return true;
      return fail("ax: atom not among the program facts: " +
                  (pool ? print_uatom(t->goal->atom, *pool) : t->goal->atom.rel));
    }
    return fail("unknown LB rule '" + r + "'");
  }
};

}  // namespace

std::string print_lb_proof(const LBNodePtr& t, const LabelPool& pool, int indent) {
  std::string out(indent * 2, ' ');
  out += "P |- " + print_goal(t->goal, pool) + "   [" + t->rule + "]";
  if (t->added) out += "   adds " + print_uatom(t->added->head, pool) + (t->added->body ? " :- ..." : "");
  out += "\n";
  for (auto& k : t->kids) out += print_lb_proof(k, pool, indent + 1);
  return out;
}

bool check_lb_proof(const LBNodePtr& t, const Program& p, std::string* diag) {
  LBChecker c{p, diag, nullptr};
  return c.node(t, {});
}

BLPResult run_blp(const Query& q, int depth, bool all) {
  BLPResult res;
  // candidate label space: constants ^ query variables
  std::set<std::string> constants;
  std::function<void(const UTermPtr&)> cterm = [&](const UTermPtr& t) {
    if (!t->var && t->args.empty() && !t->functor.empty() &&
        std::islower((unsigned char)t->functor[0]))
      constants.insert(t->functor);
    for (auto& a : t->args) cterm(a);
  };
  std::function<void(const GoalPtr&)> cgoal = [&](const GoalPtr& g) {
    if (g->kind == Goal::AtomG) {
      for (auto& a : g->atom.args) cterm(a);
      return;
    }
    if (g->kind == Goal::Impl) {
      for (auto& a : g->hyp->head.args) cterm(a);
      if (g->hyp->body) cgoal(g->hyp->body);
      cgoal(g->a);
      return;
    }
    cgoal(g->a);
    if (g->b) cgoal(g->b);
  };
  for (auto& d : q.program.clauses) {
    for (auto& a : d->head.args) cterm(a);
    if (d->body) cgoal(d->body);
  }
  std::vector<std::string> qvars;
  collect_goal_vars(q.goal, qvars);
  res.candidate_space = 1;
  for (size_t i = 0; i < qvars.size(); i++) res.candidate_space *= (long)constants.size();

  std::set<std::string> seen_answers;
  reduce_lbu(q, depth, res.pool, [&](const BLPRedPtr& r) {
    std::vector<UConsPtr> cs;
    collect_constraints(r, cs);
    UConsPtr all_c = cs.empty() ? UCons::truth() : cs.size() == 1 ? cs[0] : UCons::conj(cs);
    for (auto& s : solve_unification(all_c, res.pool)) {
      BLPAnswer ans;
      ans.proof = valuate_blp(r, s);
      // read the query-variable bindings off the labels m1..mk
      for (size_t i = 0; i < qvars.size(); i++) {
        // labels are allocated in order m1, m2, ... at reduce_lbu entry
        auto it = s.find((int)i);
        ans.bindings[qvars[i]] = it != s.end() ? it->second : UTerm::mk_var((int)i);
      }
      std::string key;
      for (auto& [v, t] : ans.bindings) key += v + "=" + print_uterm(t, res.pool) + ",";
      if (seen_answers.count(key)) continue;
      seen_answers.insert(key);
      res.answers.push_back(std::move(ans));
      if (!all) return false;
    }
    return true;
  });
  return res;
}

std::string print_answer(const BLPAnswer& a, const LabelPool& pool) {
  if (a.bindings.empty()) return "yes";
  std::string out;
  for (auto& [v, t] : a.bindings) {
    if (!out.empty()) out += ", ";
    out += v + "=" + print_uterm(t, pool);
  }
  return out;
}

}  // namespace ck
