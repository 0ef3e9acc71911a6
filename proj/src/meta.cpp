#include "ck/meta.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ck {

MetaAtom MetaAtom::sat(std::string w, FormulaPtr f) {
  MetaAtom a;
  a.kind = Sat;
  a.world = std::move(w);
  a.form = std::move(f);
  return a;
}

MetaAtom MetaAtom::relation(std::string r, std::vector<std::string> args) {
  MetaAtom a;
  a.kind = Rel;
  a.rel = std::move(r);
  a.args = std::move(args);
  return a;
}

MetaAtom MetaAtom::bot() {
  MetaAtom a;
  a.kind = Bot;
  return a;
}

bool matom_eq(const MetaAtom& a, const MetaAtom& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == MetaAtom::Bot) return true;
  if (a.kind == MetaAtom::Sat) return a.world == b.world && formula_eq(a.form, b.form);
  return a.rel == b.rel && a.args == b.args;
}

std::string print_matom(const MetaAtom& a) {
  if (a.kind == MetaAtom::Bot) return "_|_";
  if (a.kind == MetaAtom::Sat) {
    std::string f = print_formula(a.form);
    return "(" + a.world + ": " + f + ")";
  }
  if (a.args.size() == 2) return a.args[0] + " " + a.rel + " " + a.args[1];
  std::string out = a.rel;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); i++) {
      if (i) out += ",";
      out += a.args[i];
    }
    out += ")";
  }
  return out;
}

MetaFPtr MetaF::mk_atom(MetaAtom a) {
  auto f = std::make_shared<MetaF>();
  f->kind = Atom;
  f->atom = std::move(a);
  return f;
}

MetaFPtr MetaF::mk_bot() {
  auto f = std::make_shared<MetaF>();
  f->kind = MBot;
  return f;
}

MetaFPtr MetaF::mk(Kind k, MetaFPtr a, MetaFPtr b) {
  auto f = std::make_shared<MetaF>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

MetaFPtr MetaF::quant(Kind k, std::string var, MetaFPtr body) {
  auto f = std::make_shared<MetaF>();
  f->kind = k;
  f->var = std::move(var);
  f->body = std::move(body);
  return f;
}

std::string print_metaf(const MetaFPtr& f) {
  switch (f->kind) {
    case MetaF::Atom: return print_matom(f->atom);
    case MetaF::MBot: return "_|_";
    case MetaF::And: return "(" + print_metaf(f->a) + " /\\ " + print_metaf(f->b) + ")";
    case MetaF::Or: return "(" + print_metaf(f->a) + " \\/ " + print_metaf(f->b) + ")";
    case MetaF::Imp: return "(" + print_metaf(f->a) + " => " + print_metaf(f->b) + ")";
    case MetaF::Forall: return "forall " + f->var + ". " + print_metaf(f->body);
    case MetaF::Exists: return "exists " + f->var + ". " + print_metaf(f->body);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Polarity

int polarity_alternations(const MetaFPtr& f) {
  switch (f->kind) {
    case MetaF::Atom:
    case MetaF::MBot: return 0;
    case MetaF::And:
    case MetaF::Or:
      return std::max(polarity_alternations(f->a), polarity_alternations(f->b));
    case MetaF::Forall:
    case MetaF::Exists: return polarity_alternations(f->body);
    case MetaF::Imp:
      return 1 + std::max(polarity_alternations(f->a), polarity_alternations(f->b));
  }
  return 0;
}

bool polarity_positive(const MetaFPtr& f) {
  switch (f->kind) {
    case MetaF::Atom:
    case MetaF::MBot: return true;
    case MetaF::And:
    case MetaF::Or: return polarity_positive(f->a) && polarity_positive(f->b);
    case MetaF::Imp: return polarity_negative(f->a) && polarity_positive(f->b);
    case MetaF::Exists: return polarity_positive(f->body);
    // a universally closed positive matrix is used on the left by
    // instantiation only, so the prefix is transparent here
    case MetaF::Forall: return polarity_positive(f->body);
  }
  return false;
}

bool polarity_negative(const MetaFPtr& f) {
  switch (f->kind) {
    case MetaF::Atom: return true;
    // meta-absurdity polarizes like an atom; the not/bot clauses of the
    // modal theory are not classifiable otherwise
    case MetaF::MBot: return true;
    case MetaF::And: return polarity_negative(f->a) && polarity_negative(f->b);
    case MetaF::Or: return false;
    case MetaF::Imp: return polarity_positive(f->a) && polarity_negative(f->b);
    case MetaF::Forall: return polarity_negative(f->body);
    case MetaF::Exists: return false;
  }
  return false;
}

bool is_tractable(const MetaFPtr& f) {
  bool neg = polarity_negative(f), pos = polarity_positive(f);
  if (!neg && !pos) throw NonPolarizable(print_metaf(f));
  int pi = polarity_alternations(f);
  return (neg && pi <= 2) || (pos && pi <= 1);
}

// ---------------------------------------------------------------------------
// Theory files

namespace {

struct SExpr {
  std::string sym;  // leaf
  std::vector<SExpr> kids;
  bool leaf = true;
};

struct SParser {
  const std::string& s;
  size_t i = 0;
  explicit SParser(const std::string& src) : s(src) {}

  void ws() {
    while (i < s.size()) {
      if (std::isspace((unsigned char)s[i])) { i++; continue; }
      if (s[i] == '#' || s[i] == ';') {  // comment to end of line
        while (i < s.size() && s[i] != '\n') i++;
        continue;
      }
      break;
    }
  }

  bool done() { ws(); return i >= s.size(); }

  SExpr next() {
    ws();
    if (i >= s.size()) throw std::runtime_error("theory: unexpected end of input");
    if (s[i] == '(') {
      i++;
      SExpr e;
      e.leaf = false;
      while (true) {
        ws();
        if (i >= s.size()) throw std::runtime_error("theory: missing ')'");
        if (s[i] == ')') { i++; break; }
        e.kids.push_back(next());
      }
      return e;
    }
    size_t j = i;
    while (j < s.size() && !std::isspace((unsigned char)s[j]) && s[j] != '(' && s[j] != ')') j++;
    SExpr e;
    e.sym = s.substr(i, j - i);
    i = j;
    return e;
  }
};

bool upper_var(const std::string& s) { return !s.empty() && std::isupper((unsigned char)s[0]); }

FormulaPtr obj_pattern(const SExpr& e) {
  if (e.leaf) {
    if (e.sym == "bot") return Formula::mk_op("bot", {});
    if (e.sym == "top") return Formula::mk_op("top", {});
    return Formula::mk_atom(e.sym);  // uppercase = meta-variable, lowercase = atom
  }
  if (e.kids.empty() || !e.kids[0].leaf) throw std::runtime_error("theory: bad object pattern");
  const std::string& h = e.kids[0].sym;
  static const std::map<std::string, std::pair<std::string, int>> ops = {
      {"and", {"&", 2}},   {"or", {"|", 2}},   {"imp", {"->", 2}}, {"not", {"~", 1}},
      {"box", {"box", 1}}, {"dia", {"dia", 1}}, {"comma", {",", 2}}, {"semi", {";", 2}},
      {"star", {"*", 2}},  {"wand", {"-*", 2}}};
  auto it = ops.find(h);
  if (it == ops.end()) throw std::runtime_error("theory: unknown object operator " + h);
  if ((int)e.kids.size() != it->second.second + 1)
    throw std::runtime_error("theory: arity mismatch for " + h);
  std::vector<FormulaPtr> kids;
  for (size_t i = 1; i < e.kids.size(); i++) kids.push_back(obj_pattern(e.kids[i]));
  return Formula::mk_op(it->second.first, std::move(kids));
}

MetaAtom meta_atom(const SExpr& e) {
  if (e.leaf) throw std::runtime_error("theory: expected atom");
  const std::string& h = e.kids[0].sym;
  if (h == "sat") {
    if (e.kids.size() != 3) throw std::runtime_error("theory: (sat world formula)");
    return MetaAtom::sat(e.kids[1].sym, obj_pattern(e.kids[2]));
  }
  if (h == "rel") {
    std::vector<std::string> args;
    for (size_t i = 2; i < e.kids.size(); i++) args.push_back(e.kids[i].sym);
    return MetaAtom::relation(e.kids[1].sym, std::move(args));
  }
  throw std::runtime_error("theory: unknown atom head " + h);
}

MetaFPtr meta_formula(const SExpr& e) {
  if (e.leaf) {
    if (e.sym == "bot") return MetaF::mk_bot();
    throw std::runtime_error("theory: bad meta formula " + e.sym);
  }
  const std::string& h = e.kids[0].sym;
  if (h == "sat" || h == "rel") return MetaF::mk_atom(meta_atom(e));
  auto fold = [&](MetaF::Kind k) {
    MetaFPtr acc = meta_formula(e.kids[1]);
    for (size_t i = 2; i < e.kids.size(); i++) acc = MetaF::mk(k, acc, meta_formula(e.kids[i]));
    return acc;
  };
  if (h == "mand") return fold(MetaF::And);
  if (h == "mor") return fold(MetaF::Or);
  if (h == "imp") {
    if (e.kids.size() != 3) throw std::runtime_error("theory: (imp a b)");
    return MetaF::mk(MetaF::Imp, meta_formula(e.kids[1]), meta_formula(e.kids[2]));
  }
  if (h == "forall" || h == "exists") {
    if (e.kids.size() != 3) throw std::runtime_error("theory: (forall var body)");
    return MetaF::quant(h == "forall" ? MetaF::Forall : MetaF::Exists, e.kids[1].sym,
                        meta_formula(e.kids[2]));
  }
  throw std::runtime_error("theory: unknown meta operator " + h);
}

std::string op_base_name(const FormulaPtr& f) {
  static const std::map<std::string, std::string> names = {
      {"&", "and"}, {"|", "or"},   {"->", "imp"},   {"~", "not"},  {"box", "box"},
      {"dia", "dia"}, {"bot", "bot"}, {",", "comma"}, {";", "semi"}, {"*", "star"},
      {"-*", "wand"}, {"top", "top"}};
  if (f->atom) return f->sym;
  auto it = names.find(f->sym);
  return it == names.end() ? f->sym : it->second;
}

const MetaF* sat_head(const MetaFPtr& f) {
  return f->kind == MetaF::Atom && f->atom.kind == MetaAtom::Sat ? f.get() : nullptr;
}

}  // namespace

TractableTheory parse_theory(const std::string& text, const std::string& name) {
  TractableTheory th;
  th.name = name;
  SParser p(text);
  while (!p.done()) {
    SExpr e = p.next();
    if (e.leaf || e.kids.empty() || !e.kids[0].leaf)
      throw std::runtime_error("theory: expected (clause ...) or (axiom ...)");
    const std::string& h = e.kids[0].sym;
    size_t at = 1;
    std::string cname;
    if (e.kids.size() >= 3 && e.kids[at].leaf) {
      cname = e.kids[at].sym;
      at++;
    }
    if (e.kids.size() != at + 1) throw std::runtime_error("theory: malformed " + h);
    if (h == "axiom") {
      MetaFPtr a = MetaF::mk_atom(meta_atom(e.kids[at]));
      if (cname.empty()) {
        const MetaAtom& at2 = a->atom;
        bool refl = at2.kind == MetaAtom::Rel && at2.args.size() == 2 && at2.args[0] == at2.args[1];
        cname = refl ? "ref" : at2.rel + "ax";
      }
      th.clauses.push_back({cname, a});
      continue;
    }
    if (h != "clause") throw std::runtime_error("theory: unknown form " + h);
    // the universal closure of an iff is the pair of directed clauses
    if (!e.kids[at].leaf && e.kids[at].kids[0].leaf && e.kids[at].kids[0].sym == "iff") {
      const SExpr& body = e.kids[at];
      if (body.kids.size() != 3) throw std::runtime_error("theory: (iff a b)");
      MetaFPtr a = meta_formula(body.kids[1]);
      MetaFPtr b = meta_formula(body.kids[2]);
      std::string base = cname;
      if (base.empty()) {
        if (auto* h1 = sat_head(a)) base = op_base_name(h1->atom.form);
        else if (auto* h2 = sat_head(b)) base = op_base_name(h2->atom.form);
        else base = "clause" + std::to_string(th.clauses.size());
      }
      th.clauses.push_back({base + "L", MetaF::mk(MetaF::Imp, a, b)});
      th.clauses.push_back({base + "R", MetaF::mk(MetaF::Imp, b, a)});
      continue;
    }
    MetaFPtr f = meta_formula(e.kids[at]);
    if (cname.empty()) {
      // derive a name from the satisfaction head when there is one
      if (f->kind == MetaF::Imp && sat_head(f->a))
        cname = op_base_name(f->a->atom.form) + "L";
      else if (f->kind == MetaF::Imp && sat_head(f->b))
        cname = op_base_name(f->b->atom.form) + "R";
      else
        cname = "clause" + std::to_string(th.clauses.size());
    }
    th.clauses.push_back({cname, f});
  }
  return th;
}

// ---------------------------------------------------------------------------
// Generic hereditary reduction

namespace {

struct RedState {
  std::vector<std::string> fresh;
  std::vector<std::string> inst;
};

std::vector<MetaSeqPat> merge(const std::vector<MetaSeqPat>& xs, const std::vector<MetaSeqPat>& ys) {
  std::vector<MetaSeqPat> out;
  for (auto& x : xs)
    for (auto& y : ys) {
      MetaSeqPat m = x;
      m.left.insert(m.left.end(), y.left.begin(), y.left.end());
      m.right.insert(m.right.end(), y.right.begin(), y.right.end());
      out.push_back(m);
    }
  return out;
}

std::vector<MetaSeqPat> reduceL(const MetaFPtr& f, RedState& st);

std::vector<MetaSeqPat> reduceR(const MetaFPtr& f, RedState& st) {
  switch (f->kind) {
    case MetaF::Atom: return {{{}, {f->atom}}};
    case MetaF::MBot: return {{{}, {MetaAtom::bot()}}};
    case MetaF::And: return [&] {  // branch
      auto a = reduceR(f->a, st);
      auto b = reduceR(f->b, st);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }();
    case MetaF::Or: return merge(reduceR(f->a, st), reduceR(f->b, st));
    case MetaF::Imp: return merge(reduceL(f->a, st), reduceR(f->b, st));
    case MetaF::Forall:
      st.fresh.push_back(f->var);
      return reduceR(f->body, st);
    case MetaF::Exists:
      st.inst.push_back(f->var);
      return reduceR(f->body, st);
  }
  return {};
}

std::vector<MetaSeqPat> reduceL(const MetaFPtr& f, RedState& st) {
  switch (f->kind) {
    case MetaF::Atom: return {{{f->atom}, {}}};
    case MetaF::MBot: return {{{MetaAtom::bot()}, {}}};
    case MetaF::And: return merge(reduceL(f->a, st), reduceL(f->b, st));
    case MetaF::Or: return [&] {  // branch
      auto a = reduceL(f->a, st);
      auto b = reduceL(f->b, st);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }();
    case MetaF::Imp: return [&] {  // antecedent moves right, consequent stays left
      auto a = reduceR(f->a, st);
      auto b = reduceL(f->b, st);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }();
    case MetaF::Forall:
      st.inst.push_back(f->var);
      return reduceL(f->body, st);
    case MetaF::Exists:
      st.fresh.push_back(f->var);
      return reduceL(f->body, st);
  }
  return {};
}

// strip the universal closure prefix, recording the bound variables
MetaFPtr strip_closure(const MetaFPtr& f, std::vector<std::string>& vars) {
  MetaFPtr cur = f;
  while (cur->kind == MetaF::Forall) {
    vars.push_back(cur->var);
    cur = cur->body;
  }
  return cur;
}

}  // namespace

SynRule synthesize_rule(const MetaFPtr& clause, const std::string& name) {
  if (!is_tractable(clause)) throw NotTractable(name);
  std::vector<std::string> closure;
  MetaFPtr matrix = strip_closure(clause, closure);
  RedState st;
  SynRule r;
  r.name = name;
  r.premisses = reduceL(matrix, st);
  r.fresh = st.fresh;
  // closure variables and body-instantiated variables must occur in the sequent
  r.inst = closure;
  for (auto& v : st.inst) r.inst.push_back(v);
  return r;
}

G3cTree g3c_hereditary_reduction(const MetaFPtr& clause) {
  // builds the explicit reduction tree; sequents list only the added atoms
  std::vector<std::string> closure;
  MetaFPtr matrix = strip_closure(clause, closure);
  std::function<G3cTree(const MetaFPtr&, bool, MetaSeqPat)> go =
      [&](const MetaFPtr& f, bool left, MetaSeqPat at) -> G3cTree {
    auto node = [&](const std::string& rule, std::vector<G3cTree> kids) {
      auto n = std::make_shared<G3cNode>();
      n->seq = at;
      n->rule = rule;
      n->kids = std::move(kids);
      return G3cTree(n);
    };
    if (f->kind == MetaF::Atom || f->kind == MetaF::MBot) {
      MetaSeqPat leafp = at;
      MetaAtom a = f->kind == MetaF::Atom ? f->atom : MetaAtom::bot();
      (left ? leafp.left : leafp.right).push_back(a);
      auto n = std::make_shared<G3cNode>();
      n->seq = leafp;
      n->rule = "";
      return G3cTree(n);
    }
    if (f->kind == MetaF::And && left) {
      // both conjuncts join the same premiss
      std::function<void(const MetaFPtr&, std::vector<MetaFPtr>&)> flatten =
          [&](const MetaFPtr& g, std::vector<MetaFPtr>& acc) {
            if (g->kind == MetaF::And) {
              flatten(g->a, acc);
              flatten(g->b, acc);
            } else {
              acc.push_back(g);
            }
          };
      // reduce a on the left, then b inside each открыт leaf: realized by
      // sequential composition of the two reductions
      G3cTree ta = go(f->a, true, at);
      // replace each leaf of ta by the reduction of b started from that leaf
      std::function<G3cTree(const G3cTree&)> graft = [&](const G3cTree& n) -> G3cTree {
        if (n->rule.empty() && n->kids.empty()) return go(f->b, true, n->seq);
        auto m = std::make_shared<G3cNode>();
        m->seq = n->seq;
        m->rule = n->rule;
        for (auto& k : n->kids) m->kids.push_back(graft(k));
        return G3cTree(m);
      };
      return node("andL", {graft(ta)});
    }
    if (f->kind == MetaF::And && !left) return node("andR", {go(f->a, false, at), go(f->b, false, at)});
    if (f->kind == MetaF::Or && left) return node("orL", {go(f->a, true, at), go(f->b, true, at)});
    if (f->kind == MetaF::Or && !left) {
      G3cTree ta = go(f->a, false, at);
      std::function<G3cTree(const G3cTree&)> graft = [&](const G3cTree& n) -> G3cTree {
        if (n->rule.empty() && n->kids.empty()) return go(f->b, false, n->seq);
        auto m = std::make_shared<G3cNode>();
        m->seq = n->seq;
        m->rule = n->rule;
        for (auto& k : n->kids) m->kids.push_back(graft(k));
        return G3cTree(m);
      };
      return node("orR", {graft(ta)});
    }
    if (f->kind == MetaF::Imp && left)
      return node("impL", {go(f->a, false, at), go(f->b, true, at)});
    if (f->kind == MetaF::Imp && !left) {
      G3cTree ta = go(f->a, true, at);
      std::function<G3cTree(const G3cTree&)> graft = [&](const G3cTree& n) -> G3cTree {
        if (n->rule.empty() && n->kids.empty()) return go(f->b, false, n->seq);
        auto m = std::make_shared<G3cNode>();
        m->seq = n->seq;
        m->rule = n->rule;
        for (auto& k : n->kids) m->kids.push_back(graft(k));
        return G3cTree(m);
      };
      return node("impR", {graft(ta)});
    }
    // quantifiers
    if (f->kind == MetaF::Forall)
      return node(left ? "forallL" : "forallR", {go(f->body, left, at)});
    return node(left ? "existsL" : "existsR", {go(f->body, left, at)});
  };
  return go(matrix, true, {});
}

std::vector<MetaSeqPat> g3c_leaves(const G3cTree& t) {
  std::vector<MetaSeqPat> out;
  std::function<void(const G3cTree&)> go = [&](const G3cTree& n) {
    if (n->kids.empty() && n->rule.empty()) {
      out.push_back(n->seq);
      return;
    }
    for (auto& k : n->kids) go(k);
  };
  go(t);
  return out;
}

// ---------------------------------------------------------------------------
// Calculus generation

namespace {

// frame/persistence material: relation atoms and satisfaction atoms whose
// formula slot is a bare meta-variable
bool frame_atom(const MetaAtom& a) {
  if (a.kind == MetaAtom::Rel) return true;
  if (a.kind == MetaAtom::Sat) return a.form->atom && upper_var(a.form->sym);
  return false;
}

bool all_atomic(const MetaFPtr& f) {
  switch (f->kind) {
    case MetaF::Atom: return frame_atom(f->atom);
    case MetaF::MBot: return false;
    case MetaF::And:
    case MetaF::Imp: return all_atomic(f->a) && all_atomic(f->b);
    case MetaF::Forall: return all_atomic(f->body);
    case MetaF::Or:
    case MetaF::Exists: return false;
  }
  return false;
}

// hypotheses and head of an all-atomic clause H1 => ... => forall(... => C)
void geometric_parts(const MetaFPtr& f, std::vector<MetaAtom>& hyps, MetaAtom& head) {
  if (f->kind == MetaF::Atom) {
    head = f->atom;
    return;
  }
  if (f->kind == MetaF::Forall) {
    geometric_parts(f->body, hyps, head);
    return;
  }
  if (f->kind == MetaF::Imp) {
    std::function<void(const MetaFPtr&)> collect = [&](const MetaFPtr& g) {
      if (g->kind == MetaF::And) {
        collect(g->a);
        collect(g->b);
      } else {
        hyps.push_back(g->atom);
      }
    };
    collect(f->a);
    geometric_parts(f->b, hyps, head);
    return;
  }
  throw std::logic_error("geometric_parts: not all-atomic");
}

bool single_rel_right(const MetaSeqPat& p) {
  return p.left.empty() && p.right.size() == 1 && p.right[0].kind == MetaAtom::Rel;
}

bool premiss_closed(const MetaSeqPat& p) {
  // a premiss carrying meta-absurdity on the left closes by the bot axiom
  for (auto& a : p.left)
    if (a.kind == MetaAtom::Bot) return true;
  return false;
}

// drop inert meta-absurdity on the right when other material remains
void tidy_bot_right(MetaSeqPat& p) {
  bool other = !p.left.empty() || p.right.size() > 1;
  if (!other) return;
  std::vector<MetaAtom> keep;
  for (auto& a : p.right)
    if (a.kind != MetaAtom::Bot) keep.push_back(a);
  if (!keep.empty() || !p.left.empty()) p.right = keep;
}

SynRule simplify_clause(const TheoryClause& c, bool local_style) {
  std::vector<std::string> closure;
  MetaFPtr matrix = strip_closure(c.formula, closure);

  // frame/persistence clauses: Negri-style geometric rules
  if (all_atomic(c.formula)) {
    std::vector<MetaAtom> hyps;
    MetaAtom head;
    geometric_parts(matrix, hyps, head);
    SynRule r;
    r.name = c.name;
    if (hyps.empty()) {
      r.concl_right = {head};  // right axiom, e.g. ref
      return r;
    }
    r.concl_left = hyps;
    MetaSeqPat prem;
    prem.left.push_back(head);
    for (auto& h : hyps) prem.left.push_back(h);
    r.premisses = {prem};
    return r;
  }

  if (matrix->kind != MetaF::Imp) return synthesize_rule(c.formula, c.name);
  const MetaF* lhead = sat_head(matrix->a);
  const MetaF* rhead = sat_head(matrix->b);

  RedState st;
  SynRule r;
  r.name = c.name;
  std::vector<MetaSeqPat> prems;
  MetaAtom principal;
  bool left_rule;
  if (lhead) {  // Atom => Body: forward chaining
    principal = lhead->atom;
    left_rule = true;
    prems = reduceL(matrix->b, st);
  } else if (rhead) {  // Body => Atom: back chaining
    principal = rhead->atom;
    left_rule = false;
    prems = reduceR(matrix->a, st);
  } else {
    return synthesize_rule(c.formula, c.name);
  }

  r.fresh = st.fresh;
  bool instantiating = !st.inst.empty();
  r.inst = st.inst;
  if (left_rule)
    r.concl_left = {principal};
  else
    r.concl_right = {principal};

  // premisses that close immediately are dropped when others remain
  if (prems.size() > 1) {
    std::vector<MetaSeqPat> keep;
    for (auto& p : prems)
      if (!premiss_closed(p)) keep.push_back(p);
    if (!keep.empty()) prems = keep;
  }
  for (auto& p : prems) tidy_bot_right(p);

  // in theories without frame axioms no rule derives a relation atom on the
  // right, so such premisses become antecedent requirements
  if (local_style) {
    std::vector<MetaAtom> absorbed;
    std::vector<MetaSeqPat> keep;
    for (auto& p : prems) {
      if (single_rel_right(p))
        absorbed.push_back(p.right[0]);
      else
        keep.push_back(p);
    }
    if (!absorbed.empty()) {
      prems = keep;
      for (auto& a : absorbed) {
        r.concl_left.push_back(a);
        for (auto& p : prems) p.left.push_back(a);
      }
      r.inst.clear();  // matching the absorbed atoms grounds those worlds
    }
  }

  // reusable principals stay in the premisses where the body re-instantiates
  if (local_style && instantiating) {
    for (auto& p : prems) (left_rule ? p.left : p.right).push_back(principal);
  }

  r.premisses = prems;
  return r;
}

}  // namespace

LabelledCalculus generate_relational_calculus(const TractableTheory& omega, bool simplify) {
  LabelledCalculus calc;
  calc.name = omega.name + (simplify ? " (simplified)" : " (raw)");
  bool has_frame = false;
  for (auto& c : omega.clauses) {
    try {
      if (!is_tractable(c.formula)) throw NotTractable(c.name);
    } catch (const NonPolarizable&) {
      throw NotTractable(c.name);
    }
    if (all_atomic(c.formula)) has_frame = true;
  }
  calc.explicit_contraction = simplify && has_frame;
  if (!simplify) {
    for (auto& c : omega.clauses) calc.rules.push_back(synthesize_rule(c.formula, c.name));
    return calc;
  }
  for (auto& c : omega.clauses) calc.rules.push_back(simplify_clause(c, !has_frame));
  return calc;
}

// ---------------------------------------------------------------------------
// Rendering with canonical variable names

namespace {

struct Renamer {
  std::map<std::string, std::string> wmap, fmap;
  int wn = 0, fn = 0;
  static constexpr const char* wnames[8] = {"x", "y", "z", "u", "v", "w", "x2", "y2"};

  std::string world(const std::string& v) {
    auto it = wmap.find(v);
    if (it != wmap.end()) return it->second;
    std::string n = wn < 8 ? wnames[wn] : "w" + std::to_string(wn);
    wn++;
    return wmap[v] = n;
  }
  std::string fvar(const std::string& v) {
    auto it = fmap.find(v);
    if (it != fmap.end()) return it->second;
    std::string n(1, (char)('A' + (fn % 26)));
    fn++;
    return fmap[v] = n;
  }

  FormulaPtr form(const FormulaPtr& f) {
    if (f->atom) return upper_var(f->sym) ? Formula::mk_atom(fvar(f->sym)) : f;
    std::vector<FormulaPtr> kids;
    for (auto& k : f->kids) kids.push_back(form(k));
    return Formula::mk_op(f->sym, std::move(kids));
  }

  MetaAtom atom(const MetaAtom& a) {
    MetaAtom out = a;
    if (a.kind == MetaAtom::Sat) {
      out.world = world(a.world);
      out.form = form(a.form);
    } else if (a.kind == MetaAtom::Rel) {
      for (auto& x : out.args) x = world(x);
    }
    return out;
  }
};

std::string render_side(const std::vector<MetaAtom>& atoms, const char* ctx, bool ctx_first) {
  std::string out;
  if (ctx_first) out = ctx;
  for (auto& a : atoms) {
    if (!out.empty()) out += ", ";
    out += print_matom(a);
  }
  if (!ctx_first) {
    if (!out.empty()) out += ", ";
    out += ctx;
  }
  return out;
}

}  // namespace

std::string print_rule(const SynRule& r) {
  Renamer rn;
  SynRule c = r;
  for (auto& a : c.concl_left) a = rn.atom(a);
  for (auto& a : c.concl_right) a = rn.atom(a);
  for (auto& p : c.premisses) {
    for (auto& a : p.left) a = rn.atom(a);
    for (auto& a : p.right) a = rn.atom(a);
  }
  std::string out = c.name + ": ";
  out += render_side(c.concl_left, "P", false) + " |- " + render_side(c.concl_right, "S", true);
  out += "  <==  ";
  if (c.premisses.empty()) {
    out += "(axiom)";
  } else {
    for (size_t i = 0; i < c.premisses.size(); i++) {
      if (i) out += "  |  ";
      if (c.shift) {
        std::string from = rn.world(c.shift_from), to = rn.world(c.shift_to);
        out += render_side(c.premisses[i].left, ("P[" + from + ":=" + to + "]").c_str(), false) +
               " |- " + render_side(c.premisses[i].right, "", true);
        if (out.size() >= 4 && out.compare(out.size() - 4, 4, " |- ") == 0) out += "(empty)";
      } else {
        out += render_side(c.premisses[i].left, "P", false) + " |- " +
               render_side(c.premisses[i].right, "S", true);
      }
    }
  }
  std::vector<std::string> notes;
  for (auto& v : r.fresh) notes.push_back("fresh " + rn.world(v));
  for (auto& v : r.inst) notes.push_back(rn.world(v) + " occurs");
  for (auto& n : notes) out += "  [" + n + "]";
  return out;
}

std::string print_calculus(const LabelledCalculus& c) {
  std::string out = "calculus " + c.name + "\n";
  bool raw = c.name.size() >= 5 && c.name.compare(c.name.size() - 5, 5, "(raw)") == 0;
  if (raw) {
    out += "ax: F, P |- S, F  <==  (axiom)\n";
    out += "bot: _|_, P |- S  <==  (axiom)\n";
    out += "cL: F, P |- S  <==  F, F, P |- S\n";
    out += "cR: P |- S, F  <==  P |- S, F, F\n";
  } else if (c.explicit_contraction) {
    out += "taut: F, P |- S, F  <==  (axiom)\n";
    out += "bot: _|_, P |- S  <==  (axiom)\n";
    out += "c: F, P |- S  <==  F, F, P |- S\n";
  } else {
    out += "ax: F, P |- S, F  <==  (axiom)\n";
    out += "bot: _|_, P |- S  <==  (axiom)\n";
  }
  for (auto& r : c.rules) out += print_rule(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Built-in theories and calculi

TractableTheory builtin_k_theory() {
  const char* src = R"((clause (iff (sat w (and A B)) (mand (sat w A) (sat w B))))
(clause (iff (sat w (or A B)) (mor (sat w A) (sat w B))))
(clause (iff (sat w (not A)) (imp (sat w A) bot)))
(clause (iff (sat w bot) bot))
(clause (iff (sat w (box A)) (forall u (imp (rel R w u) (sat u A)))))
(clause (iff (sat w (dia A)) (exists u (mand (rel R w u) (sat u A)))))
(clause (imp (sat w (comma G D)) (mand (sat w G) (sat w D))))
(clause (imp (mor (sat w G) (sat w D)) (sat w (semi G D))))
)";
  return parse_theory(src, "K");
}

TractableTheory builtin_ipl_theory() {
  const char* src = R"((clause (iff (sat w (and A B)) (mand (sat w A) (sat w B))))
(clause (iff (sat w (or A B)) (mor (sat w A) (sat w B))))
(clause (iff (sat w (imp A B)) (forall u (imp (mand (rel R w u) (sat u A)) (sat u B)))))
(clause (iff (sat w (not A)) (forall u (imp (mand (rel R w u) (sat u A)) bot))))
(axiom (rel R w w))
(clause pers (imp (rel R w u) (forall F (imp (sat w F) (sat u F)))))
(clause (imp (sat w (comma G D)) (mand (sat w G) (sat w D))))
(clause (imp (mor (sat w G) (sat w D)) (sat w (semi G D))))
)";
  return parse_theory(src, "IPL");
}

LabelledCalculus builtin_rk() { return generate_relational_calculus(builtin_k_theory(), true); }
LabelledCalculus builtin_rj() { return generate_relational_calculus(builtin_ipl_theory(), true); }

LabelledCalculus builtin_rjplus() {
  LabelledCalculus c;
  c.name = "RJ+";
  c.explicit_contraction = true;
  auto A = Formula::mk_atom("A");
  auto B = Formula::mk_atom("B");
  auto sat = [](const char* w, FormulaPtr f) { return MetaAtom::sat(w, std::move(f)); };

  auto rule = [&](const std::string& name) {
    SynRule r;
    r.name = name;
    return r;
  };

  SynRule e = rule("e");
  e.structural = true;
  e.premisses = {{{}, {}}};
  c.rules.push_back(e);
  SynRule wl = rule("wL");
  wl.structural = true;
  wl.concl_left = {sat("x", A)};
  wl.premisses = {{{}, {}}};
  c.rules.push_back(wl);
  SynRule wr = rule("wR");
  wr.structural = true;
  wr.concl_right = {sat("x", A)};
  wr.premisses = {{{}, {}}};
  c.rules.push_back(wr);

  SynRule andl = rule("andL");
  andl.concl_left = {sat("x", Formula::mk_op("&", {A, B}))};
  andl.premisses = {{{sat("x", A), sat("x", B)}, {}}};
  c.rules.push_back(andl);
  SynRule andr = rule("andR");
  andr.concl_right = {sat("x", Formula::mk_op("&", {A, B}))};
  andr.premisses = {{{}, {sat("x", A)}}, {{}, {sat("x", B)}}};
  c.rules.push_back(andr);
  SynRule orl = rule("orL");
  orl.concl_left = {sat("x", Formula::mk_op("|", {A, B}))};
  orl.premisses = {{{sat("x", A)}, {}}, {{sat("x", B)}, {}}};
  c.rules.push_back(orl);
  SynRule orr = rule("orR");
  orr.concl_right = {sat("x", Formula::mk_op("|", {A, B}))};
  orr.premisses = {{{}, {sat("x", A), sat("x", B)}}};
  c.rules.push_back(orr);
  SynRule notl = rule("notL");
  notl.concl_left = {sat("x", Formula::mk_op("~", {A}))};
  notl.premisses = {{{}, {sat("x", A)}}};
  c.rules.push_back(notl);
  SynRule notr = rule("notR");
  notr.concl_right = {sat("x", Formula::mk_op("~", {A}))};
  notr.shift = true;
  notr.shift_from = "x";
  notr.shift_to = "y";
  notr.fresh = {"y"};
  notr.premisses = {{{sat("y", A)}, {}}};
  c.rules.push_back(notr);
  SynRule impl = rule("impL");
  impl.concl_left = {sat("x", Formula::mk_op("->", {A, B}))};
  impl.premisses = {{{}, {sat("x", A)}}, {{sat("x", B)}, {}}};
  c.rules.push_back(impl);
  SynRule impr = rule("impR");
  impr.concl_right = {sat("x", Formula::mk_op("->", {A, B}))};
  impr.shift = true;
  impr.shift_from = "x";
  impr.shift_to = "y";
  impr.fresh = {"y"};
  impr.premisses = {{{sat("y", A)}, {sat("y", B)}}};
  c.rules.push_back(impr);
  return c;
}

// ---------------------------------------------------------------------------
// Labelled sequents: parsing, printing, proving

std::string print_lseq(const LSeq& s) {
  std::string out;
  for (size_t i = 0; i < s.left.size(); i++) {
    if (i) out += ", ";
    out += print_matom(s.left[i]);
  }
  out += " |- ";
  for (size_t i = 0; i < s.right.size(); i++) {
    if (i) out += ", ";
    out += print_matom(s.right[i]);
  }
  return out;
}

LSeq parse_lseq(const std::string& text, const Alphabet& alphabet) {
  auto bar = text.find("|-");
  if (bar == std::string::npos) throw ParseError("labelled sequent needs '|-'", 0);
  auto parse_side = [&](const std::string& part, size_t base) {
    std::vector<MetaAtom> out;
    size_t i = 0;
    // split at top-level commas
    std::vector<std::string> items;
    int depth = 0;
    std::string cur;
    for (char ch : part) {
      if (ch == '(') depth++;
      if (ch == ')') depth--;
      if (ch == ',' && depth == 0) {
        items.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    items.push_back(cur);
    (void)i;
    for (auto& raw : items) {
      std::string item = raw;
      // trim
      size_t a = item.find_first_not_of(" \t");
      size_t b = item.find_last_not_of(" \t");
      if (a == std::string::npos) continue;
      item = item.substr(a, b - a + 1);
      auto colon = item.find(':');
      // relation atom: "w R u"
      auto isident = [](const std::string& s) {
        if (s.empty()) return false;
        for (char ch : s)
          if (!std::isalnum((unsigned char)ch) && ch != '_') return false;
        return true;
      };
      if (colon == std::string::npos) {
        std::istringstream is(item);
        std::string w, r, u;
        is >> w >> r >> u;
        if (!isident(w) || !isident(r) || !isident(u) || r != "R")
          throw ParseError("expected 'world: formula' or 'w R u' in: " + item, base);
        out.push_back(MetaAtom::relation("R", {w, u}));
        continue;
      }
      std::string w = item.substr(0, colon);
      size_t wa = w.find_first_not_of(" \t");
      size_t wb = w.find_last_not_of(" \t");
      w = w.substr(wa, wb - wa + 1);
      if (!isident(w)) throw ParseError("bad world name '" + w + "'", base);
      out.push_back(MetaAtom::sat(w, parse_formula(item.substr(colon + 1), alphabet)));
    }
    return out;
  };
  LSeq s;
  s.left = parse_side(text.substr(0, bar), 0);
  s.right = parse_side(text.substr(bar + 2), bar + 2);
  return s;
}

std::string print_lproof(const LProof& t, int indent) {
  std::string out(indent * 2, ' ');
  out += print_lseq(t->seq) + "   [" + t->rule + "]\n";
  for (auto& k : t->kids) out += print_lproof(k, indent + 1);
  return out;
}

namespace {

struct Bind {
  std::map<std::string, std::string> w;
  std::map<std::string, FormulaPtr> f;
};

bool match_form(const FormulaPtr& pat, const FormulaPtr& g, Bind& b) {
  if (pat->atom && upper_var(pat->sym)) {
    auto it = b.f.find(pat->sym);
    if (it != b.f.end()) return formula_eq(it->second, g);
    b.f[pat->sym] = g;
    return true;
  }
  if (pat->atom) return g->atom && g->sym == pat->sym;
  if (g->atom || g->sym != pat->sym || g->kids.size() != pat->kids.size()) return false;
  for (size_t i = 0; i < pat->kids.size(); i++)
    if (!match_form(pat->kids[i], g->kids[i], b)) return false;
  return true;
}

bool match_world(const std::string& pat, const std::string& g, Bind& b) {
  auto it = b.w.find(pat);
  if (it != b.w.end()) return it->second == g;
  b.w[pat] = g;
  return true;
}

bool match_atom(const MetaAtom& pat, const MetaAtom& g, Bind& b) {
  if (pat.kind != g.kind) return false;
  if (pat.kind == MetaAtom::Bot) return true;
  if (pat.kind == MetaAtom::Sat)
    return match_world(pat.world, g.world, b) && match_form(pat.form, g.form, b);
  if (pat.rel != g.rel || pat.args.size() != g.args.size()) return false;
  for (size_t i = 0; i < pat.args.size(); i++)
    if (!match_world(pat.args[i], g.args[i], b)) return false;
  return true;
}

MetaAtom inst_atom(const MetaAtom& pat, const Bind& b) {
  MetaAtom out = pat;
  if (pat.kind == MetaAtom::Sat) {
    auto it = b.w.find(pat.world);
    out.world = it == b.w.end() ? pat.world : it->second;
    std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> FormulaPtr {
      if (f->atom && upper_var(f->sym)) {
        auto jt = b.f.find(f->sym);
        if (jt == b.f.end()) throw std::logic_error("unbound formula variable " + f->sym);
        return jt->second;
      }
      if (f->atom) return f;
      std::vector<FormulaPtr> kids;
      for (auto& k : f->kids) kids.push_back(go(k));
      return Formula::mk_op(f->sym, std::move(kids));
    };
    out.form = go(pat.form);
  } else if (pat.kind == MetaAtom::Rel) {
    for (auto& a : out.args) {
      auto it = b.w.find(a);
      if (it != b.w.end()) a = it->second;
    }
  }
  return out;
}

std::string lseq_key(const LSeq& s) {
  std::vector<std::string> l, r;
  for (auto& a : s.left) l.push_back(print_matom(a));
  for (auto& a : s.right) r.push_back(print_matom(a));
  std::sort(l.begin(), l.end());
  std::sort(r.begin(), r.end());
  std::string k;
  for (auto& x : l) k += x + "&";
  k += "|-";
  for (auto& x : r) k += x + "&";
  return k;
}

// multiset capped at 2 copies per atom
void cap_side(std::vector<MetaAtom>& v) {
  std::vector<MetaAtom> out;
  std::map<std::string, int> seen;
  for (auto& a : v) {
    int& n = seen[print_matom(a)];
    if (n < 2) out.push_back(a);
    n++;
  }
  v = out;
}

struct LabelledProver {
  const LabelledCalculus& calc;
  int fresh_counter = 0;
  long fuel = 0;

  std::set<std::string> worlds_of(const LSeq& s) {
    std::set<std::string> out;
    for (auto& a : s.left) {
      if (a.kind == MetaAtom::Sat) out.insert(a.world);
      for (auto& x : a.args) out.insert(x);
    }
    for (auto& a : s.right) {
      if (a.kind == MetaAtom::Sat) out.insert(a.world);
      for (auto& x : a.args) out.insert(x);
    }
    return out;
  }

  std::optional<LProof> prove(const LSeq& goal, int depth) {
    std::set<std::string> seen;
    return go(goal, depth, seen);
  }

  LProof leaf(const LSeq& s, const std::string& rule) {
    auto n = std::make_shared<LProofNode>();
    n->seq = s;
    n->rule = rule;
    return n;
  }

  std::optional<LProof> go(const LSeq& s0, int depth, std::set<std::string>& seen) {
    if (++fuel > 3000000) return std::nullopt;
    LSeq s = s0;
    cap_side(s.left);
    cap_side(s.right);

    // taut and bot close immediately
    for (auto& a : s.left) {
      if (a.kind == MetaAtom::Bot) return leaf(s, "bot");
      for (auto& b : s.right)
        if (matom_eq(a, b)) return leaf(s, calc.explicit_contraction ? "taut" : "ax");
    }
    // axiom rules (premiss-free)
    for (auto& r : calc.rules) {
      if (r.structural || !r.premisses.empty()) continue;
      for (auto& b : s.right) {
        Bind bind;
        if (!r.concl_right.empty() && match_atom(r.concl_right[0], b, bind)) return leaf(s, r.name);
      }
    }
    if (depth <= 0) return std::nullopt;
    std::string key = lseq_key(s);
    if (seen.count(key)) return std::nullopt;
    seen.insert(key);
    auto done = [&](std::optional<LProof> r) {
      seen.erase(key);
      return r;
    };

    for (auto& r : calc.rules) {
      if (r.structural || r.premisses.empty()) continue;
      // enumerate matches of the conclusion patterns
      std::vector<Bind> binds;
      match_concl(r, s, binds);
      for (auto& b0 : binds) {
        // ground remaining instantiation variables over the sequent's worlds
        std::vector<Bind> grounded{b0};
        for (auto& v : r.inst) {
          if (grounded[0].w.count(v)) continue;
          std::vector<Bind> next;
          for (auto& w : worlds_of(s))
            for (auto& g : grounded) {
              Bind g2 = g;
              g2.w[v] = w;
              next.push_back(g2);
            }
          grounded = next;
        }
        for (auto& g : grounded) {
          Bind bind = g;
          for (auto& v : r.fresh) bind.w[v] = "w" + std::to_string(++fresh_counter);
          auto sub = apply(r, s, bind);
          if (!sub) continue;
          std::vector<LProof> kids;
          bool ok = true;
          for (auto& p : *sub) {
            auto d = go(p, depth - 1, seen);
            if (!d) {
              ok = false;
              break;
            }
            kids.push_back(*d);
          }
          if (ok) {
            auto n = std::make_shared<LProofNode>();
            n->seq = s;
            n->rule = r.name;
            n->kids = std::move(kids);
            return done(LProof(n));
          }
        }
      }
    }
    return done(std::nullopt);
  }

  void match_concl(const SynRule& r, const LSeq& s, std::vector<Bind>& out) {
    // backtracking over which sequent atoms realize the conclusion patterns
    std::function<void(size_t, Bind, std::set<size_t>, std::set<size_t>)> go2 =
        [&](size_t pi, Bind b, std::set<size_t> usedl, std::set<size_t> usedr) {
          size_t nl = r.concl_left.size();
          if (pi < nl) {
            for (size_t i = 0; i < s.left.size(); i++) {
              if (usedl.count(i)) continue;
              Bind b2 = b;
              if (!match_atom(r.concl_left[pi], s.left[i], b2)) continue;
              auto u2 = usedl;
              u2.insert(i);
              go2(pi + 1, b2, u2, usedr);
            }
            return;
          }
          if (pi < nl + r.concl_right.size()) {
            size_t k = pi - nl;
            for (size_t i = 0; i < s.right.size(); i++) {
              if (usedr.count(i)) continue;
              Bind b2 = b;
              if (!match_atom(r.concl_right[k], s.right[i], b2)) continue;
              auto u2 = usedr;
              u2.insert(i);
              go2(pi + 1, b2, usedl, u2);
            }
            return;
          }
          out.push_back(b);
        };
    go2(0, Bind{}, {}, {});
  }

  // nullopt when a premiss mentions an unbound formula variable
  std::optional<std::vector<LSeq>> apply(const SynRule& r, const LSeq& s, const Bind& b) {
    // remove one occurrence of each principal unless contraction is explicit
    LSeq base = s;
    if (!calc.explicit_contraction) {
      for (auto& pat : r.concl_left) {
        MetaAtom g = inst_atom(pat, b);
        for (auto it = base.left.begin(); it != base.left.end(); ++it)
          if (matom_eq(*it, g)) {
            base.left.erase(it);
            break;
          }
      }
      for (auto& pat : r.concl_right) {
        MetaAtom g = inst_atom(pat, b);
        for (auto it = base.right.begin(); it != base.right.end(); ++it)
          if (matom_eq(*it, g)) {
            base.right.erase(it);
            break;
          }
      }
    }
    std::vector<LSeq> out;
    try {
      if (r.shift) {
        const std::string from = b.w.at(r.shift_from), to = b.w.at(r.shift_to);
        // the principal leaves the succedent entirely in a shift rule
        LSeq shifted;
        MetaAtom principal = inst_atom(r.concl_right[0], b);
        for (auto& a : s.left) {
          MetaAtom m = a;
          if (m.kind == MetaAtom::Sat && m.world == from) m.world = to;
          shifted.left.push_back(m);
        }
        for (auto& pa : r.premisses[0].left) shifted.left.push_back(inst_atom(pa, b));
        for (auto& pa : r.premisses[0].right) shifted.right.push_back(inst_atom(pa, b));
        out.push_back(shifted);
        return out;
      }
      for (auto& p : r.premisses) {
        LSeq prem = base;
        for (auto& pa : p.left) prem.left.push_back(inst_atom(pa, b));
        for (auto& pa : p.right) prem.right.push_back(inst_atom(pa, b));
        out.push_back(prem);
      }
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
    return out;
  }
};

}  // namespace

std::optional<LProof> prove_labelled(const LabelledCalculus& c, const LSeq& goal, int depth) {
  LabelledProver p{c};
  return p.prove(goal, depth);
}

std::vector<std::vector<LSeq>> labelled_rule_instances(const LabelledCalculus& c,
                                                       const std::string& rule,
                                                       const LSeq& concl) {
  std::vector<std::vector<LSeq>> out;
  LabelledProver p{c};
  for (auto& r : c.rules) {
    if (r.name != rule || r.structural) continue;
    std::vector<Bind> binds;
    p.match_concl(r, concl, binds);
    for (auto& b0 : binds) {
      std::vector<Bind> grounded{b0};
      for (auto& v : r.inst) {
        if (grounded[0].w.count(v)) continue;
        std::vector<Bind> next;
        for (auto& w : p.worlds_of(concl))
          for (auto& g : grounded) {
            Bind g2 = g;
            g2.w[v] = w;
            next.push_back(g2);
          }
        grounded = next;
      }
      for (auto& g : grounded) {
        Bind bind = g;
        for (auto& v : r.fresh) bind.w[v] = "w" + std::to_string(++p.fresh_counter);
        auto sub = p.apply(r, concl, bind);
        if (sub) out.push_back(*sub);
      }
    }
  }
  return out;
}

std::string lseq_canonical_key(const LSeq& s, const LSeq& concl) {
  // rename worlds that do not occur in the conclusion to e1, e2, ... in
  // order of first appearance
  std::set<std::string> known;
  auto scan = [&](const LSeq& q, auto&& fn) {
    for (auto& a : q.left) {
      if (a.kind == MetaAtom::Sat) fn(a.world);
      for (auto& x : a.args) fn(x);
    }
    for (auto& a : q.right) {
      if (a.kind == MetaAtom::Sat) fn(a.world);
      for (auto& x : a.args) fn(x);
    }
  };
  scan(concl, [&](const std::string& w) { known.insert(w); });
  std::map<std::string, std::string> ren;
  int n = 0;
  scan(s, [&](const std::string& w) {
    if (!known.count(w) && !ren.count(w)) ren[w] = "e" + std::to_string(++n);
  });
  LSeq t = s;
  auto fix = [&](std::string& w) {
    auto it = ren.find(w);
    if (it != ren.end()) w = it->second;
  };
  for (auto& a : t.left) {
    fix(a.world);
    for (auto& x : a.args) fix(x);
  }
  for (auto& a : t.right) {
    fix(a.world);
    for (auto& x : a.args) fix(x);
  }
  return lseq_key(t);
}

// ---------------------------------------------------------------------------
// Propositional encoding

namespace {

DatumPtr ctx_datum(const std::vector<MetaAtom>& atoms, const char* ctx, Datum::Kind k,
                   bool with_ctx) {
  std::vector<DatumPtr> kids;
  if (with_ctx) kids.push_back(Datum::mk_leaf(Formula::mk_atom(ctx)));
  for (auto& a : atoms) kids.push_back(Datum::mk_leaf(a.form));
  if (kids.size() == 1) return kids[0];
  return Datum::mk(k, std::move(kids));
}

}  // namespace

std::vector<ObjRule> propositional_encoding(const LabelledCalculus& c) {
  std::vector<ObjRule> out;
  // the base rules encode to the object axiom and structural contraction
  {
    ObjRule ax;
    ax.name = c.explicit_contraction ? "taut" : "ax";
    auto A = Formula::mk_atom("A");
    ax.conclusion = {Datum::mk(Datum::Comma, {Datum::mk_leaf(A), Datum::mk_leaf(Formula::mk_atom("G"))}),
                     Datum::mk(Datum::Semi, {Datum::mk_leaf(Formula::mk_atom("D")), Datum::mk_leaf(A)})};
    out.push_back(ax);
    if (c.explicit_contraction) {
      ObjRule cl;
      cl.name = "c";
      cl.structural = true;
      auto F = Formula::mk_atom("A");
      cl.conclusion = {Datum::mk(Datum::Comma, {Datum::mk_leaf(F), Datum::mk_leaf(Formula::mk_atom("G"))}),
                       Datum::mk_leaf(Formula::mk_atom("D"))};
      cl.premisses = {{Datum::mk(Datum::Comma, {Datum::mk_leaf(F), Datum::mk_leaf(F),
                                                Datum::mk_leaf(Formula::mk_atom("G"))}),
                       Datum::mk_leaf(Formula::mk_atom("D"))}};
      out.push_back(cl);
    }
  }
  for (auto& r0 : c.rules) {
    Renamer rn;
    SynRule r = r0;
    for (auto& a : r.concl_left) a = rn.atom(a);
    for (auto& a : r.concl_right) a = rn.atom(a);
    for (auto& p : r.premisses) {
      for (auto& a : p.left) a = rn.atom(a);
      for (auto& a : p.right) a = rn.atom(a);
    }
    // basic: satisfaction atoms only
    auto check = [&](const std::vector<MetaAtom>& v) {
      for (auto& a : v)
        if (a.kind != MetaAtom::Sat) throw NonBasicRule(r.name);
    };
    check(r.concl_left);
    check(r.concl_right);
    for (auto& p : r.premisses) {
      check(p.left);
      check(p.right);
    }
    ObjRule obj;
    obj.name = r.name;
    obj.structural = r.structural;
    obj.conclusion = {ctx_datum(r.concl_left, "G", Datum::Comma, true),
                      ctx_datum(r.concl_right, "D", Datum::Semi, true)};
    if (r.name == "e") {
      obj.premisses = {{Datum::mk_leaf(Formula::mk_atom("G'")),
                        Datum::mk_leaf(Formula::mk_atom("D'"))}};
      obj.conclusion = {Datum::mk_leaf(Formula::mk_atom("G")), Datum::mk_leaf(Formula::mk_atom("D"))};
      out.push_back(obj);
      continue;
    }
    for (auto& p : r.premisses) {
      if (r.shift) {
        // the premiss lives wholly at the new world; the succedent becomes
        // exactly the listed atoms
        obj.premisses.push_back(
            {ctx_datum(p.left, "G", Datum::Comma, true), ctx_datum(p.right, "D", Datum::Semi, false)});
      } else {
        obj.premisses.push_back(
            {ctx_datum(p.left, "G", Datum::Comma, true), ctx_datum(p.right, "D", Datum::Semi, true)});
      }
    }
    out.push_back(obj);
  }
  return out;
}

std::string print_obj_rules(const std::vector<ObjRule>& rules) {
  std::string out;
  for (auto& r : rules) {
    out += r.name + ": " + print_sequent(r.conclusion) + "  <==  ";
    if (r.premisses.empty()) {
      out += "(axiom)";
    } else {
      for (size_t i = 0; i < r.premisses.size(); i++) {
        if (i) out += "  |  ";
        out += print_sequent(r.premisses[i]);
      }
    }
    out += "\n";
  }
  return out;
}

// shift rules drop the succedent context: render D as the exact atom list
// (empty meaning the empty succedent)

std::optional<std::vector<std::vector<MetaAtom>>> check_world_independence_partition(
    const std::vector<MetaAtom>& pi, const std::vector<MetaAtom>& sigma) {
  std::vector<MetaAtom> all = pi;
  all.insert(all.end(), sigma.begin(), sigma.end());
  size_t n = all.size();
  std::vector<int> parent(n);
  for (size_t i = 0; i < n; i++) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  auto worlds = [](const MetaAtom& a) {
    std::vector<std::string> ws;
    if (a.kind == MetaAtom::Sat) ws.push_back(a.world);
    for (auto& x : a.args) ws.push_back(x);
    return ws;
  };
  for (size_t i = 0; i < n; i++)
    for (size_t j = i + 1; j < n; j++) {
      auto wi = worlds(all[i]), wj = worlds(all[j]);
      for (auto& a : wi)
        for (auto& b : wj)
          if (a == b) unite((int)i, (int)j);
    }
  std::map<int, std::vector<MetaAtom>> groups;
  for (size_t i = 0; i < n; i++) groups[find((int)i)].push_back(all[i]);
  if (groups.size() <= 1) return std::nullopt;
  std::vector<std::vector<MetaAtom>> out;
  for (auto& [k, v] : groups) out.push_back(v);
  return out;
}

}  // namespace ck
