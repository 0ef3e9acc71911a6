#include "ck/ipl.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace ck {

std::string print_iplseq(const IPLSeq& s, const VarPool& pool) {
  auto part = [&](const std::vector<LabF>& v, const char* sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); i++) {
      if (i) out += sep;
      std::string f = print_formula(v[i].f);
      if (v[i].lab) {
        if (!v[i].f->atom) f = "(" + f + ")";
        f += "." + print_expr(v[i].lab, pool);
      }
      out += f;
    }
    return out;
  };
  std::string l = part(s.left, " , ");
  std::string r = part(s.right, " ; ");
  return (l.empty() ? "ex" : l) + " |- " + (r.empty() ? "e+" : r);
}

static void flatten_side(const DatumPtr& d, Datum::Kind want, std::vector<LabF>& out) {
  if (d->kind == Datum::Leaf) {
    out.push_back({d->leaf, nullptr});
    return;
  }
  if (d->kids.empty()) return;  // either unit reads as the empty multiset
  if (d->kind != want)
    throw std::invalid_argument("LJ sequents take a ,-antecedent and a ;-succedent");
  for (auto& k : d->kids) flatten_side(k, want, out);
}

IPLSeq lift_lj_sequent(const Sequent& s) {
  IPLSeq out;
  flatten_side(s.antecedent, Datum::Comma, out.left);
  flatten_side(s.succedent, Datum::Semi, out.right);
  return out;
}

// ---------------------------------------------------------------------------
// Reduction enumeration

namespace {

BExpr mul(const BExpr& a, const BExpr& b) {
  if (!a) return b;
  if (!b) return a;
  return bprod(a, b);
}

Cons lab1(const BExpr& e) { return e ? ceq(e, bone()) : nullptr; }

bool is_op(const FormulaPtr& f, const char* op) { return !f->atom && f->sym == op; }

struct IPLReducer {
  VarPool& pool;
  bool prune;
  std::vector<Cons> acc;  // constraints along the current enumeration prefix

  bool sat_now() { return !prune || solve(acc, pool).has_value(); }

  IPLRedPtr mknode(const IPLSeq& s, const std::string& rule, std::vector<IPLRedPtr> kids,
                   const Cons& side) {
    auto n = std::make_shared<IPLRed>();
    n->seq = s;
    n->rule = rule;
    n->kids = std::move(kids);
    if (side) {
      auto leaf = std::make_shared<IPLRed>();
      leaf->is_constraint = true;
      leaf->constraint = side;
      n->kids.push_back(leaf);
    }
    return n;
  }

  // saturation phase: the first applicable of andL | orL | negL | andR; these
  // are invertible and emit no constraints, so one fixed instance suffices
  bool gen(const IPLSeq& s, int depth, const std::function<bool(const IPLRedPtr&)>& emit) {
    for (size_t i = 0; i < s.left.size(); i++) {
      const LabF& x = s.left[i];
      if (is_op(x.f, "&")) {
        IPLSeq p = s;
        p.left.erase(p.left.begin() + i);
        p.left.push_back({x.f->kids[0], x.lab});
        p.left.push_back({x.f->kids[1], x.lab});
        return gen1(s, "andL", {p}, nullptr, depth, emit);
      }
      if (is_op(x.f, "|")) {
        IPLSeq p1 = s, p2 = s;
        p1.left.erase(p1.left.begin() + i);
        p2.left.erase(p2.left.begin() + i);
        p1.left.push_back({x.f->kids[0], x.lab});
        p2.left.push_back({x.f->kids[1], x.lab});
        return gen1(s, "orL", {p1, p2}, nullptr, depth, emit);
      }
    }
    for (size_t j = 0; j < s.right.size(); j++) {
      const LabF& x = s.right[j];
      if (is_op(x.f, "&")) {
        IPLSeq p1 = s, p2 = s;
        p1.right[j] = {x.f->kids[0], x.lab};
        p2.right[j] = {x.f->kids[1], x.lab};
        return gen1(s, "andR", {p1, p2}, nullptr, depth, emit);
      }
    }
    return choices(s, depth, emit);
  }

  bool choices(const IPLSeq& s, int depth, const std::function<bool(const IPLRedPtr&)>& emit) {
    // ax over all matching pairs
    for (size_t i = 0; i < s.left.size(); i++)
      for (size_t j = 0; j < s.right.size(); j++) {
        if (!formula_eq(s.left[i].f, s.right[j].f)) continue;
        Cons side = cand(lab1(s.left[i].lab), lab1(s.right[j].lab));
        if (side) {
          acc.push_back(side);
          bool ok = sat_now();
          acc.pop_back();
          if (!ok) continue;
        }
        if (!emit(mknode(s, "ax", {}, side))) return false;
      }
    if (depth <= 0) return true;

    // orR: split x into xy / x~y
    for (size_t j = 0; j < s.right.size(); j++) {
      const LabF& x = s.right[j];
      if (!is_op(x.f, "|")) continue;
      BExpr y = bvar(pool.fresh());
      IPLSeq p = s;
      p.right[j] = {x.f->kids[0], mul(x.lab, y)};
      p.right.insert(p.right.begin() + j + 1, {x.f->kids[1], mul(x.lab, bneg(y))});
      if (!gen1(s, "orR", {p}, nullptr, depth - 1, emit)) return false;
    }
    // impR / negR: xy=1 and the remaining succedent is multiplied by ~y
    for (size_t j = 0; j < s.right.size(); j++) {
      const LabF& x = s.right[j];
      if (!is_op(x.f, "->") && !is_op(x.f, "~")) continue;
      BExpr y = bvar(pool.fresh());
      BExpr ey = mul(x.lab, y);
      IPLSeq p;
      p.left = s.left;
      for (size_t k = 0; k < s.right.size(); k++)
        if (k != j) p.right.push_back({s.right[k].f, mul(s.right[k].lab, bneg(y))});
      std::string rule;
      if (is_op(x.f, "->")) {
        rule = "impR";
        p.left.push_back({x.f->kids[0], ey});
        p.right.push_back({x.f->kids[1], ey});
      } else {
        rule = "negR";
        p.left.push_back({x.f->kids[0], ey});
      }
      Cons side = ceq(ey, bone());
      acc.push_back(side);
      bool cont = true;
      if (sat_now()) cont = gen1(s, rule, {p}, side, depth - 1, emit);
      acc.pop_back();
      if (!cont) return false;
    }
    // negL; the principal is consumed, reuse goes through cL
    for (size_t i = 0; i < s.left.size(); i++) {
      const LabF& x = s.left[i];
      if (!is_op(x.f, "~")) continue;
      IPLSeq p = s;
      p.left.erase(p.left.begin() + i);
      p.right.push_back({x.f->kids[0], x.lab});
      if (!gen1(s, "negL", {p}, nullptr, depth - 1, emit)) return false;
    }
    // impL; the principal is consumed, reuse goes through cL
    for (size_t i = 0; i < s.left.size(); i++) {
      const LabF& x = s.left[i];
      if (!is_op(x.f, "->")) continue;
      IPLSeq p1, p2;
      p1.left = s.left;
      p1.left.erase(p1.left.begin() + i);
      p2.left = p1.left;
      p1.right = s.right;
      p1.right.push_back({x.f->kids[0], x.lab});
      p2.right = s.right;
      p2.left.push_back({x.f->kids[1], x.lab});
      if (!gen1(s, "impL", {p1, p2}, nullptr, depth - 1, emit)) return false;
    }
    // cL, capped at two copies per formula per branch
    for (size_t i = 0; i < s.left.size(); i++) {
      const LabF& x = s.left[i];
      if (!is_op(x.f, "->") && !is_op(x.f, "~")) continue;
      int copies = 0;
      for (auto& o : s.left)
        if (formula_eq(o.f, x.f)) copies++;
      if (copies >= 2) continue;
      IPLSeq p = s;
      p.left.push_back(x);
      if (!gen1(s, "cL", {p}, nullptr, depth - 1, emit)) return false;
    }
    return true;
  }

  bool gen1(const IPLSeq& s, const std::string& rule, const std::vector<IPLSeq>& premisses,
            const Cons& side, int depth, const std::function<bool(const IPLRedPtr&)>& emit) {
    std::vector<IPLRedPtr> acck;
    return genk(s, rule, premisses, side, 0, depth, acck, emit);
  }

  bool genk(const IPLSeq& s, const std::string& rule, const std::vector<IPLSeq>& premisses,
            const Cons& side, size_t i, int depth, std::vector<IPLRedPtr>& acck,
            const std::function<bool(const IPLRedPtr&)>& emit) {
    if (i == premisses.size()) return emit(mknode(s, rule, acck, side));
    return gen(premisses[i], depth, [&](const IPLRedPtr& sub) {
      // carry the finished subtree's constraints so siblings prune early
      size_t mark = acc.size();
      collect(sub);
      bool cont = true;
      if (sat_now()) {
        acck.push_back(sub);
        cont = genk(s, rule, premisses, side, i + 1, depth, acck, emit);
        acck.pop_back();
      }
      acc.resize(mark);
      return cont;
    });
  }

  void collect(const IPLRedPtr& r) {
    if (r->is_constraint) {
      if (r->constraint) acc.push_back(r->constraint);
      return;
    }
    for (auto& k : r->kids) collect(k);
  }
};

}  // namespace

void reduce_lkplusb(const Sequent& goal, int depth, VarPool& pool,
                    const std::function<bool(const IPLRedPtr&)>& sink, bool prune_unsat) {
  IPLSeq root = lift_lj_sequent(goal);
  IPLReducer r{pool, prune_unsat};
  r.gen(root, depth, sink);
}

static void ipl_sides(const IPLRedPtr& r, std::vector<Cons>& out, bool& open) {
  if (r->is_constraint) {
    if (r->constraint) out.push_back(r->constraint);
    return;
  }
  if (r->rule.empty()) open = true;
  for (auto& k : r->kids) ipl_sides(k, out, open);
}

std::vector<Cons> ipl_side_conditions(const IPLRedPtr& r) {
  std::vector<Cons> cs;
  bool open = false;
  ipl_sides(r, cs, open);
  return cs;
}

// ---------------------------------------------------------------------------
// sigma_I and the LJ+ image

namespace {

std::vector<FormulaPtr> live(const std::vector<LabF>& v, const Interpretation& I,
                             const VarPool& pool) {
  std::vector<FormulaPtr> out;
  for (auto& x : v)
    if (!x.lab || eval_expr(x.lab, I, pool) == 1) out.push_back(x.f);
  return out;
}

DatumPtr side_datum(const std::vector<FormulaPtr>& v, Datum::Kind k) {
  if (v.size() == 1) return Datum::mk_leaf(v[0]);
  std::vector<DatumPtr> kids;
  for (auto& f : v) kids.push_back(Datum::mk_leaf(f));
  return Datum::mk(k, std::move(kids));
}

Sequent to_sequent(const std::vector<FormulaPtr>& l, const std::vector<FormulaPtr>& r) {
  return {side_datum(l, Datum::Comma), side_datum(r, Datum::Semi)};
}

bool seq_equiv(const Sequent& a, const Sequent& b) {
  return coherent_equiv(a.antecedent, b.antecedent) && coherent_equiv(a.succedent, b.succedent);
}

struct Imager {
  const Interpretation& I;
  const VarPool& pool;

  Sequent sig(const IPLSeq& s) { return to_sequent(live(s.left, I, pool), live(s.right, I, pool)); }

  ProofPtr image(const IPLRedPtr& r) {
    Sequent concl = sig(r->seq);
    std::vector<IPLRedPtr> seq_kids;
    for (auto& k : r->kids)
      if (!k->is_constraint) seq_kids.push_back(k);

    if (seq_kids.empty()) return ProofNode::mk(concl, r->rule, {});

    // trivialized inferences: every premiss already states the conclusion
    bool all_same = true;
    for (auto& k : seq_kids)
      if (!seq_equiv(sig(k->seq), concl)) all_same = false;
    if (all_same) return image(seq_kids[0]);

    std::vector<ProofPtr> kids;
    for (auto& k : seq_kids) kids.push_back(image(k));

    if (r->rule == "orR") {
      // the split keeps exactly one live disjunct; LJ+'s orR keeps both, so
      // the dropped one is weakened away as an explicit wR step
      std::vector<FormulaPtr> l = live(r->seq.left, I, pool);
      std::vector<FormulaPtr> rr = live(r->seq.right, I, pool);
      FormulaPtr split;
      for (auto& f : rr)
        if (is_op(f, "|")) split = f;  // the principal is live iff the rule did anything
      if (split) {
        std::vector<FormulaPtr> full = rr;
        for (auto it = full.begin(); it != full.end(); ++it)
          if (formula_eq(*it, split)) {
            full.erase(it);
            break;
          }
        full.push_back(split->kids[0]);
        full.push_back(split->kids[1]);
        Sequent wide = to_sequent(l, full);
        if (!seq_equiv(wide, kids[0]->seq)) {
          ProofPtr w = ProofNode::mk(wide, "wR", {kids[0]});
          return ProofNode::mk(concl, "orR", {w});
        }
        return ProofNode::mk(concl, "orR", std::move(kids));
      }
    }
    return ProofNode::mk(concl, r->rule, std::move(kids));
  }
};

}  // namespace

Sequent choice_ergo(const IPLSeq& s, const Interpretation& I, const VarPool& pool) {
  return to_sequent(live(s.left, I, pool), live(s.right, I, pool));
}

ProofPtr ljplus_image(const IPLRedPtr& r, const Interpretation& I, const VarPool& pool) {
  Imager im{I, pool};
  return im.image(r);
}

std::optional<IPLResult> prove_ipl(const Sequent& goal, int depth, VarPool& pool) {
  std::optional<IPLResult> found;
  reduce_lkplusb(
      goal, depth, pool,
      [&](const IPLRedPtr& r) {
        auto cs = ipl_side_conditions(r);
        auto sol = solve(cs, pool);
        if (!sol) return true;
        found = IPLResult{r, *sol, ljplus_image(r, *sol, pool)};
        return false;
      },
      /*prune_unsat=*/true);
  return found;
}

std::optional<IPLResult> prove_ipl(const Sequent& goal, int depth) {
  VarPool pool;
  return prove_ipl(goal, depth, pool);
}

// ---------------------------------------------------------------------------
// LJ+ / LJ proof checking over plain sequents

namespace {

using FVec = std::vector<FormulaPtr>;

void flatten_plain(const DatumPtr& d, FVec& out) {
  if (d->kind == Datum::Leaf) {
    out.push_back(d->leaf);
    return;
  }
  for (auto& k : d->kids) flatten_plain(k, out);
}

FVec side_of(const DatumPtr& d) {
  FVec v;
  flatten_plain(d, v);
  std::sort(v.begin(), v.end(),
            [](const FormulaPtr& a, const FormulaPtr& b) { return formula_cmp(a, b) < 0; });
  return v;
}

bool erase_one(FVec& v, const FormulaPtr& f) {
  for (auto it = v.begin(); it != v.end(); ++it)
    if (formula_eq(*it, f)) {
      v.erase(it);
      return true;
    }
  return false;
}

bool same_ms(FVec a, const FVec& b) {
  if (a.size() != b.size()) return false;
  for (auto& f : b)
    if (!erase_one(a, f)) return false;
  return true;
}

struct LJPlusCheck {
  std::string* diag;
  bool fail(const std::string& m, const Sequent& s) {
    if (diag) *diag = m + " at: " + print_sequent(s);
    return false;
  }

  bool node(const ProofPtr& t) {
    FVec L = side_of(t->seq.antecedent), R = side_of(t->seq.succedent);
    const std::string& r = t->rule;
    auto kidL = [&](size_t i) { return side_of(t->kids[i]->seq.antecedent); };
    auto kidR = [&](size_t i) { return side_of(t->kids[i]->seq.succedent); };
    auto rec = [&]() {
      for (auto& k : t->kids)
        if (!node(k)) return false;
      return true;
    };

    if (r == "ax") {
      if (!t->kids.empty()) return fail("ax has premisses", t->seq);
      for (auto& f : L)
        for (auto& g : R)
          if (formula_eq(f, g)) return true;
      return fail("ax without a shared formula", t->seq);
    }
    if (r == "e") {
      if (t->kids.size() != 1) return fail("e arity", t->seq);
      return same_ms(L, kidL(0)) && same_ms(R, kidR(0)) ? rec() : fail("e shape", t->seq);
    }
    if (r == "wL" || r == "wR" || r == "cL") {
      if (t->kids.size() != 1) return fail(r + " arity", t->seq);
      FVec l = kidL(0), rr = kidR(0);
      if (r == "wL") {
        for (auto& f : L) {
          FVec tmp = L;
          erase_one(tmp, f);
          if (same_ms(tmp, l) && same_ms(R, rr)) return rec();
        }
        return fail("wL shape", t->seq);
      }
      if (r == "wR") {
        for (auto& f : R) {
          FVec tmp = R;
          erase_one(tmp, f);
          if (same_ms(tmp, rr) && same_ms(L, l)) return rec();
        }
        return fail("wR shape", t->seq);
      }
      for (auto& f : L) {
        FVec tmp = L;
        tmp.push_back(f);
        if (same_ms(tmp, l) && same_ms(R, rr)) return rec();
      }
      return fail("cL shape", t->seq);
    }

    auto kids1 = [&]() { return t->kids.size() == 1; };

    if (r == "andL") {
      if (!kids1()) return fail("andL arity", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "&")) continue;
        FVec l = L;
        erase_one(l, f);
        l.push_back(f->kids[0]);
        l.push_back(f->kids[1]);
        if (same_ms(l, kidL(0)) && same_ms(R, kidR(0))) return rec();
      }
      return fail("andL shape", t->seq);
    }
    if (r == "orR") {
      if (!kids1()) return fail("orR arity", t->seq);
      for (auto& f : R) {
        if (!is_op(f, "|")) continue;
        FVec rr = R;
        erase_one(rr, f);
        rr.push_back(f->kids[0]);
        rr.push_back(f->kids[1]);
        if (same_ms(L, kidL(0)) && same_ms(rr, kidR(0))) return rec();
      }
      return fail("orR shape", t->seq);
    }
    if (r == "negL") {
      if (!kids1()) return fail("negL arity", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "~")) continue;
        FVec l = L, rr = R;
        erase_one(l, f);
        rr.push_back(f->kids[0]);
        if (same_ms(l, kidL(0)) && same_ms(rr, kidR(0))) return rec();
      }
      return fail("negL shape", t->seq);
    }
    if (r == "negR") {
      if (!kids1()) return fail("negR arity", t->seq);
      for (auto& f : R) {
        if (!is_op(f, "~")) continue;
        FVec l = L;
        l.push_back(f->kids[0]);
        if (same_ms(l, kidL(0)) && kidR(0).empty()) return rec();
      }
      return fail("negR shape (premiss must be empty-succedent)", t->seq);
    }
    if (r == "impR") {
      if (!kids1()) return fail("impR arity", t->seq);
      for (auto& f : R) {
        if (!is_op(f, "->")) continue;
        FVec l = L;
        l.push_back(f->kids[0]);
        FVec want{f->kids[1]};
        if (same_ms(l, kidL(0)) && same_ms(want, kidR(0))) return rec();
      }
      return fail("impR shape (premiss must be a singleton)", t->seq);
    }
    if (r == "andR" || r == "orL" || r == "impL") {
      if (t->kids.size() != 2) return fail(r + " arity", t->seq);
      if (r == "andR") {
        for (auto& f : R) {
          if (!is_op(f, "&")) continue;
          FVec r1 = R, r2 = R;
          erase_one(r1, f);
          erase_one(r2, f);
          r1.push_back(f->kids[0]);
          r2.push_back(f->kids[1]);
          if (same_ms(L, kidL(0)) && same_ms(L, kidL(1)) && same_ms(r1, kidR(0)) &&
              same_ms(r2, kidR(1)))
            return rec();
        }
        return fail("andR shape", t->seq);
      }
      if (r == "orL") {
        for (auto& f : L) {
          if (!is_op(f, "|")) continue;
          FVec l1 = L, l2 = L;
          erase_one(l1, f);
          erase_one(l2, f);
          l1.push_back(f->kids[0]);
          l2.push_back(f->kids[1]);
          if (same_ms(l1, kidL(0)) && same_ms(l2, kidL(1)) && same_ms(R, kidR(0)) &&
              same_ms(R, kidR(1)))
            return rec();
        }
        return fail("orL shape", t->seq);
      }
      for (auto& f : L) {
        if (!is_op(f, "->")) continue;
        FVec l = L;
        erase_one(l, f);
        FVec r1 = R;
        r1.push_back(f->kids[0]);
        FVec l2 = l;
        l2.push_back(f->kids[1]);
        if (same_ms(l, kidL(0)) && same_ms(r1, kidR(0)) && same_ms(l2, kidL(1)) &&
            same_ms(R, kidR(1)))
          return rec();
      }
      return fail("impL shape", t->seq);
    }
    if (r.empty()) return fail("open leaf", t->seq);
    return fail("unknown LJ+ rule '" + r + "'", t->seq);
  }
};

struct LJCheck {
  std::string* diag;
  bool fail(const std::string& m, const Sequent& s) {
    if (diag) *diag = m + " at: " + print_sequent(s);
    return false;
  }

  static bool succ_of(const Sequent& s, FormulaPtr& out) {
    FVec v = side_of(s.succedent);
    if (v.size() > 1) return false;
    out = v.empty() ? nullptr : v[0];
    return true;
  }

  bool node(const ProofPtr& t) {
    FVec L = side_of(t->seq.antecedent);
    FormulaPtr g;
    if (!succ_of(t->seq, g)) return fail("LJ succedent must be one formula or empty", t->seq);
    const std::string& r = t->rule;
    auto rec = [&]() {
      for (auto& k : t->kids)
        if (!node(k)) return false;
      return true;
    };
    auto kidL = [&](size_t i) { return side_of(t->kids[i]->seq.antecedent); };
    auto kid_succ = [&](size_t i, FormulaPtr& out) { return succ_of(t->kids[i]->seq, out); };
    auto same_g = [&](const FormulaPtr& a, const FormulaPtr& b) {
      return (!a && !b) || (a && b && formula_eq(a, b));
    };

    if (r == "ax")
      return t->kids.empty() && g && L.size() == 1 && formula_eq(L[0], g)
                 ? true
                 : fail("ax shape", t->seq);
    if (r == "wL") {
      if (t->kids.size() != 1) return fail("wL arity", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || !same_g(g, g2)) return fail("wL succedent", t->seq);
      for (auto& f : L) {
        FVec tmp = L;
        erase_one(tmp, f);
        if (same_ms(tmp, kidL(0))) return rec();
      }
      return fail("wL shape", t->seq);
    }
    if (r == "wR") {
      if (t->kids.size() != 1 || !g) return fail("wR shape", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || g2) return fail("wR premiss must be empty-succedent", t->seq);
      return same_ms(L, kidL(0)) ? rec() : fail("wR context", t->seq);
    }
    if (r == "cL") {
      if (t->kids.size() != 1) return fail("cL arity", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || !same_g(g, g2)) return fail("cL succedent", t->seq);
      for (auto& f : L) {
        FVec tmp = L;
        tmp.push_back(f);
        if (same_ms(tmp, kidL(0))) return rec();
      }
      return fail("cL shape", t->seq);
    }
    if (r == "e") {
      if (t->kids.size() != 1) return fail("e arity", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2)) return fail("e succedent", t->seq);
      return same_g(g, g2) && same_ms(L, kidL(0)) ? rec() : fail("e shape", t->seq);
    }
    if (r == "andR") {
      if (t->kids.size() != 2 || !g || !is_op(g, "&")) return fail("andR shape", t->seq);
      FormulaPtr g1, g2;
      if (!kid_succ(0, g1) || !kid_succ(1, g2) || !g1 || !g2) return fail("andR premisses", t->seq);
      return formula_eq(g1, g->kids[0]) && formula_eq(g2, g->kids[1]) && same_ms(L, kidL(0)) &&
                     same_ms(L, kidL(1))
                 ? rec()
                 : fail("andR instance", t->seq);
    }
    if (r == "andL1" || r == "andL2") {
      if (t->kids.size() != 1) return fail("andL arity", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || !same_g(g, g2)) return fail("andL succedent", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "&")) continue;
        FVec tmp = L;
        erase_one(tmp, f);
        tmp.push_back(f->kids[r == "andL1" ? 0 : 1]);
        if (same_ms(tmp, kidL(0))) return rec();
      }
      return fail("andL instance", t->seq);
    }
    if (r == "negR") {
      if (t->kids.size() != 1 || !g || !is_op(g, "~")) return fail("negR shape", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || g2) return fail("negR premiss succedent", t->seq);
      FVec want = L;
      want.push_back(g->kids[0]);
      return same_ms(want, kidL(0)) ? rec() : fail("negR context", t->seq);
    }
    if (r == "negL") {
      if (t->kids.size() != 1 || g) return fail("negL conclusion must be empty-succedent", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "~")) continue;
        FVec tmp = L;
        erase_one(tmp, f);
        FormulaPtr g2;
        if (kid_succ(0, g2) && g2 && formula_eq(g2, f->kids[0]) && same_ms(tmp, kidL(0)))
          return rec();
      }
      return fail("negL instance", t->seq);
    }
    if (r == "orL") {
      if (t->kids.size() != 2) return fail("orL arity", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "|")) continue;
        FVec l1 = L, l2 = L;
        erase_one(l1, f);
        erase_one(l2, f);
        l1.push_back(f->kids[0]);
        l2.push_back(f->kids[1]);
        FormulaPtr g1, g2;
        if (kid_succ(0, g1) && kid_succ(1, g2) && same_g(g, g1) && same_g(g, g2) &&
            same_ms(l1, kidL(0)) && same_ms(l2, kidL(1)))
          return rec();
      }
      return fail("orL instance", t->seq);
    }
    if (r == "orR1" || r == "orR2") {
      if (t->kids.size() != 1 || !g || !is_op(g, "|")) return fail("orR shape", t->seq);
      FormulaPtr g2;
      if (!kid_succ(0, g2) || !g2) return fail("orR premiss", t->seq);
      return formula_eq(g2, g->kids[r == "orR1" ? 0 : 1]) && same_ms(L, kidL(0))
                 ? rec()
                 : fail("orR instance", t->seq);
    }
    if (r == "impR") {
      if (t->kids.size() != 1 || !g || !is_op(g, "->")) return fail("impR shape", t->seq);
      FVec want = L;
      want.push_back(g->kids[0]);
      FormulaPtr g2;
      return kid_succ(0, g2) && g2 && formula_eq(g2, g->kids[1]) && same_ms(want, kidL(0))
                 ? rec()
                 : fail("impR instance", t->seq);
    }
    if (r == "impL") {
      if (t->kids.size() != 2) return fail("impL arity", t->seq);
      for (auto& f : L) {
        if (!is_op(f, "->")) continue;
        FVec rest = L;
        erase_one(rest, f);
        FVec l1 = kidL(0), l2 = kidL(1);
        FormulaPtr g1, g2;
        if (!kid_succ(0, g1) || !g1 || !formula_eq(g1, f->kids[0])) continue;
        if (!kid_succ(1, g2) || !same_g(g, g2)) continue;
        FVec l2_nopsi = l2;
        if (!erase_one(l2_nopsi, f->kids[1])) continue;
        FVec joined = l1;
        joined.insert(joined.end(), l2_nopsi.begin(), l2_nopsi.end());
        if (same_ms(joined, rest)) return rec();
      }
      return fail("impL instance", t->seq);
    }
    if (r.empty()) return fail("open leaf", t->seq);
    return fail("unknown LJ rule '" + r + "'", t->seq);
  }
};

}  // namespace

bool check_ljplus_proof(const ProofPtr& t, std::string* diag) {
  LJPlusCheck c{diag};
  return c.node(t);
}

bool check_lj_proof(const ProofPtr& t, std::string* diag) {
  LJCheck c{diag};
  return c.node(t);
}

}  // namespace ck
