#include "ck/bi.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace ck {

LD LDatum::mk_leaf(FormulaPtr f, BExpr lab) {
  auto d = std::make_shared<LDatum>();
  d->kind = Datum::Leaf;
  d->leaf = std::move(f);
  d->label = std::move(lab);
  return d;
}

LD LDatum::mk(Datum::Kind k, std::vector<LD> kids, BExpr lab) {
  auto d = std::make_shared<LDatum>();
  d->kind = k;
  d->kids = std::move(kids);
  d->label = std::move(lab);
  return d;
}

DatumPtr strip_labels(const LD& d) {
  if (d->kind == Datum::Leaf) return Datum::mk_leaf(d->leaf);
  std::vector<DatumPtr> kids;
  for (auto& k : d->kids) kids.push_back(strip_labels(k));
  return Datum::mk(d->kind, std::move(kids));
}

std::string print_ldatum(const LD& d, const VarPool& pool) {
  std::string body;
  if (d->kind == Datum::Leaf) {
    body = print_formula(d->leaf);
    if (!d->leaf->atom && d->label) body = "(" + body + ")";
  } else if (d->kids.empty()) {
    body = d->kind == Datum::Semi ? "e+" : "ex";
  } else {
    const char* sep = d->kind == Datum::Semi ? " ; " : " , ";
    std::string inner;
    for (size_t i = 0; i < d->kids.size(); i++) {
      if (i) inner += sep;
      inner += print_ldatum(d->kids[i], pool);
    }
    body = "(" + inner + ")";
  }
  if (d->label) body += "." + print_expr(d->label, pool);
  return body;
}

std::string print_biseq(const BISeq& s, const VarPool& pool) {
  std::string out;
  if (s.ctx->kids.empty()) {
    out = "ex";
  } else {
    for (size_t i = 0; i < s.ctx->kids.size(); i++) {
      if (i) out += " , ";
      out += print_ldatum(s.ctx->kids[i], pool);
    }
  }
  out += " |- " + print_formula(s.goal);
  if (s.goal_label) out += "." + print_expr(s.goal_label, pool);
  return out;
}

ProofPtr ProofNode::mk(Sequent s, std::string r, std::vector<ProofPtr> kids) {
  auto n = std::make_shared<ProofNode>();
  n->seq = std::move(s);
  n->rule = std::move(r);
  n->kids = std::move(kids);
  return n;
}

bool proof_struct_eq(const ProofPtr& a, const ProofPtr& b) {
  if (a->rule != b->rule) return false;
  if (!coherent_equiv(a->seq.antecedent, b->seq.antecedent)) return false;
  if (!coherent_equiv(a->seq.succedent, b->seq.succedent)) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (!proof_struct_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

std::string print_proof(const ProofPtr& t, int indent) {
  std::string out(indent * 2, ' ');
  out += print_sequent(t->seq) + "   [" + t->rule + "]\n";
  for (auto& k : t->kids) out += print_proof(k, indent + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Annotation

int annotation_width(const DatumPtr& b) {
  if (b->kind == Datum::Comma && !b->kids.empty()) {
    int n = 0;
    for (auto& k : b->kids) n += annotation_width(k);
    return n;
  }
  return 1;
}

static LD to_ld(const DatumPtr& d) {
  if (d->kind == Datum::Leaf) return LDatum::mk_leaf(d->leaf, nullptr);
  std::vector<LD> kids;
  for (auto& k : d->kids) kids.push_back(to_ld(k));
  return LDatum::mk(d->kind, std::move(kids), nullptr);
}

LD annotate(const DatumPtr& b, const std::vector<BExpr>& labels) {
  if ((int)labels.size() != annotation_width(b))
    throw std::invalid_argument("annotation: expected " + std::to_string(annotation_width(b)) +
                                " labels, got " + std::to_string(labels.size()));
  if (b->kind == Datum::Comma && !b->kids.empty()) {
    std::vector<LD> kids;
    size_t at = 0;
    for (auto& k : b->kids) {
      size_t w = annotation_width(k);
      std::vector<BExpr> part(labels.begin() + at, labels.begin() + at + w);
      at += w;
      kids.push_back(annotate(k, part));
    }
    // nested comma runs flatten into the top-level positions
    std::vector<LD> flat;
    for (auto& k : kids) {
      if (k->kind == Datum::Comma && !k->label && !k->kids.empty())
        flat.insert(flat.end(), k->kids.begin(), k->kids.end());
      else
        flat.push_back(k);
    }
    return LDatum::mk(Datum::Comma, std::move(flat), nullptr);
  }
  LD unit = to_ld(b);
  auto d = std::make_shared<LDatum>(*unit);
  d->label = labels[0];
  return d;
}

// ---------------------------------------------------------------------------
// Reduction machinery

namespace {

BExpr mul(const BExpr& a, const BExpr& b) {
  if (!a) return b;
  if (!b) return a;
  return bprod(a, b);
}

Cons lab1(const BExpr& e) { return e ? ceq(e, bone()) : nullptr; }
Cons lab0(const BExpr& e) { return ceq(e ? e : bone(), bzero()); }

using LPath = std::vector<int>;

LD ld_at(const LD& d, const LPath& p) {
  LD cur = d;
  for (int i : p) cur = cur->kids.at(i);
  return cur;
}

LD ld_replace(const LD& d, const LPath& p, size_t at, const LD& repl) {
  if (at == p.size()) return repl;
  auto kids = d->kids;
  kids[p[at]] = ld_replace(kids[p[at]], p, at + 1, repl);
  return LDatum::mk(d->kind, std::move(kids), d->label);
}

// merge label-free same-kind children; collapse singleton lists by pushing
// the list label onto the child (the effective label is unchanged)
LD ld_flatten(const LD& d) {
  if (d->kind == Datum::Leaf) return d;
  std::vector<LD> merged;
  for (auto& k0 : d->kids) {
    LD k = ld_flatten(k0);
    if (k->kind == d->kind && !k->label && !k->kids.empty())
      merged.insert(merged.end(), k->kids.begin(), k->kids.end());
    else
      merged.push_back(k);
  }
  if (merged.size() == 1) {
    LD only = merged[0];
    if (!d->label) return only;
    auto n = std::make_shared<LDatum>(*only);
    n->label = only->label ? bprod(d->label, only->label) : d->label;
    return LD(n);
  }
  return LDatum::mk(d->kind, std::move(merged), d->label);
}

LD ensure_comma(const LD& d) {
  LD f = ld_flatten(d);
  if (f->kind == Datum::Comma && !f->label) return f;
  return LDatum::mk(Datum::Comma, {f}, nullptr);
}

struct Visit {
  LPath path;
  LD node;
  BExpr eff;      // product of labels root..node inclusive
  int parent_ix;  // index in visit list of parent, -1 at blocks' parent (root)
};

void walk(const LD& node, LPath& path, const BExpr& prefix, int parent, std::vector<Visit>& out) {
  BExpr eff = mul(prefix, node->label);
  out.push_back({path, node, eff, parent});
  int self = (int)out.size() - 1;
  if (node->kind != Datum::Leaf) {
    for (size_t i = 0; i < node->kids.size(); i++) {
      path.push_back((int)i);
      walk(node->kids[i], path, eff, self, out);
      path.pop_back();
    }
  }
}

struct RuleInst {
  std::string rule;
  std::vector<BISeq> premisses;
  Cons side;  // may be null (trivially true)
};

struct Reducer {
  VarPool& pool;

  BExpr freshv() { return bvar(pool.fresh()); }

  std::vector<RuleInst> instances(const BISeq& s) {
    std::vector<RuleInst> out;
    const auto& blocks = s.ctx->kids;
    const FormulaPtr& g = s.goal;

    auto others_dead = [&](size_t keep) {
      Cons c = nullptr;
      for (size_t j = 0; j < blocks.size(); j++)
        if (j != keep) c = cand(c, lab0(blocks[j]->label));
      return c;
    };

    // axioms
    for (size_t i = 0; i < blocks.size(); i++) {
      if (blocks[i]->kind == Datum::Leaf && formula_eq(blocks[i]->leaf, g))
        out.push_back({"taut", {}, cand(cand(lab1(blocks[i]->label), others_dead(i)), lab1(s.goal_label))});
    }
    for (size_t i = 0; i < blocks.size(); i++) {
      if (blocks[i]->kind == Datum::Leaf && !blocks[i]->leaf->atom && blocks[i]->leaf->sym == "bot")
        out.push_back({"botL", {}, cand(lab1(blocks[i]->label), others_dead(i))});
    }
    if (!g->atom && (g->sym == "mtop" || g->sym == "top")) {
      Datum::Kind want = g->sym == "mtop" ? Datum::Comma : Datum::Semi;
      std::string rule = g->sym == "mtop" ? "mtopR" : "topR";
      for (size_t i = 0; i < blocks.size(); i++) {
        DatumPtr n = normalize(strip_labels(blocks[i]));
        if (n->kind == want && n->kids.empty())
          out.push_back({rule, {}, cand(cand(lab1(blocks[i]->label), others_dead(i)), lab1(s.goal_label))});
      }
      // the conjured unit: everything dies, the unit axiom closes on e+/ex
      Cons all0 = nullptr;
      for (size_t j = 0; j < blocks.size(); j++) all0 = cand(all0, lab0(blocks[j]->label));
      out.push_back({rule, {}, cand(all0, lab1(s.goal_label))});
    }

    auto with_label = [](const LD& b, BExpr lab) {
      auto n = std::make_shared<LDatum>(*b);
      n->label = std::move(lab);
      return LD(n);
    };

    // right rules
    if (!g->atom && g->sym == "*") {
      std::vector<LD> left, right;
      for (auto& b : blocks) {
        BExpr v = freshv();
        left.push_back(with_label(b, mul(b->label, v)));
        right.push_back(with_label(b, mul(b->label, bneg(v))));
      }
      out.push_back({"starR",
                     {{LDatum::mk(Datum::Comma, left, nullptr), g->kids[0], s.goal_label},
                      {LDatum::mk(Datum::Comma, right, nullptr), g->kids[1], s.goal_label}},
                     nullptr});
    }
    if (!g->atom && g->sym == "-*") {
      BExpr e = s.goal_label;
      auto kids = blocks;
      kids.push_back(LDatum::mk_leaf(g->kids[0], e));
      out.push_back({"wandR",
                     {{LDatum::mk(Datum::Comma, kids, nullptr), g->kids[1], e}},
                     lab1(e)});
    }
    if (!g->atom && g->sym == "&") {
      out.push_back({"andR",
                     {{s.ctx, g->kids[0], s.goal_label}, {s.ctx, g->kids[1], s.goal_label}},
                     nullptr});
    }
    if (!g->atom && g->sym == "|") {
      out.push_back({"orR1", {{s.ctx, g->kids[0], s.goal_label}}, nullptr});
      out.push_back({"orR2", {{s.ctx, g->kids[1], s.goal_label}}, nullptr});
    }
    if (!g->atom && g->sym == "->") {
      BExpr e = freshv();
      LD inner = blocks.size() == 1 ? blocks[0] : LDatum::mk(Datum::Comma, blocks, nullptr);
      LD block = LDatum::mk(Datum::Semi, {inner, LDatum::mk_leaf(g->kids[0], e)}, nullptr);
      out.push_back({"impR",
                     {{LDatum::mk(Datum::Comma, {block}, nullptr), g->kids[1], s.goal_label}},
                     ceq(e, bone())});
    }

    // left rules at positions
    std::vector<Visit> vs;
    LPath path;
    walk(s.ctx, path, nullptr, -1, vs);
    for (size_t vi = 1; vi < vs.size(); vi++) {  // skip the root comma itself
      const Visit& v = vs[vi];
      auto rewrite = [&](const LD& repl) {
        return ensure_comma(ld_replace(s.ctx, v.path, 0, repl));
      };
      if (v.node->kind == Datum::Leaf && !v.node->leaf->atom) {
        const std::string& op = v.node->leaf->sym;
        const auto& fk = v.node->leaf->kids;
        BExpr l = v.node->label;
        if (op == "*") {
          LD repl = LDatum::mk(Datum::Comma,
                               {LDatum::mk_leaf(fk[0], l), LDatum::mk_leaf(fk[1], l)}, nullptr);
          out.push_back({"starL", {{rewrite(repl), g, s.goal_label}}, lab1(v.eff)});
        } else if (op == "&") {
          LD repl = LDatum::mk(Datum::Semi,
                               {LDatum::mk_leaf(fk[0], l), LDatum::mk_leaf(fk[1], l)}, nullptr);
          out.push_back({"andL", {{rewrite(repl), g, s.goal_label}}, lab1(v.eff)});
        } else if (op == "mtop") {
          out.push_back({"mtopL", {{rewrite(LDatum::mk(Datum::Comma, {}, l)), g, s.goal_label}},
                         lab1(v.eff)});
        } else if (op == "top") {
          out.push_back({"topL", {{rewrite(LDatum::mk(Datum::Semi, {}, l)), g, s.goal_label}},
                         lab1(v.eff)});
        } else if (op == "|") {
          out.push_back({"orL",
                         {{rewrite(LDatum::mk_leaf(fk[0], l)), g, s.goal_label},
                          {rewrite(LDatum::mk_leaf(fk[1], l)), g, s.goal_label}},
                         lab1(v.eff)});
        } else if (op == "->") {
          // additive siblings form the shared part
          LD delta;
          if (v.parent_ix >= 0 && vs[v.parent_ix].node->kind == Datum::Semi) {
            std::vector<LD> sibs;
            const LD& par = vs[v.parent_ix].node;
            for (size_t i = 0; i < par->kids.size(); i++)
              if ((int)i != v.path.back()) sibs.push_back(par->kids[i]);
            delta = sibs.empty()   ? LDatum::mk(Datum::Semi, {}, nullptr)
                    : sibs.size() == 1 ? sibs[0]
                                       : LDatum::mk(Datum::Semi, sibs, nullptr);
          } else {
            delta = LDatum::mk(Datum::Semi, {}, nullptr);  // e+
          }
          out.push_back({"impL",
                         {{ensure_comma(delta), fk[0], nullptr},
                          {rewrite(LDatum::mk_leaf(fk[1], l)), g, s.goal_label}},
                         lab1(v.eff)});
        } else if (op == "-*") {
          // multiplicative siblings of the principal
          int par_ix = v.parent_ix;
          const LD par = par_ix < 0 ? s.ctx : vs[par_ix].node;
          if (par->kind == Datum::Comma) {
            int me = v.path.back();
            std::vector<LD> lifted, kept;
            for (size_t i = 0; i < par->kids.size(); i++) {
              if ((int)i == me) continue;
              BExpr vv = freshv();
              lifted.push_back(with_label(par->kids[i], mul(par->kids[i]->label, vv)));
              kept.push_back(with_label(par->kids[i], mul(par->kids[i]->label, bneg(vv))));
            }
            kept.insert(kept.begin() + std::min<size_t>(me, kept.size()),
                        LDatum::mk_leaf(fk[1], v.node->label));
            LD newpar = LDatum::mk(Datum::Comma, kept, par->label);
            LPath parent_path(v.path.begin(), v.path.end() - 1);
            out.push_back({"wandL",
                           {{LDatum::mk(Datum::Comma, lifted, nullptr), fk[0], v.eff},
                            {ensure_comma(ld_replace(s.ctx, parent_path, 0, newpar)), g,
                             s.goal_label}},
                           lab1(v.eff)});
          }
        }
      }
    }

    // weakening: drop a child of an additive node / empty out a top block
    for (size_t vi = 1; vi < vs.size(); vi++) {
      const Visit& v = vs[vi];
      if (v.node->kind == Datum::Semi && v.node->kids.size() >= 2) {
        for (size_t i = 0; i < v.node->kids.size(); i++) {
          auto kids = v.node->kids;
          kids.erase(kids.begin() + i);
          LD repl = LDatum::mk(Datum::Semi, std::move(kids), v.node->label);
          out.push_back({"w", {{ensure_comma(ld_replace(s.ctx, v.path, 0, repl)), g, s.goal_label}},
                         lab1(v.eff)});
        }
      }
    }
    for (size_t i = 0; i < blocks.size(); i++) {
      bool already_unit = blocks[i]->kind != Datum::Leaf && blocks[i]->kids.empty();
      if (already_unit) continue;
      LD repl = LDatum::mk(Datum::Semi, {}, blocks[i]->label);
      LPath p{(int)i};
      out.push_back({"w", {{ensure_comma(ld_replace(s.ctx, p, 0, repl)), g, s.goal_label}},
                     lab1(blocks[i]->label)});
    }

    // contraction: duplicate additively; only shapes that can feed later rules
    for (size_t vi = 1; vi < vs.size(); vi++) {
      const Visit& v = vs[vi];
      bool useful = (v.node->kind == Datum::Leaf && !v.node->leaf->atom) ||
                    (v.node->kind == Datum::Semi && !v.node->kids.empty());
      if (!useful) continue;
      LD repl = LDatum::mk(Datum::Semi, {v.node, v.node}, nullptr);
      out.push_back({"c", {{ensure_comma(ld_replace(s.ctx, v.path, 0, repl)), g, s.goal_label}},
                     lab1(v.eff)});
    }

    return out;
  }

  bool gen(const BISeq& s, int depth, const std::function<bool(const BIRedPtr&)>& emit) {
    if (depth <= 0) return true;
    auto insts = instances(s);
    for (auto& inst : insts) {
      std::vector<BIRedPtr> acc;
      if (!gen_premisses(s, inst, 0, depth, acc, emit)) return false;
    }
    return true;
  }

  bool gen_premisses(const BISeq& s, const RuleInst& inst, size_t i, int depth,
                     std::vector<BIRedPtr>& acc, const std::function<bool(const BIRedPtr&)>& emit) {
    if (i == inst.premisses.size()) {
      auto node = std::make_shared<BIRed>();
      node->seq = s;
      node->rule = inst.rule;
      node->kids = acc;
      if (inst.side) {
        auto leaf = std::make_shared<BIRed>();
        leaf->is_constraint = true;
        leaf->constraint = inst.side;
        node->kids.push_back(leaf);
      }
      return emit(node);
    }
    return gen(inst.premisses[i], depth - 1, [&](const BIRedPtr& sub) {
      acc.push_back(sub);
      bool cont = gen_premisses(s, inst, i + 1, depth, acc, emit);
      acc.pop_back();
      return cont;
    });
  }
};

}  // namespace

void reduce_lbib(const Sequent& goal, int depth, VarPool& pool,
                 const std::function<bool(const BIRedPtr&)>& sink) {
  if (goal.succedent->kind != Datum::Leaf)
    throw std::invalid_argument("LBI goal succedent must be a single formula");
  int w = annotation_width(goal.antecedent);
  std::vector<BExpr> ones(w, bone());
  LD ctx = ensure_comma(annotate(goal.antecedent, ones));
  // an antecedent that is just ex annotates to a unit block; the bare comma
  // node is the same bunch with no block to distribute
  BISeq root{ctx, goal.succedent->leaf, nullptr};
  Reducer r{pool};
  r.gen(root, depth, sink);
}

static void collect_sides(const BIRedPtr& r, std::vector<Cons>& out, bool& open) {
  if (r->is_constraint) {
    if (r->constraint) out.push_back(r->constraint);
    return;
  }
  if (r->rule.empty()) {
    open = true;
    return;
  }
  for (auto& k : r->kids) collect_sides(k, out, open);
}

std::vector<Cons> side_conditions(const BIRedPtr& r) {
  std::vector<Cons> out;
  bool open = false;
  collect_sides(r, out, open);
  return out;
}

std::optional<Interpretation> coherence(const BIRedPtr& r, const VarPool& pool) {
  std::vector<Cons> cs;
  bool open = false;
  collect_sides(r, cs, open);
  if (open) throw OpenLeafError();
  return solve(cs, pool);
}

// ---------------------------------------------------------------------------
// Valuation

namespace {

// erased subtrees come back as nullptr
DatumPtr vdat(const LD& d, const Interpretation& I, const VarPool& pool) {
  if (d->label && eval_expr(d->label, I, pool) == 0) return nullptr;
  if (d->kind == Datum::Leaf) return Datum::mk_leaf(d->leaf);
  std::vector<DatumPtr> kids;
  for (auto& k : d->kids) {
    DatumPtr v = vdat(k, I, pool);
    if (v) kids.push_back(v);
  }
  return Datum::mk(d->kind, std::move(kids));
}

Sequent vseq(const BISeq& s, const Interpretation& I, const VarPool& pool) {
  DatumPtr a = vdat(s.ctx, I, pool);
  if (!a) a = Datum::unit_mult();
  return Sequent{a, Datum::mk_leaf(s.goal)};
}

ProofPtr val_node(const BIRedPtr& r, const Interpretation& I, const VarPool& pool) {
  Sequent concl = vseq(r->seq, I, pool);
  std::vector<ProofPtr> kids;
  std::vector<const BIRed*> seq_kids;
  for (auto& k : r->kids) {
    if (k->is_constraint) continue;
    seq_kids.push_back(k.get());
    kids.push_back(val_node(k, I, pool));
  }
  if (kids.size() == 1) {
    const Sequent& kid = kids[0]->seq;
    if (coherent_equiv(concl.antecedent, kid.antecedent) &&
        coherent_equiv(concl.succedent, kid.succedent))
      return kids[0];  // trivialized inference
  }
  return ProofNode::mk(concl, r->rule, std::move(kids));
}

}  // namespace

ProofPtr valuate(const BIRedPtr& r, const Interpretation& I, const VarPool& pool) {
  std::vector<Cons> cs;
  bool open = false;
  collect_sides(r, cs, open);
  if (open) throw OpenLeafError();
  for (auto& c : cs)
    if (!eval_constraint(c, I, pool))
      throw std::invalid_argument("interpretation does not satisfy the side-conditions");
  return val_node(r, I, pool);
}

// ---------------------------------------------------------------------------
// LBI proof checking

namespace {

std::vector<Path> leaf_positions(const DatumPtr& d, const std::string& op) {
  std::vector<Path> out;
  Path p;
  std::function<void(const DatumPtr&)> go = [&](const DatumPtr& n) {
    if (n->kind == Datum::Leaf) {
      if (!n->leaf->atom && n->leaf->sym == op) out.push_back(p);
      return;
    }
    for (size_t i = 0; i < n->kids.size(); i++) {
      p.push_back((int)i);
      go(n->kids[i]);
      p.pop_back();
    }
  };
  go(d);
  return out;
}

std::vector<Path> all_positions(const DatumPtr& d) {
  std::vector<Path> out;
  Path p;
  std::function<void(const DatumPtr&)> go = [&](const DatumPtr& n) {
    out.push_back(p);
    if (n->kind == Datum::Leaf) return;
    for (size_t i = 0; i < n->kids.size(); i++) {
      p.push_back((int)i);
      go(n->kids[i]);
      p.pop_back();
    }
  };
  go(d);
  return out;
}

bool is_formula(const DatumPtr& d, const char* op) {
  return d->kind == Datum::Leaf && !d->leaf->atom && d->leaf->sym == op;
}

DatumPtr comma_of(const std::vector<DatumPtr>& v) {
  if (v.size() == 1) return v[0];
  return Datum::mk(Datum::Comma, v);
}

DatumPtr semi_of(const std::vector<DatumPtr>& v) {
  if (v.size() == 1) return v[0];
  return Datum::mk(Datum::Semi, v);
}

// top-level multiplicative blocks of a (normalized) bunch
std::vector<DatumPtr> top_blocks(const DatumPtr& ante) {
  DatumPtr n = normalize(ante);
  if (n->kind == Datum::Comma) return n->kids;
  return {n};
}

struct Check {
  std::string* diag;
  bool fail(const std::string& m, const Sequent& at) {
    if (diag) *diag = m + " at: " + print_sequent(at);
    return false;
  }

  bool node(const ProofPtr& t) {
    const Sequent& s = t->seq;
    if (s.succedent->kind != Datum::Leaf) return fail("succedent is not a formula", s);
    const FormulaPtr g = s.succedent->leaf;
    const std::string& r = t->rule;
    auto kid = [&](size_t i) -> const Sequent& { return t->kids[i]->seq; };
    auto arity = [&](size_t n) { return t->kids.size() == n; };

    if (r == "taut")
      return arity(0) && normalize(s.antecedent)->kind == Datum::Leaf &&
                     formula_eq(normalize(s.antecedent)->leaf, g)
                 ? true
                 : arity(0) ? fail("taut shape", s) : fail("taut has premisses", s);
    if (r == "botL") {
      if (!arity(0)) return fail("botL has premisses", s);
      return leaf_positions(s.antecedent, "bot").empty() ? fail("botL: no bottom", s) : true;
    }
    if (r == "mtopR") {
      DatumPtr n = normalize(s.antecedent);
      return arity(0) && is_formula(s.succedent, "mtop") && n->kind == Datum::Comma &&
                     n->kids.empty()
                 ? true
                 : fail("mtopR shape", s);
    }
    if (r == "topR") {
      DatumPtr n = normalize(s.antecedent);
      return arity(0) && is_formula(s.succedent, "top") && n->kind == Datum::Semi && n->kids.empty()
                 ? true
                 : fail("topR shape", s);
    }

    if (r == "starR") {
      if (!arity(2) || g->atom || g->sym != "*") return fail("starR shape", s);
      if (!formula_eq(kid(0).succedent->leaf, g->kids[0]) ||
          !formula_eq(kid(1).succedent->leaf, g->kids[1]))
        return fail("starR premiss goals", s);
      DatumPtr joined = Datum::mk(Datum::Comma, {kid(0).antecedent, kid(1).antecedent});
      if (!coherent_equiv(joined, s.antecedent)) return fail("starR context split", s);
      return rec(t);
    }
    if (r == "wandR") {
      if (!arity(1) || g->atom || g->sym != "-*") return fail("wandR shape", s);
      DatumPtr want = Datum::mk(Datum::Comma, {s.antecedent, Datum::mk_leaf(g->kids[0])});
      if (!coherent_equiv(want, kid(0).antecedent) ||
          !formula_eq(kid(0).succedent->leaf, g->kids[1]))
        return fail("wandR premiss", s);
      return rec(t);
    }
    if (r == "andR") {
      if (!arity(2) || g->atom || g->sym != "&") return fail("andR shape", s);
      if (!coherent_equiv(kid(0).antecedent, s.antecedent) ||
          !coherent_equiv(kid(1).antecedent, s.antecedent))
        return fail("andR contexts", s);
      if (!formula_eq(kid(0).succedent->leaf, g->kids[0]) ||
          !formula_eq(kid(1).succedent->leaf, g->kids[1]))
        return fail("andR premiss goals", s);
      return rec(t);
    }
    if (r == "orR1" || r == "orR2") {
      if (!arity(1) || g->atom || g->sym != "|") return fail("orR shape", s);
      FormulaPtr want = g->kids[r == "orR1" ? 0 : 1];
      if (!coherent_equiv(kid(0).antecedent, s.antecedent) ||
          !formula_eq(kid(0).succedent->leaf, want))
        return fail("orR premiss", s);
      return rec(t);
    }
    if (r == "impR") {
      if (!arity(1) || g->atom || g->sym != "->") return fail("impR shape", s);
      DatumPtr want = Datum::mk(Datum::Semi, {s.antecedent, Datum::mk_leaf(g->kids[0])});
      if (!coherent_equiv(want, kid(0).antecedent) ||
          !formula_eq(kid(0).succedent->leaf, g->kids[1]))
        return fail("impR premiss", s);
      return rec(t);
    }

    auto rewrite_matches = [&](const std::string& op,
                               const std::function<DatumPtr(const FormulaPtr&)>& repl,
                               const Sequent& prem) {
      for (auto& p : leaf_positions(s.antecedent, op)) {
        DatumPtr f = subbunch_at(s.antecedent, p);
        if (coherent_equiv(replace_subbunch(s.antecedent, p, repl(f->leaf)), prem.antecedent))
          return true;
      }
      return false;
    };

    if (r == "starL" || r == "andL") {
      const char* op = r == "starL" ? "*" : "&";
      Datum::Kind k = r == "starL" ? Datum::Comma : Datum::Semi;
      if (!arity(1) || !formula_eq(kid(0).succedent->leaf, g)) return fail(r + " premiss goal", s);
      bool ok = rewrite_matches(op,
                                [&](const FormulaPtr& f) {
                                  return Datum::mk(k, {Datum::mk_leaf(f->kids[0]),
                                                       Datum::mk_leaf(f->kids[1])});
                                },
                                kid(0));
      return ok ? rec(t) : fail(r + " position", s);
    }
    if (r == "mtopL" || r == "topL") {
      const char* op = r == "mtopL" ? "mtop" : "top";
      DatumPtr unit = r == "mtopL" ? Datum::unit_mult() : Datum::unit_add();
      if (!arity(1) || !formula_eq(kid(0).succedent->leaf, g)) return fail(r + " premiss goal", s);
      bool ok = rewrite_matches(op, [&](const FormulaPtr&) { return unit; }, kid(0));
      return ok ? rec(t) : fail(r + " position", s);
    }
    if (r == "orL") {
      if (!arity(2)) return fail("orL arity", s);
      if (!formula_eq(kid(0).succedent->leaf, g) || !formula_eq(kid(1).succedent->leaf, g))
        return fail("orL premiss goals", s);
      for (auto& p : leaf_positions(s.antecedent, "|")) {
        DatumPtr f = subbunch_at(s.antecedent, p);
        if (coherent_equiv(replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[0])),
                           kid(0).antecedent) &&
            coherent_equiv(replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[1])),
                           kid(1).antecedent))
          return rec(t);
      }
      return fail("orL position", s);
    }
    if (r == "impL") {
      if (!arity(2) || !formula_eq(kid(1).succedent->leaf, g)) return fail("impL shape", s);
      for (auto& p : leaf_positions(s.antecedent, "->")) {
        DatumPtr f = subbunch_at(s.antecedent, p);
        if (!formula_eq(Datum::mk_leaf(f->leaf->kids[0])->leaf, kid(0).succedent->leaf)) continue;
        if (!coherent_equiv(replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[1])),
                            kid(1).antecedent))
          continue;
        // premiss one must be the additive company of the implication
        std::vector<DatumPtr> sibs;
        if (!p.empty()) {
          Path parent(p.begin(), p.end() - 1);
          DatumPtr par = subbunch_at(s.antecedent, parent);
          if (par->kind == Datum::Semi)
            for (size_t i = 0; i < par->kids.size(); i++)
              if ((int)i != p.back()) sibs.push_back(par->kids[i]);
        }
        // any sub-multiset of the additive siblings is a legal delta
        size_t n = sibs.size();
        for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
          std::vector<DatumPtr> delta;
          for (size_t i = 0; i < n; i++)
            if (mask & (size_t(1) << i)) delta.push_back(sibs[i]);
          DatumPtr d = delta.empty() ? Datum::unit_add() : semi_of(delta);
          if (coherent_equiv(d, kid(0).antecedent)) return rec(t);
        }
      }
      return fail("impL position", s);
    }
    if (r == "wandL") {
      if (!arity(2) || !formula_eq(kid(1).succedent->leaf, g)) return fail("wandL shape", s);
      for (auto& p : leaf_positions(s.antecedent, "-*")) {
        DatumPtr f = subbunch_at(s.antecedent, p);
        if (!formula_eq(f->leaf->kids[0], kid(0).succedent->leaf)) continue;
        std::vector<DatumPtr> sibs;
        Path parent;
        bool parent_comma = false;
        if (!p.empty()) {
          parent = Path(p.begin(), p.end() - 1);
          DatumPtr par = subbunch_at(s.antecedent, parent);
          parent_comma = par->kind == Datum::Comma;
          if (parent_comma)
            for (size_t i = 0; i < par->kids.size(); i++)
              if ((int)i != p.back()) sibs.push_back(par->kids[i]);
        }
        if (p.empty()) {  // the whole antecedent is the implication
          if (coherent_equiv(kid(0).antecedent, Datum::unit_mult()) &&
              coherent_equiv(kid(1).antecedent, Datum::mk_leaf(f->leaf->kids[1])))
            return rec(t);
          continue;
        }
        if (!parent_comma) continue;
        size_t n = sibs.size();
        for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
          std::vector<DatumPtr> give, keep;
          for (size_t i = 0; i < n; i++)
            (mask & (size_t(1) << i) ? give : keep).push_back(sibs[i]);
          keep.push_back(Datum::mk_leaf(f->leaf->kids[1]));
          DatumPtr newpar = comma_of(keep);
          if (coherent_equiv(give.empty() ? Datum::unit_mult() : comma_of(give),
                             kid(0).antecedent) &&
              coherent_equiv(replace_subbunch(s.antecedent, parent, newpar), kid(1).antecedent))
            return rec(t);
        }
      }
      return fail("wandL position", s);
    }
    if (r == "w") {
      if (!arity(1) || !formula_eq(kid(0).succedent->leaf, g)) return fail("w premiss goal", s);
      for (auto& p : all_positions(s.antecedent)) {
        if (coherent_equiv(replace_subbunch(s.antecedent, p, Datum::unit_add()),
                           kid(0).antecedent))
          return rec(t);
      }
      return fail("w position", s);
    }
    if (r == "c") {
      if (!arity(1) || !formula_eq(kid(0).succedent->leaf, g)) return fail("c premiss goal", s);
      for (auto& p : all_positions(s.antecedent)) {
        DatumPtr n = subbunch_at(s.antecedent, p);
        if (coherent_equiv(replace_subbunch(s.antecedent, p, Datum::mk(Datum::Semi, {n, n})),
                           kid(0).antecedent))
          return rec(t);
      }
      return fail("c position", s);
    }
    if (r == "e") {
      if (!arity(1)) return fail("e arity", s);
      if (coherent_equiv(kid(0).antecedent, s.antecedent) &&
          coherent_equiv(kid(0).succedent, s.succedent))
        return rec(t);
      return fail("e not an equivalence", s);
    }
    return fail("unknown rule '" + r + "'", s);
  }

  bool rec(const ProofPtr& t) {
    for (auto& k : t->kids)
      if (!node(k)) return false;
    return true;
  }
};

}  // namespace

bool check_lbi_proof(const ProofPtr& t, std::string* diag) {
  if (t->rule.empty()) {
    if (diag) *diag = "open leaf at: " + print_sequent(t->seq);
    return false;
  }
  Check c{diag};
  return c.node(t);
}

std::optional<BIResult> prove_bi(const Sequent& goal, int depth, VarPool& pool) {
  std::optional<BIResult> found;
  reduce_lbib(goal, depth, pool, [&](const BIRedPtr& r) {
    auto sol = coherence(r, pool);
    if (!sol) return true;
    found = BIResult{r, *sol, valuate(r, *sol, pool)};
    return false;
  });
  return found;
}

std::optional<BIResult> prove_bi(const Sequent& goal, int depth) {
  VarPool pool;
  return prove_bi(goal, depth, pool);
}

// ---------------------------------------------------------------------------
// Direct LBI search (bounded, naive)

namespace {

struct LBISearch {
  int fuel_guard = 0;

  std::optional<ProofPtr> prove(const Sequent& s, int depth, std::set<std::string>& seen) {
    if (++fuel_guard > 2000000) return std::nullopt;
    if (s.succedent->kind != Datum::Leaf) return std::nullopt;
    const FormulaPtr g = s.succedent->leaf;
    DatumPtr norm = normalize(s.antecedent);

    // axioms
    if (norm->kind == Datum::Leaf && formula_eq(norm->leaf, g))
      return ProofNode::mk(s, "taut", {});
    if (!leaf_positions(s.antecedent, "bot").empty()) return ProofNode::mk(s, "botL", {});
    if (is_formula(s.succedent, "mtop") && norm->kind == Datum::Comma && norm->kids.empty())
      return ProofNode::mk(s, "mtopR", {});
    if (is_formula(s.succedent, "top") && norm->kind == Datum::Semi && norm->kids.empty())
      return ProofNode::mk(s, "topR", {});

    if (depth <= 0) return std::nullopt;
    std::string key = print_datum(norm) + "|-" + print_formula(g);
    if (seen.count(key)) return std::nullopt;
    seen.insert(key);
    auto done = [&](std::optional<ProofPtr> r) {
      seen.erase(key);
      return r;
    };

    auto sub = [&](const Sequent& p) { return prove(p, depth - 1, seen); };

    // right rules
    if (!g->atom && g->sym == "*") {
      std::vector<DatumPtr> blocks = top_blocks(s.antecedent);
      size_t n = blocks.size();
      for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
        std::vector<DatumPtr> a, b;
        for (size_t i = 0; i < n; i++) (mask & (size_t(1) << i) ? a : b).push_back(blocks[i]);
        Sequent p1{a.empty() ? Datum::unit_mult() : comma_of(a), Datum::mk_leaf(g->kids[0])};
        Sequent p2{b.empty() ? Datum::unit_mult() : comma_of(b), Datum::mk_leaf(g->kids[1])};
        auto d1 = sub(p1);
        if (!d1) continue;
        auto d2 = sub(p2);
        if (!d2) continue;
        return done(ProofNode::mk(s, "starR", {*d1, *d2}));
      }
    }
    if (!g->atom && g->sym == "-*") {
      Sequent p{Datum::mk(Datum::Comma, {s.antecedent, Datum::mk_leaf(g->kids[0])}),
                Datum::mk_leaf(g->kids[1])};
      if (auto d = sub(p)) return done(ProofNode::mk(s, "wandR", {*d}));
    }
    if (!g->atom && g->sym == "&") {
      auto d1 = sub({s.antecedent, Datum::mk_leaf(g->kids[0])});
      if (d1) {
        auto d2 = sub({s.antecedent, Datum::mk_leaf(g->kids[1])});
        if (d2) return done(ProofNode::mk(s, "andR", {*d1, *d2}));
      }
    }
    if (!g->atom && g->sym == "|") {
      if (auto d = sub({s.antecedent, Datum::mk_leaf(g->kids[0])}))
        return done(ProofNode::mk(s, "orR1", {*d}));
      if (auto d = sub({s.antecedent, Datum::mk_leaf(g->kids[1])}))
        return done(ProofNode::mk(s, "orR2", {*d}));
    }
    if (!g->atom && g->sym == "->") {
      Sequent p{Datum::mk(Datum::Semi, {s.antecedent, Datum::mk_leaf(g->kids[0])}),
                Datum::mk_leaf(g->kids[1])};
      if (auto d = sub(p)) return done(ProofNode::mk(s, "impR", {*d}));
    }

    // left logical
    for (auto& [op, kind] : {std::pair<const char*, Datum::Kind>{"*", Datum::Comma},
                             {"&", Datum::Semi}}) {
      for (auto& p : leaf_positions(s.antecedent, op)) {
        DatumPtr f = subbunch_at(s.antecedent, p);
        DatumPtr repl =
            Datum::mk(kind, {Datum::mk_leaf(f->leaf->kids[0]), Datum::mk_leaf(f->leaf->kids[1])});
        if (auto d = sub({replace_subbunch(s.antecedent, p, repl), s.succedent}))
          return done(ProofNode::mk(s, op[0] == '*' ? "starL" : "andL", {*d}));
      }
    }
    for (auto& [op, unit] : {std::pair<const char*, DatumPtr>{"mtop", Datum::unit_mult()},
                             {"top", Datum::unit_add()}}) {
      for (auto& p : leaf_positions(s.antecedent, op)) {
        if (auto d = sub({replace_subbunch(s.antecedent, p, unit), s.succedent}))
          return done(ProofNode::mk(s, op[0] == 'm' ? "mtopL" : "topL", {*d}));
      }
    }
    for (auto& p : leaf_positions(s.antecedent, "|")) {
      DatumPtr f = subbunch_at(s.antecedent, p);
      auto d1 = sub({replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[0])),
                     s.succedent});
      if (!d1) continue;
      auto d2 = sub({replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[1])),
                     s.succedent});
      if (!d2) continue;
      return done(ProofNode::mk(s, "orL", {*d1, *d2}));
    }
    for (auto& p : leaf_positions(s.antecedent, "->")) {
      DatumPtr f = subbunch_at(s.antecedent, p);
      std::vector<DatumPtr> sibs;
      if (!p.empty()) {
        Path parent(p.begin(), p.end() - 1);
        DatumPtr par = subbunch_at(s.antecedent, parent);
        if (par->kind == Datum::Semi)
          for (size_t i = 0; i < par->kids.size(); i++)
            if ((int)i != p.back()) sibs.push_back(par->kids[i]);
      }
      DatumPtr delta = sibs.empty() ? Datum::unit_add() : semi_of(sibs);
      auto d1 = sub({delta, Datum::mk_leaf(f->leaf->kids[0])});
      if (!d1) continue;
      auto d2 = sub({replace_subbunch(s.antecedent, p, Datum::mk_leaf(f->leaf->kids[1])),
                     s.succedent});
      if (!d2) continue;
      return done(ProofNode::mk(s, "impL", {*d1, *d2}));
    }
    for (auto& p : leaf_positions(s.antecedent, "-*")) {
      DatumPtr f = subbunch_at(s.antecedent, p);
      std::vector<DatumPtr> sibs;
      Path parent;
      if (p.empty()) {
        auto d1 = sub({Datum::unit_mult(), Datum::mk_leaf(f->leaf->kids[0])});
        if (d1) {
          auto d2 = sub({Datum::mk_leaf(f->leaf->kids[1]), s.succedent});
          if (d2) return done(ProofNode::mk(s, "wandL", {*d1, *d2}));
        }
        continue;
      }
      parent = Path(p.begin(), p.end() - 1);
      DatumPtr par = subbunch_at(s.antecedent, parent);
      if (par->kind != Datum::Comma) continue;
      for (size_t i = 0; i < par->kids.size(); i++)
        if ((int)i != p.back()) sibs.push_back(par->kids[i]);
      size_t n = sibs.size();
      for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
        std::vector<DatumPtr> give, keep;
        for (size_t i = 0; i < n; i++)
          (mask & (size_t(1) << i) ? give : keep).push_back(sibs[i]);
        keep.push_back(Datum::mk_leaf(f->leaf->kids[1]));
        auto d1 = sub({give.empty() ? Datum::unit_mult() : comma_of(give),
                       Datum::mk_leaf(f->leaf->kids[0])});
        if (!d1) continue;
        auto d2 = sub({replace_subbunch(s.antecedent, parent, comma_of(keep)), s.succedent});
        if (!d2) continue;
        return done(ProofNode::mk(s, "wandL", {*d1, *d2}));
      }
    }

    // structural
    for (auto& p : all_positions(s.antecedent)) {
      if (p.empty()) continue;
      DatumPtr reduced = replace_subbunch(s.antecedent, p, Datum::unit_add());
      if (coherent_equiv(reduced, s.antecedent)) continue;
      if (auto d = sub({reduced, s.succedent})) return done(ProofNode::mk(s, "w", {*d}));
    }
    for (auto& p : all_positions(s.antecedent)) {
      DatumPtr n = subbunch_at(s.antecedent, p);
      bool useful = (n->kind == Datum::Leaf && !n->leaf->atom) ||
                    (n->kind == Datum::Semi && !n->kids.empty());
      if (!useful) continue;
      DatumPtr doubled = replace_subbunch(s.antecedent, p, Datum::mk(Datum::Semi, {n, n}));
      if (auto d = sub({doubled, s.succedent})) return done(ProofNode::mk(s, "c", {*d}));
    }
    return done(std::nullopt);
  }
};

}  // namespace

std::optional<ProofPtr> lbi_search(const Sequent& goal, int depth) {
  LBISearch srch;
  std::set<std::string> seen;
  return srch.prove(goal, depth, seen);
}

}  // namespace ck
