#ifndef CK_META_HPP
#define CK_META_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ck/bi.hpp"
#include "ck/formula.hpp"

// The meta-logic pipeline: polarized meta-formulae, tractability, synthetic
// rule generation by generic hereditary reduction in G3c, relational-calculus
// emission (with RK, RJ, RJ+ built in), labelled proving, propositional
// encoding of basic calculi, and the theory file format.
//
// Meta-atoms are satisfaction atoms (x: phi), relation atoms x R y (or
// generic predicates A(x), including nullary A), and meta-absurdity. Formula
// slots are object-formula trees in which capitalized atoms act as
// meta-variables; lowercase identifiers in world positions are
// world-variables in patterns and world constants in ground sequents.

namespace ck {

struct MetaAtom {
  enum Kind { Sat, Rel, Bot } kind = Sat;
  std::string world;              // Sat
  FormulaPtr form;                // Sat
  std::string rel;                // Rel
  std::vector<std::string> args;  // Rel world arguments (arity >= 0)

  static MetaAtom sat(std::string w, FormulaPtr f);
  static MetaAtom relation(std::string r, std::vector<std::string> args);
  static MetaAtom bot();
};

bool matom_eq(const MetaAtom& a, const MetaAtom& b);
std::string print_matom(const MetaAtom& a);

struct MetaF;
using MetaFPtr = std::shared_ptr<const MetaF>;
struct MetaF {
  enum Kind { Atom, MBot, And, Or, Imp, Forall, Exists } kind = Atom;
  MetaAtom atom;     // Atom
  MetaFPtr a, b;     // And / Or / Imp
  std::string var;   // Forall / Exists (uppercase = formula var, else world var)
  MetaFPtr body;

  static MetaFPtr mk_atom(MetaAtom a);
  static MetaFPtr mk_bot();
  static MetaFPtr mk(Kind k, MetaFPtr a, MetaFPtr b);
  static MetaFPtr quant(Kind k, std::string var, MetaFPtr body);
};

std::string print_metaf(const MetaFPtr& f);

// Polarity machinery
int polarity_alternations(const MetaFPtr& f);
bool polarity_positive(const MetaFPtr& f);
bool polarity_negative(const MetaFPtr& f);

struct NonPolarizable : std::runtime_error {
  explicit NonPolarizable(const std::string& s)
      : std::runtime_error("meta-formula fits neither polarity: " + s) {}
};

bool is_tractable(const MetaFPtr& f);

// Sequent patterns: listed atoms plus the implicit generic Pi |- Sigma.
struct MetaSeqPat {
  std::vector<MetaAtom> left, right;
};

struct SynRule {
  std::string name;
  std::vector<MetaAtom> concl_left, concl_right;
  std::vector<MetaSeqPat> premisses;
  std::vector<std::string> fresh;  // eigenvariable worlds
  std::vector<std::string> inst;   // must-occur instantiated worlds
  bool structural = false;         // c / e / wL / wR markers
  // world-shift rules (RJ+ impR, negR): the premiss is the pattern plus the
  // remaining antecedent with shift_from renamed to shift_to; the succedent
  // context is dropped
  bool shift = false;
  std::string shift_from, shift_to;
};

struct LabelledCalculus {
  std::string name;
  bool explicit_contraction = false;  // carries the structural left c rule
  std::vector<SynRule> rules;         // logical/frame rules; taut and bot axioms implicit
};

std::string print_rule(const SynRule& r);
std::string print_calculus(const LabelledCalculus& c);

// Theory files: line-oriented s-expressions, e.g.
//   (clause (iff (sat w (and A B)) (mand (sat w A) (sat w B))))
//   (axiom (rel R w w))
//   (clause (imp (rel R w u) (forall F (imp (sat w F) (sat u F)))))
// An optional symbol before the formula names the clause.
struct TheoryClause {
  std::string name;
  MetaFPtr formula;
};
struct TractableTheory {
  std::string name;
  std::vector<TheoryClause> clauses;  // iff-clauses are already split in two
};

TractableTheory parse_theory(const std::string& text, const std::string& name = "theory");
TractableTheory builtin_k_theory();
TractableTheory builtin_ipl_theory();

struct NotTractable : std::runtime_error {
  explicit NotTractable(const std::string& clause)
      : std::runtime_error("theory clause is not tractable: " + clause) {}
};

// Generic hereditary reduction of one tractable clause in left position;
// returns the raw synthetic rule (conclusion bare, premisses = the leaves).
SynRule synthesize_rule(const MetaFPtr& clause, const std::string& name = "clause");

// The explicit G3c reduction tree for the round-trip check.
struct G3cNode {
  MetaSeqPat seq;   // added atoms over the generic Pi |- Sigma
  std::string rule;
  std::vector<std::shared_ptr<const G3cNode>> kids;
};
using G3cTree = std::shared_ptr<const G3cNode>;
G3cTree g3c_hereditary_reduction(const MetaFPtr& clause);
std::vector<MetaSeqPat> g3c_leaves(const G3cTree& t);

// G3c(Omega) with Omega suppressed; simplify applies forward/back-chaining.
LabelledCalculus generate_relational_calculus(const TractableTheory& omega, bool simplify);

LabelledCalculus builtin_rk();      // = simplified K theory output
LabelledCalculus builtin_rj();      // = simplified IPL theory output
LabelledCalculus builtin_rjplus();  // RJ with pers/ref absorbed; world-shift impR/negR

// ---------------------------------------------------------------------------
// Labelled sequents and proving

struct LSeq {
  std::vector<MetaAtom> left, right;  // ground atoms
};

std::string print_lseq(const LSeq& s);
LSeq parse_lseq(const std::string& text, const Alphabet& alphabet);  // "w: p & q |- w: p"

struct LProofNode;
using LProof = std::shared_ptr<const LProofNode>;
struct LProofNode {
  LSeq seq;
  std::string rule;
  std::vector<LProof> kids;
};
std::string print_lproof(const LProof& t, int indent = 0);

std::optional<LProof> prove_labelled(const LabelledCalculus& c, const LSeq& goal, int depth);

// every premiss-list obtainable by applying the named rule to this
// conclusion (used by the document checker to replay one step)
std::vector<std::vector<LSeq>> labelled_rule_instances(const LabelledCalculus& c,
                                                       const std::string& rule, const LSeq& concl);

// sorted-key rendering with eigenvariables canonicalized relative to the
// conclusion's worlds
std::string lseq_canonical_key(const LSeq& s, const LSeq& concl);

// Propositional encoding of a basic calculus; throws NonBasicRule naming the
// offending rule otherwise.
struct NonBasicRule : std::runtime_error {
  explicit NonBasicRule(const std::string& r) : std::runtime_error("rule is not basic: " + r) {}
};
struct ObjRule {
  std::string name;
  std::vector<Sequent> premisses;
  Sequent conclusion;
  bool structural = false;
};
std::vector<ObjRule> propositional_encoding(const LabelledCalculus& c);
std::string print_obj_rules(const std::vector<ObjRule>& rules);

// Connected components of shared world variables; nullopt when everything is
// one component (no partition).
std::optional<std::vector<std::vector<MetaAtom>>> check_world_independence_partition(
    const std::vector<MetaAtom>& pi, const std::vector<MetaAtom>& sigma);

}  // namespace ck

#endif
