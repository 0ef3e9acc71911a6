#ifndef CK_BI_HPP
#define CK_BI_HPP

#include <functional>
#include <optional>

#include "ck/boolalg.hpp"
#include "ck/formula.hpp"

// Resource distribution via Boolean constraints for BI: the LBI_B constraint
// system, reduction enumeration, coherence, the valuation nu_I, and an LBI
// proof checker. Rule names follow Fig LBI: taut botL topR mtopR topL mtopL
// andL andR orL orR1 orR2 impL impR starL starR wandL wandR w c e.

namespace ck {

// Labelled bunch. A label may sit on any node; the effective label of a node
// is the product of the labels on the path from the root (absent = 1).
struct LDatum;
using LD = std::shared_ptr<const LDatum>;
struct LDatum {
  Datum::Kind kind = Datum::Leaf;
  FormulaPtr leaf;
  std::vector<LD> kids;
  BExpr label;  // nullptr acts as 1

  static LD mk_leaf(FormulaPtr f, BExpr lab);
  static LD mk(Datum::Kind k, std::vector<LD> kids, BExpr lab);
};

DatumPtr strip_labels(const LD& d);
std::string print_ldatum(const LD& d, const VarPool& pool);

// Enriched LBI sequent: labelled context, single labelled goal formula.
struct BISeq {
  LD ctx;  // always a Comma node whose children are the top-level blocks
  FormulaPtr goal;
  BExpr goal_label;  // nullptr acts as 1
};

std::string print_biseq(const BISeq& s, const VarPool& pool);

// Annotation of a bunch by a list of expressions (three-case definition):
// one label per top-level multiplicative position, additive bunches as units.
// Throws std::invalid_argument on length mismatch.
LD annotate(const DatumPtr& b, const std::vector<BExpr>& labels);
int annotation_width(const DatumPtr& b);  // number of labels annotate expects

// Reduction tree: internal nodes are enriched sequents with a rule id; leaves
// are constraints (side-conditions) or open sequents.
struct BIRed;
using BIRedPtr = std::shared_ptr<const BIRed>;
struct BIRed {
  bool is_constraint = false;
  Cons constraint;  // when is_constraint
  BISeq seq;        // otherwise
  std::string rule; // empty = open leaf
  std::vector<BIRedPtr> kids;
};

// Plain proof trees (shared with the other calculi's checkers).
struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;
struct ProofNode {
  Sequent seq;
  std::string rule;
  std::vector<ProofPtr> kids;
  static ProofPtr mk(Sequent s, std::string r, std::vector<ProofPtr> kids);
};

bool proof_struct_eq(const ProofPtr& a, const ProofPtr& b);  // rule + sequents mod ==_coherent
std::string print_proof(const ProofPtr& t, int indent = 0);

// Enumerates complete LBI_B-reductions (all leaves are side-conditions) of
// the 1-annotated goal, depth-first, deterministic order. The sink returns
// false to stop the stream.
void reduce_lbib(const Sequent& goal, int depth, VarPool& pool,
                 const std::function<bool(const BIRedPtr&)>& sink);

std::vector<Cons> side_conditions(const BIRedPtr& r);

struct OpenLeafError : std::runtime_error {
  OpenLeafError() : std::runtime_error("reduction has open sequent leaves") {}
};

// Solves the side-conditions; throws OpenLeafError on incomplete reductions.
std::optional<Interpretation> coherence(const BIRedPtr& r, const VarPool& pool);

// nu_I: keep label-1 material, erase label-0 material to the unit of its
// constructor, delete constraint leaves, collapse trivialized inferences.
// Throws if I is not total on the reduction or does not satisfy it.
ProofPtr valuate(const BIRedPtr& r, const Interpretation& I, const VarPool& pool);

bool check_lbi_proof(const ProofPtr& t, std::string* diag = nullptr);

struct BIResult {
  BIRedPtr reduction;
  Interpretation interp;
  ProofPtr proof;
};

std::optional<BIResult> prove_bi(const Sequent& goal, int depth, VarPool& pool);
std::optional<BIResult> prove_bi(const Sequent& goal, int depth);

// Direct bounded proof search in LBI itself (used as the independent side of
// the adequacy check and as a reference prover in tests).
std::optional<ProofPtr> lbi_search(const Sequent& goal, int depth);

}  // namespace ck

#endif
