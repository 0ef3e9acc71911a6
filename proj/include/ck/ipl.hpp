#ifndef CK_IPL_HPP
#define CK_IPL_HPP

#include <functional>
#include <optional>

#include "ck/bi.hpp"
#include "ck/boolalg.hpp"
#include "ck/formula.hpp"

// IPL with classical combinatorics: the constraint system LK+(+)B over
// multiset sequents of labelled formulas, the choice ergo sigma_I, and
// checkers for LJ and LJ+ (Dummett-style multi-succedent).

namespace ck {

struct LabF {
  FormulaPtr f;
  BExpr lab;  // nullptr acts as 1
};

struct IPLSeq {
  std::vector<LabF> left;   // ,-multiset
  std::vector<LabF> right;  // ;-multiset
};

std::string print_iplseq(const IPLSeq& s, const VarPool& pool);

// Lift a parsed object sequent; antecedent must be a ,-shaped datum and the
// succedent a ;-shaped datum (units allowed). Throws on other shapes.
IPLSeq lift_lj_sequent(const Sequent& s);

struct IPLRed;
using IPLRedPtr = std::shared_ptr<const IPLRed>;
struct IPLRed {
  bool is_constraint = false;
  Cons constraint;
  IPLSeq seq;
  std::string rule;  // empty = open leaf
  std::vector<IPLRedPtr> kids;
};

// Enumerates complete LK+(+)B reductions. Depth counts the choice-phase
// applications (impR/negR/impL/negL/orR/cL) per branch; the constraint-free
// invertible saturation (andL/orL/andR) is not charged. With prune_unsat,
// branches whose accumulated side-conditions are already unsatisfiable are
// skipped (they cannot complete into coherent reductions).
void reduce_lkplusb(const Sequent& goal, int depth, VarPool& pool,
                    const std::function<bool(const IPLRedPtr&)>& sink,
                    bool prune_unsat = false);

std::vector<Cons> ipl_side_conditions(const IPLRedPtr& r);

// sigma_I on a single enriched sequent.
Sequent choice_ergo(const IPLSeq& s, const Interpretation& I, const VarPool& pool);

// sigma_I over a whole reduction, rendered as an LJ+ proof: trivialized
// inferences are spliced out and the weakening LJ+ performs at orR splits is
// made explicit.
ProofPtr ljplus_image(const IPLRedPtr& r, const Interpretation& I, const VarPool& pool);

struct IPLResult {
  IPLRedPtr reduction;
  Interpretation interp;
  ProofPtr proof;  // LJ+ proof (the sigma_I image with weakenings explicit)
};

std::optional<IPLResult> prove_ipl(const Sequent& goal, int depth, VarPool& pool);
std::optional<IPLResult> prove_ipl(const Sequent& goal, int depth);

bool check_ljplus_proof(const ProofPtr& t, std::string* diag = nullptr);
bool check_lj_proof(const ProofPtr& t, std::string* diag = nullptr);

}  // namespace ck

#endif
