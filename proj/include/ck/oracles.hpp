#ifndef CK_ORACLES_HPP
#define CK_ORACLES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ck/formula.hpp"

// Independent decision procedures used as ground truth: IPL validity by
// exhaustive LJ+ search with a loop check, modal K validity by evaluation
// over the depth-layered universal model family, Kripke model checking, and
// a countermodel sweep over small intuitionistic models.

namespace ck {

struct KripkeModel {
  int n = 0;                                  // worlds 0..n-1
  std::vector<std::vector<bool>> R;           // n x n
  std::map<std::string, std::set<int>> val;   // atom -> worlds
  bool related(int w, int u) const { return R[w][u]; }
};

enum class SatMode { K, IPL };

struct MissingAtom : std::runtime_error {
  explicit MissingAtom(const std::string& a) : std::runtime_error("atom not in valuation: " + a) {}
};

bool model_check(const KripkeModel& M, int w, const FormulaPtr& f, SatMode mode);

// Exhaustive multi-succedent LJ+ search; results are memoized process-wide.
bool ipl_decide(const Sequent& goal);
bool ipl_decide_formula(const FormulaPtr& f);
void ipl_decide_cache_clear();

struct KBoundExceeded : std::runtime_error {
  explicit KBoundExceeded(long bound)
      : std::runtime_error("modal sweep bound exceeded: " + std::to_string(bound) + " worlds") {}
};

// Valid iff no countermodel exists among pointed models up to the modal-depth
// bound; realized over the layered universal family, with an optional
// countermodel dump.
bool k_decide(const FormulaPtr& f, KripkeModel* counter = nullptr, int* world = nullptr);

// Second IPL oracle: countermodel sweep over reflexive-transitive persistent
// models with up to max_worlds worlds.
bool ipl_sweep_valid(const Sequent& goal, int max_worlds = 4, KripkeModel* counter = nullptr,
                     int* world = nullptr);

// Corpus enumeration: all formulas over the given atoms with at most
// max_nodes syntax nodes, operator set fixed per logic.
std::vector<FormulaPtr> enumerate_ipl_formulas(int max_nodes, const std::vector<std::string>& atoms);
std::vector<FormulaPtr> enumerate_modal_formulas(int max_nodes, const std::vector<std::string>& atoms,
                                                 int max_modal_depth);

}  // namespace ck

#endif
