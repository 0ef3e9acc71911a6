#ifndef CK_SWEEP_HPP
#define CK_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ck/formula.hpp"

// Corpus sweep kernels. Each has a serial path (jobs <= 1) and an OpenMP
// path (jobs > 1) that must produce identical results; the bench target
// compares their timings.

namespace ck {

struct AgreementResult {
  long total = 0;
  long agree = 0;
  std::vector<std::string> mismatches;  // printed formulas, capped
  double seconds = 0;
};

// prove_ipl (LK+(+)B) against ipl_decide on each formula as a goal |- f.
AgreementResult ipl_agreement_sweep(const std::vector<FormulaPtr>& corpus, int depth, int jobs);

// prove_labelled over the generated RK against k_decide.
AgreementResult k_agreement_sweep(const std::vector<FormulaPtr>& corpus, int depth, int jobs);

// defense in depth: ipl_decide against the small-model countermodel sweep
AgreementResult ipl_oracle_crosscheck(const std::vector<FormulaPtr>& corpus, int max_worlds,
                                      int jobs);

// randomized Boolean-algebra equation checks; returns the number of failures
long boolean_axiom_sweep(long iterations, uint64_t seed, int jobs);

int default_jobs();

}  // namespace ck

#endif
