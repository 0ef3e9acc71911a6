#include "ck/sweep.hpp"

#include <chrono>
#include <functional>
#include <random>

#ifdef CK_HAVE_OPENMP
#include <omp.h>
#endif

#include "ck/boolalg.hpp"
#include "ck/ipl.hpp"
#include "ck/meta.hpp"
#include "ck/oracles.hpp"

namespace ck {

int default_jobs() {
#ifdef CK_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// shared driver: per-item verdicts computed serially or in parallel, then a
// deterministic reduction
AgreementResult drive(const std::vector<FormulaPtr>& corpus, int jobs,
                      const std::function<bool(const FormulaPtr&)>& agree_fn) {
  AgreementResult res;
  res.total = (long)corpus.size();
  std::vector<char> ok(corpus.size(), 0);
  double t0 = now_s();
  if (jobs <= 1) {
    for (size_t i = 0; i < corpus.size(); i++) ok[i] = agree_fn(corpus[i]) ? 1 : 0;
  } else {
#ifdef CK_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs)
    for (long i = 0; i < (long)corpus.size(); i++) ok[i] = agree_fn(corpus[i]) ? 1 : 0;
#else
    for (size_t i = 0; i < corpus.size(); i++) ok[i] = agree_fn(corpus[i]) ? 1 : 0;
#endif
  }
  res.seconds = now_s() - t0;
  for (size_t i = 0; i < corpus.size(); i++) {
    if (ok[i])
      res.agree++;
    else if (res.mismatches.size() < 25)
      res.mismatches.push_back(print_formula(corpus[i]));
  }
  return res;
}

}  // namespace

AgreementResult ipl_agreement_sweep(const std::vector<FormulaPtr>& corpus, int depth, int jobs) {
  return drive(corpus, jobs, [depth](const FormulaPtr& f) {
    Sequent goal{Datum::unit_mult(), Datum::mk_leaf(f)};
    bool proved = prove_ipl(goal, depth).has_value();
    bool valid = ipl_decide_formula(f);
    return proved == valid;
  });
}

AgreementResult k_agreement_sweep(const std::vector<FormulaPtr>& corpus, int depth, int jobs) {
  static const LabelledCalculus rk = builtin_rk();
  return drive(corpus, jobs, [depth](const FormulaPtr& f) {
    LSeq goal;
    goal.right.push_back(MetaAtom::sat("w", f));
    bool proved = prove_labelled(rk, goal, depth).has_value();
    bool valid = k_decide(f);
    return proved == valid;
  });
}

AgreementResult ipl_oracle_crosscheck(const std::vector<FormulaPtr>& corpus, int max_worlds,
                                      int jobs) {
  return drive(corpus, jobs, [max_worlds](const FormulaPtr& f) {
    Sequent goal{Datum::unit_mult(), Datum::mk_leaf(f)};
    return ipl_decide_formula(f) == ipl_sweep_valid(goal, max_worlds);
  });
}

long boolean_axiom_sweep(long iterations, uint64_t seed, int jobs) {
  // each iteration draws three expressions and an interpretation and checks
  // the ten algebra equations; iterations are independent with per-index rngs
  auto run_one = [seed](long idx) -> long {
    std::mt19937_64 rng(seed + (uint64_t)idx * 0x9E3779B97F4A7C15ULL);
    VarPool pool;
    std::vector<int> vars;
    for (int i = 0; i < 5; i++) vars.push_back(pool.fresh());
    std::function<BExpr(int)> gen = [&](int size) -> BExpr {
      if (size <= 1) {
        switch (rng() % 4) {
          case 0: return bzero();
          case 1: return bone();
          default: return bvar(vars[rng() % vars.size()]);
        }
      }
      switch (rng() % 3) {
        case 0: return bneg(gen(size - 1));
        case 1: {
          int ls = 1 + (int)(rng() % (size - 1));
          return bsum(gen(ls), gen(size - ls));
        }
        default: {
          int ls = 1 + (int)(rng() % (size - 1));
          return bprod(gen(ls), gen(size - ls));
        }
      }
    };
    BExpr a = gen(1 + (int)(rng() % 5));
    BExpr b = gen(1 + (int)(rng() % 5));
    BExpr c = gen(1 + (int)(rng() % 5));
    Interpretation I;
    for (int v : vars) I[v] = (int)(rng() % 2);
    auto ev = [&](const BExpr& e) { return eval_expr(e, I, pool); };
    long bad = 0;
    bad += ev(bsum(a, bsum(b, c))) != ev(bsum(bsum(a, b), c));
    bad += ev(bprod(a, bprod(b, c))) != ev(bprod(bprod(a, b), c));
    bad += ev(bsum(a, b)) != ev(bsum(b, a));
    bad += ev(bprod(a, b)) != ev(bprod(b, a));
    bad += ev(bsum(a, bprod(a, b))) != ev(a);
    bad += ev(bprod(a, bsum(a, b))) != ev(a);
    bad += ev(bsum(a, bzero())) != ev(a);
    bad += ev(bprod(a, bone())) != ev(a);
    bad += ev(bsum(a, bprod(b, c))) != ev(bprod(bsum(a, b), bsum(a, c)));
    bad += ev(bprod(a, bsum(b, c))) != ev(bsum(bprod(a, b), bprod(a, c)));
    bad += ev(bsum(a, bneg(a))) != 1;
    bad += ev(bprod(a, bneg(a))) != 0;
    return bad;
  };
  long failures = 0;
  if (jobs <= 1) {
    for (long i = 0; i < iterations; i++) failures += run_one(i);
  } else {
#ifdef CK_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs) reduction(+ : failures)
    for (long i = 0; i < iterations; i++) failures += run_one(i);
#else
    for (long i = 0; i < iterations; i++) failures += run_one(i);
#endif
  }
  return failures;
}

}  // namespace ck
