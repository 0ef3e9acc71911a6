#ifndef CK_TESTUTIL_HPP
#define CK_TESTUTIL_HPP

#include <cstdlib>
#include <random>
#include <string>

#include "ck/formula.hpp"

// Shared test helpers: seeded RNG (CK_SEED overrides) and random object
// syntax generators.

namespace ckt {

inline uint64_t seed() {
  if (const char* s = std::getenv("CK_SEED")) return std::strtoull(s, nullptr, 10);
  return 0xC0FFEEULL;
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return (int)(rng() % (uint64_t)n); }

// random BI formula over atoms p,q,r
inline ck::FormulaPtr rand_bi_formula(Rng& rng, int size) {
  using ck::Formula;
  static const char* atoms[] = {"p", "q", "r"};
  if (size <= 1) {
    int k = pick(rng, 4);
    if (k == 3) return Formula::mk_op("mtop", {});
    return Formula::mk_atom(atoms[k]);
  }
  static const char* bins[] = {"&", "|", "->", "*", "-*"};
  const char* op = bins[pick(rng, 5)];
  int ls = 1 + pick(rng, size - 1);
  return Formula::mk_op(op, {rand_bi_formula(rng, ls), rand_bi_formula(rng, size - ls)});
}

inline ck::DatumPtr rand_bunch(Rng& rng, int size) {
  using ck::Datum;
  if (size <= 1) {
    int k = pick(rng, 6);
    if (k == 4) return Datum::unit_add();
    if (k == 5) return Datum::unit_mult();
    return Datum::mk_leaf(rand_bi_formula(rng, 1 + pick(rng, 2)));
  }
  Datum::Kind kind = pick(rng, 2) ? Datum::Comma : Datum::Semi;
  int ls = 1 + pick(rng, size - 1);
  return Datum::mk(kind, {rand_bunch(rng, ls), rand_bunch(rng, size - ls)});
}

}  // namespace ckt

#endif
