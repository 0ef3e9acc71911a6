#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ck/oracles.hpp"
#include "ck/sweep.hpp"
#include "testutil.hpp"

using namespace ck;

TEST_CASE("boolean axiom sweep: serial equals parallel, no failures") {
  long serial = boolean_axiom_sweep(2000, ckt::seed(), 1);
  long parallel = boolean_axiom_sweep(2000, ckt::seed(), default_jobs());
  CHECK(serial == 0);
  CHECK(parallel == 0);
  CHECK(serial == parallel);
}

TEST_CASE("ipl agreement sweep: serial equals parallel") {
  auto corpus = enumerate_ipl_formulas(4, {"p", "q"});
  auto serial = ipl_agreement_sweep(corpus, 8, 1);
  auto parallel = ipl_agreement_sweep(corpus, 8, default_jobs());
  CHECK(serial.total == (long)corpus.size());
  CHECK(serial.agree == serial.total);
  CHECK(parallel.agree == serial.agree);
  CHECK(parallel.total == serial.total);
}

TEST_CASE("k agreement sweep: serial equals parallel") {
  auto corpus = enumerate_modal_formulas(4, {"p"}, 2);
  auto serial = k_agreement_sweep(corpus, 10, 1);
  auto parallel = k_agreement_sweep(corpus, 10, default_jobs());
  CHECK(serial.total == (long)corpus.size());
  CHECK(serial.agree == serial.total);
  CHECK(parallel.agree == serial.agree);
}

TEST_CASE("oracle crosscheck sweep") {
  auto corpus = enumerate_ipl_formulas(4, {"p", "q"});
  auto res = ipl_oracle_crosscheck(corpus, 4, default_jobs());
  CHECK(res.agree == res.total);
}
