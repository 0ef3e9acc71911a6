#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ck/oracles.hpp"
#include "testutil.hpp"

using namespace ck;

namespace {

FormulaPtr ipl(const char* s) { return parse_formula(s, ipl_alphabet()); }
FormulaPtr modal(const char* s) { return parse_formula(s, modal_alphabet()); }

}  // namespace

TEST_CASE("ipl_decide stated examples") {
  CHECK(!ipl_decide_formula(ipl("p | ~p")));
  CHECK(ipl_decide(parse_sequent("p & (p -> q) |- q", ipl_alphabet())));
  CHECK(!ipl_decide_formula(ipl("((p -> q) -> p) -> p")));
  CHECK(ipl_decide_formula(ipl("~(~(p | ~p))")));
  CHECK(ipl_decide_formula(ipl("p -> p")));
  CHECK(ipl_decide_formula(ipl("(p -> q) -> ((q -> r) -> (p -> r))")));
  CHECK(!ipl_decide_formula(ipl("~(~p) -> p")));
}

TEST_CASE("k_decide stated examples") {
  CHECK(k_decide(modal("box (p -> q) -> (box p -> box q)")));
  KripkeModel M;
  int w = -1;
  CHECK(!k_decide(modal("box p -> p"), &M, &w));
  CHECK(w >= 0);
  CHECK(!model_check(M, w, modal("box p -> p"), SatMode::K));
  CHECK(k_decide(modal("p -> p")));
  CHECK(k_decide(modal("dia (p | q) -> (dia p | dia q)")));
  CHECK(!k_decide(modal("p -> box p")));
  CHECK(!k_decide(modal("box p -> box (box p)")));  // 4-axiom fails in K
  CHECK(k_decide(modal("~(dia p) -> box (~p)")));
}

TEST_CASE("model_check satisfaction clauses") {
  // two-point model, atoms partitioned between the worlds
  KripkeModel M;
  M.n = 2;
  M.R = {{false, true}, {false, false}};
  M.val["p"] = {0};
  M.val["q"] = {1};
  CHECK(model_check(M, 0, modal("p"), SatMode::K));
  CHECK(!model_check(M, 1, modal("p"), SatMode::K));
  CHECK(model_check(M, 0, modal("box q"), SatMode::K));
  CHECK(model_check(M, 0, modal("dia q"), SatMode::K));
  CHECK(model_check(M, 1, modal("box p"), SatMode::K));  // vacuous
  CHECK(!model_check(M, 0, modal("bot"), SatMode::K));
  CHECK_THROWS_AS(model_check(M, 0, modal("r"), SatMode::K), MissingAtom);

  // single reflexive world
  KripkeModel N;
  N.n = 1;
  N.R = {{true}};
  N.val["p"] = {0};
  CHECK(model_check(N, 0, ipl("p -> p"), SatMode::IPL));
  CHECK(!model_check(N, 0, ipl("~p"), SatMode::IPL));
}

TEST_CASE("IPL satisfaction is persistent") {
  ckt::Rng rng(ckt::seed() + 11);
  auto corpus = enumerate_ipl_formulas(5, {"p", "q"});
  // a small preorder with persistent valuation
  KripkeModel M;
  M.n = 3;
  M.R = {{true, true, true}, {false, true, true}, {false, false, true}};
  M.val["p"] = {1, 2};
  M.val["q"] = {2};
  for (size_t i = 0; i < corpus.size(); i += 3) {
    const auto& f = corpus[i];
    for (int w = 0; w < 3; w++)
      for (int v = 0; v < 3; v++)
        if (M.R[w][v] && model_check(M, w, f, SatMode::IPL))
          CHECK(model_check(M, v, f, SatMode::IPL));
  }
}

TEST_CASE("ipl_decide is monotone under antecedent weakening") {
  auto corpus = enumerate_ipl_formulas(5, {"p", "q"});
  ckt::Rng rng(ckt::seed() + 5);
  int n = 0;
  for (size_t i = 0; i < corpus.size(); i++) {
    const auto& f = corpus[i];
    Sequent g{Datum::unit_mult(), Datum::mk_leaf(f)};
    if (!ipl_decide(g)) continue;
    const auto& extra = corpus[ckt::pick(rng, corpus.size())];
    Sequent weakened{Datum::mk_leaf(extra), Datum::mk_leaf(f)};
    CHECK(ipl_decide(weakened));
    n++;
  }
  CHECK(n > 5);
}

TEST_CASE("ipl sweep agrees with ipl_decide (defense in depth)") {
  auto corpus = enumerate_ipl_formulas(5, {"p", "q"});
  for (size_t i = 0; i < corpus.size(); i += 11) {
    const auto& f = corpus[i];
    Sequent g{Datum::unit_mult(), Datum::mk_leaf(f)};
    CHECK_MESSAGE(ipl_decide(g) == ipl_sweep_valid(g, 4), print_formula(f));
  }
  // Peirce has a two-world countermodel
  KripkeModel M;
  int w = -1;
  CHECK(!ipl_sweep_valid(Sequent{Datum::unit_mult(),
                                 Datum::mk_leaf(ipl("((p -> q) -> p) -> p"))},
                         4, &M, &w));
  CHECK(M.n <= 2);
}

TEST_CASE("k_decide bound is reported") {
  // three atoms at modal depth 2 blow the layered family up
  auto f = modal("box (box (p & q & r)) | dia (dia (p | q | r))");
  CHECK_THROWS_AS(k_decide(f), KBoundExceeded);
}

TEST_CASE("corpus enumeration sizes") {
  CHECK(enumerate_ipl_formulas(7, {"p", "q"}).size() == 5618);
  auto modal7 = enumerate_modal_formulas(7, {"p"}, 2);
  CHECK(modal7.size() > 1000);
  for (auto& f : modal7) CHECK(modal_depth(f) <= 2);
}
