#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "ck/ipl.hpp"
#include "ck/oracles.hpp"
#include "testutil.hpp"

using namespace ck;

namespace {

Sequent seq(const char* s) { return parse_sequent(s, ipl_alphabet()); }
Sequent goal(const char* f) {
  return Sequent{Datum::unit_mult(), Datum::mk_leaf(parse_formula(f, ipl_alphabet()))};
}

}  // namespace

TEST_CASE("reduce_lkplusb stated examples") {
  CHECK(prove_ipl(goal("p -> p"), 2).has_value());
  // tertium non datur: reductions exist but none is coherent
  VarPool pool;
  int reductions = 0;
  bool coherent = false;
  reduce_lkplusb(goal("p | ~p"), 6, pool, [&](const IPLRedPtr& r) {
    reductions++;
    if (solve(ipl_side_conditions(r), pool)) coherent = true;
    return true;
  });
  CHECK(reductions > 0);
  CHECK(!coherent);
  CHECK(!prove_ipl(goal("((p -> q) -> p) -> p"), 8).has_value());  // Peirce
}

TEST_CASE("choice ergo") {
  VarPool pool;
  int x = pool.fresh("x");
  // G.1 , phi.x |- D.~x ; psi.x with I(x)=1 gives G , phi |- psi
  IPLSeq s;
  auto G = Formula::mk_atom("g"), phi = Formula::mk_atom("p"), psi = Formula::mk_atom("q"),
       D = Formula::mk_atom("d");
  s.left = {{G, bone()}, {phi, bvar(x)}};
  s.right = {{D, bneg(bvar(x))}, {psi, bvar(x)}};
  Interpretation I{{x, 1}};
  Sequent out = choice_ergo(s, I, pool);
  CHECK(coherent_equiv(out.antecedent, parse_bunch("g , p", ipl_alphabet())));
  CHECK(coherent_equiv(out.succedent, parse_bunch("q", ipl_alphabet())));

  // all labels 1: identity on the underlying sequent
  IPLSeq t;
  t.left = {{phi, bone()}, {G, nullptr}};
  t.right = {{psi, bone()}};
  Sequent out2 = choice_ergo(t, Interpretation{}, pool);
  CHECK(coherent_equiv(out2.antecedent, parse_bunch("p , g", ipl_alphabet())));
  // label 0 maps the formula to the empty datum
  IPLSeq u;
  u.right = {{phi, bvar(x)}};
  Sequent out3 = choice_ergo(u, Interpretation{{x, 0}}, pool);
  CHECK(normalize(out3.succedent)->kids.empty());
}

TEST_CASE("prove_ipl stated examples") {
  std::string diag;
  auto r1 = prove_ipl(seq("p & (p -> q) |- q"), 8);
  REQUIRE(r1.has_value());
  CHECK_MESSAGE(check_ljplus_proof(r1->proof, &diag), diag);

  CHECK(!prove_ipl(goal("p | ~p"), 8).has_value());

  auto r2 = prove_ipl(goal("~(~(p | ~p))"), 8);
  REQUIRE(r2.has_value());
  CHECK_MESSAGE(check_ljplus_proof(r2->proof, &diag), diag);
}

TEST_CASE("impR and negR force the kept-premiss shape on images") {
  const char* goals[] = {"p -> p", "~(~(p | ~p))", "(p -> q) -> (p -> q)", "p -> (q -> p)"};
  for (auto* g : goals) {
    auto r = prove_ipl(goal(g), 8);
    REQUIRE(r.has_value());
    std::function<void(const ProofPtr&)> walk = [&](const ProofPtr& t) {
      if (t->rule == "impR") {
        REQUIRE(t->kids.size() == 1);
        DatumPtr suc = normalize(t->kids[0]->seq.succedent);
        CHECK(suc->kind == Datum::Leaf);  // singleton succedent
      }
      if (t->rule == "negR") {
        REQUIRE(t->kids.size() == 1);
        DatumPtr suc = normalize(t->kids[0]->seq.succedent);
        CHECK((suc->kind != Datum::Leaf && suc->kids.empty()));  // empty succedent
      }
      for (auto& k : t->kids) walk(k);
    };
    walk(r->proof);
  }
}

TEST_CASE("check_ljplus_proof rejects the classical impR") {
  std::string diag;
  auto bad = ProofNode::mk(seq("e+ |- (p -> p) ; q"), "impR",
                           {ProofNode::mk(seq("p |- p ; q"), "ax", {})});
  CHECK(!check_ljplus_proof(bad, &diag));
  CHECK(diag.find("impR") != std::string::npos);
}

TEST_CASE("check_lj_proof") {
  std::string diag;
  auto ax = ProofNode::mk(seq("p |- p"), "ax", {});
  CHECK(check_lj_proof(ax, &diag));
  // two-formula succedent in the impR premiss is rejected
  auto bad = ProofNode::mk(seq("e+ |- p -> p"), "impR",
                           {ProofNode::mk(seq("p |- p ; p"), "ax", {})});
  CHECK(!check_lj_proof(bad, &diag));
  // a -> c from a -> b and b -> c by the impR/impL chain
  auto d =
      ProofNode::mk(seq("a -> b , b -> c |- a -> c"), "impR",
                    {ProofNode::mk(seq("a -> b , b -> c , a |- c"), "impL",
                                   {ProofNode::mk(seq("a |- a"), "ax", {}),
                                    ProofNode::mk(seq("b , b -> c |- c"), "impL",
                                                  {ProofNode::mk(seq("b |- b"), "ax", {}),
                                                   ProofNode::mk(seq("c |- c"), "ax", {})})})});
  CHECK_MESSAGE(check_lj_proof(d, &diag), diag);
  // LJ negL wants an empty-succedent conclusion
  auto nl = ProofNode::mk(seq("~p , p |- e+"), "negL",
                          {ProofNode::mk(seq("p |- p"), "ax", {})});
  CHECK_MESSAGE(check_lj_proof(nl, &diag), diag);
  auto nl_bad = ProofNode::mk(seq("~p , p |- q"), "negL",
                              {ProofNode::mk(seq("p |- p"), "ax", {})});
  CHECK(!check_lj_proof(nl_bad, &diag));
}

TEST_CASE("lift_lj_sequent rejects bad shapes") {
  CHECK_THROWS_AS(lift_lj_sequent(parse_sequent("p ; q |- p", ipl_alphabet())),
                  std::invalid_argument);
  CHECK_NOTHROW(lift_lj_sequent(parse_sequent("e+ |- p", ipl_alphabet())));
  CHECK_NOTHROW(lift_lj_sequent(parse_sequent("ex |- p ; q", ipl_alphabet())));
}

TEST_CASE("faithfulness: every coherent reduction and model checks out") {
  std::vector<Sequent> goals = {seq("p & (p -> q) |- q"), seq("p | q |- q | p"),
                                seq("e+ |- ~(~(p | ~p))"), seq("p -> q , p |- q ; q")};
  auto corpus = enumerate_ipl_formulas(5, {"p", "q"});
  for (size_t i = 0; i < corpus.size(); i += 3)
    goals.push_back(Sequent{Datum::unit_mult(), Datum::mk_leaf(corpus[i])});
  int images = 0;
  for (auto& g : goals) {
    VarPool pool;
    int per = 0;
    reduce_lkplusb(g, 6, pool, [&](const IPLRedPtr& r) {
      auto cs = ipl_side_conditions(r);
      std::set<int> vars;
      for (auto& c : cs) collect_vars(c, vars);
      if (vars.size() <= 10) {
        for (auto& I : all_solutions(cs, {vars.begin(), vars.end()}, pool)) {
          auto img = ljplus_image(r, I, pool);
          std::string diag;
          bool ok = check_ljplus_proof(img, &diag);
          std::string msg = print_sequent(g) + " : " + diag;
          CHECK_MESSAGE(ok, msg);
          images++;
        }
      }
      return ++per < 40;
    });
  }
  CHECK(images > 100);
}

TEST_CASE("agreement with the oracle on a corpus slice") {
  auto corpus = enumerate_ipl_formulas(5, {"p", "q"});
  int n = 0;
  for (size_t i = 0; i < corpus.size(); i += 5) {
    const auto& f = corpus[i];
    bool proved = prove_ipl(Sequent{Datum::unit_mult(), Datum::mk_leaf(f)}, 8).has_value();
    bool valid = ipl_decide_formula(f);
    CHECK_MESSAGE(proved == valid, print_formula(f));
    n++;
  }
  CHECK(n > 40);
}
