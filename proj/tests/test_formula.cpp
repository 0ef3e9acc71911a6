#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ck/formula.hpp"
#include "testutil.hpp"

using namespace ck;

TEST_CASE("parsing builds the stated trees") {
  auto f = parse_formula("p * (q * r)", bi_alphabet());
  REQUIRE(!f->atom);
  CHECK(f->sym == "*");
  CHECK(f->kids[0]->atom);
  CHECK(f->kids[1]->sym == "*");

  auto g = parse_formula("(p -> q) -> p", bi_alphabet());
  CHECK(g->sym == "->");
  CHECK(g->kids[0]->sym == "->");
  CHECK(g->kids[1]->atom);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_bunch("p ,", bi_alphabet()), ParseError);
  try {
    parse_bunch("p ,", bi_alphabet());
  } catch (const ParseError& e) {
    CHECK(e.pos == 3);  // expected another bunch after the comma
  }
  CHECK_THROWS_AS(parse_formula("p @ q", bi_alphabet()), ParseError);
  CHECK_THROWS_AS(parse_formula("box p", ipl_alphabet()), ParseError);   // unknown symbol
  CHECK_THROWS_AS(parse_formula("p -* q", ipl_alphabet()), ParseError);  // arity/alphabet
}

TEST_CASE("precedence") {
  CHECK(print_formula(parse_formula("~p & q | r -> s", bi_alphabet())) == "~p & q | r -> s");
  auto f = parse_formula("p -> q -> r", bi_alphabet());
  CHECK(formula_eq(f->kids[1], parse_formula("q -> r", bi_alphabet())));
  auto g = parse_formula("box p & q", modal_alphabet());
  CHECK(g->sym == "&");
}

TEST_CASE("coherent equivalence: stated examples") {
  auto a = bi_alphabet();
  CHECK(coherent_equiv(parse_bunch("p ; q", a), parse_bunch("q ; p", a)));
  CHECK(coherent_equiv(parse_bunch("p , ex", a), parse_bunch("p", a)));
  CHECK(!coherent_equiv(parse_bunch("p ; q", a), parse_bunch("p , q", a)));
  CHECK(!coherent_equiv(parse_bunch("p , e+", a), parse_bunch("p", a)));  // wrong unit
  CHECK(coherent_equiv(parse_bunch("(p , q) , r", a), parse_bunch("p , (q , r)", a)));
}

TEST_CASE("replace_subbunch") {
  auto a = bi_alphabet();
  auto whole = parse_bunch("p , q", a);
  auto repl = parse_bunch("r ; s", a);
  auto out = replace_subbunch(whole, {1}, repl);
  CHECK(coherent_equiv(out, parse_bunch("p , (r ; s)", a)));
  CHECK(coherent_equiv(replace_subbunch(whole, {}, Datum::unit_add()), Datum::unit_add()));
  CHECK_THROWS_AS(replace_subbunch(whole, {0, 0}, repl), std::out_of_range);
  CHECK_THROWS_AS(subbunch_at(whole, {5}), std::out_of_range);
}

TEST_CASE("coherent_equiv is an equivalence and a congruence") {
  ckt::Rng rng(ckt::seed());
  std::vector<DatumPtr> pool;
  for (int i = 0; i < 60; i++) pool.push_back(ckt::rand_bunch(rng, 1 + ckt::pick(rng, 12)));
  for (auto& d : pool) CHECK(coherent_equiv(d, d));
  for (int i = 0; i < 200; i++) {
    auto& x = pool[ckt::pick(rng, pool.size())];
    auto& y = pool[ckt::pick(rng, pool.size())];
    CHECK(coherent_equiv(x, y) == coherent_equiv(y, x));
    auto& z = pool[ckt::pick(rng, pool.size())];
    if (coherent_equiv(x, y) && coherent_equiv(y, z)) CHECK(coherent_equiv(x, z));
  }
  // congruence: embed equivalent bunches into a random context
  for (int i = 0; i < 200; i++) {
    auto d = pool[ckt::pick(rng, pool.size())];
    // build an equivalent variant by re-normalizing through a permuted tree
    auto dperm = normalize(d);
    REQUIRE(coherent_equiv(d, dperm));
    auto ctx = ckt::rand_bunch(rng, 1 + ckt::pick(rng, 6));
    if (ctx->kind == Datum::Leaf || ctx->kids.empty()) continue;
    int slot = ckt::pick(rng, ctx->kids.size());
    auto g1 = replace_subbunch(ctx, {slot}, d);
    auto g2 = replace_subbunch(ctx, {slot}, dperm);
    CHECK(coherent_equiv(g1, g2));
  }
}

TEST_CASE("parse . print round trip") {
  ckt::Rng rng(ckt::seed() + 1);
  for (int i = 0; i < 500; i++) {
    auto f = ckt::rand_bi_formula(rng, 1 + ckt::pick(rng, 10));
    auto back = parse_formula(print_formula(f), bi_alphabet());
    CHECK(formula_eq(f, back));
  }
  for (int i = 0; i < 300; i++) {
    auto d = ckt::rand_bunch(rng, 1 + ckt::pick(rng, 8));
    auto back = parse_bunch(print_datum(d), bi_alphabet());
    CHECK(coherent_equiv(d, back));
  }
}

TEST_CASE("sequent parsing") {
  auto s = parse_sequent("p , q , r |- p * (q * r)", bi_alphabet());
  CHECK(print_sequent(s) == "p , q , r |- p * q * r");  // right-nesting is canonical
  CHECK(formula_eq(s.succedent->leaf, parse_formula("p * (q * r)", bi_alphabet())));
  auto t = parse_sequent("e+ |- p | ~p", ipl_alphabet());
  CHECK(t.antecedent->kind == Datum::Semi);
  CHECK(t.antecedent->kids.empty());
}

TEST_CASE("alphabet invariants") {
  Alphabet bad;
  bad.operators = {{"f", 2}};
  bad.data_constructors = {{"f", 1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Alphabet neg;
  neg.operators = {{"g", -1}};
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  CHECK_NOTHROW(bi_alphabet().validate());
}
