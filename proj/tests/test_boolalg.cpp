#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ck/boolalg.hpp"
#include "testutil.hpp"

using namespace ck;

namespace {

BExpr rand_expr(ckt::Rng& rng, const std::vector<int>& vars, int size) {
  if (size <= 1) {
    int k = ckt::pick(rng, 4);
    if (k == 0) return bzero();
    if (k == 1) return bone();
    return bvar(vars[ckt::pick(rng, vars.size())]);
  }
  int k = ckt::pick(rng, 3);
  if (k == 0) return bneg(rand_expr(rng, vars, size - 1));
  int ls = 1 + ckt::pick(rng, size - 1);
  auto a = rand_expr(rng, vars, ls);
  auto b = rand_expr(rng, vars, size - ls);
  return k == 1 ? bsum(a, b) : bprod(a, b);
}

Cons rand_cons(ckt::Rng& rng, const std::vector<int>& vars, int size) {
  if (size <= 2) {
    auto c = ceq(rand_expr(rng, vars, 1 + ckt::pick(rng, 3)),
                 rand_expr(rng, vars, 1 + ckt::pick(rng, 3)));
    return c ? c : ceq(bzero(), bzero());
  }
  int k = ckt::pick(rng, 3);
  if (k == 0) return cnot(rand_cons(rng, vars, size - 1));
  int ls = 2 + ckt::pick(rng, size - 2);
  auto a = rand_cons(rng, vars, ls);
  auto b = rand_cons(rng, vars, std::max(2, size - ls));
  return k == 1 ? cand(a, b) : cor(a, b);
}

Interpretation rand_interp(ckt::Rng& rng, const std::vector<int>& vars) {
  Interpretation I;
  for (int v : vars) I[v] = ckt::pick(rng, 2);
  return I;
}

// independent oracle: enumerate every assignment
bool brute_sat(const std::vector<Cons>& cs, const VarPool& pool) {
  std::set<int> vs;
  for (auto& c : cs) collect_vars(c, vs);
  std::vector<int> vars(vs.begin(), vs.end());
  for (uint64_t m = 0; m < (uint64_t(1) << vars.size()); m++) {
    Interpretation I;
    for (size_t i = 0; i < vars.size(); i++) I[vars[i]] = (m >> i) & 1;
    bool ok = true;
    for (auto& c : cs)
      if (!eval_constraint(c, I, pool)) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("eval_expr stated examples") {
  VarPool pool;
  int x = pool.fresh("x"), y = pool.fresh("y");
  Interpretation I{{x, 1}, {y, 0}};
  CHECK(eval_expr(bprod(bvar(x), bneg(bvar(x))), I, pool) == 0);  // a * ~a = 0
  CHECK(eval_expr(bprod(bone(), bvar(x)), I, pool) == 1);         // 1 * x with x=1
  Interpretation I0{{x, 0}, {y, 0}};
  CHECK(eval_expr(bsum(bvar(x), bvar(y)), I0, pool) == 0);
  CHECK_THROWS_AS(eval_expr(bvar(pool.fresh("z")), I, pool), UnboundVariable);
}

TEST_CASE("eval_constraint stated examples") {
  VarPool pool;
  int x = pool.fresh("x"), y = pool.fresh("y");
  Interpretation I{{x, 1}, {y, 0}};
  CHECK(eval_constraint(cand(ceq(bvar(x), bone()), ceq(bvar(y), bzero())), I, pool));
  CHECK(!eval_constraint(ceq(bzero(), bone()), I, pool));
  CHECK(eval_constraint(ceq(bvar(x), bvar(x)), I, pool));
}

TEST_CASE("solve reproduces the reported distribution") {
  // x1=1, x2=0, x3=0, ~x1 y1 = 0, ~x2 y2 = 1, ~x3 y3 = 0,
  // ~x1 ~y1 = 0, ~x2 ~y2 = 0, ~x3 ~y3 = 1
  VarPool pool;
  int x1 = pool.fresh("x1"), x2 = pool.fresh("x2"), x3 = pool.fresh("x3");
  int y1 = pool.fresh("y1"), y2 = pool.fresh("y2"), y3 = pool.fresh("y3");
  auto nv = [&](int v) { return bneg(bvar(v)); };
  std::vector<Cons> cs = {
      ceq(bvar(x1), bone()), ceq(bvar(x2), bzero()), ceq(bvar(x3), bzero()),
      ceq(bprod(nv(x1), bvar(y1)), bzero()), ceq(bprod(nv(x2), bvar(y2)), bone()),
      ceq(bprod(nv(x3), bvar(y3)), bzero()), ceq(bprod(nv(x1), nv(y1)), bzero()),
      ceq(bprod(nv(x2), nv(y2)), bzero()), ceq(bprod(nv(x3), nv(y3)), bone()),
  };
  auto sol = solve(cs, pool);
  REQUIRE(sol.has_value());
  CHECK((*sol)[x1] == 1);
  CHECK((*sol)[y2] == 1);
  CHECK((*sol)[x2] == 0);
  CHECK((*sol)[x3] == 0);
  CHECK((*sol)[y1] == 0);
  CHECK((*sol)[y3] == 0);
}

TEST_CASE("solve basics") {
  VarPool pool;
  int x = pool.fresh("x");
  CHECK(!solve({ceq(bvar(x), bone()), ceq(bvar(x), bzero())}, pool).has_value());
  auto empty = solve({}, pool);
  REQUIRE(empty.has_value());
  CHECK(empty->empty());
}

TEST_CASE("all_solutions") {
  VarPool pool;
  int x = pool.fresh("x"), y = pool.fresh("y");
  auto sols = all_solutions({ceq(bvar(x), bone())}, {x, y}, pool);
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].at(x) == 1);
  CHECK(sols[0].at(y) == 0);  // lexicographic: 0 before 1
  CHECK(sols[1].at(y) == 1);
  CHECK(all_solutions({ceq(bvar(x), bone()), ceq(bvar(x), bzero())}, {x, y}, pool).empty());
}

TEST_CASE("ten Boolean algebra equations hold on random expressions") {
  ckt::Rng rng(ckt::seed());
  VarPool pool;
  std::vector<int> vars;
  for (int i = 0; i < 6; i++) vars.push_back(pool.fresh());
  int n = 0;
  for (int iter = 0; iter < 1000; iter++) {
    auto a = rand_expr(rng, vars, 1 + ckt::pick(rng, 5));
    auto b = rand_expr(rng, vars, 1 + ckt::pick(rng, 5));
    auto c = rand_expr(rng, vars, 1 + ckt::pick(rng, 5));
    auto I = rand_interp(rng, vars);
    auto ev = [&](const BExpr& e) { return eval_expr(e, I, pool); };
    CHECK(ev(bsum(a, bsum(b, c))) == ev(bsum(bsum(a, b), c)));
    CHECK(ev(bprod(a, bprod(b, c))) == ev(bprod(bprod(a, b), c)));
    CHECK(ev(bsum(a, b)) == ev(bsum(b, a)));
    CHECK(ev(bprod(a, b)) == ev(bprod(b, a)));
    CHECK(ev(bsum(a, bprod(a, b))) == ev(a));
    CHECK(ev(bprod(a, bsum(a, b))) == ev(a));
    CHECK(ev(bsum(a, bzero())) == ev(a));
    CHECK(ev(bprod(a, bone())) == ev(a));
    CHECK(ev(bsum(a, bprod(b, c))) == ev(bprod(bsum(a, b), bsum(a, c))));
    CHECK(ev(bprod(a, bsum(b, c))) == ev(bsum(bprod(a, b), bprod(a, c))));
    CHECK(ev(bsum(a, bneg(a))) == 1);
    CHECK(ev(bprod(a, bneg(a))) == 0);
    n++;
  }
  CHECK(n == 1000);
}

TEST_CASE("solver agrees with brute-force enumeration") {
  ckt::Rng rng(ckt::seed() + 7);
  VarPool pool;
  std::vector<int> vars;
  for (int i = 0; i < 10; i++) vars.push_back(pool.fresh());
  for (int iter = 0; iter < 300; iter++) {
    std::vector<Cons> cs;
    int k = 1 + ckt::pick(rng, 4);
    for (int i = 0; i < k; i++) cs.push_back(rand_cons(rng, vars, 2 + ckt::pick(rng, 6)));
    auto got = solve(cs, pool);
    CHECK(got.has_value() == brute_sat(cs, pool));
    if (got)
      for (auto& c : cs) CHECK(eval_constraint(c, *got, pool));
  }
}

TEST_CASE("debug syntax round trip") {
  VarPool pool;
  auto c = parse_constraint("x*~y = 1 & z = 0", pool);
  REQUIRE(c);
  CHECK(print_constraint(c, pool) == "x*~y = 1 & z = 0");
  auto d = parse_constraint("x = 1 || !(y = 0)", pool);
  CHECK(print_constraint(d, pool) == "x = 1 || !(y = 0)");
  Interpretation I{{pool.find("x"), 1}, {pool.find("y"), 0}, {pool.find("z"), 0}};
  CHECK(eval_constraint(c, I, pool));
}
