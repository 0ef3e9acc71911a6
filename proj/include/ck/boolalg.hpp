#ifndef CK_BOOLALG_HPP
#define CK_BOOLALG_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

// The algebra of constraints for RDvBC: two-element Boolean algebra terms,
// quantifier-free constraint formulas over equations, evaluation, and a small
// backtracking solver.

namespace ck {

struct BoolExpr;
using BExpr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum Kind { Var, Zero, One, Sum, Prod, Neg } kind;
  int var = -1;
  BExpr a, b;
};

BExpr bvar(int v);
BExpr bzero();
BExpr bone();
BExpr bsum(BExpr a, BExpr b);
BExpr bprod(BExpr a, BExpr b);  // folds literal 1 factors away
BExpr bneg(BExpr a);

struct Constraint;
using Cons = std::shared_ptr<const Constraint>;

struct Constraint {
  enum Kind { Eq, And, Or, Not } kind;
  BExpr lhs, rhs;  // Eq
  Cons a, b;       // And/Or/Not (Not uses a)
};

Cons ceq(BExpr l, BExpr r);
Cons cand(Cons a, Cons b);  // nullptr operands are dropped (empty conjunction = true)
Cons cor(Cons a, Cons b);
Cons cnot(Cons a);
Cons ctrue();

// Fresh variable supply with printable names x1, x2, ...
class VarPool {
 public:
  int fresh();
  int fresh(const std::string& name);
  const std::string& name(int v) const;
  int find(const std::string& name) const;  // -1 if absent
  int count() const { return (int)names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

// Total map var -> {0,1}
using Interpretation = std::map<int, int>;

struct UnboundVariable : std::runtime_error {
  explicit UnboundVariable(const std::string& n)
      : std::runtime_error("unbound boolean variable " + n) {}
};

int eval_expr(const BExpr& e, const Interpretation& I, const VarPool& pool);
bool eval_constraint(const Cons& c, const Interpretation& I, const VarPool& pool);

void collect_vars(const BExpr& e, std::set<int>& out);
void collect_vars(const Cons& c, std::set<int>& out);

// Satisfiability by backtracking in ascending variable order, value 0 before
// 1, pruning on three-valued evaluation; the result is the lexicographically
// first model. Unsatisfiability is a value, not an error.
std::optional<Interpretation> solve(const std::vector<Cons>& cs, const VarPool& pool);

// All satisfying assignments over exactly `vars` (which must cover the
// constraints), lexicographic order.
std::vector<Interpretation> all_solutions(const std::vector<Cons>& cs,
                                          const std::vector<int>& vars, const VarPool& pool);

// Debug syntax: x1*~x2 = 1 & x3 = 0, with & || ! for meta and/or/not.
std::string print_expr(const BExpr& e, const VarPool& pool);
std::string print_constraint(const Cons& c, const VarPool& pool);
Cons parse_constraint(const std::string& text, VarPool& pool);

}  // namespace ck

#endif
