#ifndef CK_BLP_HPP
#define CK_BLP_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// Basic logic programming over the hereditary Harrop fragment: LB search via
// the constraint system LB(+)U, where unification lives in the label algebra.
// Programs are Prolog-like: `s(X,Y,Z) :- r(X), g(Y), b(Z).`  Variables are
// capitalized; `,` is conjunction, `;` disjunction, `=>` hypothetical goals.

namespace ck {

struct UTerm;
using UTermPtr = std::shared_ptr<const UTerm>;
struct UTerm {
  bool var = false;       // label variable
  int label = -1;         // when var
  std::string functor;    // constant / function symbol
  std::vector<UTermPtr> args;

  static UTermPtr mk_var(int label);
  static UTermPtr mk_fn(std::string f, std::vector<UTermPtr> args);
};

bool uterm_eq(const UTermPtr& a, const UTermPtr& b);

class LabelPool {
 public:
  int fresh(const std::string& hint);
  const std::string& name(int v) const { return names_.at(v); }
  int count() const { return (int)names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> used_;
};

std::string print_uterm(const UTermPtr& t, const LabelPool& pool);

struct UAtom {
  std::string rel;
  std::vector<UTermPtr> args;
};
std::string print_uatom(const UAtom& a, const LabelPool& pool);

// Goal / definite-clause grammar (G ::= A | D -> G | G & G | G v G,
// D ::= A | G -> A | D & D), held with object variables before labelling.
struct Goal;
using GoalPtr = std::shared_ptr<const Goal>;
struct DClause;
using DClausePtr = std::shared_ptr<const DClause>;

struct Goal {
  enum Kind { AtomG, Conj, Disj, Impl } kind = AtomG;
  UAtom atom;       // AtomG; object variables appear as 0-ary functors with
                    // capitalized names until labelling
  DClausePtr hyp;   // Impl
  GoalPtr a, b;
};

struct DClause {
  enum Kind { Fact, Rule } kind = Fact;
  UAtom head;
  GoalPtr body;  // Rule
};

struct Program {
  std::vector<DClausePtr> clauses;  // conjunction-split
};

struct BLPParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Program parse_program(const std::string& text);
GoalPtr parse_goal(const std::string& text);
std::string print_goal(const GoalPtr& g, const LabelPool& pool);

// Unification constraints: the quantifier-free formulas over term equations.
struct UCons;
using UConsPtr = std::shared_ptr<const UCons>;
struct UCons {
  enum Kind { Eq, And, Or, False, True } kind = True;
  UTermPtr l, r;
  std::vector<UConsPtr> kids;

  static UConsPtr eq(UTermPtr l, UTermPtr r);
  static UConsPtr conj(std::vector<UConsPtr> kids);
  static UConsPtr disj(std::vector<UConsPtr> kids);
  static UConsPtr falsum();
  static UConsPtr truth();
};
std::string print_ucons(const UConsPtr& c, const LabelPool& pool);

using USubst = std::map<int, UTermPtr>;

// All solutions, branch order then unifier; occurs-check on. Every returned
// substitution is idempotent and maps each constrained label somewhere.
std::vector<USubst> solve_unification(const UConsPtr& c, const LabelPool& pool);

// Reduction trees for LB(+)U
struct BLPRed;
using BLPRedPtr = std::shared_ptr<const BLPRed>;
struct BLPRed {
  bool is_constraint = false;
  UConsPtr constraint;
  std::string rule;               // empty = open leaf
  GoalPtr goal;                   // labelled goal at this node
  DClausePtr added;               // clause copy introduced here (forallL, impR)
  std::vector<BLPRedPtr> kids;
};

struct Query {
  Program program;
  GoalPtr goal;
};

void reduce_lbu(const Query& q, int depth, LabelPool& pool,
                const std::function<bool(const BLPRedPtr&)>& sink);

// Valuated LB proof trees
struct LBNode;
using LBNodePtr = std::shared_ptr<const LBNode>;
struct LBNode {
  std::string rule;
  GoalPtr goal;        // ground
  DClausePtr added;    // ground clause for forallL / impR nodes
  std::vector<LBNodePtr> kids;
};
std::string print_lb_proof(const LBNodePtr& t, const LabelPool& pool, int indent = 0);
bool check_lb_proof(const LBNodePtr& t, const Program& p, std::string* diag = nullptr);

struct BLPAnswer {
  std::map<std::string, UTermPtr> bindings;  // query variable -> ground term
  LBNodePtr proof;
};

struct BLPResult {
  std::vector<BLPAnswer> answers;       // deduplicated, deterministic order
  long candidate_space = 0;             // |constants| ^ |query variables|
  LabelPool pool;
};

BLPResult run_blp(const Query& q, int depth, bool all);

std::string print_answer(const BLPAnswer& a, const LabelPool& pool);

}  // namespace ck

#endif
