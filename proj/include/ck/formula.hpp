#ifndef CK_FORMULA_HPP
#define CK_FORMULA_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Object-language syntax: propositional alphabets, formulas, data (bunches),
// sequents, coherent equivalence, and the ASCII surface grammar.
//
// Grammar: atoms [a-z][a-zA-Z0-9_]*; operators & | -> ~ * -* top bot mtop
// box dia; precedence ~,box,dia > *,& > | > ->,-* with binaries grouping to
// the right; bunches use , and ; with units ex / e+; sequents are
// "<bunch> |- <datum>".

namespace ck {

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t at)
      : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

// ---------------------------------------------------------------------------
// Alphabets

struct Alphabet {
  std::set<std::string> atoms;                    // empty = open-ended lexical atoms
  std::map<std::string, int> operators;           // name -> arity
  std::map<std::string, int> data_constructors;   // name -> arity

  // Throws std::invalid_argument if the three symbol classes overlap or an
  // arity is negative.
  void validate() const;
  bool is_operator(const std::string& s) const { return operators.count(s) != 0; }
  bool allows_atom(const std::string& s) const { return atoms.empty() || atoms.count(s) != 0; }
};

// The alphabets used by the calculi in this project.
const Alphabet& bi_alphabet();     // & | -> ~ * -* top bot mtop
const Alphabet& ipl_alphabet();    // & | -> ~
const Alphabet& modal_alphabet();  // & | ~ bot box dia

// ---------------------------------------------------------------------------
// Formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  std::string sym;              // atom name or operator name
  bool atom = true;
  std::vector<FormulaPtr> kids; // size = operator arity

  static FormulaPtr mk_atom(const std::string& name);
  static FormulaPtr mk_op(const std::string& op, std::vector<FormulaPtr> kids);
};

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);
int formula_cmp(const FormulaPtr& a, const FormulaPtr& b);  // total order
int formula_size(const FormulaPtr& f);                      // node count
int modal_depth(const FormulaPtr& f);
std::string print_formula(const FormulaPtr& f);

// Also used for meta-level patterns: capitalized "atoms" act as formula
// meta-variables there; the object parser rejects them.
bool is_meta_var(const FormulaPtr& f);

FormulaPtr parse_formula(const std::string& text, const Alphabet& alphabet);

// ---------------------------------------------------------------------------
// Data (bunches). Binary constructors are held n-ary; an empty Comma node is
// the unit ex (multiplicative), an empty Semi node is e+ (additive).

struct Datum;
using DatumPtr = std::shared_ptr<const Datum>;

struct Datum {
  enum Kind { Leaf, Semi, Comma } kind = Leaf;
  FormulaPtr leaf;              // when Leaf
  std::vector<DatumPtr> kids;   // when Semi/Comma

  static DatumPtr mk_leaf(FormulaPtr f);
  static DatumPtr mk(Kind k, std::vector<DatumPtr> kids);
  static DatumPtr unit_add();   // e+
  static DatumPtr unit_mult();  // ex
};

std::string print_datum(const DatumPtr& d);
int datum_cmp(const DatumPtr& a, const DatumPtr& b);
int datum_size(const DatumPtr& d);

// Normal form: flatten same-constructor runs, drop units, collapse singleton
// lists, sort children. Two bunches are coherently equivalent iff their
// normal forms are equal.
DatumPtr normalize(const DatumPtr& d);
bool coherent_equiv(const DatumPtr& a, const DatumPtr& b);

// Paths are child-index sequences into the un-normalized tree.
using Path = std::vector<int>;
DatumPtr subbunch_at(const DatumPtr& whole, const Path& path);  // throws on bad path
DatumPtr replace_subbunch(const DatumPtr& whole, const Path& path, const DatumPtr& replacement);

// ---------------------------------------------------------------------------
// Sequents

struct Sequent {
  DatumPtr antecedent;
  DatumPtr succedent;
};

std::string print_sequent(const Sequent& s);
Sequent parse_sequent(const std::string& text, const Alphabet& alphabet);
DatumPtr parse_bunch(const std::string& text, const Alphabet& alphabet);

}  // namespace ck

#endif
