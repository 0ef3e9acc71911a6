#include "ck/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ck {

void Alphabet::validate() const {
  for (auto& [op, ar] : operators) {
    if (ar < 0) throw std::invalid_argument("negative arity for operator " + op);
    if (atoms.count(op)) throw std::invalid_argument("symbol in both atoms and operators: " + op);
    if (data_constructors.count(op))
      throw std::invalid_argument("symbol in both operators and data constructors: " + op);
  }
  for (auto& [c, ar] : data_constructors) {
    if (ar < 0) throw std::invalid_argument("negative arity for constructor " + c);
    if (atoms.count(c)) throw std::invalid_argument("symbol in both atoms and constructors: " + c);
  }
}

static Alphabet make_bi() {
  Alphabet a;
  a.operators = {{"&", 2}, {"|", 2}, {"->", 2}, {"~", 1}, {"*", 2}, {"-*", 2},
                 {"top", 0}, {"bot", 0}, {"mtop", 0}};
  a.data_constructors = {{",", 2}, {";", 2}, {"e+", 0}, {"ex", 0}};
  return a;
}

static Alphabet make_ipl() {
  Alphabet a;
  a.operators = {{"&", 2}, {"|", 2}, {"->", 2}, {"~", 1}};
  a.data_constructors = {{",", 2}, {";", 2}, {"e+", 0}, {"ex", 0}};
  return a;
}

static Alphabet make_modal() {
  Alphabet a;
  // -> is material implication read classically at a world
  a.operators = {{"&", 2}, {"|", 2}, {"~", 1}, {"->", 2}, {"bot", 0}, {"box", 1}, {"dia", 1}};
  a.data_constructors = {{",", 2}, {";", 2}, {"e+", 0}, {"ex", 0}};
  return a;
}

const Alphabet& bi_alphabet() { static const Alphabet a = make_bi(); return a; }
const Alphabet& ipl_alphabet() { static const Alphabet a = make_ipl(); return a; }
const Alphabet& modal_alphabet() { static const Alphabet a = make_modal(); return a; }

FormulaPtr Formula::mk_atom(const std::string& name) {
  auto f = std::make_shared<Formula>();
  f->sym = name;
  f->atom = true;
  return f;
}

FormulaPtr Formula::mk_op(const std::string& op, std::vector<FormulaPtr> kids) {
  auto f = std::make_shared<Formula>();
  f->sym = op;
  f->atom = false;
  f->kids = std::move(kids);
  return f;
}

bool is_meta_var(const FormulaPtr& f) {
  return f && f->atom && !f->sym.empty() && std::isupper((unsigned char)f->sym[0]);
}

int formula_cmp(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->atom != b->atom) return a->atom ? -1 : 1;
  if (a->sym != b->sym) return a->sym < b->sym ? -1 : 1;
  if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (int c = formula_cmp(a->kids[i], b->kids[i])) return c;
  return 0;
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) { return formula_cmp(a, b) == 0; }

int formula_size(const FormulaPtr& f) {
  int n = 1;
  for (auto& k : f->kids) n += formula_size(k);
  return n;
}

int modal_depth(const FormulaPtr& f) {
  int m = 0;
  for (auto& k : f->kids) m = std::max(m, modal_depth(k));
  if (!f->atom && (f->sym == "box" || f->sym == "dia")) m += 1;
  return m;
}

// Precedence buckets: 4 unary/nullary, 3 mult, 2 or, 1 implication.
static int prec(const std::string& op) {
  if (op == "->" || op == "-*") return 1;
  if (op == "|") return 2;
  if (op == "&" || op == "*") return 3;
  return 4;
}

static void print_f(const FormulaPtr& f, int outer, std::string& out) {
  if (f->atom || f->kids.empty()) {
    out += f->sym;
    return;
  }
  if (f->kids.size() == 1) {
    out += f->sym;
    if (f->sym != "~") out += ' ';
    print_f(f->kids[0], 4, out);
    return;
  }
  int p = prec(f->sym);
  bool paren = p < outer;
  if (paren) out += '(';
  // binaries group to the right, so the left child needs strictly higher level
  print_f(f->kids[0], p + 1, out);
  out += ' ';
  out += f->sym;
  out += ' ';
  print_f(f->kids[1], p, out);
  if (paren) out += ')';
}

std::string print_formula(const FormulaPtr& f) {
  std::string out;
  print_f(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Lexer shared by formulas, bunches, sequents.

namespace {

struct Token {
  enum Kind { Ident, Op, LParen, RParen, Comma, Semi, Turnstile, Colon, End } kind;
  std::string text;
  size_t pos;
};

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& src) : s(src) {}

  Token next() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
    size_t at = i;
    if (i >= s.size()) return {Token::End, "", at};
    char c = s[i];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
      std::string id = s.substr(i, j - i);
      i = j;
      // e+ / ex are unit tokens; 'e' followed by '+' glues
      if (id == "e" && i < s.size() && s[i] == '+') { i++; return {Token::Ident, "e+", at}; }
      return {Token::Ident, id, at};
    }
    switch (c) {
      case '(': i++; return {Token::LParen, "(", at};
      case ')': i++; return {Token::RParen, ")", at};
      case ',': i++; return {Token::Comma, ",", at};
      case ';': i++; return {Token::Semi, ";", at};
      case ':': i++; return {Token::Colon, ":", at};
      case '~': i++; return {Token::Op, "~", at};
      case '&': i++; return {Token::Op, "&", at};
      case '*': i++; return {Token::Op, "*", at};
      case '|':
        if (s.compare(i, 2, "|-") == 0) { i += 2; return {Token::Turnstile, "|-", at}; }
        i++; return {Token::Op, "|", at};
      case '-':
        if (s.compare(i, 2, "->") == 0) { i += 2; return {Token::Op, "->", at}; }
        if (s.compare(i, 2, "-*") == 0) { i += 2; return {Token::Op, "-*", at}; }
        break;
      default: break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
  }
};

struct Parser {
  Lexer lex;
  Token tok;
  const Alphabet& alpha;
  Parser(const std::string& s, const Alphabet& a) : lex(s), alpha(a) { tok = lex.next(); }

  void advance() { tok = lex.next(); }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok.pos); }

  // formula parsing, precedence climbing; binaries right-associative
  FormulaPtr formula(int level = 1) {
    if (level == 4) return unary();
    FormulaPtr lhs = formula(level + 1);
    if (tok.kind == Token::Op && prec(tok.text) == level) {
      std::string op = tok.text;
      if (!alpha.is_operator(op)) fail("operator '" + op + "' not in alphabet");
      advance();
      FormulaPtr rhs = formula(level);
      return Formula::mk_op(op, {lhs, rhs});
    }
    return lhs;
  }

  FormulaPtr unary() {
    if (tok.kind == Token::Op && tok.text == "~") {
      if (!alpha.is_operator("~")) fail("operator '~' not in alphabet");
      advance();
      return Formula::mk_op("~", {unary()});
    }
    if (tok.kind == Token::Ident && (tok.text == "box" || tok.text == "dia")) {
      std::string op = tok.text;
      if (!alpha.is_operator(op)) fail("operator '" + op + "' not in alphabet");
      advance();
      return Formula::mk_op(op, {unary()});
    }
    return primary();
  }

  FormulaPtr primary() {
    if (tok.kind == Token::LParen) {
      advance();
      FormulaPtr f = formula();
      if (tok.kind != Token::RParen) fail("expected ')'");
      advance();
      return f;
    }
    if (tok.kind == Token::Ident) {
      std::string id = tok.text;
      if (id == "top" || id == "bot" || id == "mtop") {
        if (!alpha.is_operator(id)) fail("operator '" + id + "' not in alphabet");
        advance();
        return Formula::mk_op(id, {});
      }
      if (id == "e+" || id == "ex") fail("bunch unit '" + id + "' is not a formula");
      if (!std::islower((unsigned char)id[0])) fail("atom must start lowercase: '" + id + "'");
      if (!alpha.allows_atom(id)) fail("unknown atom '" + id + "'");
      advance();
      return Formula::mk_atom(id);
    }
    fail("expected formula");
  }

  // bunches: , and ; at equal precedence, left-associative, same-run flattened
  DatumPtr bunch() {
    DatumPtr d = bunch_primary();
    while (tok.kind == Token::Comma || tok.kind == Token::Semi) {
      Datum::Kind k = tok.kind == Token::Comma ? Datum::Comma : Datum::Semi;
      advance();
      DatumPtr rhs = bunch_primary();
      if (d->kind == k)
        d = Datum::mk(k, [&] { auto v = d->kids; v.push_back(rhs); return v; }());
      else
        d = Datum::mk(k, {d, rhs});
    }
    return d;
  }

  DatumPtr bunch_primary() {
    if (tok.kind == Token::Ident && tok.text == "e+") { advance(); return Datum::unit_add(); }
    if (tok.kind == Token::Ident && tok.text == "ex") { advance(); return Datum::unit_mult(); }
    if (tok.kind == Token::LParen) {
      // could be a parenthesized bunch or a parenthesized formula; a bunch
      // parser handles both since a formula is a bunch leaf
      size_t save_i = lex.i;
      Token save_t = tok;
      advance();
      DatumPtr d = bunch();
      if (tok.kind != Token::RParen) fail("expected ')'");
      advance();
      // "(f) -> g": the paren group was a formula sub-expression, re-parse
      if (tok.kind == Token::Op && d->kind == Datum::Leaf) {
        lex.i = save_i;
        tok = save_t;
        return Datum::mk_leaf(formula());
      }
      return d;
    }
    return Datum::mk_leaf(formula());
  }

  void expect_end() {
    if (tok.kind != Token::End) fail("trailing input");
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Alphabet& alphabet) {
  Parser p(text, alphabet);
  FormulaPtr f = p.formula();
  p.expect_end();
  return f;
}

DatumPtr parse_bunch(const std::string& text, const Alphabet& alphabet) {
  Parser p(text, alphabet);
  DatumPtr d = p.bunch();
  p.expect_end();
  return d;
}

Sequent parse_sequent(const std::string& text, const Alphabet& alphabet) {
  Parser p(text, alphabet);
  DatumPtr ante = p.bunch();
  if (p.tok.kind != Token::Turnstile) p.fail("expected '|-'");
  p.advance();
  DatumPtr succ = p.bunch();
  p.expect_end();
  return Sequent{ante, succ};
}

// ---------------------------------------------------------------------------
// Data

DatumPtr Datum::mk_leaf(FormulaPtr f) {
  auto d = std::make_shared<Datum>();
  d->kind = Leaf;
  d->leaf = std::move(f);
  return d;
}

DatumPtr Datum::mk(Kind k, std::vector<DatumPtr> kids) {
  auto d = std::make_shared<Datum>();
  d->kind = k;
  d->kids = std::move(kids);
  return d;
}

DatumPtr Datum::unit_add() { return mk(Semi, {}); }
DatumPtr Datum::unit_mult() { return mk(Comma, {}); }

int datum_size(const DatumPtr& d) {
  if (d->kind == Datum::Leaf) return 1;
  int n = 1;
  for (auto& k : d->kids) n += datum_size(k);
  return n;
}

int datum_cmp(const DatumPtr& a, const DatumPtr& b) {
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->kind == Datum::Leaf) return formula_cmp(a->leaf, b->leaf);
  if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (int c = datum_cmp(a->kids[i], b->kids[i])) return c;
  return 0;
}

static void print_d(const DatumPtr& d, bool outermost, std::string& out) {
  if (d->kind == Datum::Leaf) {
    out += print_formula(d->leaf);
    return;
  }
  if (d->kids.empty()) {
    out += d->kind == Datum::Semi ? "e+" : "ex";
    return;
  }
  if (!outermost) out += '(';
  const char* sep = d->kind == Datum::Semi ? " ; " : " , ";
  for (size_t i = 0; i < d->kids.size(); i++) {
    if (i) out += sep;
    print_d(d->kids[i], false, out);
  }
  if (!outermost) out += ')';
}

std::string print_datum(const DatumPtr& d) {
  std::string out;
  print_d(d, true, out);
  return out;
}

DatumPtr normalize(const DatumPtr& d) {
  if (d->kind == Datum::Leaf) return d;
  std::vector<DatumPtr> flat;
  for (auto& k : d->kids) {
    DatumPtr n = normalize(k);
    if (n->kind == d->kind)
      flat.insert(flat.end(), n->kids.begin(), n->kids.end());  // unit dropped when empty
    else
      flat.push_back(n);
  }
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(),
            [](const DatumPtr& x, const DatumPtr& y) { return datum_cmp(x, y) < 0; });
  return Datum::mk(d->kind, std::move(flat));
}

bool coherent_equiv(const DatumPtr& a, const DatumPtr& b) {
  return datum_cmp(normalize(a), normalize(b)) == 0;
}

DatumPtr subbunch_at(const DatumPtr& whole, const Path& path) {
  DatumPtr cur = whole;
  for (size_t i = 0; i < path.size(); i++) {
    if (cur->kind == Datum::Leaf || path[i] < 0 || (size_t)path[i] >= cur->kids.size())
      throw std::out_of_range("invalid bunch path at step " + std::to_string(i));
    cur = cur->kids[path[i]];
  }
  return cur;
}

DatumPtr replace_subbunch(const DatumPtr& whole, const Path& path, const DatumPtr& replacement) {
  if (path.empty()) return replacement;
  if (whole->kind == Datum::Leaf || path[0] < 0 || (size_t)path[0] >= whole->kids.size())
    throw std::out_of_range("invalid bunch path");
  auto kids = whole->kids;
  kids[path[0]] = replace_subbunch(kids[path[0]], Path(path.begin() + 1, path.end()), replacement);
  return Datum::mk(whole->kind, std::move(kids));
}

std::string print_sequent(const Sequent& s) {
  return print_datum(s.antecedent) + " |- " + print_datum(s.succedent);
}

}  // namespace ck
