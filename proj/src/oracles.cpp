#include "ck/oracles.hpp"

#include <algorithm>
#include <functional>

#include "ck/ipl.hpp"

namespace ck {

// ---------------------------------------------------------------------------
// Kripke model checking

bool model_check(const KripkeModel& M, int w, const FormulaPtr& f, SatMode mode) {
  if (f->atom) {
    auto it = M.val.find(f->sym);
    if (it == M.val.end()) throw MissingAtom(f->sym);
    return it->second.count(w) != 0;
  }
  const std::string& op = f->sym;
  if (op == "bot") return false;
  if (op == "top") return true;
  if (op == "&") return model_check(M, w, f->kids[0], mode) && model_check(M, w, f->kids[1], mode);
  if (op == "|") return model_check(M, w, f->kids[0], mode) || model_check(M, w, f->kids[1], mode);
  if (op == "~") {
    if (mode == SatMode::K) return !model_check(M, w, f->kids[0], mode);
    for (int u = 0; u < M.n; u++)
      if (M.related(w, u) && model_check(M, u, f->kids[0], mode)) return false;
    return true;
  }
  if (op == "->") {
    if (mode == SatMode::K)
      return !model_check(M, w, f->kids[0], mode) || model_check(M, w, f->kids[1], mode);
    for (int u = 0; u < M.n; u++)
      if (M.related(w, u) && model_check(M, u, f->kids[0], mode) &&
          !model_check(M, u, f->kids[1], mode))
        return false;
    return true;
  }
  if (op == "box") {
    if (mode != SatMode::K) throw std::invalid_argument("box is a K-mode operator");
    for (int u = 0; u < M.n; u++)
      if (M.related(w, u) && !model_check(M, u, f->kids[0], SatMode::K)) return false;
    return true;
  }
  if (op == "dia") {
    if (mode != SatMode::K) throw std::invalid_argument("dia is a K-mode operator");
    for (int u = 0; u < M.n; u++)
      if (M.related(w, u) && model_check(M, u, f->kids[0], SatMode::K)) return true;
    return false;
  }
  throw std::invalid_argument("model_check: unsupported operator " + op);
}

// ---------------------------------------------------------------------------
// IPL decision by exhaustive multi-succedent search

namespace {

using FVec = std::vector<FormulaPtr>;

void flat(const DatumPtr& d, FVec& out) {
  if (d->kind == Datum::Leaf) {
    out.push_back(d->leaf);
    return;
  }
  for (auto& k : d->kids) flat(k, out);
}

struct MSeq {
  FVec left, right;

  // normal form: sorted, multiplicities truncated at 2
  void normalize() {
    auto norm = [](FVec& v) {
      std::sort(v.begin(), v.end(),
                [](const FormulaPtr& a, const FormulaPtr& b) { return formula_cmp(a, b) < 0; });
      FVec out;
      int run = 0;
      for (size_t i = 0; i < v.size(); i++) {
        if (i && formula_eq(v[i], v[i - 1]))
          run++;
        else
          run = 0;
        if (run < 2) out.push_back(v[i]);
      }
      v = out;
    };
    norm(left);
    norm(right);
  }

  std::string key() const {
    std::string k;
    for (auto& f : left) k += print_formula(f) + ",";
    k += "|-";
    for (auto& f : right) k += print_formula(f) + ";";
    return k;
  }
};

bool has_op(const FormulaPtr& f, const char* op) { return !f->atom && f->sym == op; }

struct IPLOracle {
  std::map<std::string, bool> memo;  // settled, context-free results

  bool decide(MSeq s) {
    s.normalize();
    std::set<std::string> visited;
    bool pruned = false;
    return go(s, visited, pruned);
  }

  bool go(MSeq s, std::set<std::string>& visited, bool& pruned_out) {
    s.normalize();
    std::string key = s.key();
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    if (visited.count(key)) {
      pruned_out = true;
      return false;
    }

    // ax
    for (auto& f : s.left)
      for (auto& g : s.right)
        if (formula_eq(f, g)) {
          memo[key] = true;
          return true;
        }

    visited.insert(key);
    bool pruned = false;
    bool res = expand(s, visited, pruned);
    visited.erase(key);
    if (res)
      memo[key] = true;
    else if (!pruned)
      memo[key] = false;  // the failure did not depend on the path
    if (pruned) pruned_out = true;
    return res;
  }

  bool expand(const MSeq& s, std::set<std::string>& visited, bool& pruned) {
    // invertible saturation: one fixed instance suffices
    for (size_t i = 0; i < s.left.size(); i++) {
      const FormulaPtr& f = s.left[i];
      if (has_op(f, "&")) {
        MSeq p = s;
        p.left.erase(p.left.begin() + i);
        p.left.push_back(f->kids[0]);
        p.left.push_back(f->kids[1]);
        return go(p, visited, pruned);
      }
      if (has_op(f, "|")) {
        MSeq p1 = s, p2 = s;
        p1.left.erase(p1.left.begin() + i);
        p2.left.erase(p2.left.begin() + i);
        p1.left.push_back(f->kids[0]);
        p2.left.push_back(f->kids[1]);
        bool a = go(p1, visited, pruned);
        if (!a) return false;
        return go(p2, visited, pruned);
      }
    }
    for (size_t j = 0; j < s.right.size(); j++) {
      const FormulaPtr& f = s.right[j];
      if (has_op(f, "&")) {
        MSeq p1 = s, p2 = s;
        p1.right[j] = f->kids[0];
        p2.right[j] = f->kids[1];
        bool a = go(p1, visited, pruned);
        if (!a) return false;
        return go(p2, visited, pruned);
      }
      if (has_op(f, "|")) {
        MSeq p = s;
        p.right[j] = f->kids[0];
        p.right.push_back(f->kids[1]);
        return go(p, visited, pruned);
      }
    }

    // choice rules
    for (size_t i = 0; i < s.left.size(); i++) {
      const FormulaPtr& f = s.left[i];
      if (has_op(f, "->")) {
        // premiss one keeps the principal for reuse
        MSeq p1 = s;
        p1.right.push_back(f->kids[0]);
        MSeq p2 = s;
        p2.left.erase(p2.left.begin() + i);
        p2.left.push_back(f->kids[1]);
        bool pr1 = false, pr2 = false;
        if (go(p1, visited, pr1) && go(p2, visited, pr2)) return true;
        pruned = pruned || pr1 || pr2;
      }
      if (has_op(f, "~")) {
        MSeq p = s;
        p.right.push_back(f->kids[0]);
        bool pr = false;
        if (go(p, visited, pr)) return true;
        pruned = pruned || pr;
      }
    }
    for (size_t j = 0; j < s.right.size(); j++) {
      const FormulaPtr& f = s.right[j];
      if (has_op(f, "->")) {
        MSeq p;
        p.left = s.left;
        p.left.push_back(f->kids[0]);
        p.right = {f->kids[1]};
        bool pr = false;
        if (go(p, visited, pr)) return true;
        pruned = pruned || pr;
      }
      if (has_op(f, "~")) {
        MSeq p;
        p.left = s.left;
        p.left.push_back(f->kids[0]);
        bool pr = false;
        if (go(p, visited, pr)) return true;
        pruned = pruned || pr;
      }
    }
    return false;
  }
};

IPLOracle& oracle() {
  static thread_local IPLOracle o;
  return o;
}

}  // namespace

bool ipl_decide(const Sequent& goal) {
  MSeq s;
  flat(goal.antecedent, s.left);
  flat(goal.succedent, s.right);
  return oracle().decide(s);
}

bool ipl_decide_formula(const FormulaPtr& f) {
  MSeq s;
  s.right.push_back(f);
  return oracle().decide(s);
}

void ipl_decide_cache_clear() { oracle().memo.clear(); }

// ---------------------------------------------------------------------------
// Modal K: layered universal model family

namespace {

void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (f->atom) {
    out.insert(f->sym);
    return;
  }
  for (auto& k : f->kids) collect_atoms(k, out);
}

int count_subformulas(const FormulaPtr& f) {
  int n = 1;
  for (auto& k : f->kids) n += count_subformulas(k);
  return n;
}

}  // namespace

bool k_decide(const FormulaPtr& f, KripkeModel* counter, int* world) {
  std::set<std::string> atomset;
  collect_atoms(f, atomset);
  std::vector<std::string> atoms(atomset.begin(), atomset.end());
  int d = modal_depth(f);
  long stated_bound = (long)d * count_subformulas(f) + 1;

  size_t nval = size_t(1) << atoms.size();

  // types per layer, deepest first; a type is (valuation, successor set)
  struct Type {
    size_t val;
    std::vector<int> succ;  // indices into the previous layer's world block
  };
  std::vector<std::vector<Type>> layers(d + 1);
  std::vector<int> layer_base(d + 1, 0);

  // layer d: valuations only
  for (size_t v = 0; v < nval; v++) layers[d].push_back({v, {}});
  for (int k = d - 1; k >= 1; k--) {
    size_t prev = layers[k + 1].size();
    if (prev > 16 || nval << prev > 4096) throw KBoundExceeded(stated_bound);
    for (size_t v = 0; v < nval; v++)
      for (size_t mask = 0; mask < (size_t(1) << prev); mask++) {
        Type t{v, {}};
        for (size_t i = 0; i < prev; i++)
          if (mask & (size_t(1) << i)) t.succ.push_back((int)i);
        layers[k].push_back(t);
      }
  }

  // assemble the fixed part of the model: worlds for layers 1..d
  KripkeModel M;
  int total = 0;
  for (int k = 1; k <= d; k++) {
    layer_base[k] = total;
    total += (int)layers[k].size();
  }
  int root = total;
  M.n = total + 1;
  M.R.assign(M.n, std::vector<bool>(M.n, false));
  for (auto& a : atoms) M.val[a] = {};
  for (int k = 1; k <= d; k++)
    for (size_t i = 0; i < layers[k].size(); i++) {
      int w = layer_base[k] + (int)i;
      for (size_t b = 0; b < atoms.size(); b++)
        if (layers[k][i].val & (size_t(1) << b)) M.val[atoms[b]].insert(w);
      if (k < d)
        for (int s : layers[k][i].succ) M.R[w][layer_base[k + 1] + s] = true;
    }

  size_t rsucc = d >= 1 ? layers[1].size() : 0;
  if (rsucc > 20) throw KBoundExceeded(stated_bound);

  for (size_t v = 0; v < nval; v++) {
    for (size_t mask = 0; mask < (size_t(1) << rsucc); mask++) {
      for (size_t b = 0; b < atoms.size(); b++) {
        if (v & (size_t(1) << b))
          M.val[atoms[b]].insert(root);
        else
          M.val[atoms[b]].erase(root);
      }
      for (size_t i = 0; i < rsucc; i++) M.R[root][layer_base[1] + (int)i] = mask & (size_t(1) << i);
      if (!model_check(M, root, f, SatMode::K)) {
        if (counter) *counter = M;
        if (world) *world = root;
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// IPL countermodel sweep over small reflexive-transitive persistent models

namespace {

bool transitive(const std::vector<std::vector<bool>>& R, int n) {
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++) {
      if (!R[a][b]) continue;
      for (int c = 0; c < n; c++)
        if (R[b][c] && !R[a][c]) return false;
    }
  return true;
}

std::vector<std::vector<std::vector<bool>>>& preorders(int n) {
  static thread_local std::map<int, std::vector<std::vector<std::vector<bool>>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<std::vector<bool>>> out;
  int offdiag = n * n - n;
  for (size_t mask = 0; mask < (size_t(1) << offdiag); mask++) {
    std::vector<std::vector<bool>> R(n, std::vector<bool>(n, false));
    int bit = 0;
    for (int a = 0; a < n; a++)
      for (int b = 0; b < n; b++) {
        if (a == b) {
          R[a][b] = true;
          continue;
        }
        R[a][b] = mask & (size_t(1) << bit);
        bit++;
      }
    if (transitive(R, n)) out.push_back(R);
  }
  return cache[n] = out;
}

std::vector<std::set<int>> upsets(const std::vector<std::vector<bool>>& R, int n) {
  std::vector<std::set<int>> out;
  for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
    std::set<int> s;
    for (int w = 0; w < n; w++)
      if (mask & (size_t(1) << w)) s.insert(w);
    bool closed = true;
    for (int w : s)
      for (int u = 0; u < n; u++)
        if (R[w][u] && !s.count(u)) closed = false;
    if (closed) out.push_back(s);
  }
  return out;
}

}  // namespace

bool ipl_sweep_valid(const Sequent& goal, int max_worlds, KripkeModel* counter, int* world) {
  FVec left, right;
  flat(goal.antecedent, left);
  flat(goal.succedent, right);
  std::set<std::string> atomset;
  for (auto& f : left) collect_atoms(f, atomset);
  for (auto& f : right) collect_atoms(f, atomset);
  std::vector<std::string> atoms(atomset.begin(), atomset.end());

  for (int n = 1; n <= max_worlds; n++) {
    for (auto& R : preorders(n)) {
      auto ups = upsets(R, n);
      // assignment per atom ranges over the up-closed sets
      std::vector<size_t> idx(atoms.size(), 0);
      while (true) {
        KripkeModel M;
        M.n = n;
        M.R = R;
        for (size_t a = 0; a < atoms.size(); a++) M.val[atoms[a]] = ups[idx[a]];
        for (int w = 0; w < n; w++) {
          bool pre = true;
          for (auto& f : left)
            if (!model_check(M, w, f, SatMode::IPL)) {
              pre = false;
              break;
            }
          if (!pre) continue;
          bool post = false;
          for (auto& f : right)
            if (model_check(M, w, f, SatMode::IPL)) {
              post = true;
              break;
            }
          if (!post) {
            if (counter) *counter = M;
            if (world) *world = w;
            return false;
          }
        }
        // next assignment
        size_t a = 0;
        for (; a < atoms.size(); a++) {
          if (++idx[a] < ups.size()) break;
          idx[a] = 0;
        }
        if (a == atoms.size()) break;
        if (atoms.empty()) break;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Corpus enumeration

static std::vector<std::vector<FormulaPtr>> enumerate_sizes(
    int max_nodes, const std::vector<std::string>& atoms,
    const std::vector<std::string>& unary_ops, const std::vector<std::string>& binary_ops) {
  std::vector<std::vector<FormulaPtr>> by_size(max_nodes + 1);
  for (auto& a : atoms) by_size[1].push_back(Formula::mk_atom(a));
  for (int s = 2; s <= max_nodes; s++) {
    for (auto& op : unary_ops)
      for (auto& k : by_size[s - 1]) by_size[s].push_back(Formula::mk_op(op, {k}));
    for (auto& op : binary_ops)
      for (int ls = 1; ls <= s - 2; ls++)
        for (auto& l : by_size[ls])
          for (auto& r : by_size[s - 1 - ls]) by_size[s].push_back(Formula::mk_op(op, {l, r}));
  }
  return by_size;
}

std::vector<FormulaPtr> enumerate_ipl_formulas(int max_nodes,
                                               const std::vector<std::string>& atoms) {
  auto by_size = enumerate_sizes(max_nodes, atoms, {"~"}, {"&", "|", "->"});
  std::vector<FormulaPtr> out;
  for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<FormulaPtr> enumerate_modal_formulas(int max_nodes,
                                                 const std::vector<std::string>& atoms,
                                                 int max_modal_depth) {
  auto by_size = enumerate_sizes(max_nodes, atoms, {"~", "box", "dia"}, {"&", "|"});
  std::vector<FormulaPtr> out;
  for (auto& v : by_size)
    for (auto& f : v)
      if (modal_depth(f) <= max_modal_depth) out.push_back(f);
  return out;
}

}  // namespace ck
