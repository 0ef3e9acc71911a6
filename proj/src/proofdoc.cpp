#include "ck/proofdoc.hpp"

namespace ck {

json reduction_json(const BIRedPtr& r, const VarPool& pool) {
  if (r->is_constraint)
    return json{{"constraint", print_constraint(r->constraint, pool)}};
  json node;
  node["sequent"] = print_biseq(r->seq, pool);
  node["rule"] = r->rule;
  json kids = json::array();
  json cons = json::array();
  for (auto& k : r->kids) {
    if (k->is_constraint)
      cons.push_back(print_constraint(k->constraint, pool));
    else
      kids.push_back(reduction_json(k, pool));
  }
  node["constraints"] = cons;
  node["children"] = kids;
  return node;
}

json reduction_json(const IPLRedPtr& r, const VarPool& pool) {
  json node;
  node["sequent"] = print_iplseq(r->seq, pool);
  node["rule"] = r->rule;
  json kids = json::array();
  json cons = json::array();
  for (auto& k : r->kids) {
    if (k->is_constraint)
      cons.push_back(print_constraint(k->constraint, pool));
    else
      kids.push_back(reduction_json(k, pool));
  }
  node["constraints"] = cons;
  node["children"] = kids;
  return node;
}

json proof_json(const ProofPtr& t) {
  json node;
  node["sequent"] = print_sequent(t->seq);
  node["rule"] = t->rule;
  node["constraints"] = json::array();
  json kids = json::array();
  for (auto& k : t->kids) kids.push_back(proof_json(k));
  node["children"] = kids;
  return node;
}

json lproof_json(const LProof& t) {
  json node;
  node["sequent"] = print_lseq(t->seq);
  node["rule"] = t->rule;
  node["constraints"] = json::array();
  json kids = json::array();
  for (auto& k : t->kids) kids.push_back(lproof_json(k));
  node["children"] = kids;
  return node;
}

json document(const std::string& logic, const std::string& goal, json tree,
              const Interpretation& interp, const VarPool& pool, double ms) {
  json doc = document(logic, goal, std::move(tree), ms);
  json i = json::object();
  for (auto& [v, b] : interp) i[pool.name(v)] = b;
  doc["interpretation"] = i;
  return doc;
}

json document(const std::string& logic, const std::string& goal, json tree, double ms) {
  json doc;
  doc["version"] = 1;
  doc["logic"] = logic;
  doc["goal"] = goal;
  doc["tree"] = std::move(tree);
  doc["interpretation"] = json::object();
  doc["timing_ms"] = ms;
  return doc;
}

ProofPtr proof_from_json(const json& tree, const Alphabet& alphabet) {
  Sequent s = parse_sequent(tree.at("sequent").get<std::string>(), alphabet);
  std::vector<ProofPtr> kids;
  for (auto& k : tree.at("children")) kids.push_back(proof_from_json(k, alphabet));
  return ProofNode::mk(s, tree.at("rule").get<std::string>(), std::move(kids));
}

LProof lproof_from_json(const json& tree, const Alphabet& alphabet) {
  auto n = std::make_shared<LProofNode>();
  n->seq = parse_lseq(tree.at("sequent").get<std::string>(), alphabet);
  n->rule = tree.at("rule").get<std::string>();
  for (auto& k : tree.at("children")) n->kids.push_back(lproof_from_json(k, alphabet));
  return n;
}

bool check_lproof(const LabelledCalculus& c, const LProof& t, std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m + " at: " + print_lseq(t->seq);
    return false;
  };
  // axioms
  if (t->kids.empty()) {
    if (t->rule == "ax" || t->rule == "taut") {
      for (auto& a : t->seq.left)
        for (auto& b : t->seq.right)
          if (matom_eq(a, b)) return true;
      return fail("taut without a shared atom");
    }
    if (t->rule == "bot") {
      for (auto& a : t->seq.left)
        if (a.kind == MetaAtom::Bot) return true;
      return fail("bot without meta-absurdity");
    }
    for (auto& r : c.rules)
      if (r.name == t->rule && r.premisses.empty()) {
        // premiss-free rules close on a matching succedent atom
        auto goal = prove_labelled(c, t->seq, 1);
        if (goal && (*goal)->rule == t->rule) return true;
        return fail("axiom rule does not apply");
      }
    return fail("unknown axiom '" + t->rule + "'");
  }
  // one-step replay: some instantiation of the named rule yields exactly the
  // children's sequents (eigenvariables compared up to renaming)
  std::vector<std::string> want;
  for (auto& k : t->kids) want.push_back(lseq_canonical_key(k->seq, t->seq));
  std::sort(want.begin(), want.end());
  bool matched = false;
  for (auto& prems : labelled_rule_instances(c, t->rule, t->seq)) {
    if (prems.size() != want.size()) continue;
    std::vector<std::string> got;
    for (auto& p : prems) got.push_back(lseq_canonical_key(p, t->seq));
    std::sort(got.begin(), got.end());
    if (got == want) {
      matched = true;
      break;
    }
  }
  if (!matched) return fail("no instance of rule '" + t->rule + "' yields these premisses");
  for (auto& k : t->kids)
    if (!check_lproof(c, k, diag)) return false;
  return true;
}

bool validate_document(const json& doc, std::string* diag) {
  std::string logic = doc.at("logic").get<std::string>();
  if (logic == "bi") {
    ProofPtr p = proof_from_json(doc.at("tree"), bi_alphabet());
    return check_lbi_proof(p, diag);
  }
  if (logic == "ipl") {
    ProofPtr p = proof_from_json(doc.at("tree"), ipl_alphabet());
    return check_ljplus_proof(p, diag);
  }
  // labelled proofs
  Alphabet merged = modal_alphabet();
  merged.operators["->"] = 2;
  LProof p = lproof_from_json(doc.at("tree"), merged);
  LabelledCalculus calc;
  if (logic == "rj")
    calc = builtin_rj();
  else if (logic == "rjplus")
    calc = builtin_rjplus();
  else
    calc = builtin_rk();
  return check_lproof(calc, p, diag);
}

}  // namespace ck
