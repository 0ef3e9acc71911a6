#ifndef CK_PROOFDOC_HPP
#define CK_PROOFDOC_HPP

#include <string>

#include "json.hpp"

#include "ck/bi.hpp"
#include "ck/blp.hpp"
#include "ck/ipl.hpp"
#include "ck/meta.hpp"

// ProofDocument: the one machine format. {version, logic, goal, tree,
// interpretation, timing_ms} with tree nodes {sequent, rule, constraints,
// children}. Reloaded documents re-validate under the matching checker.

namespace ck {

using nlohmann::json;

json reduction_json(const BIRedPtr& r, const VarPool& pool);
json reduction_json(const IPLRedPtr& r, const VarPool& pool);
json proof_json(const ProofPtr& t);
json lproof_json(const LProof& t);

json document(const std::string& logic, const std::string& goal, json tree,
              const Interpretation& interp, const VarPool& pool, double ms);
json document(const std::string& logic, const std::string& goal, json tree, double ms);

ProofPtr proof_from_json(const json& tree, const Alphabet& alphabet);
LProof lproof_from_json(const json& tree, const Alphabet& alphabet);

// instance-checks a labelled proof against a calculus (used by --check)
bool check_lproof(const LabelledCalculus& c, const LProof& t, std::string* diag = nullptr);

// dispatches on doc["logic"]: bi -> LBI checker, ipl -> LJ+ checker,
// k/labelled -> instance check against the named calculus
bool validate_document(const json& doc, std::string* diag = nullptr);

}  // namespace ck

#endif
