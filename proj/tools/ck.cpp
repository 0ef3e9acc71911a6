#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ck/bi.hpp"
#include "ck/blp.hpp"
#include "ck/ipl.hpp"
#include "ck/meta.hpp"
#include "ck/oracles.hpp"
#include "ck/proofdoc.hpp"
#include "ck/sweep.hpp"

#ifdef CK_HAVE_OPENMP
#include <omp.h>
#endif

using namespace ck;

namespace {

constexpr int EXIT_NO = 1;
constexpr int EXIT_USAGE = 2;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Alphabet labelled_alphabet() {
  Alphabet a = modal_alphabet();
  a.operators["->"] = 2;
  return a;
}

std::string print_bired(const BIRedPtr& r, const VarPool& pool, bool cons, int ind = 0) {
  if (r->is_constraint)
    return std::string(ind * 2, ' ') + "<< " + print_constraint(r->constraint, pool) + " >>\n";
  std::string out(ind * 2, ' ');
  out += print_biseq(r->seq, pool) + "   [" + r->rule + "]\n";
  for (auto& k : r->kids) {
    if (k->is_constraint && !cons) continue;
    out += print_bired(k, pool, cons, ind + 1);
  }
  return out;
}

std::string print_iplred(const IPLRedPtr& r, const VarPool& pool, bool cons, int ind = 0) {
  if (r->is_constraint)
    return std::string(ind * 2, ' ') + "<< " + print_constraint(r->constraint, pool) + " >>\n";
  std::string out(ind * 2, ' ');
  out += print_iplseq(r->seq, pool) + "   [" + r->rule + "]\n";
  for (auto& k : r->kids) {
    if (k->is_constraint && !cons) continue;
    out += print_iplred(k, pool, cons, ind + 1);
  }
  return out;
}

std::string print_interp(const Interpretation& I, const VarPool& pool) {
  std::string out;
  for (auto& [v, b] : I) {
    if (!out.empty()) out += ", ";
    out += pool.name(v) + "=" + std::to_string(b);
  }
  return out;
}

int run_check(const json& doc) {
  std::string diag;
  if (!validate_document(doc, &diag)) {
    std::cerr << "check failed: " << diag << "\n";
    return EXIT_USAGE;
  }
  std::cerr << "check ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constraint-kernel: proof search via algebras of constraints"};
  app.require_subcommand(1);

  std::string logic = "bi", calc_name, emit = "tree", goal_text;
  int depth = 6, jobs = 1;
  bool show_constraints = false, do_check = false, simplify = false, all = false;

  auto* prove = app.add_subcommand("prove", "search for a proof");
  prove->add_option("--logic", logic, "bi | ipl | k");
  prove->add_option("--calc", calc_name, "rk | rj | rjplus | <theory file>");
  prove->add_option("--depth", depth, "search depth");
  prove->add_option("--emit", emit, "tree | json | ljplus");
  prove->add_flag("--show-constraints", show_constraints);
  prove->add_flag("--check", do_check, "re-validate the emitted document");
  prove->add_flag("--simplify", simplify, "simplify generated calculi");
  prove->add_option("--jobs", jobs, "worker threads for sweeps");
  prove->add_option("goal", goal_text, "sequent")->required();

  auto* oracle = app.add_subcommand("oracle", "independent decision procedures");
  std::string oracle_logic = "ipl", oracle_goal;
  oracle->add_option("--logic", oracle_logic, "ipl | k");
  oracle->add_option("goal", oracle_goal, "formula or sequent")->required();

  auto* gencalc = app.add_subcommand("gen-calc", "generate a relational calculus");
  std::string theory_file, gc_emit = "rules";
  gencalc->add_option("--theory", theory_file, "theory file")->required();
  gencalc->add_flag("--simplify", simplify);
  gencalc->add_option("--emit", gc_emit, "rules | json");

  auto* blp = app.add_subcommand("blp", "basic logic programming");
  std::string program_file, blp_goal, blp_emit;
  blp->add_option("--program", program_file)->required();
  blp->add_option("--goal", blp_goal)->required();
  blp->add_flag("--all", all);
  blp->add_option("--depth", depth);
  blp->add_option("--emit", blp_emit, "proof");

  auto* solve_cmd = app.add_subcommand("solve", "solve boolean constraints");
  std::vector<std::string> constraints;
  solve_cmd->add_option("constraints", constraints, "x*~y = 1 & z = 0 ...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : EXIT_USAGE;
  }

  try {
#ifdef CK_HAVE_OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#endif
    if (prove->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      if (!calc_name.empty() || logic == "k") {
        LabelledCalculus calc;
        std::string docname = "rk";
        if (calc_name.empty() || calc_name == "rk") {
          calc = builtin_rk();
        } else if (calc_name == "rj") {
          calc = builtin_rj();
          docname = "rj";
        } else if (calc_name == "rjplus") {
          calc = builtin_rjplus();
          docname = "rjplus";
        } else {
          calc = generate_relational_calculus(parse_theory(slurp(calc_name), calc_name), true);
        }
        LSeq g = parse_lseq(goal_text, labelled_alphabet());
        auto pf = prove_labelled(calc, g, depth);
        if (!pf) {
          std::cerr << "no proof within depth " << depth << "\n";
          return EXIT_NO;
        }
        json doc = document(docname, goal_text, lproof_json(*pf), ms_since(t0));
        if (emit == "json")
          std::cout << doc.dump(2) << "\n";
        else
          std::cout << print_lproof(*pf);
        if (do_check) return run_check(doc);
        return 0;
      }
      if (logic == "bi") {
        Sequent g = parse_sequent(goal_text, bi_alphabet());
        VarPool pool;
        auto res = prove_bi(g, depth, pool);
        if (!res) {
          std::cerr << "no proof within depth " << depth << "\n";
          return EXIT_NO;
        }
        json doc =
            document("bi", goal_text, proof_json(res->proof), res->interp, pool, ms_since(t0));
        doc["reduction"] = reduction_json(res->reduction, pool);
        if (emit == "json") {
          std::cout << doc.dump(2) << "\n";
        } else {
          std::cout << print_bired(res->reduction, pool, show_constraints);
          std::cout << "interpretation: " << print_interp(res->interp, pool) << "\n";
          std::cout << "valuated proof:\n" << print_proof(res->proof);
        }
        if (do_check) return run_check(doc);
        return 0;
      }
      if (logic == "ipl") {
        Sequent g = parse_sequent(goal_text, ipl_alphabet());
        VarPool pool;
        auto res = prove_ipl(g, depth, pool);
        if (!res) {
          std::cerr << "no proof within depth " << depth << "\n";
          return EXIT_NO;
        }
        json doc =
            document("ipl", goal_text, proof_json(res->proof), res->interp, pool, ms_since(t0));
        doc["reduction"] = reduction_json(res->reduction, pool);
        if (emit == "json") {
          std::cout << doc.dump(2) << "\n";
        } else if (emit == "ljplus") {
          std::cout << print_proof(res->proof);
        } else {
          std::cout << print_iplred(res->reduction, pool, show_constraints);
          std::cout << "interpretation: " << print_interp(res->interp, pool) << "\n";
          std::cout << "valuated proof:\n" << print_proof(res->proof);
        }
        if (do_check) return run_check(doc);
        return 0;
      }
      std::cerr << "unknown logic " << logic << "\n";
      return EXIT_USAGE;
    }

    if (oracle->parsed()) {
      if (oracle_logic == "ipl") {
        Sequent g = oracle_goal.find("|-") != std::string::npos
                        ? parse_sequent(oracle_goal, ipl_alphabet())
                        : Sequent{Datum::unit_mult(),
                                  Datum::mk_leaf(parse_formula(oracle_goal, ipl_alphabet()))};
        bool valid = ipl_decide(g);
        std::cout << (valid ? "valid" : "invalid") << "\n";
        if (!valid) {
          KripkeModel M;
          int w = 0;
          if (!ipl_sweep_valid(g, 4, &M, &w)) {
            std::cerr << "countermodel (" << M.n << " worlds, at world " << w << ")\n";
            for (auto& [a, ws] : M.val) {
              std::cerr << "  " << a << " true at:";
              for (int u : ws) std::cerr << " " << u;
              std::cerr << "\n";
            }
          }
        }
        return valid ? 0 : EXIT_NO;
      }
      if (oracle_logic == "k") {
        FormulaPtr f = parse_formula(oracle_goal, modal_alphabet());
        KripkeModel M;
        int w = 0;
        bool valid = k_decide(f, &M, &w);
        std::cout << (valid ? "valid" : "invalid") << "\n";
        if (!valid) std::cerr << "countermodel (" << M.n << " worlds, at world " << w << ")\n";
        return valid ? 0 : EXIT_NO;
      }
      std::cerr << "unknown oracle logic " << oracle_logic << "\n";
      return EXIT_USAGE;
    }

    if (gencalc->parsed()) {
      std::string base = theory_file;
      if (auto sl = base.find_last_of('/'); sl != std::string::npos) base = base.substr(sl + 1);
      if (auto dot = base.find_last_of('.'); dot != std::string::npos) base = base.substr(0, dot);
      TractableTheory th = parse_theory(slurp(theory_file), base);
      LabelledCalculus calc = generate_relational_calculus(th, simplify);
      if (gc_emit == "json") {
        json rules = json::array();
        for (auto& r : calc.rules) rules.push_back(print_rule(r));
        json doc;
        doc["calculus"] = calc.name;
        doc["explicit_contraction"] = calc.explicit_contraction;
        doc["rules"] = rules;
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << print_calculus(calc);
      }
      return 0;
    }

    if (blp->parsed()) {
      Query q{parse_program(slurp(program_file)), parse_goal(blp_goal)};
      BLPResult res = run_blp(q, depth, all);
      std::cerr << res.answers.size() << " answer(s) from a candidate label space of "
                << res.candidate_space << "\n";
      for (auto& a : res.answers) {
        std::cout << print_answer(a, res.pool) << "\n";
        if (blp_emit == "proof") std::cout << print_lb_proof(a.proof, res.pool);
      }
      return res.answers.empty() ? EXIT_NO : 0;
    }

    if (solve_cmd->parsed()) {
      VarPool pool;
      std::vector<Cons> cs;
      for (auto& c : constraints) cs.push_back(parse_constraint(c, pool));
      auto sol = solve(cs, pool);
      if (!sol) {
        std::cout << "unsat\n";
        return EXIT_NO;
      }
      std::cout << "sat: " << print_interp(*sol, pool) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_USAGE;
  }
  return EXIT_USAGE;
}
