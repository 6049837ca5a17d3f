#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lukabd/io.hpp"

namespace lukabd {

using Json = nlohmann::ordered_json;

struct CommandResult {
  int exit_code = 0;
  Json doc;
};

// Exit codes: 0 answered, 1 answered-negative for boolean queries, 2 usage or
// parse error, 3 resource budget exceeded.
inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

namespace cli_detail {

inline Json rational_json(const Rat& r) { return r.fraction_str(); }

inline Json valuation_json(const Valuation& v) {
  Json j = Json::object();
  for (const auto& [var, val] : v) j[var] = rational_json(val);
  return j;
}

inline Json term_json(const IntervalTerm& t) {
  Json j = Json::object();
  j["term"] = t.str();
  Json lits = Json::array();
  for (const auto& l : t.literals()) {
    Json lit = Json::object();
    lit["var"] = l.var;
    lit["rel"] = rel_str(l.rel);
    lit["bound"] = rational_json(l.bound);
    lits.push_back(std::move(lit));
  }
  j["literals"] = std::move(lits);
  return j;
}

inline Json report_json(const SolutionReport& r) {
  Json j = term_json(r.term);
  Json classes = Json::array();
  for (auto c : r.classes) classes.push_back(solution_class_str(c));
  j["classes"] = std::move(classes);
  if (r.consistency_witness)
    j["consistency_witness"] = valuation_json(*r.consistency_witness);
  if (r.properness_countermodel)
    j["properness_countermodel"] = valuation_json(*r.properness_countermodel);
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SolutionClass parse_class(const std::string& s) {
  if (s == "any") return SolutionClass::Any;
  if (s == "proper") return SolutionClass::Proper;
  if (s == "entailment-minimal" || s == "minimal")
    return SolutionClass::EntailmentMinimal;
  if (s == "theory-minimal") return SolutionClass::TheoryMinimal;
  throw ParseError("unknown solution class '" + s + "'", 0, 0);
}

inline long long env_ll(const char* name, long long fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  return std::atoll(v);
}

inline AbductionOptions options_from_env() {
  AbductionOptions o;
  o.candidate_cap = static_cast<std::size_t>(
      env_ll("LUKABD_CANDIDATE_CAP", static_cast<long long>(o.candidate_cap)));
  o.engine_limits.time_limit_ms = env_ll("LUKABD_TIME_LIMIT_MS", 0);
  return o;
}

inline long long grid_budget_from_env() {
  return env_ll("LUKABD_GRID_BUDGET", kDefaultGridBudget);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
  long long us() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace cli_detail

inline CommandResult run_command(const std::vector<std::string>& argv) {
  using namespace cli_detail;
  CommandResult res;
  Json& doc = res.doc;
  {
    Json cmd = Json::array();
    for (const auto& a : argv) cmd.push_back(a);
    doc["command"] = std::move(cmd);
  }
  Timer timer;

  CLI::App app{"exact abduction in infinitely-valued Lukasiewicz logic"};
  app.require_subcommand(1);

  std::string file, formula_class = "any", term_text, hyp_text, goal_text;
  std::vector<std::string> premises, formulas;
  std::string mode, out_path, fragment = "general";
  unsigned long long seed = 1;
  std::size_t budget = SIZE_MAX;
  GeneratorParams gp;
  std::vector<int> bench_sizes{10, 20, 40, 80};
  int bench_reps = 5;
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent the output document");

  auto* sat = app.add_subcommand("check-sat", "decide satisfiability of a theory");
  sat->add_option("file", file, "problem file; its theory is checked");
  sat->add_option("--formula", formulas, "additional formulas");

  auto* ent = app.add_subcommand("entails", "decide entailment");
  ent->add_option("file", file, "problem file; its theory supplies premises");
  ent->add_option("--premise", premises, "premise formulas");
  ent->add_option("--goal", goal_text, "goal formula")->required();

  auto* rec = app.add_subcommand("recognize", "classify a candidate term");
  rec->add_option("file", file)->required();
  rec->add_option("--class", formula_class, "solution class");
  rec->add_option("--term", term_text, "candidate interval term")->required();

  auto* exi = app.add_subcommand("exists", "decide solution existence");
  exi->add_option("file", file)->required();
  exi->add_option("--class", formula_class);

  auto* enu = app.add_subcommand("enumerate", "list all solutions of a class");
  enu->add_option("file", file)->required();
  enu->add_option("--class", formula_class);
  enu->add_option("--budget", budget, "solution count limit");

  auto* rel = app.add_subcommand("relevance", "does the hypothesis occur in some solution");
  rel->add_option("file", file)->required();
  rel->add_option("--class", formula_class);
  rel->add_option("--hypothesis", hyp_text)->required();

  auto* nec = app.add_subcommand("necessity", "does the hypothesis occur in every solution");
  nec->add_option("file", file)->required();
  nec->add_option("--class", formula_class);
  nec->add_option("--hypothesis", hyp_text)->required();

  auto* tra = app.add_subcommand("translate", "run one of the embeddings");
  tra->add_option("file", file)->required();
  tra->add_option("--mode", mode,
                  "cpl-to-luk | cpl-clauses | horn-to-cf | properness-gadget | "
                  "relevance-gadget")
      ->required();
  tra->add_option("-o,--output", out_path, "also write the problem file here");

  auto* gen = app.add_subcommand("generate", "emit a random problem");
  gen->add_option("--fragment", fragment, "sca | flp | cf | interval-clause | general | eq4");
  gen->add_option("--seed", seed);
  gen->add_option("--vars", gp.variables);
  gen->add_option("--clauses", gp.clauses);
  gen->add_option("--hypotheses", gp.hypotheses);
  gen->add_option("--max-den", gp.max_denominator);
  gen->add_option("-o,--output", out_path);

  auto* ben = app.add_subcommand("bench", "clausal fast path against general branching");
  ben->add_option("--seed", seed);
  ben->add_option("--sizes", bench_sizes, "clause counts for the trend table");
  ben->add_option("--reps", bench_reps, "instances per size");

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  std::vector<std::string> args = argv;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    doc["status"] = "usage-error";
    doc["error"] = e.what();
    res.exit_code = kExitUsage;
    return res;
  }

  AbductionOptions options = options_from_env();
  EngineLimits limits = options.engine_limits;

  try {
    if (sat->parsed()) {
      Theory t;
      if (!file.empty()) {
        ParsedProblem p = parse_problem(read_file(file), options);
        if (!p.problem.flp_rules.empty() && p.problem.theory.empty() &&
            formulas.empty()) {
          auto r = flp_sat(p.problem.flp_rules);
          doc["status"] = r.is_sat() ? "sat" : "unsat";
          if (r.witness) doc["witness"] = valuation_json(*r.witness);
          doc["timing_ms"] = timer.ms();
          res.exit_code = r.is_sat() ? kExitYes : kExitNo;
          return res;
        }
        t = p.problem.effective_theory();
      }
      for (const auto& f : formulas) t.add(io::parse_formula(f));
      Engine e(limits);
      auto r = e.sat(t);
      doc["status"] = r.is_sat() ? "sat" : "unsat";
      if (r.witness) doc["witness"] = valuation_json(*r.witness);
      res.exit_code = r.is_sat() ? kExitYes : kExitNo;
    } else if (ent->parsed()) {
      Theory t;
      if (!file.empty())
        t = parse_problem(read_file(file), options).problem.effective_theory();
      for (const auto& f : premises) t.add(io::parse_formula(f));
      Formula goal = io::parse_formula(goal_text);
      Engine e(limits);
      auto r = e.entails(t, goal);
      doc["status"] = r.is_entailed() ? "entailed" : "not-entailed";
      if (r.witness) doc["countermodel"] = valuation_json(*r.witness);
      res.exit_code = r.is_entailed() ? kExitYes : kExitNo;
    } else if (rec->parsed()) {
      ParsedProblem p = parse_problem(read_file(file), options);
      doc["fragment"] = fragment_str(p.problem.fragment);
      if (!p.warnings.empty()) doc["warnings"] = p.warnings;
      AbductionSolver solver(p.problem);
      auto r = solver.recognize(io::parse_term(term_text), parse_class(formula_class));
      doc["status"] = r.accepted ? "accepted" : "rejected";
      doc["class"] = formula_class;
      if (!r.accepted) doc["reason"] = reject_reason_str(r.reason);
      if (r.dominating) doc["dominating_term"] = r.dominating->str();
      Json rep = report_json(r.report);
      doc["report"] = std::move(rep);
      res.exit_code = r.accepted ? kExitYes : kExitNo;
    } else if (exi->parsed()) {
      ParsedProblem p = parse_problem(read_file(file), options);
      doc["fragment"] = fragment_str(p.problem.fragment);
      AbductionSolver solver(p.problem);
      auto w = solver.exists_solution(parse_class(formula_class));
      doc["status"] = w ? "solution-exists" : "no-solution";
      doc["class"] = formula_class;
      if (w) doc["witness_term"] = w->str();
      res.exit_code = w ? kExitYes : kExitNo;
    } else if (enu->parsed()) {
      ParsedProblem p = parse_problem(read_file(file), options);
      doc["fragment"] = fragment_str(p.problem.fragment);
      AbductionSolver solver(p.problem);
      auto r = solver.enumerate_solutions(parse_class(formula_class), budget);
      doc["status"] = "enumerated";
      doc["class"] = formula_class;
      doc["count"] = r.solutions.size();
      doc["truncated"] = r.truncated;
      Json sols = Json::array();
      for (const auto& s : r.solutions) sols.push_back(report_json(s));
      doc["solutions"] = std::move(sols);
      res.exit_code = kExitYes;
    } else if (rel->parsed() || nec->parsed()) {
      ParsedProblem p = parse_problem(read_file(file), options);
      doc["fragment"] = fragment_str(p.problem.fragment);
      AbductionSolver solver(p.problem);
      io::FormulaParser hp(hyp_text);
      auto lits = hp.parse_literal_list();
      if (lits.size() != 1)
        throw ParseError("--hypothesis expects one interval literal", 0, 0);
      if (rel->parsed()) {
        bool r = solver.relevance(lits[0], parse_class(formula_class));
        doc["status"] = r ? "relevant" : "not-relevant";
        res.exit_code = r ? kExitYes : kExitNo;
      } else {
        auto r = solver.necessity(lits[0], parse_class(formula_class));
        doc["status"] = r.necessary ? "necessary" : "not-necessary";
        doc["empty_class"] = r.empty_class;
        res.exit_code = r.necessary ? kExitYes : kExitNo;
      }
      doc["class"] = formula_class;
    } else if (tra->parsed()) {
      std::string text = read_file(file);
      AbductionProblem out_problem;
      if (mode == "cpl-to-luk") {
        out_problem = cpl_to_luk_problem(parse_classical_problem(text), options);
      } else if (mode == "cpl-clauses") {
        out_problem = cpl_clauses_to_interval_clauses(parse_classical_problem(text), options);
      } else if (mode == "horn-to-cf") {
        out_problem = horn_to_cf(parse_horn_problem(text), options);
      } else if (mode == "properness-gadget") {
        out_problem = properness_gadget(parse_problem(text, options).problem);
      } else if (mode == "relevance-gadget") {
        RelevanceGadget g = relevance_gadget(parse_problem(text, options).problem);
        doc["trigger"] = g.trigger.str();
        doc["blocker"] = g.blocker.str();
        out_problem = std::move(g.problem);
      } else {
        throw ParseError("unknown translate mode '" + mode + "'", 0, 0);
      }
      std::string rendered = print_problem(out_problem);
      doc["status"] = "translated";
      doc["mode"] = mode;
      doc["fragment"] = fragment_str(out_problem.fragment);
      doc["problem"] = rendered;
      if (!out_path.empty()) {
        std::ofstream outf(out_path);
        outf << rendered;
        doc["output"] = out_path;
      }
      res.exit_code = kExitYes;
    } else if (gen->parsed()) {
      AbductionProblem p;
      if (fragment == "eq4") {
        p = eq4_instance(gp, seed, options);
      } else {
        FragmentTag tag = fragment == "sca"              ? FragmentTag::Sca
                          : fragment == "flp"            ? FragmentTag::Flp
                          : fragment == "cf"             ? FragmentTag::CfIntervalClause
                          : fragment == "interval-clause" ? FragmentTag::IntervalClause
                          : fragment == "general"        ? FragmentTag::General
                                                         : FragmentTag::General;
        if (fragment != "sca" && fragment != "flp" && fragment != "cf" &&
            fragment != "interval-clause" && fragment != "general")
          throw ParseError("unknown fragment '" + fragment + "'", 0, 0);
        p = random_problem(tag, gp, seed, options);
      }
      std::string rendered = print_problem(p);
      doc["status"] = "generated";
      doc["fragment"] = fragment_str(p.fragment);
      doc["seed"] = seed;
      doc["problem"] = rendered;
      if (!out_path.empty()) {
        std::ofstream outf(out_path);
        outf << rendered;
        doc["output"] = out_path;
      }
      res.exit_code = kExitYes;
    } else if (ben->parsed()) {
      // Clausal recognition stays LP-only while the general engine branches
      // on guarded existence instances; wall times form the trend table.
      Json trend = Json::array();
      for (int size : bench_sizes) {
        GeneratorParams sp;
        sp.variables = 6;
        sp.clauses = size;
        sp.hypotheses = 4;
        std::vector<long long> times;
        long long nodes = 0;
        for (int k = 0; k < bench_reps; ++k) {
          AbductionProblem p = random_problem(FragmentTag::Sca, sp,
                                              seed + static_cast<unsigned>(k), options);
          AbductionSolver solver(p);
          IntervalTerm tau({p.hypotheses.front()});
          Timer t;
          solver.recognize(tau, SolutionClass::EntailmentMinimal);
          times.push_back(t.us());
          nodes += solver.engine_stats().branch_nodes;
        }
        std::sort(times.begin(), times.end());
        Json row = Json::object();
        row["clauses"] = size;
        row["median_us"] = times[times.size() / 2];
        row["branch_nodes"] = nodes;
        trend.push_back(std::move(row));
      }
      doc["sca_trend"] = std::move(trend);

      Json general = Json::array();
      for (int k = 0; k < bench_reps; ++k) {
        GeneratorParams ep;
        ep.variables = 3;
        ep.depth = 3;
        AbductionProblem p = eq4_instance(ep, seed + static_cast<unsigned>(k), options);
        AbductionSolver solver(p);
        Timer t;
        solver.exists_solution(SolutionClass::Any);
        Json row = Json::object();
        row["instance"] = k;
        row["ms"] = t.ms();
        row["branch_nodes"] = solver.engine_stats().branch_nodes;
        general.push_back(std::move(row));
      }
      doc["general_eq4"] = std::move(general);
      doc["status"] = "benchmarked";
      res.exit_code = kExitYes;
    }
  } catch (const BudgetExceeded& e) {
    doc["status"] = "budget-exceeded";
    doc["error"] = e.what();
    res.exit_code = kExitBudget;
    return res;
  } catch (const GridTooLarge& e) {
    doc["status"] = "budget-exceeded";
    doc["error"] = e.what();
    res.exit_code = kExitBudget;
    return res;
  } catch (const Error& e) {
    doc["status"] = "error";
    doc["error"] = e.what();
    res.exit_code = kExitUsage;
    return res;
  }

  doc["timing_ms"] = timer.ms();
  return res;
}

}  // namespace lukabd
