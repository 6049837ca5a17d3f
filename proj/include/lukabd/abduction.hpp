#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lukabd/clausal.hpp"
#include "lukabd/engine.hpp"
#include "lukabd/interval.hpp"

namespace lukabd {

enum class SolutionClass { Any, Proper, EntailmentMinimal, TheoryMinimal };

inline const char* solution_class_str(SolutionClass c) {
  switch (c) {
    case SolutionClass::Any: return "any";
    case SolutionClass::Proper: return "proper";
    case SolutionClass::EntailmentMinimal: return "entailment-minimal";
    case SolutionClass::TheoryMinimal: return "theory-minimal";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

struct AbductionOptions {
  bool allow_empty_term = false;     // admit the empty explanation (Top)
  std::size_t candidate_cap = 200000;  // bound on candidate equivalence classes
  EngineLimits engine_limits;
};

struct AbductionProblem {
  Theory theory;
  Formula observation;
  std::vector<IntervalLiteral> hypotheses;  // ordered and duplicate-free
  std::vector<FuzzyRule> flp_rules;         // degree-annotated theory, when given
  FragmentTag fragment = FragmentTag::General;
  AbductionOptions options;

  bool hypothesis(const IntervalLiteral& l) const {
    for (const auto& h : hypotheses)
      if (h == l) return true;
    return false;
  }

  std::set<std::string> all_vars() const {
    std::set<std::string> vars = theory.vars();
    observation.collect_vars(vars);
    for (const auto& h : hypotheses) vars.insert(h.var);
    for (const auto& r : flp_rules)
      for (const auto& v : r.clause.vars()) vars.insert(v);
    return vars;
  }

  // Theory with every degree rule expressed through a fresh definitional
  // variable pinned to the rule's clause value; the form general backends
  // consume when the problem leaves the pure-program fragment.
  Theory effective_theory() const {
    if (flp_rules.empty()) return theory;
    Theory out = theory;
    std::set<std::string> used = all_vars();
    int i = 0;
    for (const auto& r : flp_rules) {
      std::string d = "_deg" + std::to_string(i++);
      while (used.count(d)) d = "_deg" + std::to_string(i++);
      used.insert(d);
      out.add(Formula::iff(Formula::var(d), r.clause.to_formula()));
      out.add(Formula::lit(IntervalLiteral(d, Rel::Geq, r.degree)));
      out.add(Formula::lit(IntervalLiteral(d, Rel::Leq, r.degree)));
    }
    return out;
  }
};

// Most specific fragment tag consistent with the problem's shape.
inline FragmentTag detect_fragment(const Theory& theory, const Formula& obs,
                                   const std::vector<FuzzyRule>& flp_rules = {}) {
  if (!flp_rules.empty()) {
    // A pure degree-annotated program with a rule or term observation; any
    // admixture of plain formulas or a general observation leaves the
    // fragment and is handled through definitional variables.
    if (theory.empty() &&
        (shape::as_interval_term(obs) || shape::as_simple_clause(obs)))
      return FragmentTag::Flp;
    return FragmentTag::General;
  }
  bool sca_obs = shape::as_simple_clause(obs).has_value() ||
                 shape::as_interval_clause(obs).has_value() ||
                 shape::as_interval_term(obs).has_value() ||
                 shape::as_simple_term(obs).has_value();
  if (sca_obs && ScaTheory::from(theory)) return FragmentTag::Sca;

  if (auto cf = CfTheory::from(theory)) {
    if (cover_free_check(*cf)) return FragmentTag::CfIntervalClause;
    return FragmentTag::IntervalClause;
  }
  bool all_interval_clauses = true;
  for (const auto& f : theory)
    if (!shape::as_interval_clause(f)) all_interval_clauses = false;
  if (all_interval_clauses && !theory.empty()) return FragmentTag::IntervalClause;
  return FragmentTag::General;
}

inline AbductionProblem make_problem(Theory theory, Formula obs,
                                     std::vector<IntervalLiteral> hypotheses,
                                     AbductionOptions options = {},
                                     std::vector<FuzzyRule> flp_rules = {}) {
  AbductionProblem p;
  p.theory = std::move(theory);
  p.observation = std::move(obs);
  // Deduplicate hypotheses, keeping first occurrences in order.
  for (auto& h : hypotheses)
    if (!p.hypothesis(h)) p.hypotheses.push_back(std::move(h));
  p.flp_rules = std::move(flp_rules);
  p.options = std::move(options);
  p.fragment = detect_fragment(p.theory, p.observation, p.flp_rules);
  return p;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct SolutionReport {
  IntervalTerm term;
  std::set<SolutionClass> classes;
  std::optional<Valuation> consistency_witness;
  std::optional<Valuation> properness_countermodel;
};

enum class RejectReason {
  None,
  EmptyTerm,
  NotConsistent,
  NotEntailing,
  NotProper,
  NotMinimal,
  NotTheoryMinimal,
};

inline const char* reject_reason_str(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "accepted";
    case RejectReason::EmptyTerm: return "empty term excluded";
    case RejectReason::NotConsistent: return "inconsistent with the theory";
    case RejectReason::NotEntailing: return "does not entail the observation";
    case RejectReason::NotProper: return "entails the observation on its own";
    case RejectReason::NotMinimal: return "a one-step weakening is still a solution";
    case RejectReason::NotTheoryMinimal: return "a strictly weaker solution modulo the theory exists";
  }
  return "?";
}

struct RecognitionResult {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  SolutionReport report;
  std::optional<IntervalTerm> dominating;  // witness for the minimality rejections
};

struct EnumerationResult {
  std::vector<SolutionReport> solutions;
  bool truncated = false;
};

struct NecessityResult {
  bool necessary = false;
  bool empty_class = false;
};

// ---------------------------------------------------------------------------
// Internal: backends and candidate classes
// ---------------------------------------------------------------------------

namespace detail {

// Uniform query surface over the fragment-specific decision procedures.
class AbductionBackend {
public:
  virtual ~AbductionBackend() = default;
  // Gamma extended by tau is satisfiable.
  virtual bool sat_with(const IntervalTerm& tau, Valuation* witness) = 0;
  // Gamma extended by tau entails the observation.
  virtual bool entails_obs(const IntervalTerm& tau, Valuation* counter) = 0;
  // tau alone entails the observation.
  virtual bool term_entails_obs(const IntervalTerm& tau, Valuation* counter) = 0;
  // Gamma extended by sigma entails the term tau.
  virtual bool entails_term(const IntervalTerm& sigma, const IntervalTerm& tau) = 0;
};

class GeneralBackend : public AbductionBackend {
public:
  GeneralBackend(const AbductionProblem& p, Engine& e)
      : theory_(p.effective_theory()), observation_(p.observation), engine_(e) {}

  bool sat_with(const IntervalTerm& tau, Valuation* witness) override {
    Theory ext = theory_;
    if (!tau.empty()) ext.add(tau.to_formula());
    auto r = engine_.sat(ext);
    if (r.is_sat() && witness) *witness = *r.witness;
    return r.is_sat();
  }
  bool entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    Theory ext = theory_;
    if (!tau.empty()) ext.add(tau.to_formula());
    auto r = engine_.entails(ext, observation_);
    if (!r.is_entailed() && counter) *counter = *r.witness;
    return r.is_entailed();
  }
  bool term_entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    Theory alone;
    if (!tau.empty()) alone.add(tau.to_formula());
    auto r = engine_.entails(alone, observation_);
    if (!r.is_entailed() && counter) *counter = *r.witness;
    return r.is_entailed();
  }
  bool entails_term(const IntervalTerm& sigma, const IntervalTerm& tau) override {
    Theory ext = theory_;
    if (!sigma.empty()) ext.add(sigma.to_formula());
    return engine_.entails(ext, tau.to_formula()).is_entailed();
  }

private:
  Theory theory_;
  Formula observation_;
  Engine& engine_;
};

class ScaBackend : public AbductionBackend {
public:
  ScaBackend(ScaTheory gamma, ScaObservation obs, Formula obs_formula)
      : gamma_(std::move(gamma)), obs_(std::move(obs)),
        obs_formula_(std::move(obs_formula)) {}

  bool sat_with(const IntervalTerm& tau, Valuation* witness) override {
    auto r = sca_sat(gamma_, &tau);
    if (r.is_sat() && witness) *witness = *r.witness;
    return r.is_sat();
  }
  bool entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    return sca_entails(gamma_, &tau, obs_, counter);
  }
  bool term_entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    ScaTheory empty;
    return sca_entails(empty, &tau, obs_, counter);
  }
  bool entails_term(const IntervalTerm& sigma, const IntervalTerm& tau) override {
    if (tau.empty()) return true;
    ScaObservation goal = *ScaObservation::from(tau.to_formula());
    return sca_entails(gamma_, &sigma, goal, nullptr);
  }

private:
  ScaTheory gamma_;
  ScaObservation obs_;
  Formula obs_formula_;
};

class FlpBackend : public AbductionBackend {
public:
  FlpBackend(std::vector<FuzzyRule> program, FlpObservation obs)
      : program_(std::move(program)), obs_(std::move(obs)) {}

  bool sat_with(const IntervalTerm& tau, Valuation* witness) override {
    auto r = flp_sat(program_, &tau);
    if (r.is_sat() && witness) *witness = *r.witness;
    return r.is_sat();
  }
  bool entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    return flp_entails(program_, &tau, obs_, counter);
  }
  bool term_entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    std::vector<FuzzyRule> empty;
    return flp_entails(empty, &tau, obs_, counter);
  }
  bool entails_term(const IntervalTerm& sigma, const IntervalTerm& tau) override {
    if (tau.empty()) return true;
    FlpObservation goal;
    goal.term = tau;
    return flp_entails(program_, &sigma, goal, nullptr);
  }

private:
  std::vector<FuzzyRule> program_;
  FlpObservation obs_;
};

class CfBackend : public AbductionBackend {
public:
  CfBackend(const CfTheory& gamma, IntervalTerm obs,
            const std::vector<IntervalLiteral>& hypotheses, Theory theory)
      : obs_(std::move(obs)), theory_(std::move(theory)) {
    hp_ = horn_reduce(gamma, obs_, hypotheses);
  }

  bool sat_with(const IntervalTerm& tau, Valuation* witness) override {
    HornClosure c = horn_closure(hp_, atoms_of(tau));
    if (c.falsum) return false;
    if (witness) *witness = complete(horn_closure_valuation(hp_, c));
    return true;
  }
  bool entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    HornClosure c = horn_closure(hp_, atoms_of(tau));
    if (c.falsum) return true;
    bool all = true;
    for (int g : hp_.goal)
      if (!c.derived[static_cast<std::size_t>(g)]) all = false;
    if (!all && counter) *counter = complete(horn_closure_valuation(hp_, c));
    return all;
  }
  bool term_entails_obs(const IntervalTerm& tau, Valuation* counter) override {
    if (term_entails_term(tau, obs_)) return true;
    if (counter) {
      Valuation v = tau.model();
      for (const auto& p : obs_.vars())
        if (!v.count(p)) v[p] = Rat(0);
      for (const auto& p : obs_.vars()) {
        auto x = pick_in_difference(tau.interval(p), obs_.interval(p));
        if (x) {
          v[p] = *x;
          break;
        }
      }
      *counter = complete(std::move(v));
    }
    return false;
  }
  bool entails_term(const IntervalTerm& sigma, const IntervalTerm& tau) override {
    return horn_entails(hp_, atoms_of(sigma), atoms_of(tau));
  }

private:
  std::vector<int> atoms_of(const IntervalTerm& t) const {
    std::vector<int> out;
    for (const auto& l : t.literals()) {
      int a = hp_.atom_of(l);
      if (a < 0) throw Error("cf backend: literal outside the atom set");
      out.push_back(a);
    }
    return out;
  }
  Valuation complete(Valuation v) const {
    std::set<std::string> vars = theory_.vars();
    obs_.to_formula().collect_vars(vars);
    for (const auto& p : vars)
      if (!v.count(p)) v[p] = Rat(0);
    return v;
  }

  HornProblem hp_;
  IntervalTerm obs_;
  Theory theory_;
};

// ----- Candidate equivalence classes ---------------------------------------

// Weak-equivalence class of a nonempty term over the hypothesis set,
// identified by its non-full per-variable permitted intervals and represented
// by the minimal achieving literal set.
struct Candidate {
  IntervalTerm canonical;
  std::vector<int> h_indices;  // sorted positions of the canonical literals in H
};

struct CandidateSpace {
  std::vector<Candidate> all;  // subset-enumeration order: size, then indices
  bool truncated = false;
};

inline CandidateSpace build_candidates(const std::vector<IntervalLiteral>& H,
                                       bool allow_empty, std::size_t cap) {
  struct Option {
    std::optional<IntervalLiteral> lit;  // nullopt: unconstrained
    int h_index = -1;
  };
  // Group the non-full, per-side options variable by variable.
  std::map<std::string, std::pair<std::vector<Option>, std::vector<Option>>> by_var;
  int first_full = -1;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const auto& l = H[i];
    PermittedInterval li = literal_interval(l);
    if (li.is_full()) {
      if (first_full < 0) first_full = static_cast<int>(i);
      continue;
    }
    bool lower = l.rel == Rel::Geq || l.rel == Rel::Gt;
    auto& slot = by_var[l.var];
    auto& side = lower ? slot.first : slot.second;
    side.push_back({l, static_cast<int>(i)});
  }
  std::vector<std::string> vars;
  for (auto& [v, slot] : by_var) {
    vars.push_back(v);
    slot.first.insert(slot.first.begin(), Option{});
    slot.second.insert(slot.second.begin(), Option{});
  }

  CandidateSpace out;
  // Odometer over lower/upper choices per variable.
  std::vector<std::size_t> pick(vars.size() * 2, 0);
  for (;;) {
    std::vector<IntervalLiteral> lits;
    std::vector<int> idx;
    bool unsat = false;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const auto& slot = by_var[vars[v]];
      const Option& lo = slot.first[pick[2 * v]];
      const Option& hi = slot.second[pick[2 * v + 1]];
      PermittedInterval iv = PermittedInterval::full();
      if (lo.lit) iv = iv.intersect(literal_interval(*lo.lit));
      if (hi.lit) iv = iv.intersect(literal_interval(*hi.lit));
      if (iv.empty()) {
        unsat = true;
        break;
      }
      if (lo.lit) {
        lits.push_back(*lo.lit);
        idx.push_back(lo.h_index);
      }
      if (hi.lit) {
        lits.push_back(*hi.lit);
        idx.push_back(hi.h_index);
      }
    }
    if (!unsat) {
      if (lits.empty()) {
        // The Top class: admissible when empty terms are allowed or some
        // full-interval literal can stand in for it.
        if (allow_empty) {
          out.all.push_back({IntervalTerm{}, {}});
        } else if (first_full >= 0) {
          out.all.push_back({IntervalTerm({H[static_cast<std::size_t>(first_full)]}),
                             {first_full}});
        }
      } else {
        std::sort(idx.begin(), idx.end());
        out.all.push_back({IntervalTerm(std::move(lits)), std::move(idx)});
      }
      if (out.all.size() > cap) {
        out.truncated = true;
        out.all.pop_back();
        break;
      }
    }
    // Step the odometer.
    std::size_t d = 0;
    for (; d < pick.size(); ++d) {
      const auto& slot = by_var[vars[d / 2]];
      std::size_t limit = (d % 2 == 0 ? slot.first : slot.second).size();
      if (pick[d] + 1 < limit) {
        ++pick[d];
        break;
      }
      pick[d] = 0;
    }
    if (d == pick.size()) break;
    if (pick.empty()) break;
  }

  std::sort(out.all.begin(), out.all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.h_indices.size() != b.h_indices.size())
      return a.h_indices.size() < b.h_indices.size();
    return a.h_indices < b.h_indices;
  });
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

// Recognition, existence, enumeration, relevance and necessity over the four
// solution classes, with dispatch to the polynomial fragment backends.
class AbductionSolver {
public:
  explicit AbductionSolver(AbductionProblem problem)
      : p_(std::move(problem)), engine_(p_.options.engine_limits) {
    route();
  }

  const AbductionProblem& problem() const { return p_; }
  const EngineStats& engine_stats() const { return engine_.stats(); }
  bool routed_through_fast_path() const { return fast_path_; }

  // ----- recognition --------------------------------------------------------

  RecognitionResult recognize(const IntervalTerm& tau, SolutionClass cls) {
    for (const auto& l : tau.literals())
      if (!p_.hypothesis(l)) throw HypothesisViolation(l.str());
    RecognitionResult res;
    res.report.term = tau;

    if (tau.empty() && !p_.options.allow_empty_term) {
      res.reason = RejectReason::EmptyTerm;
      return res;
    }

    Valuation w;
    if (!backend_->sat_with(tau, &w)) {
      res.reason = RejectReason::NotConsistent;
      return res;
    }
    res.report.consistency_witness = w;
    if (!backend_->entails_obs(tau, nullptr)) {
      res.reason = RejectReason::NotEntailing;
      return res;
    }
    res.report.classes.insert(SolutionClass::Any);

    if (cls != SolutionClass::Any) {
      Valuation cm;
      if (backend_->term_entails_obs(tau, &cm)) {
        res.reason = RejectReason::NotProper;
        return res;
      }
      res.report.properness_countermodel = cm;
      res.report.classes.insert(SolutionClass::Proper);
    }

    if (cls == SolutionClass::EntailmentMinimal ||
        cls == SolutionClass::TheoryMinimal) {
      auto dom = find_weakening_solution(tau);
      if (dom) {
        res.reason = RejectReason::NotMinimal;
        res.dominating = dom;
        return res;
      }
      res.report.classes.insert(SolutionClass::EntailmentMinimal);
    }

    if (cls == SolutionClass::TheoryMinimal) {
      auto dom = find_theory_dominator(tau);
      if (dom) {
        res.reason = RejectReason::NotTheoryMinimal;
        res.dominating = dom;
        return res;
      }
      res.report.classes.insert(SolutionClass::TheoryMinimal);
    }

    res.accepted = true;
    return res;
  }

  // ----- existence and enumeration ------------------------------------------

  std::optional<IntervalTerm> exists_solution(SolutionClass cls) {
    EnumerationResult r = enumerate_solutions(cls, 1);
    if (!r.solutions.empty()) return r.solutions.front().term;
    return std::nullopt;
  }

  EnumerationResult enumerate_solutions(SolutionClass cls,
                                        std::size_t budget = SIZE_MAX) {
    const detail::CandidateSpace& space = candidates();
    EnumerationResult out;
    out.truncated = space.truncated;

    // First pass: plain solutions in candidate order.
    std::vector<const detail::Candidate*> sols;
    for (const auto& cand : space.all) {
      if (cls == SolutionClass::Any && out.solutions.size() >= budget) {
        out.truncated = true;
        break;
      }
      if (!cached_sat(cand)) continue;
      if (!cached_entails_obs(cand)) continue;
      if (cls == SolutionClass::Any) {
        out.solutions.push_back(report_for(cand.canonical, SolutionClass::Any));
        continue;
      }
      if (cached_term_entails_obs(cand)) continue;  // improper
      sols.push_back(&cand);
    }
    if (cls == SolutionClass::Any) return out;

    if (cls == SolutionClass::Proper) {
      for (const auto* cand : sols) {
        if (out.solutions.size() >= budget) {
          out.truncated = true;
          break;
        }
        out.solutions.push_back(report_for(cand->canonical, SolutionClass::Proper));
      }
      return out;
    }

    if (cls == SolutionClass::EntailmentMinimal) {
      for (const auto* cand : sols) {
        if (out.solutions.size() >= budget) {
          out.truncated = true;
          break;
        }
        if (!find_weakening_solution(cand->canonical))
          out.solutions.push_back(
              report_for(cand->canonical, SolutionClass::EntailmentMinimal));
      }
      return out;
    }

    // Theory-minimal: an entailment-minimal solution with no strictly weaker
    // proper solution modulo the theory; the dominator scan ranges over all
    // proper solutions already computed.
    for (const auto* cand : sols) {
      if (out.solutions.size() >= budget) {
        out.truncated = true;
        break;
      }
      if (find_weakening_solution(cand->canonical)) continue;
      bool dominated = false;
      for (const auto* other : sols) {
        if (other == cand) continue;
        if (cached_pair_entails(cand, other) && !cached_pair_entails(other, cand)) {
          dominated = true;
          break;
        }
      }
      if (!dominated)
        out.solutions.push_back(
            report_for(cand->canonical, SolutionClass::TheoryMinimal));
    }
    return out;
  }

  // ----- relevance and necessity ---------------------------------------------

  bool relevance(const IntervalLiteral& lam, SolutionClass cls) {
    if (!p_.hypothesis(lam)) throw HypothesisViolation(lam.str());
    EnumerationResult all = enumerate_solutions(cls);
    if (all.truncated) throw BudgetExceeded("candidate budget hit during relevance");
    PermittedInterval li = literal_interval(lam);
    for (const auto& s : all.solutions) {
      // Some subset realizing this class contains lam exactly when the
      // class's interval at lam's variable refines lam.
      if (s.term.interval(lam.var).subset_of(li)) return true;
    }
    return false;
  }

  NecessityResult necessity(const IntervalLiteral& lam, SolutionClass cls) {
    if (!p_.hypothesis(lam)) throw HypothesisViolation(lam.str());
    EnumerationResult all = enumerate_solutions(cls);
    if (all.truncated) throw BudgetExceeded("candidate budget hit during necessity");
    NecessityResult res;
    if (all.solutions.empty()) {
      res.empty_class = true;
      return res;
    }
    for (const auto& s : all.solutions)
      if (achievable_without(s.term, lam)) return res;  // not necessary
    res.necessary = true;
    return res;
  }

private:
  void route() {
    fast_path_ = false;
    switch (p_.fragment) {
      case FragmentTag::Sca: {
        auto gamma = ScaTheory::from(p_.theory);
        auto obs = ScaObservation::from(p_.observation);
        if (gamma && obs) {
          backend_ = std::make_unique<detail::ScaBackend>(
              std::move(*gamma), std::move(*obs), p_.observation);
          fast_path_ = true;
          return;
        }
        break;
      }
      case FragmentTag::Flp: {
        FlpObservation obs;
        if (auto term = shape::as_interval_term(p_.observation)) {
          obs.term = std::move(*term);
        } else if (auto sc = shape::as_simple_clause(p_.observation)) {
          obs.rule = FuzzyRule(std::move(*sc), Rat(1));
        }
        if (obs.term || obs.rule) {
          backend_ = std::make_unique<detail::FlpBackend>(p_.flp_rules, std::move(obs));
          fast_path_ = true;
          return;
        }
        break;
      }
      case FragmentTag::CfIntervalClause: {
        auto gamma = CfTheory::from(p_.theory);
        auto obs = shape::as_interval_term(p_.observation);
        if (gamma && obs) {
          // The Horn abstraction additionally needs observation literals to
          // stay cover-free against the theory's.
          std::vector<IntervalLiteral> lits = gamma->occurring_literals();
          for (const auto& l : obs->literals()) lits.push_back(l);
          if (cover_free_pairs_ok(lits)) {
            backend_ = std::make_unique<detail::CfBackend>(*gamma, std::move(*obs),
                                                           p_.hypotheses, p_.theory);
            fast_path_ = true;
            return;
          }
        }
        break;
      }
      default:
        break;
    }
    backend_ = std::make_unique<detail::GeneralBackend>(p_, engine_);
  }

  const detail::CandidateSpace& candidates() {
    if (!space_)
      space_ = detail::build_candidates(p_.hypotheses, p_.options.allow_empty_term,
                                        p_.options.candidate_cap);
    return *space_;
  }

  // ----- caches with dominance lookups ---------------------------------------

  static std::string term_key(const IntervalTerm& t) {
    std::string k;
    for (const auto& p : t.vars()) {
      k += p;
      k += "@";
      k += t.interval(p).str();
      k += ";";
    }
    return k;
  }

  bool cached_sat(const detail::Candidate& cand) { return cached_sat_term(cand.canonical); }
  bool cached_entails_obs(const detail::Candidate& cand) {
    return cached_entails_obs_term(cand.canonical);
  }
  bool cached_term_entails_obs(const detail::Candidate& cand) {
    return cached_term_alone_term(cand.canonical);
  }

  bool cached_sat_term(const IntervalTerm& term) {
    std::string key = term_key(term);
    if (auto it = sat_cache_.find(key); it != sat_cache_.end()) return it->second;
    // Dominance: satisfiability with the theory is inherited upward along
    // term weakening and refuted downward.
    for (const auto& [t, ok] : sat_results_) {
      if (ok && term_entails_term(t, term)) {
        sat_cache_.emplace(key, true);
        return true;
      }
      if (!ok && term_entails_term(term, t)) {
        sat_cache_.emplace(key, false);
        return false;
      }
    }
    bool ok = backend_->sat_with(term, nullptr);
    sat_cache_.emplace(key, ok);
    sat_results_.emplace_back(term, ok);
    return ok;
  }

  bool cached_entails_obs_term(const IntervalTerm& term) {
    std::string key = term_key(term);
    if (auto it = ent_cache_.find(key); it != ent_cache_.end()) return it->second;
    for (const auto& [t, ok] : ent_results_) {
      if (ok && term_entails_term(term, t)) {
        ent_cache_.emplace(key, true);
        return true;
      }
      if (!ok && term_entails_term(t, term)) {
        ent_cache_.emplace(key, false);
        return false;
      }
    }
    bool ok = backend_->entails_obs(term, nullptr);
    ent_cache_.emplace(key, ok);
    ent_results_.emplace_back(term, ok);
    return ok;
  }

  bool cached_term_alone_term(const IntervalTerm& term) {
    std::string key = term_key(term);
    if (auto it = prop_cache_.find(key); it != prop_cache_.end()) return it->second;
    bool ok = backend_->term_entails_obs(term, nullptr);
    prop_cache_.emplace(key, ok);
    return ok;
  }

  bool cached_pair_entails(const detail::Candidate* sigma,
                           const detail::Candidate* tau) {
    return cached_pair_entails_terms(sigma->canonical, tau->canonical);
  }

  bool cached_pair_entails_terms(const IntervalTerm& sigma, const IntervalTerm& tau) {
    // Plain term entailment implies the theory-relative one.
    if (term_entails_term(sigma, tau)) return true;
    auto key = std::make_pair(term_key(sigma), term_key(tau));
    if (auto it = pair_cache_.find(key); it != pair_cache_.end()) return it->second;
    // Monotone in both slots: strengthening the premise term or weakening the
    // goal term preserves a positive answer, and dually for refutations.
    for (const auto& [s, t, ok] : pair_results_) {
      if (ok && term_entails_term(sigma, s) && term_entails_term(t, tau)) {
        pair_cache_.emplace(std::move(key), true);
        return true;
      }
      if (!ok && term_entails_term(s, sigma) && term_entails_term(tau, t)) {
        pair_cache_.emplace(std::move(key), false);
        return false;
      }
    }
    bool ok = backend_->entails_term(sigma, tau);
    pair_cache_.emplace(std::move(key), ok);
    pair_results_.emplace_back(sigma, tau, ok);
    return ok;
  }

  // ----- minimality helpers ---------------------------------------------------

  // All one-step weakenings of tau inside H: every same-variable strictly
  // weaker replacement, every full-interval replacement, and every deletion.
  std::vector<IntervalTerm> one_step_weakenings(const IntervalTerm& tau) const {
    std::vector<IntervalTerm> out;
    for (const auto& lam : tau.literals()) {
      IntervalTerm rest = tau.without(lam);
      PermittedInterval base = literal_interval(lam);
      for (const auto& mu : p_.hypotheses) {
        PermittedInterval mi = literal_interval(mu);
        if (mi.is_full()) {
          out.push_back(rest.with(mu));
          continue;
        }
        if (mu.var != lam.var) continue;
        if (mi.proper_superset_of(base)) out.push_back(rest.with(mu));
      }
      if (!rest.empty() || p_.options.allow_empty_term) out.push_back(rest);
    }
    return out;
  }

  // A one-step weakening that is still a solution; nullopt when tau is
  // entailment-minimal. Candidates weakly equivalent to tau are skipped
  // (a redundant literal's weakening proves nothing).
  std::optional<IntervalTerm> find_weakening_solution(const IntervalTerm& tau) {
    std::set<std::string> seen;
    seen.insert(term_key(tau));
    for (const auto& w : one_step_weakenings(tau)) {
      if (!seen.insert(term_key(w)).second) continue;
      if (terms_weakly_equivalent(w, tau)) continue;
      if (w.empty() && !p_.options.allow_empty_term) continue;
      if (cached_entails_obs_term(w)) return w;
    }
    return std::nullopt;
  }

  // A proper solution strictly weaker than tau modulo the theory.
  std::optional<IntervalTerm> find_theory_dominator(const IntervalTerm& tau) {
    const detail::CandidateSpace& space = candidates();
    if (space.truncated)
      throw BudgetExceeded("candidate budget hit during theory-minimality check");
    for (const auto& cand : space.all) {
      if (!cached_sat(cand)) continue;
      if (!cached_pair_entails_terms(tau, cand.canonical)) continue;
      if (cached_pair_entails_terms(cand.canonical, tau)) continue;
      if (!cached_entails_obs(cand)) continue;
      if (cached_term_entails_obs(cand)) continue;
      return cand.canonical;
    }
    return std::nullopt;
  }

  SolutionReport report_for(const IntervalTerm& term, SolutionClass cls) {
    SolutionReport r;
    r.term = term;
    r.classes.insert(SolutionClass::Any);
    Valuation w;
    if (backend_->sat_with(term, &w)) r.consistency_witness = std::move(w);
    if (cls != SolutionClass::Any) {
      r.classes.insert(SolutionClass::Proper);
      Valuation cm;
      if (!backend_->term_entails_obs(term, &cm))
        r.properness_countermodel = std::move(cm);
      if (cls == SolutionClass::EntailmentMinimal || cls == SolutionClass::TheoryMinimal)
        r.classes.insert(SolutionClass::EntailmentMinimal);
      if (cls == SolutionClass::TheoryMinimal)
        r.classes.insert(SolutionClass::TheoryMinimal);
    }
    return r;
  }

  // Whether some subset of H minus lam realizes the class of this term.
  bool achievable_without(const IntervalTerm& term, const IntervalLiteral& lam) const {
    bool uses = false;
    for (const auto& l : term.literals())
      if (l == lam) uses = true;
    if (!uses) return true;
    PermittedInterval li = literal_interval(lam);
    if (li.is_full()) {
      // Another full literal (or the empty term) can stand in.
      if (p_.options.allow_empty_term && term.size() == 1) return true;
      for (const auto& h : p_.hypotheses)
        if (!(h == lam) && literal_interval(h).is_full()) return true;
      return term.size() > 1;
    }
    // A non-full side interval is realized by exactly one literal of H.
    return false;
  }

  AbductionProblem p_;
  Engine engine_;
  std::unique_ptr<detail::AbductionBackend> backend_;
  std::optional<detail::CandidateSpace> space_;
  bool fast_path_ = false;

  std::map<std::string, bool> sat_cache_, ent_cache_, prop_cache_;
  std::vector<std::pair<IntervalTerm, bool>> sat_results_, ent_results_;
  std::map<std::pair<std::string, std::string>, bool> pair_cache_;
  std::vector<std::tuple<IntervalTerm, IntervalTerm, bool>> pair_results_;
};

}  // namespace lukabd
