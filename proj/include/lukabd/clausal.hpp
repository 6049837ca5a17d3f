#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lukabd/engine.hpp"
#include "lukabd/interval.hpp"
#include "lukabd/linear.hpp"
#include "lukabd/normalize.hpp"

namespace lukabd {

enum class FragmentTag { General, Sca, Flp, CfIntervalClause, IntervalClause };

inline const char* fragment_str(FragmentTag t) {
  switch (t) {
    case FragmentTag::General: return "general";
    case FragmentTag::Sca: return "sca";
    case FragmentTag::Flp: return "flp";
    case FragmentTag::CfIntervalClause: return "cf-interval-clause";
    case FragmentTag::IntervalClause: return "interval-clause";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Shape recognizers
// ---------------------------------------------------------------------------

namespace shape {

inline bool flatten_disj(const Formula& f, std::vector<Formula>& leaves) {
  if (f.kind() == Conn::Disj)
    return flatten_disj(f.lhs(), leaves) && flatten_disj(f.rhs(), leaves);
  leaves.push_back(f);
  return true;
}
inline bool flatten_conj(const Formula& f, std::vector<Formula>& leaves) {
  if (f.kind() == Conn::Conj)
    return flatten_conj(f.lhs(), leaves) && flatten_conj(f.rhs(), leaves);
  leaves.push_back(f);
  return true;
}

inline std::optional<SimpleClause> as_simple_clause(const Formula& raw) {
  Formula f = normalize(raw);
  std::vector<Formula> leaves;
  flatten_disj(f, leaves);
  std::multiset<std::string> pos, neg;
  for (const auto& l : leaves) {
    if (l.kind() == Conn::Var)
      pos.insert(l.var_name());
    else if (l.kind() == Conn::Neg && l.lhs().kind() == Conn::Var)
      neg.insert(l.lhs().var_name());
    else
      return std::nullopt;
  }
  if (pos.empty() && neg.empty()) return std::nullopt;
  return SimpleClause(std::move(pos), std::move(neg));
}

inline std::optional<IntervalTerm> as_interval_term(const Formula& raw) {
  Formula f = normalize(raw);
  std::vector<Formula> leaves;
  flatten_conj(f, leaves);
  std::vector<IntervalLiteral> lits;
  for (const auto& l : leaves) {
    if (l.kind() != Conn::Lit) return std::nullopt;
    lits.push_back(l.literal());
  }
  return IntervalTerm(std::move(lits));
}

inline std::optional<IntervalClause> as_interval_clause(const Formula& raw) {
  Formula f = normalize(raw);
  std::vector<Formula> leaves;
  flatten_disj(f, leaves);
  std::vector<IntervalLiteral> lits;
  for (const auto& l : leaves) {
    if (l.kind() != Conn::Lit) return std::nullopt;
    lits.push_back(l.literal());
  }
  if (lits.empty()) return std::nullopt;
  return IntervalClause(std::move(lits));
}

// Simple term: strong conjunction of simple literals.
inline std::optional<std::vector<std::pair<std::string, bool>>> as_simple_term(
    const Formula& raw) {
  Formula f = normalize(raw);
  std::vector<Formula> leaves;
  flatten_conj(f, leaves);
  std::vector<std::pair<std::string, bool>> lits;  // (var, negated)
  for (const auto& l : leaves) {
    if (l.kind() == Conn::Var)
      lits.emplace_back(l.var_name(), false);
    else if (l.kind() == Conn::Neg && l.lhs().kind() == Conn::Var)
      lits.emplace_back(l.lhs().var_name(), true);
    else
      return std::nullopt;
  }
  return lits;
}

}  // namespace shape

// ---------------------------------------------------------------------------
// Simple clause abduction (SCA) systems
// ---------------------------------------------------------------------------

// Linear inequality image of a simple clause over named unknowns:
// sum of positives plus sum of (1 - negative) at least one.
struct ScaSystem {
  LinearSystem sys;
  std::map<std::string, int> cols;

  int col(const std::string& v) {
    auto it = cols.find(v);
    if (it != cols.end()) return it->second;
    int c = sys.add_var(v);
    cols.emplace(v, c);
    return c;
  }

  LinExpr clause_sum(const SimpleClause& kappa) {
    LinExpr e;
    for (const auto& p : kappa.positive) e.add(col(p), Rat(1));
    for (const auto& q : kappa.negative) {
      e.constant = e.constant + Rat(1);
      e.add(col(q), Rat(-1));
    }
    return e;
  }

  void add_clause(const SimpleClause& kappa) {
    sys.add(clause_sum(kappa), LinRel::Ge, Rat(1));
  }

  void add_literal(const IntervalLiteral& l) {
    LinRel rel = l.rel == Rel::Leq  ? LinRel::Le
                 : l.rel == Rel::Lt ? LinRel::Lt
                 : l.rel == Rel::Geq ? LinRel::Ge
                                     : LinRel::Gt;
    sys.add(LinExpr::var(col(l.var)), rel, l.bound);
  }

  void add_term(const IntervalTerm& t) {
    for (const auto& l : t.literals()) add_literal(l);
  }

  FeasResult solve() const {
    return lp_strict_feasible(sys.var_count(), sys.constraints());
  }

  Valuation valuation_of(const std::vector<Rat>& values) const {
    Valuation v;
    for (const auto& [name, c] : cols) v[name] = values[static_cast<std::size_t>(c)];
    return v;
  }
};

// The linear constraint image of one clause or literal; exposed for tests.
inline LinConstraint clause_to_linear(const SimpleClause& kappa,
                                      std::map<std::string, int>& cols) {
  ScaSystem s;
  s.cols = cols;
  LinExpr e = s.clause_sum(kappa);
  cols = s.cols;
  return {std::move(e), LinRel::Ge, Rat(1)};
}
inline LinConstraint clause_to_linear(const IntervalLiteral& l,
                                      std::map<std::string, int>& cols) {
  ScaSystem s;
  s.cols = cols;
  s.add_literal(l);
  cols = s.cols;
  return s.sys.constraints().back();
}

// Simple clauses plus interval-term facts.
struct ScaTheory {
  std::vector<SimpleClause> clauses;
  std::vector<IntervalTerm> terms;

  static std::optional<ScaTheory> from(const Theory& t) {
    ScaTheory out;
    for (const auto& f : t) {
      if (auto term = shape::as_interval_term(f)) {
        out.terms.push_back(std::move(*term));
        continue;
      }
      if (auto clause = shape::as_simple_clause(f)) {
        out.clauses.push_back(std::move(*clause));
        continue;
      }
      return std::nullopt;
    }
    return out;
  }

  void emit(ScaSystem& s) const {
    for (const auto& k : clauses) s.add_clause(k);
    for (const auto& t : terms) s.add_term(t);
  }
};

// Observations admitted by the fragment: an interval clause, a simple clause,
// an interval term, or a simple term. Terms decompose into one goal per
// literal; each goal carries the rows that would violate it.
class ScaObservation {
public:
  struct Goal {
    std::optional<SimpleClause> simple;          // violated by sum < 1
    std::vector<IntervalLiteral> complements;    // violated by all complements
  };

  static std::optional<ScaObservation> from(const Formula& chi) {
    ScaObservation obs;
    if (auto sc = shape::as_simple_clause(chi)) {
      Goal g;
      g.simple = std::move(*sc);
      obs.goals_.push_back(std::move(g));
      return obs;
    }
    if (auto term = shape::as_interval_term(chi)) {
      for (const auto& l : term->literals()) {
        Goal g;
        g.complements.push_back(l.complemented());
        obs.goals_.push_back(std::move(g));
      }
      return obs;
    }
    if (auto st = shape::as_simple_term(chi)) {
      for (const auto& [var, negated] : *st) {
        Goal g;
        // v(p) = 1 fails when x_p < 1; v(~q) = 1 fails when x_q > 0.
        g.complements.push_back(negated ? IntervalLiteral(var, Rel::Gt, Rat(0))
                                        : IntervalLiteral(var, Rel::Lt, Rat(1)));
        obs.goals_.push_back(std::move(g));
      }
      return obs;
    }
    if (auto ic = shape::as_interval_clause(chi)) {
      Goal g;
      for (const auto& l : ic->literals()) g.complements.push_back(l.complemented());
      obs.goals_.push_back(std::move(g));
      return obs;
    }
    return std::nullopt;
  }

  const std::vector<Goal>& goals() const { return goals_; }

private:
  std::vector<Goal> goals_;
};

// Satisfiability of an SCA theory, optionally extended by an interval term;
// one exact rational LP feasibility check, never the branch-and-bound engine.
inline EngineResult sca_sat(const ScaTheory& gamma,
                            const IntervalTerm* tau = nullptr) {
  ScaSystem s;
  gamma.emit(s);
  if (tau) s.add_term(*tau);
  FeasResult f = s.solve();
  EngineResult r;
  if (f.feasible) {
    r.status = Status::Sat;
    r.witness = s.valuation_of(f.values);
  } else {
    r.status = Status::Unsat;
  }
  return r;
}

inline EngineResult sca_sat(const Theory& gamma) {
  auto t = ScaTheory::from(gamma);
  if (!t) throw FragmentViolation("theory is not in the simple-clause fragment");
  return sca_sat(*t);
}

// Entailment in the fragment: every goal's violation system must be
// infeasible. Returns the violating valuation through `counter` when asked.
inline bool sca_entails(const ScaTheory& gamma, const IntervalTerm* tau,
                        const ScaObservation& chi, Valuation* counter = nullptr) {
  for (const auto& goal : chi.goals()) {
    ScaSystem s;
    gamma.emit(s);
    if (tau) s.add_term(*tau);
    if (goal.simple) {
      LinExpr e = s.clause_sum(*goal.simple);
      s.sys.add(std::move(e), LinRel::Lt, Rat(1));
    }
    for (const auto& l : goal.complements) s.add_literal(l);
    FeasResult f = s.solve();
    if (f.feasible) {
      if (counter) *counter = s.valuation_of(f.values);
      return false;
    }
  }
  return true;
}

inline bool sca_entails(const Theory& gamma, const Formula& chi) {
  auto t = ScaTheory::from(gamma);
  if (!t) throw FragmentViolation("theory is not in the simple-clause fragment");
  auto obs = ScaObservation::from(chi);
  if (!obs)
    throw FragmentViolation("observation is not clausal: " + chi.str());
  return sca_entails(*t, nullptr, *obs);
}

// ---------------------------------------------------------------------------
// Fuzzy logic programs
// ---------------------------------------------------------------------------

// A simple clause paired with the exact degree its value must take.
struct FuzzyRule {
  SimpleClause clause;
  Rat degree;

  FuzzyRule(SimpleClause c, Rat x) : clause(std::move(c)), degree(std::move(x)) {
    if (!(this->degree > Rat(0)) || !(this->degree <= Rat(1)))
      throw Error("fuzzy rule degree must lie in (0,1]");
  }
};

// Satisfaction pins every clause value exactly: degree one keeps the
// inequality form (the clamp may be active), a smaller degree pins the affine
// sum itself since the clamp is inactive below one.
inline void flp_emit(const std::vector<FuzzyRule>& program, ScaSystem& s) {
  for (const auto& r : program) {
    LinExpr e = s.clause_sum(r.clause);
    if (r.degree == Rat(1))
      s.sys.add(std::move(e), LinRel::Ge, Rat(1));
    else
      s.sys.add(std::move(e), LinRel::Eq, r.degree);
  }
}

inline EngineResult flp_sat(const std::vector<FuzzyRule>& program,
                            const IntervalTerm* tau = nullptr) {
  ScaSystem s;
  flp_emit(program, s);
  if (tau) s.add_term(*tau);
  FeasResult f = s.solve();
  EngineResult r;
  if (f.feasible) {
    r.status = Status::Sat;
    r.witness = s.valuation_of(f.values);
  } else {
    r.status = Status::Unsat;
  }
  return r;
}

// Observation side of a fuzzy-logic-program abduction problem: a fuzzy rule
// or an interval term.
struct FlpObservation {
  std::optional<FuzzyRule> rule;
  std::optional<IntervalTerm> term;
};

inline bool flp_entails(const std::vector<FuzzyRule>& program,
                        const IntervalTerm* tau, const FlpObservation& chi,
                        Valuation* counter = nullptr) {
  auto violated = [&](const std::vector<std::pair<LinRel, Rat>>& alts,
                      const SimpleClause& kappa) {
    for (const auto& [rel, rhs] : alts) {
      ScaSystem s;
      flp_emit(program, s);
      if (tau) s.add_term(*tau);
      s.sys.add(s.clause_sum(kappa), rel, rhs);
      FeasResult f = s.solve();
      if (f.feasible) {
        if (counter) *counter = s.valuation_of(f.values);
        return true;
      }
    }
    return false;
  };
  if (chi.rule) {
    std::vector<std::pair<LinRel, Rat>> alts{{LinRel::Lt, chi.rule->degree}};
    if (chi.rule->degree < Rat(1)) alts.push_back({LinRel::Gt, chi.rule->degree});
    return !violated(alts, chi.rule->clause);
  }
  if (chi.term) {
    for (const auto& l : chi.term->literals()) {
      ScaSystem s;
      flp_emit(program, s);
      if (tau) s.add_term(*tau);
      s.add_literal(l.complemented());
      FeasResult f = s.solve();
      if (f.feasible) {
        if (counter) *counter = s.valuation_of(f.values);
        return false;
      }
    }
    return true;
  }
  throw Error("flp observation is empty");
}

// ---------------------------------------------------------------------------
// Cover-free interval-clause theories and the Horn reduction
// ---------------------------------------------------------------------------

// Implicative interval clause: body strong-conjunction of interval literals,
// consequent either an interval literal or falsum.
struct CfRule {
  std::vector<IntervalLiteral> body;
  std::optional<IntervalLiteral> head;
};

struct CfTheory {
  std::vector<CfRule> rules;

  // Accepts implications of interval terms into a literal or falsum, bare
  // interval-literal and interval-term facts (rules with empty bodies).
  static std::optional<CfTheory> from(const Theory& t) {
    CfTheory out;
    for (const auto& raw : t) {
      Formula f = normalize(raw);
      if (f.kind() == Conn::Impl) {
        auto body = shape::as_interval_term(f.lhs());
        if (!body) return std::nullopt;
        CfRule r;
        r.body = body->literals();
        if (f.rhs().kind() == Conn::Bot) {
          out.rules.push_back(std::move(r));
          continue;
        }
        if (f.rhs().kind() == Conn::Lit) {
          r.head = f.rhs().literal();
          out.rules.push_back(std::move(r));
          continue;
        }
        return std::nullopt;
      }
      if (auto term = shape::as_interval_term(f)) {
        if (term->empty()) continue;
        for (const auto& l : term->literals()) {
          CfRule r;
          r.head = l;
          out.rules.push_back(std::move(r));
        }
        continue;
      }
      return std::nullopt;
    }
    return out;
  }

  std::vector<IntervalLiteral> occurring_literals() const {
    std::vector<IntervalLiteral> out;
    for (const auto& r : rules) {
      for (const auto& l : r.body) out.push_back(l);
      if (r.head) out.push_back(*r.head);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

using CoveringPair = std::optional<std::pair<IntervalLiteral, IntervalLiteral>>;

// No two same-variable literals may jointly cover [0,1].
inline bool cover_free_pairs_ok(const std::vector<IntervalLiteral>& lits,
                                CoveringPair* violating = nullptr) {
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (lits[i].var != lits[j].var) continue;
      if (union_covers_unit(literal_interval(lits[i]), literal_interval(lits[j]))) {
        if (violating) *violating = std::make_pair(lits[i], lits[j]);
        return false;
      }
    }
  return true;
}

inline bool cover_free_check(const CfTheory& gamma,
                             CoveringPair* violating = nullptr) {
  return cover_free_pairs_ok(gamma.occurring_literals(), violating);
}

// Classical Horn abstraction: one atom per occurring interval literal.
struct HornProblem {
  struct Rule {
    std::vector<int> body;
    std::optional<int> head;  // falsum when absent
  };

  std::vector<IntervalLiteral> atoms;
  std::vector<Rule> rules;        // theory rules first, then axiom rules
  std::size_t theory_rule_count = 0;
  std::vector<int> goal;
  std::vector<int> hypotheses;

  int atom_of(const IntervalLiteral& l) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == l) return static_cast<int>(i);
    return -1;
  }
};

// Builds the classical Horn abstraction of a cover-free problem: the theory
// rules verbatim over the atoms, plus one implication edge per containment of
// permitted intervals, one falsum rule per disjoint same-variable pair, facts
// for valid literals and falsum rules for unsatisfiable ones.
inline HornProblem horn_reduce(const CfTheory& gamma, const IntervalTerm& obs,
                               const std::vector<IntervalLiteral>& hypotheses) {
  CoveringPair bad;
  if (!cover_free_check(gamma, &bad))
    throw NotCoverFree("covering literal pair " + bad->first.str() + ", " +
                       bad->second.str());

  HornProblem hp;
  auto add_atom = [&](const IntervalLiteral& l) {
    if (hp.atom_of(l) < 0) hp.atoms.push_back(l);
  };
  for (const auto& l : gamma.occurring_literals()) add_atom(l);
  for (const auto& l : obs.literals()) add_atom(l);
  for (const auto& l : hypotheses) add_atom(l);

  for (const auto& r : gamma.rules) {
    HornProblem::Rule hr;
    for (const auto& l : r.body) hr.body.push_back(hp.atom_of(l));
    if (r.head) hr.head = hp.atom_of(*r.head);
    hp.rules.push_back(std::move(hr));
  }
  hp.theory_rule_count = hp.rules.size();

  int n = static_cast<int>(hp.atoms.size());
  for (int i = 0; i < n; ++i) {
    PermittedInterval ii = literal_interval(hp.atoms[static_cast<std::size_t>(i)]);
    if (ii.is_full())
      hp.rules.push_back({{}, i});  // valid literal: unconditional fact
    if (ii.empty())
      hp.rules.push_back({{i}, std::nullopt});
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = hp.atoms[static_cast<std::size_t>(i)];
      const auto& b = hp.atoms[static_cast<std::size_t>(j)];
      if (a.var != b.var) continue;
      PermittedInterval jj = literal_interval(b);
      if (j > i && ii.intersect(jj).empty())
        hp.rules.push_back({{i, j}, std::nullopt});
      if (ii.subset_of(jj) && !jj.subset_of(ii))
        hp.rules.push_back({{i}, j});
    }
  }

  for (const auto& l : obs.literals()) hp.goal.push_back(hp.atom_of(l));
  for (const auto& l : hypotheses) hp.hypotheses.push_back(hp.atom_of(l));
  return hp;
}

struct HornClosure {
  std::vector<bool> derived;
  bool falsum = false;
};

// Unit propagation to fixpoint from a set of assumed atoms.
inline HornClosure horn_closure(const HornProblem& hp,
                                const std::vector<int>& assumed) {
  HornClosure c;
  c.derived.assign(hp.atoms.size(), false);
  for (int a : assumed)
    if (a >= 0) c.derived[static_cast<std::size_t>(a)] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : hp.rules) {
      bool fire = true;
      for (int b : r.body)
        if (!c.derived[static_cast<std::size_t>(b)]) {
          fire = false;
          break;
        }
      if (!fire) continue;
      if (!r.head) {
        c.falsum = true;
        return c;
      }
      if (!c.derived[static_cast<std::size_t>(*r.head)]) {
        c.derived[static_cast<std::size_t>(*r.head)] = true;
        changed = true;
      }
    }
  }
  return c;
}

enum class HornVerdict { IsSolution, NotConsistent, NotEntailing };

inline HornVerdict horn_recognize(const HornProblem& hp,
                                  const std::vector<int>& candidate) {
  HornClosure c = horn_closure(hp, candidate);
  if (c.falsum) return HornVerdict::NotConsistent;
  for (int g : hp.goal)
    if (!c.derived[static_cast<std::size_t>(g)]) return HornVerdict::NotEntailing;
  return HornVerdict::IsSolution;
}

// Entailment of a conjunction of atoms from the theory plus assumed atoms.
inline bool horn_entails(const HornProblem& hp, const std::vector<int>& assumed,
                         const std::vector<int>& goal) {
  HornClosure c = horn_closure(hp, assumed);
  if (c.falsum) return true;
  for (int g : goal)
    if (!c.derived[static_cast<std::size_t>(g)]) return false;
  return true;
}

// Atoms whose falsity the constructed valuation must realize: those occurring
// in the theory's own rules or in the goal. Atoms introduced only by axiom
// rules or hypotheses carry no constraint when underived.
inline std::vector<bool> horn_negative_relevance(const HornProblem& hp) {
  std::vector<bool> relevant(hp.atoms.size(), false);
  for (std::size_t i = 0; i < hp.theory_rule_count; ++i) {
    const auto& r = hp.rules[i];
    for (int b : r.body) relevant[static_cast<std::size_t>(b)] = true;
    if (r.head) relevant[static_cast<std::size_t>(*r.head)] = true;
  }
  for (int g : hp.goal) relevant[static_cast<std::size_t>(g)] = true;
  return relevant;
}

// Rational valuation matching the closure: every variable takes a value
// inside the intersection of its derived literals' intervals and the
// complements of the relevant underived ones. Cover-freeness keeps that
// intersection nonempty.
inline Valuation horn_closure_valuation(const HornProblem& hp,
                                        const HornClosure& c) {
  std::vector<bool> relevant = horn_negative_relevance(hp);
  std::map<std::string, PermittedInterval> ranges;
  for (std::size_t i = 0; i < hp.atoms.size(); ++i) {
    const auto& l = hp.atoms[i];
    PermittedInterval want;
    if (c.derived[i])
      want = literal_interval(l);
    else if (relevant[i])
      want = literal_interval(l.complemented());
    else
      continue;
    auto it = ranges.find(l.var);
    if (it == ranges.end())
      ranges.emplace(l.var, want);
    else
      it->second = it->second.intersect(want);
  }
  Valuation v;
  for (const auto& [var, r] : ranges) {
    if (r.empty()) throw Error("cover-free closure produced an empty range");
    v[var] = r.pick_interior();
  }
  return v;
}

}  // namespace lukabd
