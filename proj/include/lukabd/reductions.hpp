#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lukabd/abduction.hpp"
#include "lukabd/classical.hpp"
#include "lukabd/normalize.hpp"

namespace lukabd {

// Fresh variables live in a reserved namespace the parser rejects, so they
// can never collide with user input.
inline std::string fresh_var(const std::string& stem, int index) {
  return "_" + stem + std::to_string(index);
}

// ---------------------------------------------------------------------------
// Classical abduction problems
// ---------------------------------------------------------------------------

struct ClassicalAbductionProblem {
  std::vector<CplFormula> theory;
  CplFormula observation;
  std::vector<CplLiteral> hypotheses;

  std::set<std::string> theory_obs_vars() const {
    std::set<std::string> vars;
    for (const auto& f : theory) f.collect_vars(vars);
    observation.collect_vars(vars);
    return vars;
  }
};

// Conjunction-of-literals solutions for the truth-table oracle.
using CplTerm = std::vector<CplLiteral>;

// Classical Horn problems in implicative representation.
struct ClassicalHornProblem {
  struct Rule {
    std::vector<std::string> body;        // positive atoms
    std::optional<std::string> head;      // falsum when absent
  };
  std::vector<Rule> rules;
  std::vector<CplLiteral> observation;    // conjunction of literals
  std::vector<CplLiteral> hypotheses;
};

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

// Interval form of a classical literal: p at one, or q at zero.
inline IntervalLiteral literal_sharp(const CplLiteral& l) {
  return l.negated ? IntervalLiteral(l.var, Rel::Leq, Rat(0))
                   : IntervalLiteral(l.var, Rel::Geq, Rat(1));
}

inline IntervalTerm term_sharp(const CplTerm& tau) {
  std::vector<IntervalLiteral> lits;
  for (const auto& l : tau) lits.push_back(literal_sharp(l));
  return IntervalTerm(std::move(lits));
}

inline CplTerm term_flat(const IntervalTerm& tau) {
  CplTerm out;
  for (const auto& l : tau.literals()) {
    if (l.rel == Rel::Geq && l.bound == Rat(1))
      out.push_back({l.var, false});
    else if (l.rel == Rel::Leq && l.bound == Rat(0))
      out.push_back({l.var, true});
    else
      throw Error("term is not in the image of the classical embedding");
  }
  return out;
}

// The multiplicative embedding of a whole classical problem: translated
// theory plus classicality guards, and one at-one/at-zero literal pair per
// hypothesis variable.
inline AbductionProblem cpl_to_luk_problem(const ClassicalAbductionProblem& pcl,
                                           AbductionOptions options = {}) {
  Theory gamma;
  for (const auto& f : pcl.theory) gamma.add(translate_classical(f));
  gamma.add_all(classicality_guards(pcl.theory_obs_vars()));
  std::vector<IntervalLiteral> H;
  for (const auto& l : pcl.hypotheses) {
    IntervalLiteral up(l.var, Rel::Geq, Rat(1));
    IntervalLiteral down(l.var, Rel::Leq, Rat(0));
    bool have_up = false, have_down = false;
    for (const auto& h : H) {
      if (h == up) have_up = true;
      if (h == down) have_down = true;
    }
    if (!have_up) H.push_back(up);
    if (!have_down) H.push_back(down);
  }
  return make_problem(std::move(gamma), translate_classical(pcl.observation),
                      std::move(H), std::move(options));
}

// tau solves P exactly when tau is a proper solution of the padded problem
// with a fresh conjunct on both sides.
inline AbductionProblem properness_gadget(const AbductionProblem& p) {
  std::set<std::string> used = p.all_vars();
  int i = 0;
  std::string fresh = fresh_var("p", i);
  while (used.count(fresh)) fresh = fresh_var("p", ++i);
  Theory gamma = p.theory;
  gamma.add(Formula::var(fresh));
  Formula obs = Formula::conj(p.observation, Formula::var(fresh));
  return make_problem(std::move(gamma), std::move(obs), p.hypotheses, p.options);
}

// The guarded-implication relevance gadget: P has solutions exactly when the
// first fresh trigger literal is relevant, and exactly when the second is not
// necessary.
struct RelevanceGadget {
  AbductionProblem problem;
  IntervalLiteral trigger;        // t  >= 1
  IntervalLiteral blocker;        // t' >= 1
};

inline RelevanceGadget relevance_gadget(const AbductionProblem& p) {
  std::set<std::string> used = p.all_vars();
  int i = 0;
  auto pick = [&](const std::string& stem) {
    std::string v = fresh_var(stem, i);
    while (used.count(v)) v = fresh_var(stem, ++i);
    used.insert(v);
    return v;
  };
  std::string t = pick("t"), tp = pick("u"), tpp = pick("w");
  Formula ft = Formula::var(t), ftp = Formula::var(tp), ftpp = Formula::var(tpp);

  Theory gamma;
  for (const auto& psi : p.theory) gamma.add(Formula::impl(ft, psi));
  gamma.add(Formula::impl(ftp, p.observation));
  gamma.add(Formula::impl(ft, Formula::neg(ftp)));
  gamma.add(Formula::impl(ft, ftpp));
  gamma.add(Formula::impl(ftp, ftpp));

  Formula obs = Formula::conj(ftpp, p.observation);
  std::vector<IntervalLiteral> H = p.hypotheses;
  IntervalLiteral trigger(t, Rel::Geq, Rat(1));
  IntervalLiteral blocker(tp, Rel::Geq, Rat(1));
  H.push_back(trigger);
  H.push_back(blocker);

  RelevanceGadget out{make_problem(std::move(gamma), std::move(obs), std::move(H),
                                   p.options),
                      trigger, blocker};
  return out;
}

// Clause-form embedding: positive literals become at-one literals, negative
// ones become below-one literals.
inline AbductionProblem cpl_clauses_to_interval_clauses(
    const ClassicalAbductionProblem& pcl, AbductionOptions options = {}) {
  Theory gamma;
  for (const auto& f : pcl.theory) {
    std::vector<Formula> leaves;
    Formula nf = translate_classical(f);
    if (!shape::flatten_disj(nf, leaves))
      throw Error("clause embedding expects a clausal theory");
    std::vector<IntervalLiteral> lits;
    for (const auto& l : leaves) {
      Formula n = normalize(l);
      if (n.kind() == Conn::Var)
        lits.emplace_back(n.var_name(), Rel::Geq, Rat(1));
      else if (n.kind() == Conn::Neg && n.lhs().kind() == Conn::Var)
        lits.emplace_back(n.lhs().var_name(), Rel::Lt, Rat(1));
      else
        throw Error("clause embedding expects simple clauses");
    }
    gamma.add(IntervalClause(std::move(lits)).to_formula());
  }
  if (pcl.observation.kind() != CplConn::Var)
    throw Error("clause embedding expects a variable observation");
  std::vector<IntervalLiteral> H;
  for (const auto& l : pcl.hypotheses)
    H.emplace_back(l.var, l.negated ? Rel::Lt : Rel::Geq, Rat(1));
  return make_problem(std::move(gamma), Formula::var(pcl.observation.var_name()),
                      std::move(H), std::move(options));
}

// Translation of one clause-embedded solution.
inline IntervalTerm term_int(const CplTerm& tau) {
  std::vector<IntervalLiteral> lits;
  for (const auto& l : tau)
    lits.emplace_back(l.var, l.negated ? Rel::Lt : Rel::Geq, Rat(1));
  return IntervalTerm(std::move(lits));
}

// Horn-to-cover-free embedding: implications over at-one literals.
inline AbductionProblem horn_to_cf(const ClassicalHornProblem& ph,
                                   AbductionOptions options = {}) {
  Theory gamma;
  auto at_one = [](const std::string& v) {
    return Formula::lit(IntervalLiteral(v, Rel::Geq, Rat(1)));
  };
  for (const auto& r : ph.rules) {
    std::vector<Formula> body;
    for (const auto& b : r.body) body.push_back(at_one(b));
    Formula head = r.head ? at_one(*r.head) : Formula::bot();
    if (body.empty())
      gamma.add(head);
    else
      gamma.add(Formula::impl(Formula::big_conj(body), head));
  }
  Formula obs = term_sharp(ph.observation).to_formula();
  std::vector<IntervalLiteral> H;
  for (const auto& l : ph.hypotheses) H.push_back(literal_sharp(l));
  return make_problem(std::move(gamma), std::move(obs), std::move(H),
                      std::move(options));
}

// ---------------------------------------------------------------------------
// Truth-table oracle for classical abduction
// ---------------------------------------------------------------------------

struct ClassicalSolutionSets {
  std::vector<CplTerm> any, proper, ent_min, th_min;
};

namespace detail {

class TruthTable {
public:
  explicit TruthTable(std::set<std::string> vars) : vars_(vars.begin(), vars.end()) {
    if (vars_.size() > 20) throw BudgetExceeded("truth table too large");
  }

  template <typename Pred>
  bool forall(const Pred& pred) const {
    std::size_t n = vars_.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      std::map<std::string, bool> v;
      for (std::size_t i = 0; i < n; ++i) v[vars_[i]] = (mask >> i) & 1;
      if (!pred(v)) return false;
    }
    return true;
  }
  template <typename Pred>
  bool exists(const Pred& pred) const {
    return !forall([&](const std::map<std::string, bool>& v) { return !pred(v); });
  }

private:
  std::vector<std::string> vars_;
};

inline bool cpl_holds_all(const std::vector<CplFormula>& fs,
                          const std::map<std::string, bool>& v) {
  for (const auto& f : fs)
    if (!f.eval(v)) return false;
  return true;
}

inline bool term_holds(const CplTerm& t, const std::map<std::string, bool>& v) {
  for (const auto& l : t)
    if (v.at(l.var) == l.negated) return false;
  return true;
}

}  // namespace detail

// Classical entailment by exhaustive truth tables; the independent oracle
// side of the embedding checks.
inline bool cpl_entails(const std::vector<CplFormula>& gamma, const CplFormula& chi) {
  std::set<std::string> vars;
  for (const auto& f : gamma) f.collect_vars(vars);
  chi.collect_vars(vars);
  detail::TruthTable tt(std::move(vars));
  return tt.forall([&](const std::map<std::string, bool>& v) {
    return !detail::cpl_holds_all(gamma, v) || chi.eval(v);
  });
}

// Exact solution sets of a classical abduction problem per the four classes,
// computed from full truth tables over all nonempty hypothesis subsets. The
// theory-minimal set keeps the chain Th <= ent-min <= proper <= any.
inline ClassicalSolutionSets cpl_brute_force_abduction(
    const ClassicalAbductionProblem& p, std::size_t max_vars = 12,
    std::size_t max_hyps = 10) {
  if (p.hypotheses.size() > max_hyps)
    throw BudgetExceeded("too many hypotheses for the truth-table oracle");
  std::set<std::string> vars = p.theory_obs_vars();
  for (const auto& l : p.hypotheses) vars.insert(l.var);
  if (vars.size() > max_vars)
    throw BudgetExceeded("too many variables for the truth-table oracle");
  detail::TruthTable tt(vars);

  auto entails_under = [&](const std::vector<CplFormula>& gamma, const CplTerm& t,
                           const CplFormula& goal) {
    return tt.forall([&](const std::map<std::string, bool>& v) {
      return !(detail::cpl_holds_all(gamma, v) && detail::term_holds(t, v)) ||
             goal.eval(v);
    });
  };
  auto term_entails_goal_term = [&](const CplTerm& a, const CplTerm& b,
                                    const std::vector<CplFormula>& gamma) {
    return tt.forall([&](const std::map<std::string, bool>& v) {
      return !(detail::cpl_holds_all(gamma, v) && detail::term_holds(a, v)) ||
             detail::term_holds(b, v);
    });
  };

  ClassicalSolutionSets out;
  std::size_t n = p.hypotheses.size();
  std::vector<CplFormula> empty_theory;
  for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
    CplTerm t;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t(1) << i)) t.push_back(p.hypotheses[i]);
    bool consistent = tt.exists([&](const std::map<std::string, bool>& v) {
      return detail::cpl_holds_all(p.theory, v) && detail::term_holds(t, v);
    });
    if (!consistent) continue;
    if (!entails_under(p.theory, t, p.observation)) continue;
    out.any.push_back(t);
    if (!entails_under(empty_theory, t, p.observation)) out.proper.push_back(t);
  }
  auto plain_entails = [&](const CplTerm& a, const CplTerm& b) {
    return term_entails_goal_term(a, b, empty_theory);
  };
  for (const auto& t : out.proper) {
    bool min = true;
    for (const auto& u : out.proper)
      if (plain_entails(t, u) && !plain_entails(u, t)) min = false;
    if (min) out.ent_min.push_back(t);
  }
  for (const auto& t : out.ent_min) {
    bool thmin = true;
    for (const auto& u : out.proper)
      if (term_entails_goal_term(t, u, p.theory) &&
          !term_entails_goal_term(u, t, p.theory)) {
        thmin = false;
        break;
      }
    if (thmin) out.th_min.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

struct GeneratorParams {
  int variables = 3;
  int clauses = 3;
  int hypotheses = 4;
  long max_denominator = 6;
  int depth = 3;
};

namespace detail {

inline std::string gen_var(int i) { return std::string(1, static_cast<char>('a' + i)); }

inline Rat gen_rat(std::mt19937_64& rng, long max_den) {
  std::uniform_int_distribution<long> dd(1, max_den);
  long d = dd(rng);
  std::uniform_int_distribution<long> nn(0, d);
  return Rat(nn(rng), d);
}

inline Formula gen_formula(std::mt19937_64& rng, const std::vector<std::string>& vars,
                           int depth, long max_den) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  switch (pick(rng)) {
    case 0: return Formula::var(vars[vi(rng)]);
    case 1: {
      std::uniform_int_distribution<int> ri(0, 3);
      return Formula::lit(IntervalLiteral(vars[vi(rng)], static_cast<Rel>(ri(rng)),
                                          gen_rat(rng, max_den)));
    }
    case 2: return Formula::neg(gen_formula(rng, vars, depth - 1, max_den));
    case 3:
      return Formula::conj(gen_formula(rng, vars, depth - 1, max_den),
                           gen_formula(rng, vars, depth - 1, max_den));
    case 4:
      return Formula::disj(gen_formula(rng, vars, depth - 1, max_den),
                           gen_formula(rng, vars, depth - 1, max_den));
    case 5:
      return Formula::impl(gen_formula(rng, vars, depth - 1, max_den),
                           gen_formula(rng, vars, depth - 1, max_den));
    default:
      return Formula::weak_or(gen_formula(rng, vars, depth - 1, max_den),
                              gen_formula(rng, vars, depth - 1, max_den));
  }
}

inline std::vector<IntervalLiteral> gen_hypotheses(std::mt19937_64& rng,
                                                   const std::vector<std::string>& vars,
                                                   int count, long max_den) {
  std::vector<IntervalLiteral> H;
  std::uniform_int_distribution<int> ri(0, 3);
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  while (static_cast<int>(H.size()) < count) {
    IntervalLiteral l(vars[vi(rng)], static_cast<Rel>(ri(rng)), gen_rat(rng, max_den));
    bool dup = false;
    for (const auto& h : H)
      if (h == l) dup = true;
    if (!dup) H.push_back(l);
  }
  return H;
}

}  // namespace detail

// Reproducible random problem of the requested fragment.
inline AbductionProblem random_problem(FragmentTag tag, const GeneratorParams& gp,
                                       unsigned long long seed,
                                       AbductionOptions options = {}) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> vars;
  for (int i = 0; i < gp.variables; ++i) vars.push_back(detail::gen_var(i));
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1), ri(0, 3);

  switch (tag) {
    case FragmentTag::Sca: {
      Theory t;
      std::uniform_int_distribution<int> nlits(1, 3);
      for (int i = 0; i < gp.clauses; ++i) {
        if (coin(rng) == 0) {
          std::multiset<std::string> pos, neg;
          for (int j = 0, m = nlits(rng); j < m; ++j)
            (coin(rng) ? pos : neg).insert(vars[vi(rng)]);
          if (pos.empty() && neg.empty()) pos.insert(vars[vi(rng)]);
          t.add(SimpleClause(pos, neg).to_formula());
        } else {
          t.add(Formula::lit(IntervalLiteral(vars[vi(rng)], static_cast<Rel>(ri(rng)),
                                             detail::gen_rat(rng, gp.max_denominator))));
        }
      }
      Formula obs;
      if (coin(rng)) {
        std::multiset<std::string> pos{vars[vi(rng)]}, neg;
        if (coin(rng)) neg.insert(vars[vi(rng)]);
        obs = SimpleClause(pos, neg).to_formula();
      } else {
        obs = Formula::lit(IntervalLiteral(vars[vi(rng)], static_cast<Rel>(ri(rng)),
                                           detail::gen_rat(rng, gp.max_denominator)));
      }
      auto H = detail::gen_hypotheses(rng, vars, gp.hypotheses, gp.max_denominator);
      return make_problem(std::move(t), std::move(obs), std::move(H), options);
    }
    case FragmentTag::Flp: {
      std::vector<FuzzyRule> rules;
      std::uniform_int_distribution<int> nlits(1, 2);
      std::uniform_int_distribution<long> dnum(1, gp.max_denominator);
      for (int i = 0; i < gp.clauses; ++i) {
        std::multiset<std::string> pos, neg;
        pos.insert(vars[vi(rng)]);
        for (int j = 0, m = nlits(rng); j < m; ++j) neg.insert(vars[vi(rng)]);
        long d = dnum(rng);
        std::uniform_int_distribution<long> nn(1, d);
        rules.emplace_back(SimpleClause(pos, neg), Rat(nn(rng), d));
      }
      Formula obs = Formula::lit(IntervalLiteral(
          vars[vi(rng)], static_cast<Rel>(ri(rng)), detail::gen_rat(rng, gp.max_denominator)));
      auto H = detail::gen_hypotheses(rng, vars, gp.hypotheses, gp.max_denominator);
      return make_problem(Theory{}, std::move(obs), std::move(H), options,
                          std::move(rules));
    }
    case FragmentTag::CfIntervalClause: {
      // Per-variable thresholds keep every same-variable pair non-covering:
      // upper bounds stay strictly below the threshold, lower bounds at or
      // above it, and no full-interval literal is ever produced.
      std::map<std::string, Rat> split;
      for (const auto& v : vars) {
        long d = gp.max_denominator;
        std::uniform_int_distribution<long> nn(1, d - 1);
        split[v] = Rat(nn(rng), d);
      }
      auto gen_lit = [&](const std::string& v) {
        const Rat& s = split.at(v);
        if (coin(rng)) {
          // Lower-side literal with bound >= split, never p >= 0.
          Rat b = s + (Rat(1) - s) * detail::gen_rat(rng, gp.max_denominator);
          Rel r = coin(rng) ? Rel::Geq : Rel::Gt;
          if (b == Rat(0)) b = s;
          return IntervalLiteral(v, r, b);
        }
        // Upper-side literal with bound strictly below split, never p <= 1.
        Rat b = s * detail::gen_rat(rng, gp.max_denominator);
        if (b == s) b = s * Rat(1, 2);
        Rel r = coin(rng) ? Rel::Leq : Rel::Lt;
        return IntervalLiteral(v, r, b);
      };
      Theory t;
      std::uniform_int_distribution<int> nbody(1, 2);
      for (int i = 0; i < gp.clauses; ++i) {
        std::vector<Formula> body;
        for (int j = 0, m = nbody(rng); j < m; ++j)
          body.push_back(Formula::lit(gen_lit(vars[vi(rng)])));
        Formula head = coin(rng) == 0 && i > 0
                           ? Formula::bot()
                           : Formula::lit(gen_lit(vars[vi(rng)]));
        t.add(Formula::impl(Formula::big_conj(body), head));
      }
      Formula obs = Formula::lit(gen_lit(vars[vi(rng)]));
      std::vector<IntervalLiteral> H;
      while (static_cast<int>(H.size()) < gp.hypotheses) {
        IntervalLiteral l = gen_lit(vars[vi(rng)]);
        bool dup = false;
        for (const auto& h : H)
          if (h == l) dup = true;
        if (!dup) H.push_back(l);
      }
      return make_problem(std::move(t), std::move(obs), std::move(H), options);
    }
    case FragmentTag::IntervalClause: {
      Theory t;
      std::uniform_int_distribution<int> nlits(1, 3);
      for (int i = 0; i < gp.clauses; ++i) {
        std::vector<IntervalLiteral> lits;
        for (int j = 0, m = nlits(rng); j < m; ++j)
          lits.emplace_back(vars[vi(rng)], static_cast<Rel>(ri(rng)),
                            detail::gen_rat(rng, gp.max_denominator));
        t.add(IntervalClause(std::move(lits)).to_formula());
      }
      Formula obs = Formula::var(vars[vi(rng)]);
      auto H = detail::gen_hypotheses(rng, vars, gp.hypotheses, gp.max_denominator);
      return make_problem(std::move(t), std::move(obs), std::move(H), options);
    }
    case FragmentTag::General:
    default: {
      Theory t;
      for (int i = 0; i < std::max(1, gp.clauses / 2); ++i)
        t.add(detail::gen_formula(rng, vars, gp.depth, gp.max_denominator));
      Formula obs = detail::gen_formula(rng, vars, gp.depth, gp.max_denominator);
      auto H = detail::gen_hypotheses(rng, vars, gp.hypotheses, gp.max_denominator);
      return make_problem(std::move(t), std::move(obs), std::move(H), options);
    }
  }
}

// Random classical abduction problem with negation-closed hypotheses, the
// shape under which the embedding's solution correspondence is a bijection.
// With clausal_observation the observation is a clause or term of literals;
// properness then transfers through the embedding as well (for arbitrary
// observations it need not: an observation tautological modulo the candidate
// is classically improper yet can drop below one at fractional points).
inline ClassicalAbductionProblem random_classical_problem(
    const GeneratorParams& gp, unsigned long long seed,
    bool clausal_observation = false) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> vars;
  for (int i = 0; i < gp.variables; ++i) vars.push_back(detail::gen_var(i));
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);

  std::function<CplFormula(int)> gen = [&](int d) -> CplFormula {
    std::uniform_int_distribution<int> pick(0, d <= 0 ? 0 : 3);
    switch (pick(rng)) {
      case 1: return CplFormula::neg(gen(d - 1));
      case 2: return CplFormula::conj(gen(d - 1), gen(d - 1));
      case 3: return CplFormula::disj(gen(d - 1), gen(d - 1));
      default: return CplFormula::var(vars[vi(rng)]);
    }
  };

  ClassicalAbductionProblem p;
  for (int i = 0; i < std::max(1, gp.clauses / 2); ++i)
    p.theory.push_back(gen(gp.depth));
  if (clausal_observation) {
    std::uniform_int_distribution<int> nl(1, 3);
    std::vector<CplFormula> lits;
    std::set<std::string> seen;
    for (int i = 0, m = nl(rng); i < m; ++i) {
      std::string v = vars[vi(rng)];
      if (!seen.insert(v).second) continue;
      CplFormula lit = CplFormula::var(v);
      lits.push_back(coin(rng) ? CplFormula::neg(lit) : lit);
    }
    p.observation = coin(rng) ? CplFormula::big_or(lits) : CplFormula::big_and(lits);
  } else {
    p.observation = gen(gp.depth);
  }
  std::set<std::string> hvars;
  std::uniform_int_distribution<std::size_t> hv(0, vars.size() - 1);
  int want = std::max(1, gp.hypotheses / 2);
  for (int i = 0; i < want; ++i) hvars.insert(vars[hv(rng)]);
  for (const auto& v : hvars) {
    p.hypotheses.push_back({v, false});
    p.hypotheses.push_back({v, true});
  }
  return p;
}

// Random classical Horn problem whose hypotheses avoid the observation's
// variables, the precondition of the cover-free embedding.
inline ClassicalHornProblem random_horn_problem(const GeneratorParams& gp,
                                                unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> vars;
  for (int i = 0; i < gp.variables; ++i) vars.push_back(detail::gen_var(i));
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1), nbody(1, 2);

  ClassicalHornProblem p;
  for (int i = 0; i < gp.clauses; ++i) {
    ClassicalHornProblem::Rule r;
    for (int j = 0, m = nbody(rng); j < m; ++j) r.body.push_back(vars[vi(rng)]);
    if (coin(rng) == 0 && i > 0)
      r.head = std::nullopt;
    else
      r.head = vars[vi(rng)];
    p.rules.push_back(std::move(r));
  }
  // Observation over a dedicated variable, hypotheses over the others.
  std::string obs_var = vars.back();
  p.observation.push_back({obs_var, false});
  std::set<std::string> hvars;
  for (int i = 0; i < gp.hypotheses; ++i) {
    std::string v = vars[vi(rng)];
    if (v != obs_var) hvars.insert(v);
  }
  for (const auto& v : hvars) p.hypotheses.push_back({v, coin(rng) == 1});
  return p;
}

// The guarded existence family: a classical source with a fresh pivot and
// flip-definitions, embedded multiplicatively. These instances force real
// case splitting in the general engine.
inline AbductionProblem eq4_instance(const GeneratorParams& gp,
                                     unsigned long long seed,
                                     AbductionOptions options = {}) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> phi_vars;
  for (int i = 0; i < gp.variables; ++i) phi_vars.push_back(detail::gen_var(i));
  std::uniform_int_distribution<std::size_t> vi(0, phi_vars.size() - 1);

  std::function<CplFormula(int)> gen = [&](int d) -> CplFormula {
    std::uniform_int_distribution<int> pick(0, d <= 0 ? 0 : 3);
    switch (pick(rng)) {
      case 1: return CplFormula::neg(gen(d - 1));
      case 2: return CplFormula::conj(gen(d - 1), gen(d - 1));
      case 3: return CplFormula::disj(gen(d - 1), gen(d - 1));
      default: return CplFormula::var(phi_vars[vi(rng)]);
    }
  };
  CplFormula phi = gen(gp.depth);

  std::string pivot = fresh_var("q", 0);
  std::string tau_var = fresh_var("s", 0);
  CplFormula p_var = CplFormula::var(pivot);
  CplFormula tau = CplFormula::var(tau_var);

  ClassicalAbductionProblem pcl;
  // not phi or (p and tau); not p or tau.
  pcl.theory.push_back(CplFormula::disj(CplFormula::neg(phi),
                                        CplFormula::conj(p_var, tau)));
  pcl.theory.push_back(CplFormula::disj(CplFormula::neg(p_var), tau));
  std::vector<std::string> flips;
  for (const auto& r : phi.vars()) {
    std::string rp = fresh_var("r", static_cast<int>(flips.size()));
    flips.push_back(rp);
    CplFormula rv = CplFormula::var(r), rpv = CplFormula::var(rp);
    // (r and not r') or (not r and r')
    pcl.theory.push_back(CplFormula::disj(
        CplFormula::conj(rv, CplFormula::neg(rpv)),
        CplFormula::conj(CplFormula::neg(rv), rpv)));
  }
  pcl.observation = CplFormula::conj(p_var, tau);

  Theory gamma;
  for (const auto& f : pcl.theory) gamma.add(translate_classical(f));
  std::set<std::string> all_vars;
  for (const auto& f : pcl.theory) f.collect_vars(all_vars);
  pcl.observation.collect_vars(all_vars);
  gamma.add_all(classicality_guards(all_vars));

  std::vector<IntervalLiteral> H;
  for (const auto& r : phi.vars()) H.emplace_back(r, Rel::Geq, Rat(1));
  for (const auto& rp : flips) H.emplace_back(rp, Rel::Geq, Rat(1));

  return make_problem(std::move(gamma), translate_classical(pcl.observation),
                      std::move(H), std::move(options));
}

}  // namespace lukabd
