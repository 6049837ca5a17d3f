#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lukabd/formula.hpp"

namespace lukabd {

// ---------------------------------------------------------------------------
// Permitted intervals
// ---------------------------------------------------------------------------

// Subinterval of [0,1] with independently open/closed ends. The permitted
// values of an interval literal and their finite intersections.
struct PermittedInterval {
  Rat lo{0};
  bool lo_open = false;
  Rat hi{1};
  bool hi_open = false;

  static PermittedInterval full() { return {}; }
  static PermittedInterval point(const Rat& c) { return {c, false, c, false}; }
  static PermittedInterval empty_interval() { return {Rat(1), true, Rat(0), true}; }

  bool empty() const {
    return lo > hi || (lo == hi && (lo_open || hi_open));
  }
  bool is_full() const {
    return !empty() && lo == Rat(0) && !lo_open && hi == Rat(1) && !hi_open;
  }

  bool contains(const Rat& x) const {
    if (lo_open ? x <= lo : x < lo) return false;
    if (hi_open ? x >= hi : x > hi) return false;
    return true;
  }

  PermittedInterval intersect(const PermittedInterval& o) const {
    PermittedInterval r;
    if (lo > o.lo || (lo == o.lo && lo_open)) {
      r.lo = lo;
      r.lo_open = lo_open;
    } else {
      r.lo = o.lo;
      r.lo_open = o.lo_open;
    }
    if (hi < o.hi || (hi == o.hi && hi_open)) {
      r.hi = hi;
      r.hi_open = hi_open;
    } else {
      r.hi = o.hi;
      r.hi_open = o.hi_open;
    }
    return r;
  }

  bool subset_of(const PermittedInterval& o) const {
    if (empty()) return true;
    if (o.empty()) return false;
    bool lo_ok = o.lo < lo || (o.lo == lo && (!o.lo_open || lo_open));
    bool hi_ok = o.hi > hi || (o.hi == hi && (!o.hi_open || hi_open));
    return lo_ok && hi_ok;
  }
  bool proper_superset_of(const PermittedInterval& o) const {
    return o.subset_of(*this) && !subset_of(o);
  }
  bool same_as(const PermittedInterval& o) const {
    if (empty() && o.empty()) return true;
    return subset_of(o) && o.subset_of(*this);
  }

  // Some rational strictly inside a nonempty interval.
  Rat pick() const {
    if (lo == hi) return lo;
    if (!lo_open) return lo;
    if (!hi_open) return hi;
    return (lo + hi) / Rat(2);
  }
  // A point inside the interval avoiding both endpoints when possible.
  Rat pick_interior() const {
    if (lo == hi) return lo;
    return (lo + hi) / Rat(2);
  }

  std::string str() const {
    if (empty()) return "(empty)";
    return std::string(lo_open ? "(" : "[") + lo.str() + "," + hi.str() +
           (hi_open ? ")" : "]");
  }

  friend bool operator==(const PermittedInterval& a, const PermittedInterval& b) {
    return a.same_as(b);
  }
};

// A rational inside a but outside b, when one exists. Probes the endpoints
// and the midpoints between adjacent endpoints; a difference of two intervals
// always contains such a probe.
inline std::optional<Rat> pick_in_difference(const PermittedInterval& a,
                                             const PermittedInterval& b) {
  std::vector<Rat> probes = {Rat(0), Rat(1), a.lo, a.hi, b.lo, b.hi};
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  std::vector<Rat> pts = probes;
  for (std::size_t i = 0; i + 1 < probes.size(); ++i)
    pts.push_back((probes[i] + probes[i + 1]) / Rat(2));
  for (const auto& x : pts)
    if (a.contains(x) && !b.contains(x)) return x;
  return std::nullopt;
}

// Whether the union of two intervals covers all of [0,1].
inline bool union_covers_unit(const PermittedInterval& a,
                              const PermittedInterval& b) {
  // Check every endpoint and a midpoint between adjacent endpoints; a union
  // of two intervals contains [0,1] iff it contains all those probes.
  std::vector<Rat> probes = {Rat(0), Rat(1), a.lo, a.hi, b.lo, b.hi};
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  std::vector<Rat> pts = probes;
  for (std::size_t i = 0; i + 1 < probes.size(); ++i)
    pts.push_back((probes[i] + probes[i + 1]) / Rat(2));
  for (const auto& x : pts) {
    if (x < Rat(0) || x > Rat(1)) continue;
    if (!a.contains(x) && !b.contains(x)) return false;
  }
  return true;
}

// Permitted values of a single interval literal: [0,c], [0,c), [c,1], (c,1].
inline PermittedInterval literal_interval(const IntervalLiteral& lam) {
  switch (lam.rel) {
    case Rel::Leq: return {Rat(0), false, lam.bound, false};
    case Rel::Lt: return {Rat(0), false, lam.bound, true};
    case Rel::Geq: return {lam.bound, false, Rat(1), false};
    case Rel::Gt: return {lam.bound, true, Rat(1), false};
  }
  return PermittedInterval::full();  // unreachable
}

inline bool literal_valid(const IntervalLiteral& lam) {
  return literal_interval(lam).is_full();
}
inline bool literal_unsat(const IntervalLiteral& lam) {
  return literal_interval(lam).empty();
}

// ---------------------------------------------------------------------------
// Interval terms, interval clauses, simple clauses
// ---------------------------------------------------------------------------

// Strong conjunction of interval literals, stored as a duplicate-free sorted
// set. Two-valued: it holds exactly when every variable sits inside its
// permitted interval. The empty term behaves as Top.
class IntervalTerm {
public:
  IntervalTerm() = default;
  explicit IntervalTerm(std::vector<IntervalLiteral> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    lits_ = std::move(lits);
  }

  const std::vector<IntervalLiteral>& literals() const { return lits_; }
  bool empty() const { return lits_.empty(); }
  std::size_t size() const { return lits_.size(); }

  bool contains(const IntervalLiteral& l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
  }

  IntervalTerm with(const IntervalLiteral& l) const {
    auto ls = lits_;
    ls.push_back(l);
    return IntervalTerm(std::move(ls));
  }
  IntervalTerm without(const IntervalLiteral& l) const {
    std::vector<IntervalLiteral> ls;
    for (const auto& x : lits_)
      if (!(x == l)) ls.push_back(x);
    return IntervalTerm(std::move(ls));
  }

  std::set<std::string> vars() const {
    std::set<std::string> out;
    for (const auto& l : lits_) out.insert(l.var);
    return out;
  }

  // Intersection of the permitted intervals of the literals over p; the full
  // interval when p is unconstrained.
  PermittedInterval interval(const std::string& p) const {
    PermittedInterval r = PermittedInterval::full();
    for (const auto& l : lits_)
      if (l.var == p) r = r.intersect(literal_interval(l));
    return r;
  }

  bool satisfiable() const {
    for (const auto& p : vars())
      if (interval(p).empty()) return false;
    return true;
  }

  bool holds_under(const Valuation& v) const {
    for (const auto& l : lits_) {
      auto it = v.find(l.var);
      if (it == v.end()) throw UnboundVariable(l.var);
      if (!l.holds_at(it->second)) return false;
    }
    return true;
  }

  // Any valuation over the term's variables with value 1; requires
  // satisfiability.
  Valuation model() const {
    Valuation v;
    for (const auto& p : vars()) v[p] = interval(p).pick();
    return v;
  }

  Formula to_formula() const {
    std::vector<Formula> fs;
    for (const auto& l : lits_) fs.push_back(Formula::lit(l));
    return Formula::big_conj(fs);
  }

  std::string str() const {
    if (lits_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) out += " * ";
      out += lits_[i].str();
    }
    return out;
  }

  friend bool operator==(const IntervalTerm& a, const IntervalTerm& b) {
    return a.lits_ == b.lits_;
  }
  friend bool operator<(const IntervalTerm& a, const IntervalTerm& b) {
    return a.lits_ < b.lits_;
  }

private:
  std::vector<IntervalLiteral> lits_;
};

// Strong disjunction of interval literals. Two-valued literals make the
// strong disjunction behave as plain disjunction.
class IntervalClause {
public:
  explicit IntervalClause(std::vector<IntervalLiteral> lits)
      : lits_(std::move(lits)) {
    if (lits_.empty()) throw Error("interval clause must be nonempty");
  }

  const std::vector<IntervalLiteral>& literals() const { return lits_; }

  bool holds_under(const Valuation& v) const {
    for (const auto& l : lits_) {
      auto it = v.find(l.var);
      if (it == v.end()) throw UnboundVariable(l.var);
      if (l.holds_at(it->second)) return true;
    }
    return false;
  }

  Formula to_formula() const {
    std::vector<Formula> fs;
    for (const auto& l : lits_) fs.push_back(Formula::lit(l));
    return Formula::big_disj(fs);
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) out += " + ";
      out += lits_[i].str();
    }
    return out;
  }

private:
  std::vector<IntervalLiteral> lits_;
};

// Strong disjunction of simple literals, split into its positive and negative
// occurrences. Multiplicities matter: the strong disjunction is not
// idempotent, so repeated literals stack (min(1, 4c) for c+c+c+c).
struct SimpleClause {
  std::multiset<std::string> positive;
  std::multiset<std::string> negative;

  SimpleClause(std::multiset<std::string> pos, std::multiset<std::string> neg)
      : positive(std::move(pos)), negative(std::move(neg)) {
    if (positive.empty() && negative.empty())
      throw Error("simple clause must be nonempty");
  }

  std::set<std::string> vars() const {
    std::set<std::string> out(positive.begin(), positive.end());
    out.insert(negative.begin(), negative.end());
    return out;
  }

  Formula to_formula() const {
    std::vector<Formula> fs;
    for (const auto& p : positive) fs.push_back(Formula::var(p));
    for (const auto& q : negative) fs.push_back(Formula::neg(Formula::var(q)));
    return Formula::big_disj(fs);
  }

  std::string str() const {
    std::string out;
    for (const auto& p : positive) {
      if (!out.empty()) out += " + ";
      out += p;
    }
    for (const auto& q : negative) {
      if (!out.empty()) out += " + ";
      out += "~" + q;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Term algebra
// ---------------------------------------------------------------------------

inline PermittedInterval term_interval(const std::string& p,
                                       const IntervalTerm& tau) {
  return tau.interval(p);
}

inline bool term_satisfiable(const IntervalTerm& tau) {
  return tau.satisfiable();
}

// Entailment between interval terms: an unsatisfiable antecedent entails
// everything; otherwise sigma's permitted interval must sit inside tau's for
// every variable of tau (variables absent from sigma count as the full
// interval).
inline bool term_entails_term(const IntervalTerm& sigma,
                              const IntervalTerm& tau) {
  if (!sigma.satisfiable()) return true;
  for (const auto& p : tau.vars())
    if (!sigma.interval(p).subset_of(tau.interval(p))) return false;
  return true;
}

inline bool terms_weakly_equivalent(const IntervalTerm& a,
                                    const IntervalTerm& b) {
  return term_entails_term(a, b) && term_entails_term(b, a);
}

// Negation by complementing every relation: the dual of a term is a clause
// and vice versa.
inline IntervalClause dualize(const IntervalTerm& tau) {
  if (tau.empty()) throw Error("dualize: empty term has no clause dual");
  std::vector<IntervalLiteral> lits;
  for (const auto& l : tau.literals()) lits.push_back(l.complemented());
  return IntervalClause(std::move(lits));
}

inline IntervalTerm dualize(const IntervalClause& kappa) {
  std::vector<IntervalLiteral> lits;
  for (const auto& l : kappa.literals()) lits.push_back(l.complemented());
  return IntervalTerm(std::move(lits));
}

// ---------------------------------------------------------------------------
// Next weakest literal
// ---------------------------------------------------------------------------

// The hypothesis literal over the same variable whose permitted interval
// strictly contains lam's, keeping the enlargement as small as possible:
// the nearest admissible boundary value first, the closed relation before the
// open one at that boundary, and a same-side literal before a full-interval
// one. Returns nullopt when nothing in H strictly weakens lam.
inline std::optional<IntervalLiteral> next_weakest_literal(
    const IntervalLiteral& lam, const std::vector<IntervalLiteral>& H) {
  bool found = false;
  for (const auto& h : H)
    if (h == lam) found = true;
  if (!found) throw LiteralNotInHypotheses(lam.str());

  PermittedInterval base = literal_interval(lam);
  bool lower_side = lam.rel == Rel::Geq || lam.rel == Rel::Gt;

  // Selection key, smaller is better: same-side literals ordered by boundary
  // distance with the closed relation winning ties at one boundary value;
  // cross-side (necessarily full-interval) literals come last.
  const IntervalLiteral* best = nullptr;
  auto key_less = [&](const IntervalLiteral& x, const IntervalLiteral& y) {
    auto side = [](const IntervalLiteral& l) {
      return l.rel == Rel::Geq || l.rel == Rel::Gt;
    };
    bool xs = side(x) == lower_side, ys = side(y) == lower_side;
    if (xs != ys) return xs;  // same side first
    if (xs) {
      if (x.bound != y.bound)
        return lower_side ? x.bound > y.bound : x.bound < y.bound;
      bool x_closed = x.rel == Rel::Leq || x.rel == Rel::Geq;
      bool y_closed = y.rel == Rel::Leq || y.rel == Rel::Geq;
      return x_closed && !y_closed;
    }
    return x < y;  // cross-side literals are all full; any stable order
  };
  for (const auto& mu : H) {
    if (mu.var != lam.var) continue;
    if (!literal_interval(mu).proper_superset_of(base)) continue;
    if (!best || key_less(mu, *best)) best = &mu;
  }
  if (!best) return std::nullopt;
  return *best;
}

// Replaces lam inside tau by its next weakest hypothesis literal, or deletes
// it when no weaker literal exists. The result is entailed by tau.
inline IntervalTerm weaken_term(const IntervalTerm& tau,
                                const IntervalLiteral& lam,
                                const std::vector<IntervalLiteral>& H) {
  if (!tau.contains(lam)) throw LiteralNotInTerm(lam.str());
  auto flat = next_weakest_literal(lam, H);
  IntervalTerm rest = tau.without(lam);
  if (!flat) return rest;
  return rest.with(*flat);
}

}  // namespace lukabd
