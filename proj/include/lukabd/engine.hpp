#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lukabd/formula.hpp"
#include "lukabd/interval.hpp"
#include "lukabd/linear.hpp"
#include "lukabd/normalize.hpp"

namespace lukabd {

enum class Status { Sat, Unsat, Entailed, NotEntailed };

struct EngineResult {
  Status status = Status::Unsat;
  std::optional<Valuation> witness;  // model or countermodel

  bool is_sat() const { return status == Status::Sat; }
  bool is_entailed() const { return status == Status::Entailed; }
};

struct EngineStats {
  long long branch_nodes = 0;  // branch-and-bound nodes expanded
  long long lp_calls = 0;
  long long queries = 0;
};

struct EngineLimits {
  long long time_limit_ms = 0;  // 0 = unlimited
};

enum class AssertLevel { EQ1, FREE };

// ---------------------------------------------------------------------------
// Formula -> mixed-integer system encoder
// ---------------------------------------------------------------------------

namespace detail {

// Builds one exact-rational system per query. Formulas pinned to a truth
// value propagate structurally and only the residual free subformulas get
// unknowns; each free strong connective and each free interval literal
// introduces one {0,1} column for its clamp/indicator case split.
// Syntactically identical subformulas share one unknown.
class MilpBuilder {
public:
  struct LitBinary {
    int col;
    IntervalLiteral lit;
    int var_col;
  };

  LinearSystem& system() { return sys_; }
  const LinearSystem& system() const { return sys_; }
  const std::map<std::string, int>& prop_vars() const { return prop_vars_; }
  const std::vector<LitBinary>& literal_binaries() const { return lit_bins_; }
  bool trivially_infeasible() const { return infeasible_; }

  int prop_var(const std::string& name) {
    auto it = prop_vars_.find(name);
    if (it != prop_vars_.end()) return it->second;
    int col = sys_.add_var(name);
    prop_vars_.emplace(name, col);
    return col;
  }

  // Asserts value(phi) = 1 (or = 0), pushing the pin as deep as it
  // determines subformula values. The pinned value is also recorded in the
  // free-encoding cache so that later occurrences of the same subformula
  // become constants, and an already-encoded subformula gets an equality row.
  void pin(const Formula& phi, bool value) {
    std::string pin_key = (value ? "1|" : "0|") + phi.str();
    if (!pinned_.insert(std::move(pin_key)).second) return;
    std::string key = phi.str();
    if (auto it = cache_.find(key); it != cache_.end()) {
      sys_.add(it->second, LinRel::Eq, value ? Rat(1) : Rat(0));
    } else {
      cache_.emplace(std::move(key), LinExpr(value ? Rat(1) : Rat(0)));
    }
    switch (phi.kind()) {
      case Conn::Var: {
        int x = prop_var(phi.var_name());
        sys_.add(LinExpr::var(x), LinRel::Eq, value ? Rat(1) : Rat(0));
        return;
      }
      case Conn::Top:
        if (!value) infeasible_ = true;
        return;
      case Conn::Bot:
        if (value) infeasible_ = true;
        return;
      case Conn::Lit: {
        const IntervalLiteral l = value ? phi.literal() : phi.literal().complemented();
        add_literal_row(l);
        return;
      }
      case Conn::Neg:
        pin(phi.lhs(), !value);
        return;
      case Conn::Conj: {
        if (value) {  // x (*) y = 1 iff x = y = 1
          pin(phi.lhs(), true);
          pin(phi.rhs(), true);
        } else {  // max(0, x+y-1) = 0 iff x+y <= 1
          LinExpr s = encode(phi.lhs()) + encode(phi.rhs());
          sys_.add(std::move(s), LinRel::Le, Rat(1));
        }
        return;
      }
      case Conn::Disj: {
        if (value) {  // min(1, x+y) = 1 iff x+y >= 1
          LinExpr s = encode(phi.lhs()) + encode(phi.rhs());
          sys_.add(std::move(s), LinRel::Ge, Rat(1));
        } else {
          pin(phi.lhs(), false);
          pin(phi.rhs(), false);
        }
        return;
      }
      case Conn::Impl: {
        if (value) {  // min(1, 1-x+y) = 1 iff y >= x
          LinExpr a = encode(phi.lhs());
          LinExpr b = encode(phi.rhs());
          sys_.add(b + a.negated(), LinRel::Ge, Rat(0));
        } else {  // 1-x+y <= 0 forces x = 1, y = 0 inside the unit box
          pin(phi.lhs(), true);
          pin(phi.rhs(), false);
        }
        return;
      }
    }
  }

  // Free encoding: the affine value of phi in terms of system columns.
  LinExpr encode(const Formula& phi) {
    switch (phi.kind()) {
      case Conn::Var:
        return LinExpr::var(prop_var(phi.var_name()));
      case Conn::Top:
        return LinExpr(Rat(1));
      case Conn::Bot:
        return LinExpr(Rat(0));
      case Conn::Neg:
        return LinExpr(Rat(1)) + encode(phi.lhs()).negated();
      default:
        break;
    }
    std::string key = phi.str();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    LinExpr result;
    if (phi.kind() == Conn::Lit) {
      result = LinExpr::var(encode_literal(phi.literal()));
    } else {
      LinExpr a = encode(phi.lhs());
      LinExpr b = encode(phi.rhs());
      int y = sys_.add_var("#v" + std::to_string(sys_.var_count()));
      int d = sys_.add_binary("#d" + std::to_string(sys_.var_count()));
      conn_bins_.push_back(d);
      LinExpr yv = LinExpr::var(y), dv = LinExpr::var(d);
      switch (phi.kind()) {
        case Conn::Conj:
          // y = max(0, a+b-1): d=0 pins y to a+b-1, d=1 pins y to 0.
          sys_.add(yv + a.negated() + b.negated(), LinRel::Ge, Rat(-1));
          sys_.add(yv + a.negated() + b.negated() + dv.negated(), LinRel::Le, Rat(-1));
          sys_.add(yv + dv, LinRel::Le, Rat(1));
          break;
        case Conn::Disj:
          // y = min(1, a+b): d=0 pins y to a+b, d=1 pins y to 1.
          sys_.add(yv + a.negated() + b.negated(), LinRel::Le, Rat(0));
          sys_.add(yv + a.negated() + b.negated() + dv, LinRel::Ge, Rat(0));
          sys_.add(yv + dv.negated(), LinRel::Ge, Rat(0));
          break;
        case Conn::Impl:
          // y = min(1, 1-a+b).
          sys_.add(yv + a + b.negated(), LinRel::Le, Rat(1));
          sys_.add(yv + a + b.negated() + dv, LinRel::Ge, Rat(1));
          sys_.add(yv + dv.negated(), LinRel::Ge, Rat(0));
          break;
        default:
          throw Error("encode: unexpected connective");
      }
      result = yv;
    }
    cache_.emplace(std::move(key), result);
    return result;
  }

  // Asserts value(phi) < 1; the refutation side of an entailment query.
  void assert_below_one(const Formula& phi) {
    sys_.add(encode(phi), LinRel::Lt, Rat(1));
  }

  void add_literal_row(const IntervalLiteral& l) {
    int x = prop_var(l.var);
    LinRel rel;
    switch (l.rel) {
      case Rel::Leq: rel = LinRel::Le; break;
      case Rel::Lt: rel = LinRel::Lt; break;
      case Rel::Geq: rel = LinRel::Ge; break;
      case Rel::Gt: rel = LinRel::Gt; break;
      default: rel = LinRel::Le;
    }
    sys_.add(LinExpr::var(x), rel, l.bound);
  }

private:
  // Indicator column for a free two-valued literal. Only weak (non-strict)
  // linking rows are added; the exact, possibly strict rows appear when the
  // branch-and-bound fixes the column.
  int encode_literal(const IntervalLiteral& l) {
    int x = prop_var(l.var);
    int d = sys_.add_binary("#l" + std::to_string(sys_.var_count()));
    lit_bins_.push_back({d, l, x});
    const Rat& c = l.bound;
    LinExpr xv = LinExpr::var(x), dv = LinExpr::var(d);
    if (l.rel == Rel::Geq || l.rel == Rel::Gt) {
      // d=1 -> x >= c (weakened for >); d=0 -> x <= c (weakened complement).
      sys_.add(xv + dv.scaled(-c), LinRel::Ge, Rat(0));
      sys_.add(xv + dv.scaled(-(Rat(1) - c)), LinRel::Le, c);
    } else {
      // d=1 -> x <= c; d=0 -> x >= c, both weakened where strict.
      sys_.add(xv + dv.scaled(Rat(1) - c), LinRel::Le, Rat(1));
      sys_.add(xv + dv.scaled(c), LinRel::Ge, c);
    }
    return d;
  }

  LinearSystem sys_;
  std::map<std::string, int> prop_vars_;
  std::map<std::string, LinExpr> cache_;
  std::set<std::string> pinned_;
  std::vector<LitBinary> lit_bins_;
  std::vector<int> conn_bins_;
  bool infeasible_ = false;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

// Sound and complete satisfiability and entailment for arbitrary theories in
// the interval-extended language, via exact-rational branch-and-bound on the
// clamp indicators with an epsilon-maximizing simplex at every relaxation.
class Engine {
public:
  explicit Engine(EngineLimits limits = {}) : limits_(limits) {}

  EngineResult sat(const Theory& gamma) {
    ++stats_.queries;
    detail::MilpBuilder builder;
    for (const auto& f : gamma) builder.pin(f, true);
    auto validate = [&](const Valuation& v) {
      for (const auto& f : gamma)
        if (evaluate(f, total(v, f)) != Rat(1)) return false;
      return true;
    };
    auto model = search(builder, validate);
    EngineResult r;
    if (model) {
      r.status = Status::Sat;
      r.witness = complete_valuation(*model, gamma, std::nullopt);
    } else {
      r.status = Status::Unsat;
    }
    return r;
  }

  EngineResult entails(const Theory& gamma, const Formula& chi) {
    ++stats_.queries;
    detail::MilpBuilder builder;
    for (const auto& f : gamma) builder.pin(f, true);
    builder.assert_below_one(chi);
    auto validate = [&](const Valuation& v) {
      for (const auto& f : gamma)
        if (evaluate(f, total(v, f)) != Rat(1)) return false;
      return evaluate(chi, total(v, chi)) < Rat(1);
    };
    auto counter = search(builder, validate);
    EngineResult r;
    if (counter) {
      r.status = Status::NotEntailed;
      r.witness = complete_valuation(*counter, gamma, chi);
    } else {
      r.status = Status::Entailed;
    }
    return r;
  }

  // Gamma, tau consistently entail chi: the premises extended by the term are
  // satisfiable and entail the observation.
  bool consistently_entails(const Theory& gamma, const IntervalTerm& tau,
                            const Formula& chi) {
    Theory ext = gamma;
    if (!tau.empty()) ext.add(tau.to_formula());
    return sat(ext).is_sat() && entails(ext, chi).is_entailed();
  }

  // Spec-level encoder surface: one system for a list of formulas with
  // per-formula assertion levels.
  LinearSystem encode(const std::vector<std::pair<Formula, AssertLevel>>& fs) {
    detail::MilpBuilder builder;
    for (const auto& [f, lvl] : fs) {
      if (lvl == AssertLevel::EQ1)
        builder.pin(f, true);
      else
        builder.encode(f);
    }
    if (builder.trivially_infeasible())
      builder.system().add(LinExpr(Rat(0)), LinRel::Ge, Rat(1));
    return builder.system();
  }

  const EngineStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

private:
  template <typename Validate>
  std::optional<Valuation> search(detail::MilpBuilder& builder,
                                  const Validate& validate) {
    if (builder.trivially_infeasible()) return std::nullopt;
    const auto start = std::chrono::steady_clock::now();
    const LinearSystem& sys = builder.system();
    std::map<int, Rat> fixed;
    return branch(builder, sys, fixed, validate, start);
  }

  template <typename Validate>
  std::optional<Valuation> branch(detail::MilpBuilder& builder,
                                  const LinearSystem& sys,
                                  std::map<int, Rat>& fixed,
                                  const Validate& validate,
                                  const std::chrono::steady_clock::time_point& start) {
    if (limits_.time_limit_ms > 0) {
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      if (elapsed > limits_.time_limit_ms)
        throw BudgetExceeded("engine time limit exceeded");
    }
    ++stats_.branch_nodes;

    std::vector<LinConstraint> rows = materialize(builder, fixed);
    ++stats_.lp_calls;
    FeasResult feas = lp_strict_feasible(sys.var_count(), rows);
    if (!feas.feasible) return std::nullopt;

    // Choose a branching column: first fixed-order binary that is not yet
    // branched on and sits at a fractional value.
    int branch_col = -1;
    for (int b : sys.binaries()) {
      if (fixed.count(b)) continue;
      const Rat& val = feas.values[static_cast<std::size_t>(b)];
      if (val != Rat(0) && val != Rat(1)) {
        branch_col = b;
        break;
      }
    }
    if (branch_col < 0) {
      // All binaries integral; the point is exact unless an unbranched
      // literal indicator leans on its weakened linking rows.
      Valuation v;
      for (const auto& [name, col] : builder.prop_vars())
        if (name[0] != '#') v[name] = feas.values[static_cast<std::size_t>(col)];
      if (validate(v)) return v;
      for (int b : sys.binaries())
        if (!fixed.count(b)) {
          branch_col = b;
          break;
        }
      if (branch_col < 0) throw Error("engine: exact leaf failed validation");
    }

    for (int side = 0; side < 2; ++side) {
      fixed[branch_col] = Rat(side);
      auto res = branch(builder, sys, fixed, validate, start);
      fixed.erase(branch_col);
      if (res) return res;
    }
    return std::nullopt;
  }

  // Instantiates the base rows under the partial assignment of binaries and
  // appends the exact indicator rows of every fixed literal binary.
  std::vector<LinConstraint> materialize(const detail::MilpBuilder& builder,
                                         const std::map<int, Rat>& fixed) {
    const LinearSystem& sys = builder.system();
    std::vector<LinConstraint> rows;
    rows.reserve(sys.constraints().size() + fixed.size() + 2);
    for (const auto& c : sys.constraints()) {
      LinConstraint r;
      r.rel = c.rel;
      r.rhs = c.rhs;
      r.lhs.constant = c.lhs.constant;
      for (const auto& [i, coeff] : c.lhs.terms) {
        auto it = fixed.find(i);
        if (it == fixed.end())
          r.lhs.terms.emplace_back(i, coeff);
        else
          r.lhs.constant = r.lhs.constant + coeff * it->second;
      }
      rows.push_back(std::move(r));
    }
    for (const auto& lb : builder.literal_binaries()) {
      auto it = fixed.find(lb.col);
      if (it == fixed.end()) continue;
      const IntervalLiteral l =
          it->second == Rat(1) ? lb.lit : lb.lit.complemented();
      LinRel rel = l.rel == Rel::Leq  ? LinRel::Le
                   : l.rel == Rel::Lt ? LinRel::Lt
                   : l.rel == Rel::Geq ? LinRel::Ge
                                       : LinRel::Gt;
      rows.push_back({LinExpr::var(lb.var_col), rel, l.bound});
    }
    return rows;
  }

  // Extends a witness so that every variable of the formulas is bound.
  Valuation complete_valuation(Valuation v, const Theory& gamma,
                               std::optional<Formula> chi) const {
    std::set<std::string> vars = gamma.vars();
    if (chi) chi->collect_vars(vars);
    for (const auto& p : vars)
      if (!v.count(p)) v[p] = Rat(0);
    return v;
  }

  // Valuation view guaranteeing all variables of f are present.
  static Valuation total(const Valuation& v, const Formula& f) {
    Valuation out = v;
    for (const auto& p : f.vars())
      if (!out.count(p)) out[p] = Rat(0);
    return out;
  }

  EngineLimits limits_;
  EngineStats stats_;
};

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

namespace detail {

inline long long grid_eval(const Formula& phi,
                           const std::map<std::string, std::size_t>& idx,
                           const std::vector<long long>& vals, long long D) {
  switch (phi.kind()) {
    case Conn::Var: return vals[idx.at(phi.var_name())];
    case Conn::Top: return D;
    case Conn::Bot: return 0;
    case Conn::Lit: {
      const auto& l = phi.literal();
      long long a = vals[idx.at(l.var)];
      // a/D vs num/den compares as a*den vs num*D.
      long long num = l.bound.raw().get_num().get_si();
      long long den = l.bound.raw().get_den().get_si();
      long long lhs = a * den, rhs = num * D;
      bool holds = l.rel == Rel::Leq  ? lhs <= rhs
                   : l.rel == Rel::Lt ? lhs < rhs
                   : l.rel == Rel::Geq ? lhs >= rhs
                                       : lhs > rhs;
      return holds ? D : 0;
    }
    case Conn::Neg: return D - grid_eval(phi.lhs(), idx, vals, D);
    case Conn::Conj: {
      long long s = grid_eval(phi.lhs(), idx, vals, D) +
                    grid_eval(phi.rhs(), idx, vals, D) - D;
      return s > 0 ? s : 0;
    }
    case Conn::Disj: {
      long long s = grid_eval(phi.lhs(), idx, vals, D) +
                    grid_eval(phi.rhs(), idx, vals, D);
      return s < D ? s : D;
    }
    case Conn::Impl: {
      long long s = D - grid_eval(phi.lhs(), idx, vals, D) +
                    grid_eval(phi.rhs(), idx, vals, D);
      return s < D ? s : D;
    }
  }
  return 0;
}

}  // namespace detail

inline constexpr long long kDefaultGridBudget = 10'000'000;

// Exhaustive entailment check over the valuations with denominator D.
// Sound for refutation at any D; complete only on instance classes where the
// grid is known to cover a countermodel.
inline bool grid_oracle_entails(const Theory& gamma, const Formula& chi,
                                long long D,
                                long long budget = kDefaultGridBudget) {
  if (D <= 0) throw Error("grid denominator must be positive");
  std::set<std::string> vars = gamma.vars();
  chi.collect_vars(vars);

  double points = 1.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    points *= static_cast<double>(D + 1);
    if (points > static_cast<double>(budget))
      throw GridTooLarge("grid of " + std::to_string(vars.size()) +
                         " variables at denominator " + std::to_string(D) +
                         " exceeds the budget");
  }

  std::map<std::string, std::size_t> idx;
  std::size_t k = 0;
  for (const auto& p : vars) idx[p] = k++;

  std::vector<long long> vals(vars.size(), 0);
  for (;;) {
    bool premises_hold = true;
    for (const auto& f : gamma)
      if (detail::grid_eval(f, idx, vals, D) != D) {
        premises_hold = false;
        break;
      }
    if (premises_hold && detail::grid_eval(chi, idx, vals, D) != D)
      return false;
    // Odometer step.
    std::size_t i = 0;
    for (; i < vals.size(); ++i) {
      if (vals[i] < D) {
        ++vals[i];
        break;
      }
      vals[i] = 0;
    }
    if (i == vals.size()) break;
    if (vals.empty()) break;
  }
  return true;
}

// Grid denominator large enough for the completeness classes used in tests:
// the lcm of all constant denominators times one plus the connective count.
// The multiplier never drops below two, so strict literals keep a grid point
// inside each open sliver between adjacent lcm-grid values.
inline long long suggested_grid_denominator(const Theory& gamma,
                                            const Formula& chi) {
  std::vector<Rat> bounds;
  for (const auto& f : gamma) f.collect_bounds(bounds);
  chi.collect_bounds(bounds);
  mpz_class l = den_lcm(bounds);
  std::size_t conn = chi.connective_count();
  for (const auto& f : gamma) conn += f.connective_count();
  mpz_class d = l * std::max<long>(2, static_cast<long>(conn + 1));
  return d.get_si();
}

}  // namespace lukabd
