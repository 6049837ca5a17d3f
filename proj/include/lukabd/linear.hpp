#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lukabd/rational.hpp"

namespace lukabd {

// ---------------------------------------------------------------------------
// Linear systems over [0,1]
// ---------------------------------------------------------------------------

enum class LinRel { Le, Lt, Ge, Gt, Eq };

inline LinRel lin_rel_weakened(LinRel r) {
  if (r == LinRel::Lt) return LinRel::Le;
  if (r == LinRel::Gt) return LinRel::Ge;
  return r;
}
inline bool lin_rel_strict(LinRel r) { return r == LinRel::Lt || r == LinRel::Gt; }

// Sparse affine expression over variable indices.
struct LinExpr {
  std::vector<std::pair<int, Rat>> terms;
  Rat constant{0};

  LinExpr() = default;
  explicit LinExpr(Rat c) : constant(std::move(c)) {}
  static LinExpr var(int idx, Rat coeff = Rat(1)) {
    LinExpr e;
    e.terms.emplace_back(idx, std::move(coeff));
    return e;
  }

  LinExpr& add(int idx, const Rat& coeff) {
    terms.emplace_back(idx, coeff);
    return *this;
  }
  LinExpr& operator+=(const LinExpr& o) {
    for (const auto& t : o.terms) terms.push_back(t);
    constant = constant + o.constant;
    return *this;
  }
  LinExpr operator+(const LinExpr& o) const {
    LinExpr r = *this;
    r += o;
    return r;
  }
  LinExpr negated() const {
    LinExpr r;
    for (const auto& [i, c] : terms) r.terms.emplace_back(i, -c);
    r.constant = -constant;
    return r;
  }
  LinExpr scaled(const Rat& k) const {
    LinExpr r;
    for (const auto& [i, c] : terms) r.terms.emplace_back(i, c * k);
    r.constant = constant * k;
    return r;
  }

  // Collapse duplicate indices; drops zero coefficients.
  std::map<int, Rat> collected() const {
    std::map<int, Rat> m;
    for (const auto& [i, c] : terms) {
      auto it = m.find(i);
      if (it == m.end())
        m.emplace(i, c);
      else
        it->second = it->second + c;
    }
    for (auto it = m.begin(); it != m.end();)
      it = it->second == Rat(0) ? m.erase(it) : std::next(it);
    return m;
  }

  Rat eval(const std::vector<Rat>& x) const {
    Rat v = constant;
    for (const auto& [i, c] : terms) v = v + c * x[static_cast<std::size_t>(i)];
    return v;
  }
};

struct LinConstraint {
  LinExpr lhs;
  LinRel rel = LinRel::Le;
  Rat rhs{0};

  bool holds(const std::vector<Rat>& x) const {
    Rat v = lhs.eval(x);
    switch (rel) {
      case LinRel::Le: return v <= rhs;
      case LinRel::Lt: return v < rhs;
      case LinRel::Ge: return v >= rhs;
      case LinRel::Gt: return v > rhs;
      case LinRel::Eq: return v == rhs;
    }
    return false;
  }
};

// Exact rational system: named unknowns boxed into [0,1], linear constraints
// with strictness flags, and a subset of unknowns restricted to {0,1}.
class LinearSystem {
public:
  int add_var(const std::string& name) {
    names_.push_back(name);
    return static_cast<int>(names_.size()) - 1;
  }
  int add_binary(const std::string& name) {
    int idx = add_var(name);
    binaries_.push_back(idx);
    return idx;
  }

  void add(LinExpr lhs, LinRel rel, Rat rhs) {
    constraints_.push_back({std::move(lhs), rel, std::move(rhs)});
  }
  void add(LinConstraint c) { constraints_.push_back(std::move(c)); }

  int var_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  const std::vector<int>& binaries() const { return binaries_; }

  bool has_strict() const {
    for (const auto& c : constraints_)
      if (lin_rel_strict(c.rel)) return true;
    return false;
  }

private:
  std::vector<std::string> names_;
  std::vector<LinConstraint> constraints_;
  std::vector<int> binaries_;
};

// ---------------------------------------------------------------------------
// Exact two-phase primal simplex, Bland's rule
// ---------------------------------------------------------------------------

struct LpResult {
  bool feasible = false;
  Rat objective{0};
  std::vector<Rat> values;  // one entry per structural variable
};

namespace detail {

// Dense tableau for maximize c.x s.t. A x = b, x >= 0, b >= 0, with the
// initial basis given by slack/artificial columns.
class SimplexTableau {
public:
  SimplexTableau(int cols) : n_(cols) {}

  void add_row(std::vector<Rat> row, Rat rhs, int basis_var) {
    a_.push_back(std::move(row));
    b_.push_back(std::move(rhs));
    basis_.push_back(basis_var);
  }

  int rows() const { return static_cast<int>(a_.size()); }
  int cols() const { return n_; }
  const std::vector<int>& basis() const { return basis_; }
  const Rat& rhs(int r) const { return b_[static_cast<std::size_t>(r)]; }
  const Rat& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }

  // Maximizes the objective c over the current basis; assumes the tableau is
  // primal feasible (b >= 0). Returns the optimal objective value. The
  // allowed mask disables columns (used to freeze artificials in phase 2).
  Rat maximize(const std::vector<Rat>& c, const std::vector<bool>& allowed) {
    int m = rows();
    // Reduced costs z_j = c_j - sum_r c_basis(r) * a[r][j].
    std::vector<Rat> z = c;
    Rat z0{0};
    for (int r = 0; r < m; ++r) {
      const Rat& cb = c[static_cast<std::size_t>(basis_[r])];
      if (cb == Rat(0)) continue;
      z0 = z0 + cb * b_[static_cast<std::size_t>(r)];
      const auto& row = a_[static_cast<std::size_t>(r)];
      for (int j = 0; j < n_; ++j)
        if (row[static_cast<std::size_t>(j)] != Rat(0))
          z[static_cast<std::size_t>(j)] =
              z[static_cast<std::size_t>(j)] - cb * row[static_cast<std::size_t>(j)];
    }
    for (;;) {
      // Bland: entering column is the lowest-index improving one.
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        if (z[static_cast<std::size_t>(j)] > Rat(0)) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return z0;
      int leave = -1;
      Rat best_ratio{0};
      for (int r = 0; r < m; ++r) {
        const Rat& arc = at(r, enter);
        if (arc <= Rat(0)) continue;
        Rat ratio = b_[static_cast<std::size_t>(r)] / arc;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return Rat(2);  // unbounded; objective is capped by rows in our use
      pivot(leave, enter, z, z0);
    }
  }

  std::vector<Rat> extract(int structural_count) const {
    std::vector<Rat> x(static_cast<std::size_t>(structural_count), Rat(0));
    for (int r = 0; r < rows(); ++r)
      if (basis_[r] < structural_count)
        x[static_cast<std::size_t>(basis_[r])] = b_[static_cast<std::size_t>(r)];
    return x;
  }

  // Pivots a zero-valued basic column out of the basis when possible; returns
  // false if the row is identically zero on the allowed columns (redundant).
  bool drive_out(int row, const std::vector<bool>& allowed) {
    for (int j = 0; j < n_; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      if (at(row, j) != Rat(0)) {
        std::vector<Rat> dummy(static_cast<std::size_t>(n_), Rat(0));
        Rat d0{0};
        pivot(row, j, dummy, d0);
        return true;
      }
    }
    return false;
  }

  void drop_row(int row) {
    a_.erase(a_.begin() + row);
    b_.erase(b_.begin() + row);
    basis_.erase(basis_.begin() + row);
  }

private:
  void pivot(int r, int c, std::vector<Rat>& z, Rat& z0) {
    auto& prow = a_[static_cast<std::size_t>(r)];
    Rat inv = Rat(1) / prow[static_cast<std::size_t>(c)];
    if (inv != Rat(1)) {
      for (int j = 0; j < n_; ++j)
        if (prow[static_cast<std::size_t>(j)] != Rat(0))
          prow[static_cast<std::size_t>(j)] = prow[static_cast<std::size_t>(j)] * inv;
      b_[static_cast<std::size_t>(r)] = b_[static_cast<std::size_t>(r)] * inv;
    }
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      Rat f = at(i, c);
      if (f == Rat(0)) continue;
      auto& row = a_[static_cast<std::size_t>(i)];
      for (int j = 0; j < n_; ++j)
        if (prow[static_cast<std::size_t>(j)] != Rat(0))
          row[static_cast<std::size_t>(j)] =
              row[static_cast<std::size_t>(j)] - f * prow[static_cast<std::size_t>(j)];
      b_[static_cast<std::size_t>(i)] =
          b_[static_cast<std::size_t>(i)] - f * b_[static_cast<std::size_t>(r)];
    }
    Rat zf = z[static_cast<std::size_t>(c)];
    if (zf != Rat(0)) {
      for (int j = 0; j < n_; ++j)
        if (prow[static_cast<std::size_t>(j)] != Rat(0))
          z[static_cast<std::size_t>(j)] =
              z[static_cast<std::size_t>(j)] - zf * prow[static_cast<std::size_t>(j)];
      z0 = z0 + zf * b_[static_cast<std::size_t>(r)];
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  int n_;
  std::vector<std::vector<Rat>> a_;
  std::vector<Rat> b_;
  std::vector<int> basis_;
};

}  // namespace detail

// Maximizes a linear objective over { x : constraints, 0 <= x_i <= 1 }.
// Strict constraints must have been transformed away by the caller.
inline LpResult lp_maximize(int nvars,
                            const std::vector<LinConstraint>& constraints,
                            const std::map<int, Rat>& objective) {
  struct Row {
    std::map<int, Rat> coeffs;
    LinRel rel;
    Rat rhs;
  };
  std::vector<Row> rows;
  for (const auto& c : constraints) {
    Row r{c.lhs.collected(), c.rel, c.rhs - c.lhs.constant};
    if (r.rel == LinRel::Lt || r.rel == LinRel::Gt)
      throw Error("lp_maximize: strict constraint not transformed");
    if (r.coeffs.empty()) {
      // Constant constraint; either trivially true or the system is infeasible.
      bool ok = r.rel == LinRel::Le   ? Rat(0) <= r.rhs
                : r.rel == LinRel::Ge ? Rat(0) >= r.rhs
                                      : Rat(0) == r.rhs;
      if (!ok) return {};
      continue;
    }
    rows.push_back(std::move(r));
  }
  // Compress away columns that appear in no constraint and no objective;
  // they stay at zero. The remaining columns get unit upper-bound rows
  // (lower bounds are implicit nonnegativity).
  std::vector<int> remap(static_cast<std::size_t>(nvars), -1);
  int packed = 0;
  for (const auto& r : rows)
    for (const auto& [i, c] : r.coeffs)
      if (remap[static_cast<std::size_t>(i)] < 0)
        remap[static_cast<std::size_t>(i)] = packed++;
  for (const auto& [i, c] : objective)
    if (c != Rat(0) && remap[static_cast<std::size_t>(i)] < 0)
      remap[static_cast<std::size_t>(i)] = packed++;
  for (auto& r : rows) {
    std::map<int, Rat> m;
    for (const auto& [i, c] : r.coeffs) m.emplace(remap[static_cast<std::size_t>(i)], c);
    r.coeffs = std::move(m);
  }
  for (int i = 0; i < packed; ++i)
    rows.push_back(Row{{{i, Rat(1)}}, LinRel::Le, Rat(1)});

  // Normalize to nonnegative right-hand sides.
  for (auto& r : rows) {
    if (r.rhs < Rat(0)) {
      for (auto& [i, c] : r.coeffs) c = -c;
      r.rhs = -r.rhs;
      r.rel = r.rel == LinRel::Le ? LinRel::Ge
              : r.rel == LinRel::Ge ? LinRel::Le
                                    : LinRel::Eq;
    }
  }

  int m = static_cast<int>(rows.size());
  int n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.rel != LinRel::Eq) ++n_slack;
    if (r.rel != LinRel::Le) ++n_art;
  }
  int total = packed + n_slack + n_art;
  detail::SimplexTableau tab(total);

  int next_slack = packed;
  int art_base = packed + n_slack;
  int next_art = art_base;
  for (int ri = 0; ri < m; ++ri) {
    const auto& r = rows[static_cast<std::size_t>(ri)];
    std::vector<Rat> row(static_cast<std::size_t>(total), Rat(0));
    for (const auto& [i, c] : r.coeffs) row[static_cast<std::size_t>(i)] = c;
    int basis_var;
    if (r.rel == LinRel::Le) {
      row[static_cast<std::size_t>(next_slack)] = Rat(1);
      basis_var = next_slack++;
    } else if (r.rel == LinRel::Ge) {
      row[static_cast<std::size_t>(next_slack)] = Rat(-1);
      ++next_slack;
      row[static_cast<std::size_t>(next_art)] = Rat(1);
      basis_var = next_art++;
    } else {
      row[static_cast<std::size_t>(next_art)] = Rat(1);
      basis_var = next_art++;
    }
    tab.add_row(std::move(row), r.rhs, basis_var);
  }

  std::vector<bool> allow_all(static_cast<std::size_t>(total), true);

  if (n_art > 0) {
    std::vector<Rat> c1(static_cast<std::size_t>(total), Rat(0));
    for (int j = art_base; j < total; ++j) c1[static_cast<std::size_t>(j)] = Rat(-1);
    Rat opt = tab.maximize(c1, allow_all);
    if (opt < Rat(0)) return {};
    // Remove artificials from the basis; degenerate rows are pivoted or dropped.
    std::vector<bool> non_art(static_cast<std::size_t>(total), true);
    for (int j = art_base; j < total; ++j) non_art[static_cast<std::size_t>(j)] = false;
    for (int r = 0; r < tab.rows();) {
      if (tab.basis()[static_cast<std::size_t>(r)] >= art_base) {
        if (!tab.drive_out(r, non_art)) {
          tab.drop_row(r);
          continue;
        }
      }
      ++r;
    }
    allow_all = std::move(non_art);
  }

  std::vector<Rat> c2(static_cast<std::size_t>(total), Rat(0));
  bool nonzero_obj = false;
  for (const auto& [i, c] : objective) {
    int j = remap[static_cast<std::size_t>(i)];
    if (j < 0) continue;
    c2[static_cast<std::size_t>(j)] = c;
    if (c != Rat(0)) nonzero_obj = true;
  }
  Rat opt{0};
  if (nonzero_obj) opt = tab.maximize(c2, allow_all);

  LpResult res;
  res.feasible = true;
  res.objective = opt;
  std::vector<Rat> packed_vals = tab.extract(packed);
  res.values.assign(static_cast<std::size_t>(nvars), Rat(0));
  for (int i = 0; i < nvars; ++i) {
    int j = remap[static_cast<std::size_t>(i)];
    if (j >= 0) res.values[static_cast<std::size_t>(i)] = packed_vals[static_cast<std::size_t>(j)];
  }
  return res;
}

// Decides feasibility of a system of (possibly strict) constraints over the
// unit box, ignoring integrality of binaries. Strictness is handled exactly:
// every strict constraint gets slack eps shared across the system, and eps is
// maximized by exact simplex; the strict system is feasible iff the optimum
// is positive. No magic epsilon constants anywhere.
struct FeasResult {
  bool feasible = false;
  std::vector<Rat> values;
};

inline FeasResult lp_strict_feasible(int nvars,
                                     const std::vector<LinConstraint>& constraints) {
  bool strict = false;
  for (const auto& c : constraints)
    if (lin_rel_strict(c.rel)) strict = true;

  if (!strict) {
    LpResult r = lp_maximize(nvars, constraints, {});
    FeasResult f;
    f.feasible = r.feasible;
    if (r.feasible) f.values = std::move(r.values);
    return f;
  }

  int eps = nvars;  // one extra column for the shared strictness slack
  std::vector<LinConstraint> rows;
  rows.reserve(constraints.size());
  for (const auto& c : constraints) {
    LinConstraint r = c;
    if (c.rel == LinRel::Lt) {
      r.lhs.add(eps, Rat(1));
      r.rel = LinRel::Le;
    } else if (c.rel == LinRel::Gt) {
      r.lhs.add(eps, Rat(-1));
      r.rel = LinRel::Ge;
    }
    rows.push_back(std::move(r));
  }
  LpResult r = lp_maximize(nvars + 1, rows, {{eps, Rat(1)}});
  FeasResult f;
  if (!r.feasible || r.objective <= Rat(0)) return f;
  f.feasible = true;
  r.values.resize(static_cast<std::size_t>(nvars));
  f.values = std::move(r.values);
  return f;
}

}  // namespace lukabd
