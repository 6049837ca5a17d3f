#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lukabd/errors.hpp"
#include "lukabd/rational.hpp"

namespace lukabd {

// ---------------------------------------------------------------------------
// Interval literals
// ---------------------------------------------------------------------------

enum class Rel { Leq, Lt, Geq, Gt };

// Complementation pairs: not(x <= c) is x > c, not(x < c) is x >= c, etc.
inline Rel rel_complement(Rel r) {
  switch (r) {
    case Rel::Leq: return Rel::Gt;
    case Rel::Lt: return Rel::Geq;
    case Rel::Geq: return Rel::Lt;
    case Rel::Gt: return Rel::Leq;
  }
  return Rel::Leq;  // unreachable
}

inline bool rel_holds(const Rat& lhs, Rel r, const Rat& rhs) {
  switch (r) {
    case Rel::Leq: return lhs <= rhs;
    case Rel::Lt: return lhs < rhs;
    case Rel::Geq: return lhs >= rhs;
    case Rel::Gt: return lhs > rhs;
  }
  return false;  // unreachable
}

inline const char* rel_str(Rel r) {
  switch (r) {
    case Rel::Leq: return "<=";
    case Rel::Lt: return "<";
    case Rel::Geq: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";  // unreachable
}

// Two-valued atom "v <rel> c" over the truth degree of a variable.
struct IntervalLiteral {
  std::string var;
  Rel rel;
  Rat bound;

  IntervalLiteral(std::string var, Rel rel, Rat bound)
      : var(std::move(var)), rel(rel), bound(std::move(bound)) {
    if (!this->bound.in_unit())
      throw BoundOutOfRange("interval bound " + this->bound.str() +
                            " outside [0,1]");
  }

  IntervalLiteral complemented() const {
    return IntervalLiteral(var, rel_complement(rel), bound);
  }

  bool holds_at(const Rat& value) const { return rel_holds(value, rel, bound); }

  std::string str() const {
    return "(" + var + " " + rel_str(rel) + " " + bound.str() + ")";
  }

  friend bool operator==(const IntervalLiteral& a, const IntervalLiteral& b) {
    return a.var == b.var && a.rel == b.rel && a.bound == b.bound;
  }
  friend bool operator<(const IntervalLiteral& a, const IntervalLiteral& b) {
    if (a.var != b.var) return a.var < b.var;
    if (a.rel != b.rel) return static_cast<int>(a.rel) < static_cast<int>(b.rel);
    return a.bound < b.bound;
  }
};

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

// AST node kinds. Conj is the strong conjunction, Disj the strong disjunction.
// Weak connectives, Iff and the constants are derived and expand on
// construction; Top/Bot are kept as dedicated constants so that they do not
// introduce spurious variables.
enum class Conn { Var, Top, Bot, Neg, Conj, Disj, Impl, Lit };

class Formula {
public:
  Formula() = default;  // empty handle; only produced by default construction

  static Formula var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Var;
    n->var = std::move(name);
    return Formula(std::move(n));
  }
  static Formula top() { return leaf(Conn::Top); }
  static Formula bot() { return leaf(Conn::Bot); }
  static Formula lit(IntervalLiteral l) {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Lit;
    n->lit = std::make_shared<IntervalLiteral>(std::move(l));
    return Formula(std::move(n));
  }
  static Formula neg(Formula f) { return unary(Conn::Neg, std::move(f)); }
  static Formula conj(Formula a, Formula b) {
    return binary(Conn::Conj, std::move(a), std::move(b));
  }
  static Formula disj(Formula a, Formula b) {
    return binary(Conn::Disj, std::move(a), std::move(b));
  }
  static Formula impl(Formula a, Formula b) {
    return binary(Conn::Impl, std::move(a), std::move(b));
  }

  // Derived constructors.
  static Formula weak_or(Formula a, Formula b) {
    // a \/ b  :=  (a -> b) -> b
    return impl(impl(a, b), b);
  }
  static Formula weak_and(Formula a, Formula b) {
    // a /\ b  :=  ~(~a \/ ~b)
    return neg(weak_or(neg(a), neg(b)));
  }
  static Formula iff(Formula a, Formula b) {
    return conj(impl(a, b), impl(b, a));
  }

  // Fold of strong conjunction; the empty fold is Top.
  static Formula big_conj(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
  }
  // Fold of strong disjunction; the empty fold is Bot.
  static Formula big_disj(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
  }

  bool valid() const { return n_ != nullptr; }
  Conn kind() const { return n_->kind; }
  const std::string& var_name() const { return n_->var; }
  const IntervalLiteral& literal() const { return *n_->lit; }
  Formula lhs() const { return Formula(n_->a); }
  Formula rhs() const { return Formula(n_->b); }

  // Structural comparison; a total order usable for maps and deduplication.
  int cmp(const Formula& o) const {
    if (n_ == o.n_) return 0;
    if (n_->kind != o.n_->kind)
      return static_cast<int>(n_->kind) < static_cast<int>(o.n_->kind) ? -1 : 1;
    switch (n_->kind) {
      case Conn::Var:
        return n_->var.compare(o.n_->var);
      case Conn::Top:
      case Conn::Bot:
        return 0;
      case Conn::Lit: {
        const auto& x = *n_->lit;
        const auto& y = *o.n_->lit;
        if (x == y) return 0;
        return x < y ? -1 : 1;
      }
      case Conn::Neg:
        return Formula(n_->a).cmp(Formula(o.n_->a));
      default: {
        int c = Formula(n_->a).cmp(Formula(o.n_->a));
        if (c != 0) return c;
        return Formula(n_->b).cmp(Formula(o.n_->b));
      }
    }
  }
  friend bool operator==(const Formula& a, const Formula& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Formula& a, const Formula& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Formula& a, const Formula& b) { return a.cmp(b) < 0; }

  void collect_vars(std::set<std::string>& out) const {
    switch (n_->kind) {
      case Conn::Var: out.insert(n_->var); break;
      case Conn::Lit: out.insert(n_->lit->var); break;
      case Conn::Top:
      case Conn::Bot: break;
      case Conn::Neg: Formula(n_->a).collect_vars(out); break;
      default:
        Formula(n_->a).collect_vars(out);
        Formula(n_->b).collect_vars(out);
    }
  }
  std::set<std::string> vars() const {
    std::set<std::string> out;
    collect_vars(out);
    return out;
  }

  std::size_t node_count() const {
    switch (n_->kind) {
      case Conn::Var:
      case Conn::Top:
      case Conn::Bot:
      case Conn::Lit: return 1;
      case Conn::Neg: return 1 + Formula(n_->a).node_count();
      default:
        return 1 + Formula(n_->a).node_count() + Formula(n_->b).node_count();
    }
  }

  // Number of binary-connective occurrences; used to size oracle grids.
  std::size_t connective_count() const {
    switch (n_->kind) {
      case Conn::Var:
      case Conn::Top:
      case Conn::Bot:
      case Conn::Lit: return 0;
      case Conn::Neg: return Formula(n_->a).connective_count();
      default:
        return 1 + Formula(n_->a).connective_count() +
               Formula(n_->b).connective_count();
    }
  }

  void collect_bounds(std::vector<Rat>& out) const {
    switch (n_->kind) {
      case Conn::Lit: out.push_back(n_->lit->bound); break;
      case Conn::Neg: Formula(n_->a).collect_bounds(out); break;
      case Conn::Conj:
      case Conn::Disj:
      case Conn::Impl:
        Formula(n_->a).collect_bounds(out);
        Formula(n_->b).collect_bounds(out);
        break;
      default: break;
    }
  }

  std::string str() const {
    std::string out;
    print(out, 0);
    return out;
  }

private:
  struct Node {
    Conn kind = Conn::Top;
    std::string var;
    std::shared_ptr<const IntervalLiteral> lit;
    std::shared_ptr<const Node> a, b;
  };

  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static Formula leaf(Conn k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Formula(std::move(n));
  }
  static Formula unary(Conn k, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(f.n_);
    return Formula(std::move(n));
  }
  static Formula binary(Conn k, Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a.n_);
    n->b = std::move(b.n_);
    return Formula(std::move(n));
  }

  // Precedence levels for printing, tightest first: ~, *, +, ->.
  static int prec(Conn k) {
    switch (k) {
      case Conn::Impl: return 1;
      case Conn::Disj: return 2;
      case Conn::Conj: return 3;
      case Conn::Neg: return 4;
      default: return 5;
    }
  }

  void print(std::string& out, int parent_prec) const {
    int p = prec(n_->kind);
    bool need_paren = p < parent_prec;
    switch (n_->kind) {
      case Conn::Var: out += n_->var; return;
      case Conn::Top: out += "1"; return;
      case Conn::Bot: out += "0"; return;
      case Conn::Lit: out += n_->lit->str(); return;
      case Conn::Neg:
        out += "~";
        Formula(n_->a).print(out, p + 1);
        return;
      case Conn::Conj:
      case Conn::Disj: {
        if (need_paren) out += "(";
        Formula(n_->a).print(out, p);
        out += n_->kind == Conn::Conj ? " * " : " + ";
        Formula(n_->b).print(out, p + 1);  // left-associative
        if (need_paren) out += ")";
        return;
      }
      case Conn::Impl: {
        if (need_paren) out += "(";
        Formula(n_->a).print(out, p + 1);  // right-associative
        out += " -> ";
        Formula(n_->b).print(out, p);
        if (need_paren) out += ")";
        return;
      }
    }
  }

  std::shared_ptr<const Node> n_;
};

// Finite set of premises, kept in insertion order and deduplicated under
// syntactic equality.
class Theory {
public:
  Theory() = default;
  explicit Theory(std::vector<Formula> fs) {
    for (auto& f : fs) add(std::move(f));
  }

  void add(Formula f) {
    for (const auto& g : formulas_)
      if (g == f) return;
    formulas_.push_back(std::move(f));
  }
  void add_all(const Theory& other) {
    for (const auto& f : other.formulas_) add(f);
  }

  const std::vector<Formula>& formulas() const { return formulas_; }
  bool empty() const { return formulas_.empty(); }
  std::size_t size() const { return formulas_.size(); }
  auto begin() const { return formulas_.begin(); }
  auto end() const { return formulas_.end(); }

  std::set<std::string> vars() const {
    std::set<std::string> out;
    for (const auto& f : formulas_) f.collect_vars(out);
    return out;
  }

private:
  std::vector<Formula> formulas_;
};

// ---------------------------------------------------------------------------
// Valuations and evaluation
// ---------------------------------------------------------------------------

using Valuation = std::map<std::string, Rat>;

// Exact truth degree of a formula under a total valuation of its variables.
inline Rat evaluate(const Formula& phi, const Valuation& v) {
  switch (phi.kind()) {
    case Conn::Var: {
      auto it = v.find(phi.var_name());
      if (it == v.end()) throw UnboundVariable(phi.var_name());
      return it->second;
    }
    case Conn::Top: return Rat(1);
    case Conn::Bot: return Rat(0);
    case Conn::Lit: {
      const auto& l = phi.literal();
      auto it = v.find(l.var);
      if (it == v.end()) throw UnboundVariable(l.var);
      return l.holds_at(it->second) ? Rat(1) : Rat(0);
    }
    case Conn::Neg: return Rat(1) - evaluate(phi.lhs(), v);
    case Conn::Conj: {
      Rat s = evaluate(phi.lhs(), v) + evaluate(phi.rhs(), v) - Rat(1);
      return rat_max(Rat(0), s);
    }
    case Conn::Disj: {
      Rat s = evaluate(phi.lhs(), v) + evaluate(phi.rhs(), v);
      return rat_min(Rat(1), s);
    }
    case Conn::Impl: {
      Rat s = Rat(1) - evaluate(phi.lhs(), v) + evaluate(phi.rhs(), v);
      return rat_min(Rat(1), s);
    }
  }
  throw Error("evaluate: malformed formula");
}

}  // namespace lukabd
