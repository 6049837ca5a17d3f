#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lukabd/errors.hpp"

namespace lukabd {

// Classical propositional formulas over {~, /\, \/}. Used as the source
// language of the embedding into the Lukasiewicz side and by the truth-table
// oracles; deliberately independent of the main engine.
enum class CplConn { Var, Neg, And, Or };

class CplFormula {
public:
  CplFormula() = default;

  static CplFormula var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = CplConn::Var;
    n->var = std::move(name);
    return CplFormula(std::move(n));
  }
  static CplFormula neg(CplFormula f) {
    auto n = std::make_shared<Node>();
    n->kind = CplConn::Neg;
    n->a = std::move(f.n_);
    return CplFormula(std::move(n));
  }
  static CplFormula conj(CplFormula a, CplFormula b) { return binary(CplConn::And, std::move(a), std::move(b)); }
  static CplFormula disj(CplFormula a, CplFormula b) { return binary(CplConn::Or, std::move(a), std::move(b)); }

  static CplFormula big_and(const std::vector<CplFormula>& fs) {
    CplFormula acc;
    for (const auto& f : fs) acc = acc.valid() ? conj(acc, f) : f;
    return acc;  // invalid handle when fs is empty; callers guard
  }
  static CplFormula big_or(const std::vector<CplFormula>& fs) {
    CplFormula acc;
    for (const auto& f : fs) acc = acc.valid() ? disj(acc, f) : f;
    return acc;
  }

  bool valid() const { return n_ != nullptr; }
  CplConn kind() const { return n_->kind; }
  const std::string& var_name() const { return n_->var; }
  CplFormula lhs() const { return CplFormula(n_->a); }
  CplFormula rhs() const { return CplFormula(n_->b); }

  bool eval(const std::map<std::string, bool>& v) const {
    switch (n_->kind) {
      case CplConn::Var: {
        auto it = v.find(n_->var);
        if (it == v.end()) throw UnboundVariable(n_->var);
        return it->second;
      }
      case CplConn::Neg: return !CplFormula(n_->a).eval(v);
      case CplConn::And:
        return CplFormula(n_->a).eval(v) && CplFormula(n_->b).eval(v);
      case CplConn::Or:
        return CplFormula(n_->a).eval(v) || CplFormula(n_->b).eval(v);
    }
    return false;  // unreachable
  }

  void collect_vars(std::set<std::string>& out) const {
    switch (n_->kind) {
      case CplConn::Var: out.insert(n_->var); break;
      case CplConn::Neg: CplFormula(n_->a).collect_vars(out); break;
      default:
        CplFormula(n_->a).collect_vars(out);
        CplFormula(n_->b).collect_vars(out);
    }
  }
  std::set<std::string> vars() const {
    std::set<std::string> out;
    collect_vars(out);
    return out;
  }

  std::string str() const {
    switch (n_->kind) {
      case CplConn::Var: return n_->var;
      case CplConn::Neg: return "~" + CplFormula(n_->a).str_atomic();
      case CplConn::And:
        return CplFormula(n_->a).str_atomic() + " /\\ " + CplFormula(n_->b).str_atomic();
      case CplConn::Or:
        return CplFormula(n_->a).str_atomic() + " \\/ " + CplFormula(n_->b).str_atomic();
    }
    return "?";
  }

private:
  struct Node {
    CplConn kind = CplConn::Var;
    std::string var;
    std::shared_ptr<const Node> a, b;
  };

  explicit CplFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static CplFormula binary(CplConn k, CplFormula a, CplFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a.n_);
    n->b = std::move(b.n_);
    return CplFormula(std::move(n));
  }

  std::string str_atomic() const {
    if (n_->kind == CplConn::Var || n_->kind == CplConn::Neg) return str();
    return "(" + str() + ")";
  }

  std::shared_ptr<const Node> n_;
};

// Signed variable; the hypothesis currency of classical abduction.
struct CplLiteral {
  std::string var;
  bool negated = false;

  CplFormula to_formula() const {
    auto v = CplFormula::var(var);
    return negated ? CplFormula::neg(v) : v;
  }
  std::string str() const { return (negated ? "~" : "") + var; }

  friend bool operator==(const CplLiteral& a, const CplLiteral& b) {
    return a.var == b.var && a.negated == b.negated;
  }
  friend bool operator<(const CplLiteral& a, const CplLiteral& b) {
    if (a.var != b.var) return a.var < b.var;
    return a.negated < b.negated;
  }
};

}  // namespace lukabd
