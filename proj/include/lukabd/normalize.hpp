#pragma once

#include <set>
#include <string>

#include "lukabd/classical.hpp"
#include "lukabd/formula.hpp"

namespace lukabd {

namespace detail {
inline Formula normalize_impl(const Formula& phi, bool negated);
}

// Rewrites into a strongly equivalent negation normal form: double negations
// vanish, negations are pushed through the strong connectives and the
// implication, and negated interval literals are replaced by their
// complemented relations. Idempotent and evaluation-preserving.
inline Formula normalize(const Formula& phi) {
  return detail::normalize_impl(phi, false);
}

namespace detail {

inline Formula normalize_impl(const Formula& phi, bool negated) {
  switch (phi.kind()) {
    case Conn::Var:
      return negated ? Formula::neg(phi) : phi;
    case Conn::Top:
      return negated ? Formula::bot() : phi;
    case Conn::Bot:
      return negated ? Formula::top() : phi;
    case Conn::Lit:
      return negated ? Formula::lit(phi.literal().complemented()) : phi;
    case Conn::Neg:
      return normalize_impl(phi.lhs(), !negated);
    case Conn::Conj: {
      Formula a = normalize_impl(phi.lhs(), negated);
      Formula b = normalize_impl(phi.rhs(), negated);
      // ~(x * y) = ~x + ~y
      return negated ? Formula::disj(a, b) : Formula::conj(a, b);
    }
    case Conn::Disj: {
      Formula a = normalize_impl(phi.lhs(), negated);
      Formula b = normalize_impl(phi.rhs(), negated);
      // ~(x + y) = ~x * ~y
      return negated ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case Conn::Impl: {
      if (negated) {
        // ~(x -> y) = x * ~y
        Formula a = normalize_impl(phi.lhs(), false);
        Formula b = normalize_impl(phi.rhs(), true);
        return Formula::conj(a, b);
      }
      Formula a = normalize_impl(phi.lhs(), false);
      Formula b = normalize_impl(phi.rhs(), false);
      return Formula::impl(a, b);
    }
  }
  throw Error("normalize: malformed formula");
}

}  // namespace detail

// Multiplicative embedding of a classical formula: /\ and \/ become the
// strong connectives. On {0,1}-valuations the image evaluates exactly as the
// classical original.
inline Formula translate_classical(const CplFormula& phi) {
  switch (phi.kind()) {
    case CplConn::Var: return Formula::var(phi.var_name());
    case CplConn::Neg: return Formula::neg(translate_classical(phi.lhs()));
    case CplConn::And:
      return Formula::conj(translate_classical(phi.lhs()),
                           translate_classical(phi.rhs()));
    case CplConn::Or:
      return Formula::disj(translate_classical(phi.lhs()),
                           translate_classical(phi.rhs()));
  }
  throw Error("translate_classical: malformed formula");
}

// One guard p \/ ~p per variable; a valuation satisfies every guard exactly
// when it is two-valued on the given variables.
inline Theory classicality_guards(const std::set<std::string>& vars) {
  Theory out;
  for (const auto& p : vars) {
    Formula v = Formula::var(p);
    out.add(Formula::weak_or(v, Formula::neg(v)));
  }
  return out;
}

}  // namespace lukabd
