#pragma once

#include <stdexcept>
#include <string>

namespace lukabd {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A variable of the formula is missing from the valuation.
class UnboundVariable : public Error {
public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable: " + name), name(name) {}
  std::string name;
};

// An interval-literal boundary value lies outside [0,1].
class BoundOutOfRange : public Error {
public:
  explicit BoundOutOfRange(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line), col(col) {}
  int line;
  int col;
};

class LiteralNotInHypotheses : public Error {
public:
  explicit LiteralNotInHypotheses(const std::string& lit)
      : Error("literal not among hypotheses: " + lit) {}
};

class LiteralNotInTerm : public Error {
public:
  explicit LiteralNotInTerm(const std::string& lit)
      : Error("literal does not occur in term: " + lit) {}
};

// A candidate term uses a literal outside the problem's hypothesis set.
class HypothesisViolation : public Error {
public:
  explicit HypothesisViolation(const std::string& lit)
      : Error("term uses a literal outside the hypothesis set: " + lit) {}
};

// Input does not belong to the clausal fragment a fast path expects.
class FragmentViolation : public Error {
public:
  explicit FragmentViolation(const std::string& what) : Error(what) {}
};

class NotCoverFree : public Error {
public:
  explicit NotCoverFree(const std::string& what) : Error(what) {}
};

// The grid oracle would have to enumerate more points than the budget allows.
class GridTooLarge : public Error {
public:
  explicit GridTooLarge(const std::string& what) : Error(what) {}
};

class BudgetExceeded : public Error {
public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

}  // namespace lukabd
