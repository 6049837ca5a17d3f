#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lukabd/abduction.hpp"
#include "lukabd/reductions.hpp"

namespace lukabd {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace io {

enum class Tok {
  End, Ident, Number, LParen, RParen, Comma, Tilde, Star, Plus, And, Or,
  Impl, Iff, Leq, Lt, Geq, Gt, Slash, LBrace, RBrace, DotDot, At
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  Lexer(const std::string& src, int line = 1) : src_(src), line_(line) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('-', '>')) return make(t, Tok::Impl, 2);
    if (c == '<' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' &&
        src_[pos_ + 2] == '>')
      return make(t, Tok::Iff, 3);
    if (two('/', '\\')) return make(t, Tok::And, 2);
    if (two('\\', '/')) return make(t, Tok::Or, 2);
    if (two('<', '=')) return make(t, Tok::Leq, 2);
    if (two('>', '=')) return make(t, Tok::Geq, 2);
    if (two('.', '.')) return make(t, Tok::DotDot, 2);
    switch (c) {
      case '<': return make(t, Tok::Lt, 1);
      case '>': return make(t, Tok::Gt, 1);
      case '(': return make(t, Tok::LParen, 1);
      case ')': return make(t, Tok::RParen, 1);
      case '{': return make(t, Tok::LBrace, 1);
      case '}': return make(t, Tok::RBrace, 1);
      case ',': return make(t, Tok::Comma, 1);
      case '~': return make(t, Tok::Tilde, 1);
      case '*': return make(t, Tok::Star, 1);
      case '+': return make(t, Tok::Plus, 1);
      case '/': return make(t, Tok::Slash, 1);
      case '@': return make(t, Tok::At, 1);
      default: break;
    }
    if (c >= '0' && c <= '9') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
      t.kind = Tok::Number;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             ((src_[pos_] >= 'a' && src_[pos_] <= 'z') ||
              (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
              (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

private:
  Token make(Token t, Tok k, int len) {
    t.kind = k;
    t.text = src_.substr(pos_, static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) advance();
    return t;
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '\n') {
        advance();
        ++line_;
        col_ = 1;
        continue;
      }
      break;
    }
  }
  void advance() {
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Formula parser
// ---------------------------------------------------------------------------

// Precedence, tightest first: ~, *, +, /\, \/, ->, <->. The arrow is
// right-associative; interval literals are written parenthesized as
// (p >= 2/3) with rational bounds a/b. Identifiers starting with an
// underscore are reserved for generated variables.
class FormulaParser {
public:
  explicit FormulaParser(const std::string& src, int line = 1,
                         bool allow_reserved = false)
      : lex_(src, line), allow_reserved_(allow_reserved) {
    cur_ = lex_.next();
  }

  Formula parse_formula() {
    Formula f = parse_iff();
    expect(Tok::End, "end of formula");
    return f;
  }

  // Comma-separated interval literals, parentheses optional.
  std::vector<IntervalLiteral> parse_literal_list() {
    std::vector<IntervalLiteral> out;
    if (cur_.kind == Tok::End) return out;
    for (;;) {
      out.push_back(parse_literal());
      if (cur_.kind != Tok::Comma) break;
      eat();
    }
    expect(Tok::End, "end of literal list");
    return out;
  }

  // var { rel, rel, ... } { lo .. hi } / den
  std::optional<std::vector<IntervalLiteral>> try_parse_range_macro() {
    if (cur_.kind != Tok::Ident) return std::nullopt;
    Token save = cur_;
    std::string var = ident();
    if (cur_.kind != Tok::LBrace) {
      // Not a macro; rewind is impossible with this lexer, so the caller
      // decides by probing the raw text first.
      throw ParseError("expected '{' in hypothesis macro", save.line, save.col);
    }
    eat();
    std::vector<Rel> rels;
    for (;;) {
      rels.push_back(parse_rel());
      if (cur_.kind == Tok::Comma) {
        eat();
        continue;
      }
      break;
    }
    expect_eat(Tok::RBrace, "'}'");
    expect_eat(Tok::LBrace, "'{'");
    long lo = parse_int();
    expect_eat(Tok::DotDot, "'..'");
    long hi = parse_int();
    expect_eat(Tok::RBrace, "'}'");
    expect_eat(Tok::Slash, "'/'");
    long den = parse_int();
    expect(Tok::End, "end of macro");
    if (den <= 0 || lo < 0 || hi < lo)
      throw ParseError("malformed bound range in hypothesis macro", save.line, save.col);
    std::vector<IntervalLiteral> out;
    for (Rel r : rels)
      for (long i = lo; i <= hi; ++i) out.emplace_back(var, r, Rat(i, den));
    return out;
  }

  bool at_end() const { return cur_.kind == Tok::End; }

  Rat parse_rational() {
    long num = parse_int();
    if (cur_.kind == Tok::Slash) {
      eat();
      long den = parse_int();
      if (den == 0) throw ParseError("zero denominator", cur_.line, cur_.col);
      return Rat(num, den);
    }
    return Rat(num);
  }

private:
  Formula parse_iff() {
    Formula f = parse_impl();
    while (cur_.kind == Tok::Iff) {
      eat();
      f = Formula::iff(f, parse_impl());
    }
    return f;
  }
  Formula parse_impl() {
    Formula f = parse_weak_or();
    if (cur_.kind == Tok::Impl) {
      eat();
      return Formula::impl(f, parse_impl());  // right-associative
    }
    return f;
  }
  Formula parse_weak_or() {
    Formula f = parse_weak_and();
    while (cur_.kind == Tok::Or) {
      eat();
      f = Formula::weak_or(f, parse_weak_and());
    }
    return f;
  }
  Formula parse_weak_and() {
    Formula f = parse_plus();
    while (cur_.kind == Tok::And) {
      eat();
      f = Formula::weak_and(f, parse_plus());
    }
    return f;
  }
  Formula parse_plus() {
    Formula f = parse_star();
    while (cur_.kind == Tok::Plus) {
      eat();
      f = Formula::disj(f, parse_star());
    }
    return f;
  }
  Formula parse_star() {
    Formula f = parse_unary();
    while (cur_.kind == Tok::Star) {
      eat();
      f = Formula::conj(f, parse_unary());
    }
    return f;
  }
  Formula parse_unary() {
    if (cur_.kind == Tok::Tilde) {
      eat();
      Formula f = parse_unary();
      // Negated interval literals normalize to complemented relations.
      if (f.kind() == Conn::Lit) return Formula::lit(f.literal().complemented());
      return Formula::neg(f);
    }
    return parse_atom();
  }
  Formula parse_atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        if (cur_.text == "0") {
          eat();
          return Formula::bot();
        }
        if (cur_.text == "1") {
          eat();
          return Formula::top();
        }
        throw ParseError("unexpected number '" + cur_.text + "'", cur_.line, cur_.col);
      }
      case Tok::Ident: {
        return Formula::var(ident());
      }
      case Tok::LParen: {
        eat();
        // Interval literal when a variable is followed by a relation.
        if (cur_.kind == Tok::Ident) {
          Token id = cur_;
          std::string name = ident();
          if (cur_.kind == Tok::Leq || cur_.kind == Tok::Lt ||
              cur_.kind == Tok::Geq || cur_.kind == Tok::Gt) {
            Rel r = parse_rel();
            Rat bound = parse_bound(id);
            expect_eat(Tok::RParen, "')'");
            return Formula::lit(IntervalLiteral(name, r, bound));
          }
          // Plain parenthesized formula starting with a variable.
          Formula f = continue_formula(Formula::var(name));
          expect_eat(Tok::RParen, "')'");
          return f;
        }
        Formula f = parse_iff();
        expect_eat(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("unexpected token '" + cur_.text + "'", cur_.line, cur_.col);
    }
  }

  // Resumes the precedence chain after an already-parsed leading atom.
  Formula continue_formula(Formula lead) {
    Formula f = lead;
    while (cur_.kind == Tok::Star) {
      eat();
      f = Formula::conj(f, parse_unary());
    }
    while (cur_.kind == Tok::Plus) {
      eat();
      f = Formula::disj(f, parse_star());
    }
    while (cur_.kind == Tok::And) {
      eat();
      f = Formula::weak_and(f, parse_plus());
    }
    while (cur_.kind == Tok::Or) {
      eat();
      f = Formula::weak_or(f, parse_weak_and());
    }
    if (cur_.kind == Tok::Impl) {
      eat();
      f = Formula::impl(f, parse_impl());
    }
    while (cur_.kind == Tok::Iff) {
      eat();
      f = Formula::iff(f, parse_impl());
    }
    return f;
  }

  IntervalLiteral parse_literal() {
    bool parens = cur_.kind == Tok::LParen;
    if (parens) eat();
    Token id = cur_;
    std::string name = ident();
    Rel r = parse_rel();
    Rat bound = parse_bound(id);
    if (parens) expect_eat(Tok::RParen, "')'");
    return IntervalLiteral(name, r, bound);
  }

  Rel parse_rel() {
    Rel r;
    switch (cur_.kind) {
      case Tok::Leq: r = Rel::Leq; break;
      case Tok::Lt: r = Rel::Lt; break;
      case Tok::Geq: r = Rel::Geq; break;
      case Tok::Gt: r = Rel::Gt; break;
      default:
        throw ParseError("expected a relation", cur_.line, cur_.col);
    }
    eat();
    return r;
  }

  Rat parse_bound(const Token& at) {
    Rat b = parse_rational();
    if (!b.in_unit())
      throw BoundOutOfRange("bound " + b.str() + " outside [0,1] at line " +
                            std::to_string(at.line));
    return b;
  }

  long parse_int() {
    if (cur_.kind != Tok::Number)
      throw ParseError("expected a number", cur_.line, cur_.col);
    long v = std::stol(cur_.text);
    eat();
    return v;
  }

  std::string ident() {
    if (cur_.kind != Tok::Ident)
      throw ParseError("expected an identifier", cur_.line, cur_.col);
    if (cur_.text[0] == '_' && !allow_reserved_)
      throw ParseError("identifier '" + cur_.text +
                           "' uses the reserved generated-variable prefix",
                       cur_.line, cur_.col);
    std::string s = cur_.text;
    eat();
    return s;
  }

  void eat() { cur_ = lex_.next(); }
  void expect(Tok k, const std::string& what) {
    if (cur_.kind != k)
      throw ParseError("expected " + what + ", found '" + cur_.text + "'",
                       cur_.line, cur_.col);
  }
  void expect_eat(Tok k, const std::string& what) {
    expect(k, what);
    eat();
  }

  Lexer lex_;
  Token cur_;
  bool allow_reserved_ = false;
};

inline Formula parse_formula(const std::string& text, int line = 1) {
  FormulaParser p(text, line);
  return p.parse_formula();
}

inline IntervalTerm parse_term(const std::string& text) {
  Formula f = parse_formula(text);
  auto t = shape::as_interval_term(f);
  if (!t) throw ParseError("expected an interval term", 1, 1);
  return *t;
}

}  // namespace io

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

// Section-based plain-text format with '#' comments:
//
//   theory:
//     <formula per line, optionally "<clause> @ <degree>" for fuzzy rules>
//   observation: <formula>
//   hypotheses: <comma-separated interval literals, or a range macro
//                "c {<=,<,>=,>} {0..12}/12">
//   options: allow-empty-term=true, candidate-cap=100000
struct ParsedProblem {
  AbductionProblem problem;
  std::vector<std::string> warnings;
};

namespace io {

inline std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::string strip_comment(const std::string& s) {
  auto pos = s.find('#');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

inline bool looks_like_macro(const std::string& line) {
  return line.find('{') != std::string::npos;
}

}  // namespace io

inline ParsedProblem parse_problem(const std::string& text,
                                   AbductionOptions defaults = {}) {
  ParsedProblem out;
  Theory theory;
  std::vector<FuzzyRule> rules;
  std::optional<Formula> observation;
  std::vector<IntervalLiteral> hypotheses;
  AbductionOptions options = defaults;
  // Machine-written files may reference generated variables from the
  // reserved underscore namespace; they announce it up front.
  bool generated = text.find("generated=true") != std::string::npos;

  enum class Section { None, Theory, Hypotheses };
  Section section = Section::None;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto starts_with = [](const std::string& s, const char* kw) {
    return s.rfind(kw, 0) == 0;
  };

  auto parse_hyp_line = [&](const std::string& body, int line) {
    if (io::looks_like_macro(body)) {
      io::FormulaParser p(body, line, generated);
      auto lits = p.try_parse_range_macro();
      if (!lits) throw ParseError("malformed hypothesis macro", line, 1);
      for (auto& l : *lits) hypotheses.push_back(std::move(l));
      return;
    }
    io::FormulaParser p(body, line, generated);
    for (auto& l : p.parse_literal_list()) hypotheses.push_back(std::move(l));
  };

  auto parse_theory_line = [&](const std::string& body, int line) {
    auto at = body.find('@');
    if (at != std::string::npos) {
      std::string clause_text = body.substr(0, at);
      std::string degree_text = io::strip(body.substr(at + 1));
      io::FormulaParser cp(clause_text, line, generated);
      Formula f = cp.parse_formula();
      auto clause = shape::as_simple_clause(f);
      if (!clause) {
        // Implicative rule body * ... -> head also denotes a simple clause.
        Formula n = normalize(f);
        clause = shape::as_simple_clause(n);
      }
      if (!clause)
        throw ParseError("degree annotation requires a simple clause", line, 1);
      auto deg = Rat::parse(degree_text);
      if (!deg || !deg->in_unit() || *deg == Rat(0))
        throw ParseError("rule degree must be a rational in (0,1]", line, 1);
      rules.emplace_back(std::move(*clause), std::move(*deg));
      return;
    }
    io::FormulaParser tp(body, line, generated);
    theory.add(tp.parse_formula());
  };

  auto parse_options_line = [&](const std::string& body, int line) {
    std::istringstream os(body);
    std::string item;
    while (std::getline(os, item, ',')) {
      item = io::strip(item);
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ParseError("options are key=value pairs", line, 1);
      std::string key = io::strip(item.substr(0, eq));
      std::string val = io::strip(item.substr(eq + 1));
      if (key == "allow-empty-term") {
        options.allow_empty_term = (val == "true" || val == "1");
      } else if (key == "candidate-cap") {
        options.candidate_cap = static_cast<std::size_t>(std::stoll(val));
      } else if (key == "generated") {
        // Already honored by the pre-scan.
      } else {
        throw ParseError("unknown option '" + key + "'", line, 1);
      }
    }
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = io::strip(io::strip_comment(raw));
    if (line.empty()) continue;
    if (starts_with(line, "theory:")) {
      section = Section::Theory;
      std::string rest = io::strip(line.substr(7));
      if (!rest.empty()) parse_theory_line(rest, lineno);
      continue;
    }
    if (starts_with(line, "observation:")) {
      section = Section::None;
      std::string rest = io::strip(line.substr(12));
      if (rest.empty()) throw ParseError("empty observation", lineno, 1);
      io::FormulaParser op(rest, lineno, generated);
      observation = op.parse_formula();
      continue;
    }
    if (starts_with(line, "hypotheses:")) {
      section = Section::Hypotheses;
      std::string rest = io::strip(line.substr(11));
      if (!rest.empty()) parse_hyp_line(rest, lineno);
      continue;
    }
    if (starts_with(line, "options:")) {
      section = Section::None;
      parse_options_line(io::strip(line.substr(8)), lineno);
      continue;
    }
    switch (section) {
      case Section::Theory: parse_theory_line(line, lineno); break;
      case Section::Hypotheses: parse_hyp_line(line, lineno); break;
      default:
        throw ParseError("content outside any section", lineno, 1);
    }
  }

  if (!observation) throw ParseError("missing observation section", lineno, 1);

  // Duplicate hypotheses are tolerated with a warning.
  std::vector<IntervalLiteral> unique;
  for (const auto& h : hypotheses) {
    bool dup = false;
    for (const auto& u : unique)
      if (u == h) dup = true;
    if (dup)
      out.warnings.push_back("duplicate hypothesis " + h.str());
    else
      unique.push_back(h);
  }

  out.problem = make_problem(std::move(theory), std::move(*observation),
                             std::move(unique), options, std::move(rules));
  return out;
}

// Renders a problem back into the file format; parsing the result yields an
// identical abstract syntax tree.
inline std::string print_problem(const AbductionProblem& p) {
  std::string out;
  out += "theory:\n";
  for (const auto& f : p.theory) out += "  " + f.str() + "\n";
  for (const auto& r : p.flp_rules)
    out += "  " + r.clause.to_formula().str() + " @ " + r.degree.str() + "\n";
  out += "observation: " + p.observation.str() + "\n";
  out += "hypotheses:\n";
  for (std::size_t i = 0; i < p.hypotheses.size(); i += 4) {
    out += " ";
    for (std::size_t j = i; j < p.hypotheses.size() && j < i + 4; ++j) {
      const auto& h = p.hypotheses[j];
      if (j > i) out += ",";
      out += " " + h.var + " " + rel_str(h.rel) + " " + h.bound.str();
    }
    out += "\n";
  }
  bool reserved = false;
  for (const auto& v : p.all_vars())
    if (!v.empty() && v[0] == '_') reserved = true;
  std::vector<std::string> opts;
  if (p.options.allow_empty_term) opts.push_back("allow-empty-term=true");
  if (reserved) opts.push_back("generated=true");
  if (!opts.empty()) {
    out += "options: ";
    for (std::size_t i = 0; i < opts.size(); ++i)
      out += (i ? ", " : "") + opts[i];
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classical problem files (inputs of the translate command)
// ---------------------------------------------------------------------------

namespace io {

inline CplFormula to_classical(const Formula& f) {
  switch (f.kind()) {
    case Conn::Var: return CplFormula::var(f.var_name());
    case Conn::Neg: return CplFormula::neg(to_classical(f.lhs()));
    case Conn::Conj: return CplFormula::conj(to_classical(f.lhs()), to_classical(f.rhs()));
    case Conn::Disj: return CplFormula::disj(to_classical(f.lhs()), to_classical(f.rhs()));
    default:
      throw ParseError("classical input admits only ~, * and +", 1, 1);
  }
}

inline CplLiteral to_classical_literal(const Formula& f) {
  Formula n = normalize(f);
  if (n.kind() == Conn::Var) return {n.var_name(), false};
  if (n.kind() == Conn::Neg && n.lhs().kind() == Conn::Var)
    return {n.lhs().var_name(), true};
  throw ParseError("expected a classical literal", 1, 1);
}

}  // namespace io

// Classical problems reuse the section format; formulas are restricted to
// ~, * and + (conjunction and disjunction), hypotheses are simple literals.
inline ClassicalAbductionProblem parse_classical_problem(const std::string& text) {
  ClassicalAbductionProblem out;
  std::optional<CplFormula> observation;
  enum class Section { None, Theory, Hypotheses };
  Section section = Section::None;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto starts_with = [](const std::string& s, const char* kw) {
    return s.rfind(kw, 0) == 0;
  };
  auto add_theory = [&](const std::string& body, int line) {
    out.theory.push_back(io::to_classical(io::parse_formula(body, line)));
  };
  auto add_hyps = [&](const std::string& body, int line) {
    std::istringstream hs(body);
    std::string item;
    while (std::getline(hs, item, ',')) {
      item = io::strip(item);
      if (item.empty()) continue;
      out.hypotheses.push_back(io::to_classical_literal(io::parse_formula(item, line)));
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = io::strip(io::strip_comment(raw));
    if (line.empty()) continue;
    if (starts_with(line, "theory:")) {
      section = Section::Theory;
      std::string rest = io::strip(line.substr(7));
      if (!rest.empty()) add_theory(rest, lineno);
      continue;
    }
    if (starts_with(line, "observation:")) {
      section = Section::None;
      observation = io::to_classical(
          io::parse_formula(io::strip(line.substr(12)), lineno));
      continue;
    }
    if (starts_with(line, "hypotheses:")) {
      section = Section::Hypotheses;
      std::string rest = io::strip(line.substr(11));
      if (!rest.empty()) add_hyps(rest, lineno);
      continue;
    }
    switch (section) {
      case Section::Theory: add_theory(line, lineno); break;
      case Section::Hypotheses: add_hyps(line, lineno); break;
      default:
        throw ParseError("content outside any section", lineno, 1);
    }
  }
  if (!observation) throw ParseError("missing observation section", lineno, 1);
  out.observation = *observation;
  return out;
}

// Horn problems: theory lines are implications "a * b -> c" or "a -> 0",
// facts are bare atoms; the observation is a conjunction of literals.
inline ClassicalHornProblem parse_horn_problem(const std::string& text) {
  ClassicalHornProblem out;
  bool have_obs = false;
  enum class Section { None, Theory, Hypotheses };
  Section section = Section::None;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto starts_with = [](const std::string& s, const char* kw) {
    return s.rfind(kw, 0) == 0;
  };
  auto add_rule = [&](const std::string& body, int line) {
    Formula f = io::parse_formula(body, line);
    ClassicalHornProblem::Rule r;
    Formula head = f;
    if (f.kind() == Conn::Impl) {
      std::vector<Formula> leaves;
      shape::flatten_conj(f.lhs(), leaves);
      for (const auto& l : leaves) {
        if (l.kind() != Conn::Var)
          throw ParseError("horn rule bodies are conjunctions of atoms", line, 1);
        r.body.push_back(l.var_name());
      }
      head = f.rhs();
    }
    if (head.kind() == Conn::Bot)
      r.head = std::nullopt;
    else if (head.kind() == Conn::Var)
      r.head = head.var_name();
    else
      throw ParseError("horn rule heads are atoms or 0", line, 1);
    out.rules.push_back(std::move(r));
  };
  auto add_obs = [&](const std::string& body, int line) {
    Formula f = io::parse_formula(body, line);
    std::vector<Formula> leaves;
    shape::flatten_conj(normalize(f), leaves);
    for (const auto& l : leaves) out.observation.push_back(io::to_classical_literal(l));
    have_obs = true;
  };
  auto add_hyps = [&](const std::string& body, int line) {
    std::istringstream hs(body);
    std::string item;
    while (std::getline(hs, item, ',')) {
      item = io::strip(item);
      if (item.empty()) continue;
      out.hypotheses.push_back(io::to_classical_literal(io::parse_formula(item, line)));
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = io::strip(io::strip_comment(raw));
    if (line.empty()) continue;
    if (starts_with(line, "theory:")) {
      section = Section::Theory;
      std::string rest = io::strip(line.substr(7));
      if (!rest.empty()) add_rule(rest, lineno);
      continue;
    }
    if (starts_with(line, "observation:")) {
      section = Section::None;
      add_obs(io::strip(line.substr(12)), lineno);
      continue;
    }
    if (starts_with(line, "hypotheses:")) {
      section = Section::Hypotheses;
      std::string rest = io::strip(line.substr(11));
      if (!rest.empty()) add_hyps(rest, lineno);
      continue;
    }
    switch (section) {
      case Section::Theory: add_rule(line, lineno); break;
      case Section::Hypotheses: add_hyps(line, lineno); break;
      default:
        throw ParseError("content outside any section", lineno, 1);
    }
  }
  if (!have_obs) throw ParseError("missing observation section", lineno, 1);
  return out;
}

}  // namespace lukabd
