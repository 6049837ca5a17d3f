#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "lukabd/errors.hpp"

namespace lukabd {

// Exact arbitrary-precision rational, always in canonical reduced form with
// a positive denominator. Floating point is never used anywhere in the
// semantic core; truth degrees and interval bounds are Rat values in [0,1].
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit on purpose, mirrors integer literals
  Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw Error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "a/b" or "a" with optional sign; returns nullopt on malformed input.
  static std::optional<Rat> parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
      num = s.substr(0, slash);
      den = s.substr(slash + 1);
    }
    if (!is_integer(num) || !is_integer(den)) return std::nullopt;
    mpq_class v;
    if (v.set_str(num + "/" + den, 10) != 0) return std::nullopt;
    if (v.get_den() == 0) return std::nullopt;
    v.canonicalize();
    return Rat(std::move(v));
  }

  const mpq_class& raw() const { return v_; }
  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }
  bool is_integer() const { return v_.get_den() == 1; }

  // "a/b" unconditionally; the wire format for result documents.
  std::string fraction_str() const { return num_str() + "/" + den_str(); }
  // "a" when integral, "a/b" otherwise; used when printing formulas.
  std::string str() const {
    return is_integer() ? num_str() : fraction_str();
  }

  bool in_unit() const { return v_ >= 0 && v_ <= 1; }

  long den_long() const { return v_.get_den().get_si(); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.v_ == 0) throw Error("rational division by zero");
    return Rat(mpq_class(a.v_ / b.v_));
  }
  Rat operator-() const { return Rat(mpq_class(-v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

private:
  static bool is_integer(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  }

  mpq_class v_;
};

inline Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

// Clamp into [0,1]; the range of every Lukasiewicz connective.
inline Rat clamp_unit(const Rat& a) {
  if (a < Rat(0)) return Rat(0);
  if (a > Rat(1)) return Rat(1);
  return a;
}

// lcm of the denominators of a list of rationals (at least 1).
inline mpz_class den_lcm(const std::vector<Rat>& vals) {
  mpz_class l = 1;
  for (const auto& v : vals) {
    mpz_class d = v.raw().get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    l = l / g * d;
  }
  return l;
}

}  // namespace lukabd
