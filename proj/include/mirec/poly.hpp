#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/rational.hpp"

namespace mirec {

/// Dense univariate polynomial over Rational, optionally Laurent: the
/// coefficient of x^(low()+i) is coeffs()[i]. Representation is trimmed at
/// both ends; the zero polynomial has an empty coefficient vector.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rational constant) {
    if (!constant.is_zero()) c_ = {std::move(constant)};
  }
  Poly(std::vector<Rational> coeffs, long low = 0)
      : c_(std::move(coeffs)), low_(low) {
    trim();
  }
  Poly(std::initializer_list<Rational> coeffs, long low = 0)
      : c_(coeffs), low_(low) {
    trim();
  }

  static Poly zero() { return Poly(); }
  static Poly one() { return Poly(Rational(1)); }
  /// The monomial coef * x^e.
  static Poly monomial(Rational coef, long e) {
    Poly p;
    if (!coef.is_zero()) {
      p.c_ = {std::move(coef)};
      p.low_ = e;
    }
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
  long low() const { return c_.empty() ? 0 : low_; }
  /// Highest exponent with a nonzero coefficient; zero polynomial has none.
  long degree() const {
    if (c_.empty()) throw Error("degree of the zero polynomial");
    return low_ + static_cast<long>(c_.size()) - 1;
  }
  bool is_laurent() const { return !c_.empty() && low_ < 0; }

  const std::vector<Rational>& coeffs() const { return c_; }

  /// Coefficient of x^e (zero outside the stored range).
  const Rational& coeff(long e) const {
    static const Rational kZero(0);
    if (c_.empty() || e < low_ || e > degree()) return kZero;
    return c_[static_cast<std::size_t>(e - low_)];
  }

  /// Leading coefficient; zero polynomial has none.
  const Rational& lead() const {
    if (c_.empty()) throw Error("leading coefficient of the zero polynomial");
    return c_.back();
  }

  /// Exact evaluation. Throws DivisionByZeroPoly when negative exponents
  /// meet x == 0.
  Rational eval(const Rational& x) const {
    if (c_.empty()) return Rational(0);
    if (low_ < 0 && x.is_zero())
      throw DivisionByZeroPoly("negative exponent evaluated at zero");
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    if (low_ != 0) acc *= x.pow(low_);
    return acc;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const long lo = std::min(a.low_, b.low_);
    const long hi = std::max(a.degree(), b.degree());
    std::vector<Rational> c(static_cast<std::size_t>(hi - lo + 1));
    for (long e = lo; e <= hi; ++e)
      c[static_cast<std::size_t>(e - lo)] = a.coeff(e) + b.coeff(e);
    return Poly(std::move(c), lo);
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c), a.low_ + b.low_);
  }

  friend Poly operator*(const Poly& a, const Rational& s) {
    if (s.is_zero() || a.is_zero()) return Poly();
    Poly r = a;
    for (auto& v : r.c_) v *= s;
    return r;
  }
  friend Poly operator*(const Rational& s, const Poly& a) { return a * s; }
  friend Poly operator/(const Poly& a, const Rational& s) {
    if (s.is_zero()) throw Error("polynomial divided by zero scalar");
    return a * s.inv();
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const Rational& s) { return *this = *this * s; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.low() == b.low() && a.c_ == b.c_;
  }

  /// Multiplies by x^k (exponent shift).
  Poly shifted_exp(long k) const {
    Poly r = *this;
    if (!r.c_.empty()) r.low_ += k;
    return r;
  }

  /// Substitutes x -> s*x: the coefficient of x^e picks up s^e.
  /// Works for Laurent polynomials (s must be nonzero).
  Poly scaled_arg(const Rational& s) const {
    if (s.is_zero()) throw Error("argument scaling by zero");
    Poly r = *this;
    Rational p = s.pow(r.low());
    for (auto& v : r.c_) {
      v *= p;
      p *= s;
    }
    r.trim();
    return r;
  }

  /// Composition p(inner); requires this to have no negative exponents.
  Poly composed(const Poly& inner) const {
    if (is_zero()) return Poly();
    if (low_ < 0) throw Error("composition of a Laurent polynomial");
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * inner + Poly(*it);
    for (long i = 0; i < low_; ++i) acc = acc * inner;
    return acc;
  }

  /// Substitutes x -> s*x + t; requires no negative exponents unless t == 0.
  Poly composed_affine(const Rational& s, const Rational& t) const {
    if (t.is_zero()) return scaled_arg(s);
    return composed(Poly({t, s}, 0));
  }

  std::string str(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string out;
    for (long e = degree(); e >= low_; --e) {
      const Rational& v = coeff(e);
      if (v.is_zero()) continue;
      if (!out.empty()) out += v.sign() > 0 ? " + " : " - ";
      else if (v.sign() < 0) out += "-";
      const Rational a = v.abs();
      const bool unit = a == Rational(1);
      if (!unit || e == 0) out += a.str();
      if (e != 0) {
        if (!unit) out += "*";
        out += var;
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) {
    return os << p.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    std::size_t skip = 0;
    while (skip < c_.size() && c_[skip].is_zero()) ++skip;
    if (skip > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(skip));
      low_ += static_cast<long>(skip);
    }
    if (c_.empty()) low_ = 0;
  }

  std::vector<Rational> c_;
  long low_ = 0;
};

/// Exact division with remainder on the underlying ordinary polynomials:
/// a == q*b + r with r either zero or of degree < degree(b) after both are
/// shifted to lowest exponent zero; Laurent inputs shift back accordingly.
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  if (a.is_zero()) return {Poly(), Poly()};
  const long la = a.low();
  const long lb = b.low();
  // Work on ordinary (low = 0) copies.
  std::vector<Rational> rem = a.coeffs();
  const std::vector<Rational>& div = b.coeffs();
  const std::size_t nb = div.size();
  if (rem.size() < nb) return {Poly(), a};
  std::vector<Rational> quot(rem.size() - nb + 1);
  const Rational lead_inv = div.back().inv();
  for (std::size_t i = quot.size(); i-- > 0;) {
    Rational f = rem[i + nb - 1] * lead_inv;
    quot[i] = f;
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < nb; ++j) rem[i + j] -= f * div[j];
  }
  return {Poly(std::move(quot), la - lb), Poly(std::move(rem), la)};
}

/// True when b divides a exactly (as Laurent polynomials).
inline bool divides(const Poly& b, const Poly& a) {
  return divrem(a, b).second.is_zero();
}

}  // namespace mirec
