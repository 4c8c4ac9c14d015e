#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "mirec/errors.hpp"

namespace mirec {

/// Running count of exact multiplications/divisions, used by the benchmark
/// harness to compare construction pipelines. Thread-local: the measured
/// sections run on one thread, and workers never contend.
namespace opcount {

inline std::uint64_t& counter() {
  thread_local std::uint64_t count = 0;
  return count;
}

inline void reset() { counter() = 0; }
inline std::uint64_t multiplications() { return counter(); }

}  // namespace opcount

/// Exact rational number backed by GMP. Canonical form throughout:
/// gcd(numerator, denominator) == 1 and denominator > 0.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(int n) : v_(n) {}   // NOLINT
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& z) : v_(z) {}
  explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  /// Parses "p", "-p", "p/q" (optional sign on p; q positive or negative).
  static Rational parse(std::string_view s) {
    if (s.empty()) throw Error("empty rational literal");
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0)
      throw Error("bad rational literal: '" + std::string(s) + "'");
    if (q.get_den() == 0) throw Error("rational with zero denominator");
    q.canonicalize();
    return Rational(std::move(q));
  }

  /// Renders "p" for integers, "p/q" otherwise.
  std::string str() const { return v_.get_str(); }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Integer value; caller must ensure is_integer() and long range.
  long to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p())
      throw Error("rational is not a small integer: " + str());
    return v_.get_num().get_si();
  }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational inv() const {
    if (is_zero()) throw Error("inverse of zero");
    opcount::counter()++;
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return Rational(std::move(r));
  }

  /// Exact integer power; negative exponents invert (base must be nonzero).
  Rational pow(long e) const {
    if (e == 0) return Rational(1);
    if (is_zero()) {
      if (e < 0) throw Error("zero to a negative power");
      return Rational(0);
    }
    opcount::counter()++;
    const unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), k);
    mpq_class r;
    if (e > 0) {
      r = mpq_class(n) / mpq_class(d);
    } else {
      r = mpq_class(d) / mpq_class(n);
    }
    r.canonicalize();
    return Rational(std::move(r));
  }

  /// Exact rational square root if one exists.
  std::optional<Rational> sqrt() const {
    if (sign() < 0) return std::nullopt;
    if (is_zero()) return Rational(0);
    if (!mpz_perfect_square_p(v_.get_num().get_mpz_t()) ||
        !mpz_perfect_square_p(v_.get_den().get_mpz_t()))
      return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), v_.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), v_.get_den().get_mpz_t());
    return Rational(mpq_class(n) / mpq_class(d));
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    opcount::counter()++;
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("division by zero");
    opcount::counter()++;
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.v_;
  }

 private:
  mpq_class v_;
};

/// Rising factorial (x)_n = x (x+1) ... (x+n-1).
inline Rational pochhammer(const Rational& x, long n) {
  Rational r(1);
  Rational t = x;
  for (long i = 0; i < n; ++i) {
    r *= t;
    t += Rational(1);
  }
  return r;
}

/// q-shifted factorial (x;q)_n = (1-x)(1-xq)...(1-x q^(n-1)).
inline Rational q_pochhammer(const Rational& x, const Rational& q, long n) {
  Rational r(1);
  Rational t = x;
  for (long i = 0; i < n; ++i) {
    r *= (Rational(1) - t);
    t *= q;
  }
  return r;
}

/// Exact binomial coefficient for m >= 0; zero when k < 0 or k > m.
inline Rational binomial(long m, long k) {
  if (k < 0 || k > m || m < 0) return Rational(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m),
               static_cast<unsigned long>(k));
  return Rational(r);
}

/// Exact factorial.
inline Rational factorial(long n) {
  if (n < 0) throw Error("factorial of a negative integer");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}

}  // namespace mirec
