#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/rational.hpp"

namespace mirec {

/// The two discrete families handled by this library.
enum class Family { racah, q_racah };

inline std::string family_name(Family f) {
  return f == Family::racah ? "racah" : "q_racah";
}

/// Parameter quadruple (a, b, c, d) of one family member.
///
/// For the Racah family the four entries are the additive parameters
/// themselves. For the q-Racah family they are the multiplicative values
/// q^(lambda_i), together with the base q (0 < q < 1 in the standard range).
/// Shifts act additively resp. multiplicatively, so every operation below is
/// exact rational arithmetic in both families.
struct ParameterSet {
  Family family = Family::racah;
  Rational a, b, c, d;
  Rational q;  // base; meaningful only for q_racah

  static ParameterSet racah(Rational a, Rational b, Rational c, Rational d) {
    return {Family::racah, std::move(a), std::move(b), std::move(c),
            std::move(d), Rational(0)};
  }
  static ParameterSet q_racah(Rational a, Rational b, Rational c, Rational d,
                              Rational q) {
    return {Family::q_racah, std::move(a), std::move(b), std::move(c),
            std::move(d), std::move(q)};
  }

  /// Finite member with a = -N (resp. a = q^(-N)).
  static ParameterSet finite_racah(long N, Rational b, Rational c,
                                   Rational d) {
    return racah(Rational(-N), std::move(b), std::move(c), std::move(d));
  }
  static ParameterSet finite_q_racah(long N, Rational b, Rational c,
                                     Rational d, Rational q) {
    Rational a = q.pow(-N);
    return q_racah(std::move(a), std::move(b), std::move(c), std::move(d),
                   std::move(q));
  }

  bool operator==(const ParameterSet&) const = default;

  /// The combination a+b+c-d-1 (resp. abc/(dq)) steering degrees/energies.
  Rational dtilde() const {
    if (family == Family::racah) return a + b + c - d - Rational(1);
    return a * b * c / (d * q);
  }

  /// Uniform shift by m units: every parameter moves by m (resp. by q^m).
  ParameterSet shifted(long m) const {
    ParameterSet r = *this;
    if (family == Family::racah) {
      const Rational mm(m);
      r.a += mm;
      r.b += mm;
      r.c += mm;
      r.d += mm;
    } else {
      const Rational f = q.pow(m);
      r.a *= f;
      r.b *= f;
      r.c *= f;
      r.d *= f;
    }
    return r;
  }

  /// Partial shift by m units acting on the third and fourth entries only.
  ParameterSet shifted_partial(long m) const {
    ParameterSet r = *this;
    if (family == Family::racah) {
      const Rational mm(m);
      r.c += mm;
      r.d += mm;
    } else {
      const Rational f = q.pow(m);
      r.c *= f;
      r.d *= f;
    }
    return r;
  }

  /// The twist (a,b,c,d) -> (d-a+1, d-b+1, c, d) (multiplicatively
  /// (dq/a, dq/b, c, d)) used to build virtual state polynomials.
  ParameterSet twisted() const {
    ParameterSet r = *this;
    if (family == Family::racah) {
      r.a = d - a + Rational(1);
      r.b = d - b + Rational(1);
    } else {
      r.a = d * q / a;
      r.b = d * q / b;
    }
    return r;
  }

  /// Detects the finite mode a = -N (resp. a = q^(-N)); returns N.
  std::optional<long> finite_N(long limit = 1024) const {
    if (family == Family::racah) {
      if (!a.is_integer() || a.sign() > 0) return std::nullopt;
      const long n = -a.to_long();
      return n >= 1 ? std::optional<long>(n) : std::nullopt;
    }
    if (q.is_zero()) return std::nullopt;
    Rational t = a;
    for (long n = 0; n <= limit; ++n) {
      if (t == Rational(1)) return n >= 1 ? std::optional<long>(n) : std::nullopt;
      t *= q;
    }
    return std::nullopt;
  }

  std::string str() const {
    std::string s = family_name(family) + "(a=" + a.str() + ", b=" + b.str() +
                    ", c=" + c.str() + ", d=" + d.str();
    if (family == Family::q_racah) s += ", q=" + q.str();
    return s + ")";
  }
};

/// Violations of the standard orthogonality parameter range for the finite
/// member; empty means in range. `max_index` adds the deformation-range
/// condition for index sets reaching up to that value (pass 0 to skip).
inline std::vector<std::string> range_violations(const ParameterSet& p,
                                                 long max_index = 0) {
  std::vector<std::string> out;
  const Rational one(1), zero(0);
  if (p.family == Family::racah) {
    if (!(zero < p.d && p.d < p.a + p.b)) out.push_back("need 0 < d < a+b");
    if (!(zero < p.c && p.c < one + p.d)) out.push_back("need 0 < c < 1+d");
    if (max_index > 0 &&
        !(p.d + Rational(max_index) + one < p.a + p.b))
      out.push_back("need d + max(D) + 1 < a+b");
  } else {
    if (!(zero < p.q && p.q < one)) out.push_back("need 0 < q < 1");
    if (!(zero < p.a * p.b && p.a * p.b < p.d && p.d < one))
      out.push_back("need 0 < ab < d < 1");
    if (!(p.q * p.d < p.c && p.c < one)) out.push_back("need qd < c < 1");
    if (max_index > 0 && !(p.a * p.b < p.d * p.q.pow(max_index + 1)))
      out.push_back("need ab < d*q^(max(D)+1)");
  }
  return out;
}

}  // namespace mirec
