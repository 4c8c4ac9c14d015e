#pragma once

#include "mirec/errors.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/rational.hpp"

namespace mirec {

// Closed forms for the five-term recurrence of the one-index family D = {1}
// with Y = 1. The generating polynomial below is a fixed scalar multiple of
// I[Xi_D] (see five_term_scale), so coefficient ratios r_{n,k} / r_{n,L} are
// directly comparable with any extraction route.

/// The scalar s with five_term_x == s * I[Xi_{1}] at lambda + delta.
inline Rational five_term_scale(const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah)
    return Rational(2) * p.c * (p.d - p.a + one) * (p.d - p.b + one);
  return (one + p.q) * (one - p.c) * (one - p.d * p.q / p.a) *
         (one - p.d * p.q / p.b);
}

/// The quadratic generating polynomial X(eta) for D = {1}, Y = 1.
inline Poly five_term_x(const ParameterSet& p) {
  const Rational one(1);
  const Rational s1 = p.a + p.b;
  const Rational s2 = p.a * p.b;
  const Rational t1 = p.c + p.d;
  const Rational t2 = p.c * p.d;
  if (p.family == Family::racah) {
    const Rational lead = Rational(2) - s1 + t1;
    const Rational c0 = -s1 * (Rational(2) * p.c + p.d + Rational(2) * t2) +
                        Rational(2) * s2 * p.c + Rational(2) * t1 +
                        t2 * (Rational(5) + Rational(2) * p.d) + p.d * p.d;
    return Poly({Rational(0), c0, lead}, 0);
  }
  const Rational& q = p.q;
  const Rational lead = one - t2 * q * q / s2;
  const Rational c0 =
      q * q * (one + q - Rational(2) * p.c * q) * p.d * p.d / s2 -
      (s1 * q * (one + q) * (one - p.c) + (one - q) * (s2 + p.c * q * q)) *
          p.d / s2 +
      Rational(2) - p.c * (one + q);
  return Poly({Rational(0), c0, lead}, 0);
}

/// Closed-form expansion coefficient r_{n,k} (k = -2..2) matching
/// five_term_x. The spectral argument is n itself for the first family and
/// q^n for the second, passed as an arbitrary rational so that reflection
/// symmetries can be probed off the integer lattice.
inline Rational five_term_r(const ParameterSet& p, const Rational& arg,
                            long k) {
  if (k < -2 || k > 2) return Rational(0);
  const Rational one(1);
  const Rational dt = p.dtilde();
  const Rational s1 = p.a + p.b;
  const Rational s2 = p.a * p.b;
  const Rational t1 = p.c + p.d;
  const Rational t2 = p.c * p.d;
  if (p.family == Family::racah) {
    const Rational& t = arg;
    const Rational lead = Rational(2) - s1 + t1;
    switch (k) {
      case 2:
        return lead * (p.c + t) * (p.c + t + Rational(3)) *
               pochhammer(p.a + t, 2) * pochhammer(p.b + t, 2) *
               pochhammer(dt + t, 2) / pochhammer(dt + Rational(2) * t, 4);
      case -2:
        return lead * (dt - p.c + t - Rational(3)) * (dt - p.c + t) *
               pochhammer(dt - p.a + t - one, 2) *
               pochhammer(dt - p.b + t - one, 2) * pochhammer(t - one, 2) /
               pochhammer(dt + Rational(2) * t - Rational(3), 4);
      case 1:
        return Rational(2) * (p.a + t) * (p.b + t) * (p.c + t) *
               (p.c + t + Rational(2)) * (dt - p.c + t) * (dt + t) /
               ((dt + Rational(2) * t + Rational(3)) *
                pochhammer(dt + Rational(2) * t - one, 3)) *
               (Rational(-2) * lead * t * (t + dt + one) +
                Rational(2) * (one - dt) * (one + p.c - s2) +
                p.d * (one - dt * dt));
      case -1:
        return Rational(2) * t * (dt - p.a + t) * (dt - p.b + t) * (p.c + t) *
               (dt - p.c + t - Rational(2)) * (dt - p.c + t) /
               ((dt + Rational(2) * t - Rational(3)) *
                pochhammer(dt + Rational(2) * t - one, 3)) *
               (Rational(-2) * lead * t * (t + dt - one) +
                Rational(2) * (one + p.c - s2) +
                Rational(2) * (s2 + p.c - dt) * dt + p.d * (one - dt * dt));
      default:
        return -(five_term_r(p, t, 2) + five_term_r(p, t, -2) +
                 five_term_r(p, t, 1) + five_term_r(p, t, -1));
    }
  }
  const Rational& q = p.q;
  const Rational& w = arg;  // q^n
  const Rational lead = one - t2 * q * q / s2;
  const Rational bracket_a = s2 * t1 + s1 * (one - p.c) * p.d * q -
                             t1 * p.d * q * q;
  const Rational bracket_b = (q + one / q) * p.d *
                             (s1 * s2 * p.c + s2 * (one - p.c) * t1 * q -
                              s1 * t2 * q * q);
  switch (k) {
    case 2:
      return lead * (one - p.c * w) * (one - p.c * w * q.pow(3)) *
             q_pochhammer(p.a * w, q, 2) * q_pochhammer(p.b * w, q, 2) *
             q_pochhammer(dt * w, q, 2) / q_pochhammer(dt * w * w, q, 4);
    case -2:
      return p.d * p.d * q * q * lead * (one - dt * w / (p.c * q.pow(3))) *
             (one - dt * w / p.c) * q_pochhammer(dt * w / (p.a * q), q, 2) *
             q_pochhammer(dt * w / (p.b * q), q, 2) *
             q_pochhammer(w / q, q, 2) /
             q_pochhammer(dt * w * w / q.pow(3), q, 4);
    case 1:
      return (one + q) * (one - p.a * w) * (one - p.b * w) * (one - p.c * w) *
             (one - p.c * w * q * q) * (one - dt * w / p.c) * (one - dt * w) /
             (s2 * p.d * (one - dt * w * w * q.pow(3)) *
              q_pochhammer(dt * w * w / q, q, 3)) *
             (-bracket_a * (s2 * p.c * w * w + p.d) + bracket_b * w);
    case -1:
      return (one + q) * (one - w) * (one - dt * w / p.a) *
             (one - dt * w / p.b) * (one - p.c * w) *
             (one - dt * w / (p.c * q * q)) * (one - dt * w / p.c) /
             (s2 * (one - dt * w * w / q.pow(3)) *
              q_pochhammer(dt * w * w / q, q, 3)) *
             (-bracket_a * (s2 * p.c * w * w / q + p.d * q) + bracket_b * w);
    default:
      return -(five_term_r(p, w, 2) + five_term_r(p, w, -2) +
               five_term_r(p, w, 1) + five_term_r(p, w, -1));
  }
}

/// The spectral argument at integer index n (n itself, resp. q^n).
inline Rational spectral_arg(const ParameterSet& p, long n) {
  return p.family == Family::racah ? Rational(n) : p.q.pow(n);
}

/// The reflected spectral argument realizing n -> -n - d~ (resp.
/// q^n -> q^(-n) d~^(-1)).
inline Rational reflected_arg(const ParameterSet& p, const Rational& arg) {
  if (p.family == Family::racah) return -arg - p.dtilde();
  return Rational(1) / (p.dtilde() * arg);
}

}  // namespace mirec
