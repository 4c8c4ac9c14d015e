#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/rational.hpp"

namespace mirec {

// ---------------------------------------------------------------------------
// Sinusoidal coordinate
// ---------------------------------------------------------------------------

/// eta(x) = x(x+d) (Racah) resp. (q^-x - 1)(1 - d q^x) (q-Racah) at an
/// integer grid point. Depends on the parameters only through d.
inline Rational eta(long x, const ParameterSet& p) {
  if (p.family == Family::racah) {
    const Rational xr(x);
    return xr * (xr + p.d);
  }
  const Rational qx = p.q.pow(x);
  return (qx.inv() - Rational(1)) * (Rational(1) - p.d * qx);
}

/// eta at a rational (possibly non-integer) point; Racah family only.
inline Rational eta_at(const Rational& x, const ParameterSet& p) {
  if (p.family != Family::racah)
    throw UnsupportedPoint("q-family eta needs an integer grid point");
  return x * (x + p.d);
}

/// eta as a polynomial in the grid variable: in x for Racah, and as a
/// Laurent polynomial in z = q^x for q-Racah.
inline Poly eta_grid_poly(const ParameterSet& p) {
  if (p.family == Family::racah) {
    // x^2 + d x
    return Poly({Rational(0), p.d, Rational(1)}, 0);
  }
  // z^-1 - (1 + d) + d z
  return Poly({Rational(1), -(Rational(1) + p.d), p.d}, -1);
}

/// Substitutes x -> x + k into a grid function: a Taylor shift for the Racah
/// family and the exponent scaling z -> q^k z for the q-family.
inline Poly shift_grid_arg(const Poly& f, long k, const ParameterSet& p) {
  if (k == 0 || f.is_zero()) return f;
  if (p.family == Family::racah)
    return f.composed_affine(Rational(1), Rational(k));
  return f.scaled_arg(p.q.pow(k));
}

/// Evaluates a grid function at integer x (plain value for Racah, z = q^x
/// for the q-family).
inline Rational eval_grid(const Poly& f, long x, const ParameterSet& p) {
  if (p.family == Family::racah) return f.eval(Rational(x));
  return f.eval(p.q.pow(x));
}

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

/// Eigenvalue E_n = n(n+d~) resp. (q^-n - 1)(1 - d~ q^n).
inline Rational energy(long n, const ParameterSet& p) {
  const Rational dt = p.dtilde();
  if (p.family == Family::racah) {
    const Rational nr(n);
    return nr * (nr + dt);
  }
  const Rational qn = p.q.pow(n);
  return (qn.inv() - Rational(1)) * (Rational(1) - dt * qn);
}

/// Virtual state energy E~_v = -(c+v)(d~-c-v) resp.
/// -(1 - c q^v)(1 - c^-1 d~ q^-v).
inline Rational virtual_energy(long v, const ParameterSet& p) {
  const Rational dt = p.dtilde();
  if (p.family == Family::racah) {
    const Rational vr(v);
    return -(p.c + vr) * (dt - p.c - vr);
  }
  const Rational qv = p.q.pow(v);
  return -(Rational(1) - p.c * qv) * (Rational(1) - dt / (p.c * qv));
}

/// Factored form of E_n - E~_v: (n+v+c)(n-v+d~-c) resp.
/// q^-n (1 - c q^(n+v))(1 - c^-1 d~ q^(n-v)).
inline Rational energy_minus_virtual(long n, long v, const ParameterSet& p) {
  const Rational dt = p.dtilde();
  if (p.family == Family::racah)
    return (Rational(n + v) + p.c) * (Rational(n - v) + dt - p.c);
  return p.q.pow(-n) * (Rational(1) - p.c * p.q.pow(n + v)) *
         (Rational(1) - dt * p.q.pow(n - v) / p.c);
}

/// alpha = 1 (Racah) resp. ab/(dq) (q-Racah).
inline Rational alpha_const(const ParameterSet& p) {
  if (p.family == Family::racah) return Rational(1);
  return p.a * p.b / (p.d * p.q);
}

// ---------------------------------------------------------------------------
// Potential functions
// ---------------------------------------------------------------------------

/// B(x) as a (numerator, denominator) pair of grid polynomials.
inline std::pair<Poly, Poly> b_potential_ratfun(const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah) {
    auto lin = [](const Rational& s) { return Poly({s, Rational(1)}, 0); };
    Poly num = -(lin(p.a) * lin(p.b) * lin(p.c) * lin(p.d));
    Poly den = Poly({p.d, Rational(2)}, 0) *
               Poly({one + p.d, Rational(2)}, 0);
    return {num, den};
  }
  auto fac = [&](const Rational& s) { return Poly({one, -s}, 0); };  // 1 - s z
  Poly num = -(fac(p.a) * fac(p.b) * fac(p.c) * fac(p.d));
  // (1 - d z^2)(1 - d q z^2)
  Poly den = Poly({one, Rational(0), -p.d}, 0) *
             Poly({one, Rational(0), -p.d * p.q}, 0);
  return {num, den};
}

/// D(x) as a (numerator, denominator) pair of grid polynomials.
inline std::pair<Poly, Poly> d_potential_ratfun(const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah) {
    auto lin = [](const Rational& s) { return Poly({s, Rational(1)}, 0); };
    Poly num = -(lin(p.d - p.a) * lin(p.d - p.b) * lin(p.d - p.c) *
                 lin(Rational(0)));
    Poly den = Poly({p.d - one, Rational(2)}, 0) *
               Poly({p.d, Rational(2)}, 0);
    return {num, den};
  }
  auto fac = [&](const Rational& s) { return Poly({one, -s}, 0); };
  Poly num = -(p.dtilde() * (fac(p.d / p.a) * fac(p.d / p.b) *
                             fac(p.d / p.c) * fac(one)));
  // (1 - (d/q) z^2)(1 - d z^2)
  Poly den = Poly({one, Rational(0), -p.d / p.q}, 0) *
             Poly({one, Rational(0), -p.d}, 0);
  return {num, den};
}

/// B(x) at an integer grid point.
inline Rational b_potential(long x, const ParameterSet& p) {
  auto [num, den] = b_potential_ratfun(p);
  const Rational dv = eval_grid(den, x, p);
  if (dv.is_zero())
    throw PoleAtGridPoint("B has a pole at x = " + std::to_string(x));
  return eval_grid(num, x, p) / dv;
}

/// D(x) at an integer grid point.
inline Rational d_potential(long x, const ParameterSet& p) {
  auto [num, den] = d_potential_ratfun(p);
  const Rational dv = eval_grid(den, x, p);
  if (dv.is_zero())
    throw PoleAtGridPoint("D has a pole at x = " + std::to_string(x));
  return eval_grid(num, x, p) / dv;
}

/// Twisted potentials B'(x) = B(x) and D'(x) = D(x) at twisted parameters.
inline Rational b_prime(long x, const ParameterSet& p) {
  return b_potential(x, p.twisted());
}
inline Rational d_prime(long x, const ParameterSet& p) {
  return d_potential(x, p.twisted());
}

// ---------------------------------------------------------------------------
// Three-term recurrence
// ---------------------------------------------------------------------------

/// Coefficients of eta P_n = A_n P_(n+1) + B_n P_n + C_n P_(n-1).
struct TTRC {
  Rational A, B, C;
};

/// Recurrence coefficients at index n >= 0 (A_(-1) = 0 by convention is the
/// caller's concern). Throws PoleInCoefficient on a vanishing denominator.
inline TTRC ttrc(long n, const ParameterSet& p) {
  if (n < 0) throw PoleInCoefficient("recurrence coefficient at n < 0");
  const Rational one(1);
  const Rational dt = p.dtilde();
  Rational A, C;
  if (p.family == Family::racah) {
    const Rational nr(n);
    const Rational da = Rational(2) * nr + dt;
    if (da.is_zero() || (da + one).is_zero() || (da - one).is_zero())
      throw PoleInCoefficient("vanishing denominator in A_n/C_n at n = " +
                              std::to_string(n));
    A = (nr + p.a) * (nr + p.b) * (nr + p.c) * (nr + dt) / (da * (da + one));
    C = (nr + dt - p.a) * (nr + dt - p.b) * (nr + dt - p.c) * nr /
        ((da - one) * da);
  } else {
    const Rational qn = p.q.pow(n);
    const Rational t = dt * qn * qn;  // d~ q^(2n)
    if ((one - t).is_zero() || (one - t * p.q).is_zero() ||
        (one - t / p.q).is_zero())
      throw PoleInCoefficient("vanishing denominator in A_n/C_n at n = " +
                              std::to_string(n));
    A = (one - p.a * qn) * (one - p.b * qn) * (one - p.c * qn) *
        (one - dt * qn) / ((one - t) * (one - t * p.q));
    C = p.d * (one - dt * qn / p.a) * (one - dt * qn / p.b) *
        (one - dt * qn / p.c) * (one - qn) / ((one - t / p.q) * (one - t));
  }
  return {A, -A - C, C};
}

/// The polynomials P_0..P_nmax in eta, built by the three-term recurrence,
/// normalized so P_n(0) = 1.
inline std::vector<Poly> racah_polys(long nmax, const ParameterSet& p) {
  std::vector<Poly> ps;
  ps.reserve(static_cast<std::size_t>(nmax) + 1);
  ps.push_back(Poly::one());
  const Poly eta_mon = Poly::monomial(Rational(1), 1);
  for (long n = 0; n < nmax; ++n) {
    const TTRC t = ttrc(n, p);
    if (t.A.is_zero())
      throw PoleInCoefficient("A_n vanishes at n = " + std::to_string(n) +
                              "; the family ends here");
    Poly next = (eta_mon - Poly(t.B)) * ps.back();
    if (n > 0) next -= t.C * ps[static_cast<std::size_t>(n) - 1];
    ps.push_back(next / t.A);
  }
  return ps;
}

/// Single polynomial P_n in eta.
inline Poly racah_poly(long n, const ParameterSet& p) {
  return racah_polys(n, p).back();
}

/// Virtual state polynomial xi_v in eta: P_v at twisted parameters
/// (the coordinate eta is twist-invariant).
inline Poly xi_poly(long v, const ParameterSet& p) {
  return racah_poly(v, p.twisted());
}

// ---------------------------------------------------------------------------
// Weights and norms (finite mode)
// ---------------------------------------------------------------------------

/// Squared ground-state vector phi_0(x)^2.
inline Rational phi0_sq(long x, const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah) {
    Rational num = pochhammer(p.a, x) * pochhammer(p.b, x) *
                   pochhammer(p.c, x) * pochhammer(p.d, x);
    Rational den = pochhammer(p.d - p.a + one, x) *
                   pochhammer(p.d - p.b + one, x) *
                   pochhammer(p.d - p.c + one, x) * pochhammer(one, x);
    if (den.is_zero() || p.d.is_zero())
      throw PoleAtGridPoint("phi_0^2 has a pole at x = " + std::to_string(x));
    return num / den * (Rational(2 * x) + p.d) / p.d;
  }
  const Rational& q = p.q;
  Rational num = q_pochhammer(p.a, q, x) * q_pochhammer(p.b, q, x) *
                 q_pochhammer(p.c, q, x) * q_pochhammer(p.d, q, x);
  Rational den = q_pochhammer(p.d * q / p.a, q, x) *
                 q_pochhammer(p.d * q / p.b, q, x) *
                 q_pochhammer(p.d * q / p.c, q, x) * q_pochhammer(q, q, x) *
                 p.dtilde().pow(x);
  if (den.is_zero() || (one - p.d).is_zero())
    throw PoleAtGridPoint("phi_0^2 has a pole at x = " + std::to_string(x));
  return num / den * (one - p.d * q.pow(2 * x)) / (one - p.d);
}

/// Squared normalization constant d_n^2 of the finite member with grid size
/// N (so that sum_x phi_0(x)^2 P_n P_m = delta_nm / d_n^2).
inline Rational dn_sq(long n, long N, const ParameterSet& p) {
  const Rational one(1);
  const Rational dt = p.dtilde();
  if (p.family == Family::racah) {
    Rational head = pochhammer(p.a, n) * pochhammer(p.b, n) *
                    pochhammer(p.c, n) * pochhammer(dt, n) /
                    (pochhammer(dt - p.a + one, n) *
                     pochhammer(dt - p.b + one, n) *
                     pochhammer(dt - p.c + one, n) * pochhammer(one, n)) *
                    (Rational(2 * n) + dt) / dt;
    Rational tail = pochhammer(p.d - p.a + one, N) *
                    pochhammer(p.d - p.b + one, N) *
                    pochhammer(p.d - p.c + one, N) /
                    (pochhammer(dt + one, N) * pochhammer(p.d + one, 2 * N));
    if (N % 2 == 1) tail = -tail;
    return head * tail;
  }
  const Rational& q = p.q;
  Rational head = q_pochhammer(p.a, q, n) * q_pochhammer(p.b, q, n) *
                  q_pochhammer(p.c, q, n) * q_pochhammer(dt, q, n) /
                  (q_pochhammer(dt * q / p.a, q, n) *
                   q_pochhammer(dt * q / p.b, q, n) *
                   q_pochhammer(dt * q / p.c, q, n) *
                   q_pochhammer(q, q, n) * p.d.pow(n)) *
                  (one - dt * q.pow(2 * n)) / (one - dt);
  Rational tail = q_pochhammer(p.d * q / p.a, q, N) *
                  q_pochhammer(p.d * q / p.b, q, N) *
                  q_pochhammer(p.d * q / p.c, q, N) * dt.pow(N) *
                  q.pow(N * (N + 1) / 2) /
                  (q_pochhammer(dt * q, q, N) * q_pochhammer(p.d * q, q, 2 * N));
  if (N % 2 == 1) tail = -tail;
  return head * tail;
}

/// Weight values phi_0(x)^2 for x = 0..N and norms d_n^2 for n = 0..N.
struct WeightAndNorm {
  std::vector<Rational> weight;
  std::vector<Rational> norm_sq;
};

/// Computes both arrays for the finite member; throws InvariantViolation when
/// a weight or norm fails to be positive for in-range parameters.
inline WeightAndNorm weight_and_norm(const ParameterSet& p) {
  const std::optional<long> N = p.finite_N();
  if (!N) throw AssumptionViolated("weights need the finite mode a = -N");
  WeightAndNorm r;
  const bool in_range = range_violations(p).empty();
  for (long x = 0; x <= *N; ++x) {
    r.weight.push_back(phi0_sq(x, p));
    if (in_range && r.weight.back().sign() <= 0)
      throw InvariantViolation("phi_0^2 not positive at x = " +
                               std::to_string(x));
  }
  for (long n = 0; n <= *N; ++n) {
    r.norm_sq.push_back(dn_sq(n, *N, p));
    if (in_range && r.norm_sq.back().sign() <= 0)
      throw InvariantViolation("d_n^2 not positive at n = " +
                               std::to_string(n));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Auxiliary deformation data
// ---------------------------------------------------------------------------

/// phi(x) = (eta(x+1) - eta(x)) / eta(1).
inline Rational phi_aux(long x, const ParameterSet& p) {
  const Rational e1 = eta(1, p);
  if (e1.is_zero()) throw PoleAtGridPoint("eta(1) vanishes");
  return (eta(x + 1, p) - eta(x, p)) / e1;
}

/// phi_M(x) = prod_(1<=j<k<=M) (eta(x+k-1) - eta(x+j-1)) / eta(k-j);
/// equals 1 for M = 0, 1.
inline Rational phi_m(long x, long M, const ParameterSet& p) {
  Rational r(1);
  for (long j = 1; j < M; ++j)
    for (long k = j + 1; k <= M; ++k) {
      const Rational den = eta(k - j, p);
      if (den.is_zero()) throw PoleAtGridPoint("eta(k-j) vanishes");
      r *= (eta(x + k - 1, p) - eta(x + j - 1, p)) / den;
    }
  return r;
}

/// Row factor r_j(x_j) (with x_j = x + j - 1) entering the deformed
/// polynomial determinant; 1 <= j <= M+1.
inline Rational r_aux(long j, long x, long M, const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah) {
    Rational num = pochhammer(Rational(x) + p.a, j - 1) *
                   pochhammer(Rational(x) + p.b, j - 1) *
                   pochhammer(Rational(x + j) + p.d - p.a, M + 1 - j) *
                   pochhammer(Rational(x + j) + p.d - p.b, M + 1 - j);
    Rational den = pochhammer(p.d - p.a + one, M) *
                   pochhammer(p.d - p.b + one, M);
    if (den.is_zero()) throw PoleAtGridPoint("r_j denominator vanishes");
    return num / den;
  }
  const Rational& q = p.q;
  const Rational qx = q.pow(x);
  Rational num = q_pochhammer(p.a * qx, q, j - 1) *
                 q_pochhammer(p.b * qx, q, j - 1) *
                 q_pochhammer(p.d * q.pow(x + j) / p.a, q, M + 1 - j) *
                 q_pochhammer(p.d * q.pow(x + j) / p.b, q, M + 1 - j);
  Rational den = alpha_const(p).pow(j - 1) * q.pow(M * x) *
                 q_pochhammer(p.d * q / p.a, q, M) *
                 q_pochhammer(p.d * q / p.b, q, M);
  if (den.is_zero()) throw PoleAtGridPoint("r_j denominator vanishes");
  return num / den;
}

// ---------------------------------------------------------------------------
// Leading coefficients
// ---------------------------------------------------------------------------

/// Leading coefficient of P_n(eta).
inline Rational c_n_lead(long n, const ParameterSet& p) {
  if (p.family == Family::racah)
    return pochhammer(p.dtilde() + Rational(n), n) /
           (pochhammer(p.a, n) * pochhammer(p.b, n) * pochhammer(p.c, n));
  return q_pochhammer(p.dtilde() * p.q.pow(n), p.q, n) /
         (q_pochhammer(p.a, p.q, n) * q_pochhammer(p.b, p.q, n) *
          q_pochhammer(p.c, p.q, n));
}

/// Leading coefficient of the virtual state polynomial xi_v(eta).
inline Rational ctilde_v_lead(long v, const ParameterSet& p) {
  const Rational one(1);
  if (p.family == Family::racah)
    return pochhammer(p.c + p.d - p.a - p.b + Rational(v) + one, v) /
           (pochhammer(p.d - p.a + one, v) * pochhammer(p.d - p.b + one, v) *
            pochhammer(p.c, v));
  return q_pochhammer(p.c * p.d * p.q.pow(v + 1) / (p.a * p.b), p.q, v) /
         (q_pochhammer(p.d * p.q / p.a, p.q, v) *
          q_pochhammer(p.d * p.q / p.b, p.q, v) *
          q_pochhammer(p.c, p.q, v));
}

// ---------------------------------------------------------------------------
// Genericity checks for indeterminate-mode parameter points
// ---------------------------------------------------------------------------

/// What a computation is about to touch, so genericity can be checked first.
struct GenericityNeeds {
  long nmax = 0;           ///< recurrence indices 0..nmax
  long xmax = 0;           ///< grid points 0..xmax
  long max_shift = 0;      ///< uniform parameter shifts 0..max_shift
  std::vector<long> D;     ///< virtual state indices in use
};

/// Returns a description of the first degeneracy that would break exact
/// construction at this parameter point, or nullopt when generic.
inline std::optional<std::string> genericity_obstruction(
    const ParameterSet& p, const GenericityNeeds& need) {
  if (p.family == Family::q_racah) {
    if (p.q.is_zero() || p.q == Rational(1) || p.q == Rational(-1))
      return "q must be nonzero and not a root of unity";
    if (p.a.is_zero() || p.b.is_zero() || p.c.is_zero() || p.d.is_zero())
      return "multiplicative parameters must be nonzero";
  }
  const long M = static_cast<long>(need.D.size());
  // Distinct eta abscissae at every shift level in use.
  for (long s = 0; s <= need.max_shift; ++s) {
    const ParameterSet ps = p.shifted(s);
    std::vector<Rational> vals;
    for (long x = 0; x <= need.xmax; ++x) vals.push_back(eta(x, ps));
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        if (vals[i] == vals[j])
          return "eta abscissae collide at shift " + std::to_string(s);
  }
  // Recurrence coefficients exist for the base and twisted parameters.
  const long vtop =
      need.D.empty() ? 0 : *std::max_element(need.D.begin(), need.D.end());
  const std::pair<ParameterSet, long> passes[] = {{p, need.nmax},
                                                  {p.twisted(), vtop}};
  for (const auto& [ps, top] : passes) {
    for (long n = 0; n <= top; ++n) {
      TTRC t;
      try {
        t = ttrc(n, ps);
      } catch (const PoleInCoefficient&) {
        return "recurrence coefficient pole at n = " + std::to_string(n);
      }
      if (n < top && t.A.is_zero())
        return "A_n vanishes before the requested degree (n = " +
               std::to_string(n) + ")";
    }
  }
  // Distinct eigenvalues, and eigenvalues distinct from virtual energies.
  for (long n = 0; n <= need.nmax; ++n)
    for (long m = n + 1; m <= need.nmax; ++m)
      if (energy(n, p) == energy(m, p)) return "eigenvalues collide";
  for (long v : need.D) {
    for (long n = 0; n <= need.nmax; ++n)
      if (energy(n, p) == virtual_energy(v, p))
        return "an eigenvalue meets a virtual energy";
  }
  for (std::size_t i = 0; i < need.D.size(); ++i)
    for (std::size_t j = i + 1; j < need.D.size(); ++j)
      if (virtual_energy(need.D[i], p) == virtual_energy(need.D[j], p))
        return "virtual energies collide";
  // Twisted potential values used by deformation normalizations.
  for (long j = 1; j <= M; ++j) {
    try {
      if (b_prime(j - 1, p).is_zero())
        return "B'(j-1) vanishes at j = " + std::to_string(j);
    } catch (const PoleAtGridPoint&) {
      return "B'(j-1) has a pole at j = " + std::to_string(j);
    }
  }
  return std::nullopt;
}

}  // namespace mirec
