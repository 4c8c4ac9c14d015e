#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"
#include "mirec/recurrence_const.hpp"

namespace mirec {

// ---------------------------------------------------------------------------
// Parameter correspondence
// ---------------------------------------------------------------------------

/// Parameters of the Wilson / Askey-Wilson side, reached from (q-)Racah
/// parameters by the half-shift along (1,1,1,1).
struct AWParameters {
  Family source = Family::racah;
  Rational a1, a2, a3, a4;
  Rational q;  ///< base for the Askey-Wilson side; unused for Wilson
  long M = 0;  ///< number of deformation indices carried along
};

/// Applies the half-shift: each parameter decreases by d/2 additively
/// (Wilson) or is divided by d^(1/2) multiplicatively (Askey-Wilson). The
/// multiplicative case requires d^(1/2) to be rational.
inline AWParameters map_params(const ParameterSet& p, long M) {
  AWParameters w;
  w.source = p.family;
  w.M = M;
  if (p.family == Family::racah) {
    const Rational h = p.d / Rational(2);
    w.a1 = p.a - h;
    w.a2 = p.b - h;
    w.a3 = p.c - h;
    w.a4 = h;
    w.q = Rational(1);
    return w;
  }
  const std::optional<Rational> s = p.d.sqrt();
  if (!s)
    throw IrrationalShift("d^(1/2) is irrational for d = " + p.d.str());
  w.a1 = p.a / *s;
  w.a2 = p.b / *s;
  w.a3 = p.c / *s;
  w.a4 = *s;
  w.q = p.q;
  return w;
}

/// Inverts map_params (round trip).
inline ParameterSet unmap_params(const AWParameters& w) {
  if (w.source == Family::racah)
    return ParameterSet::racah(w.a1 + w.a4, w.a2 + w.a4, w.a3 + w.a4,
                               Rational(2) * w.a4);
  return ParameterSet::q_racah(w.a1 * w.a4, w.a2 * w.a4, w.a3 * w.a4,
                               w.a4 * w.a4, w.q);
}

// ---------------------------------------------------------------------------
// Polynomial transport
// ---------------------------------------------------------------------------

/// The family carried across the correspondence: the affine change of
/// variable together with the per-degree rescaling that matches leading
/// terms (the free normalization of the target side is fixed by that
/// matching).
struct Transport {
  AWParameters aw;
  Poly affine;             ///< eta as a degree-1 polynomial in eta'
  Rational eta0;           ///< distinguished evaluation point in eta'
  Rational scale;          ///< per-degree factor: T_n = scale^-(l+n) P(affine)
  std::vector<Poly> polys; ///< T_n for n = 0..nmax, in eta'
};

/// Builds the transported polynomials T_n(eta') for n = 0..nmax. For the
/// multiplicative family this needs d^(1/2) (and q^(1/2) when M is odd) to
/// be rational; otherwise IrrationalShift is thrown.
inline Transport to_aw(const DeformedFamily& fam, long nmax) {
  const ParameterSet& p = fam.params();
  const long M = fam.M();
  const long ell = fam.ell();
  Transport t;
  t.aw = map_params(p, M);
  if (p.family == Family::racah) {
    // eta = -eta' - (d+M)^2/4, eta0 = -(a4 + M/2)^2 = -((d+M)/2)^2.
    const Rational c = (p.d + Rational(M)) / Rational(2);
    t.eta0 = -c * c;
    t.affine = Poly({-c * c, Rational(-1)}, 0);
    t.scale = Rational(-1);
  } else {
    Rational qm2;  // q^(M/2)
    if (M % 2 == 0) {
      qm2 = p.q.pow(M / 2);
    } else {
      const std::optional<Rational> sq = p.q.sqrt();
      if (!sq)
        throw IrrationalShift("q^(1/2) is irrational for q = " + p.q.str());
      qm2 = sq->pow(M);
    }
    const Rational s = *p.d.sqrt();  // map_params above proved rationality
    const Rational kappa = Rational(2) * s * qm2;
    // eta = kappa eta' - 1 - d q^M, eta0 = (s qm2 + 1/(s qm2)) / 2.
    t.affine = Poly({-Rational(1) - p.d * p.q.pow(M), kappa}, 0);
    t.eta0 = (s * qm2 + Rational(1) / (s * qm2)) / Rational(2);
    t.scale = kappa;
  }
  t.polys.reserve(static_cast<std::size_t>(nmax) + 1);
  for (long n = 0; n <= nmax; ++n)
    t.polys.push_back(t.scale.pow(-(ell + n)) *
                      fam.p_eta_poly(n).composed(t.affine));
  return t;
}

/// Transports the recurrence-generating polynomial the same way:
/// X'(eta') = X(eta(eta')).
inline Poly transport_x(const Transport& t, const Poly& X) {
  return X.composed(t.affine);
}

// ---------------------------------------------------------------------------
// Distinguished-point products
// ---------------------------------------------------------------------------

/// The product that the transported polynomials take at eta0, divided by
/// the per-degree scale and the leading coefficient: a pure rational in the
/// source parameters. With the index combinations paired, no half powers
/// survive.
inline Rational distinguished_point_product(const ParameterSet& p,
                                            const IndexSet& D, long n) {
  const long M = D.M();
  const Rational one(1);
  Rational r(1);
  if (p.family == Family::racah) {
    const Rational u1 = p.d - p.a + one;
    const Rational u2 = p.d - p.b + one;
    const Rational w = p.c + p.d - p.a - p.b;
    for (long j = 1; j <= M; ++j) {
      const long dj = D.indices()[j - 1];
      r *= pochhammer(u1, dj) * pochhammer(u2, dj) * pochhammer(p.c, dj) /
           pochhammer(w + Rational(dj) + one, dj);
      r /= pochhammer(u1, j - 1) * pochhammer(u2, j - 1) *
           pochhammer(p.c, j - 1);
      r *= (p.c + Rational(dj + n)) / (p.c + Rational(j - 1));
    }
    for (long j = 1; j <= M; ++j)
      for (long k = j + 1; k <= M; ++k)
        r *= w + Rational(D.indices()[j - 1] + D.indices()[k - 1]) + one;
    r *= pochhammer(p.a, n) * pochhammer(p.b, n) * pochhammer(p.c, n) /
         pochhammer(p.dtilde() + Rational(n), n);
    return r;
  }
  const Rational& q = p.q;
  const Rational u1 = p.d * q / p.a;
  const Rational u2 = p.d * q / p.b;
  const Rational w = p.c * p.d / (p.a * p.b);
  for (long j = 1; j <= M; ++j) {
    const long dj = D.indices()[j - 1];
    r *= q_pochhammer(u1, q, dj) * q_pochhammer(u2, q, dj) *
         q_pochhammer(p.c, q, dj) / q_pochhammer(w * q.pow(dj + 1), q, dj);
    r /= q_pochhammer(u1, q, j - 1) * q_pochhammer(u2, q, j - 1) *
         q_pochhammer(p.c, q, j - 1);
    r *= (one - p.c * q.pow(dj + n)) / (one - p.c * q.pow(j - 1));
  }
  for (long j = 1; j <= M; ++j)
    for (long k = j + 1; k <= M; ++k)
      r *= one - w * q.pow(D.indices()[j - 1] + D.indices()[k - 1] + 1);
  r *= q_pochhammer(p.a, q, n) * q_pochhammer(p.b, q, n) *
       q_pochhammer(p.c, q, n) / q_pochhammer(p.dtilde() * q.pow(n), q, n);
  return r;
}

/// The same product computed from the target-side parameters through the
/// paired combinations (a1 a4, a4 q / a1, ... resp. a4 - a1 + 1, ...).
inline Rational distinguished_point_product_aw(const AWParameters& w,
                                               const IndexSet& D, long n) {
  return distinguished_point_product(unmap_params(w), D, n);
}

struct SpotReport {
  bool product_identity = false;   ///< product equals 1 / c^P_{D,n}
  bool transported_value = false;  ///< T_n(eta0) matches scale^-(l+n)
  std::string witness;
};

/// Verifies the distinguished-point value of the transported polynomial
/// against the closed product formula. The product identity is rational in
/// the source parameters; the transported value additionally exercises the
/// affine map when the half-shift is rational (pass the Transport, or null
/// to skip that half).
inline SpotReport eta0_spot_check(const DeformedFamily& fam,
                                  const Transport* t, long n) {
  SpotReport rep;
  const Rational prod =
      distinguished_point_product(fam.params(), fam.index_set(), n);
  rep.product_identity = prod * fam.c_p(n) == Rational(1);
  if (!rep.product_identity)
    rep.witness = "product identity fails at n = " + std::to_string(n);
  if (t == nullptr) {
    rep.transported_value = true;
    return rep;
  }
  if (static_cast<std::size_t>(n) >= t->polys.size())
    throw AssumptionViolated("transport does not carry index n");
  const Rational got = t->polys[static_cast<std::size_t>(n)].eval(t->eta0);
  const Rational expect = t->scale.pow(-(fam.ell() + n));
  rep.transported_value = got == expect;
  if (!rep.transported_value)
    rep.witness = "transported value fails at n = " + std::to_string(n);
  return rep;
}

/// Verifies r_{n,0} = X(eta0') - sum_{k != 0} ratio(n,k) r_{n,k} with the
/// ratios P_{D,n+k}(eta0')/P_{D,n}(eta0') taken from the closed product
/// formula (pulled back to the source frame, where they are rational for
/// every parameter choice).
inline bool rn0_identity_check(const DeformedFamily& fam, const Poly& X,
                               const CoeffRow& row) {
  const ParameterSet& p = fam.params();
  const IndexSet& D = fam.index_set();
  const Rational base =
      distinguished_point_product(p, D, row.n) * fam.c_p(row.n);
  Rational acc = X.eval(Rational(0));
  for (const auto& [k, rk] : row.r) {
    if (k == 0) continue;
    const Rational ratio =
        distinguished_point_product(p, D, row.n + k) * fam.c_p(row.n + k) /
        base;
    acc -= ratio * rk;
  }
  return acc == row.at(0);
}

// ---------------------------------------------------------------------------
// Recurrence transport
// ---------------------------------------------------------------------------

/// Expands X' T_n in a supplied graded basis (degrees ell + m) by leading
/// term elimination; used to re-extract the coefficient table on the
/// transported side.
inline CoeffRow extract_in_basis(const Poly& Xp, const std::vector<Poly>& basis,
                                 long ell, long n) {
  const long L = Xp.degree();
  if (static_cast<std::size_t>(n + L) >= basis.size())
    throw InsufficientBasis("basis too short for n + L");
  CoeffRow row;
  row.n = n;
  row.L = L;
  Poly w = Xp * basis[static_cast<std::size_t>(n)];
  for (long m = n + L; m >= 0 && !w.is_zero(); --m) {
    if (w.degree() > ell + m)
      throw TheoremViolation("stray high-degree term at m = " +
                             std::to_string(m));
    if (w.degree() < ell + m) continue;
    const Poly& pm = basis[static_cast<std::size_t>(m)];
    const Rational coeff = w.lead() / pm.lead();
    w -= coeff * pm;
    if (!coeff.is_zero()) {
      if (std::abs(m - n) > L)
        throw TheoremViolation("expansion term outside |k| <= L at m = " +
                               std::to_string(m));
      row.r.emplace(m - n, coeff);
    }
  }
  if (!w.is_zero()) throw TheoremViolation("nonzero remainder");
  return row;
}

/// Confirms that the transported family satisfies the same recurrence table
/// up to the per-degree rescaling: r'_{n,k} = scale^k r_{n,k}.
inline bool transport_rtable_check(const DeformedFamily& fam,
                                   const Transport& t, const Poly& X,
                                   const CoeffRow& row) {
  const Poly xp = transport_x(t, X);
  const CoeffRow got = extract_in_basis(xp, t.polys, fam.ell(), row.n);
  for (long k = -row.L; k <= row.L; ++k)
    if (got.at(k) != t.scale.pow(k) * row.at(k)) return false;
  return true;
}

}  // namespace mirec
