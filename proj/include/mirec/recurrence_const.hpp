#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"

namespace mirec {

// ---------------------------------------------------------------------------
// Forward-difference expansion coefficients g'
// ---------------------------------------------------------------------------

/// Memoized coefficients g'^(k)_n defined by
///   (eta(x)^(n+1) - eta(x-1)^(n+1)) / (eta(x) - eta(x-1))
///     = sum_k g'^(k)_n eta(x; lambda-delta)^(n-k).
/// They depend on the parameters only through d (and q).
class GPrimeTable {
 public:
  explicit GPrimeTable(ParameterSet p) : p_(std::move(p)) {}

  const ParameterSet& params() const { return p_; }

  Rational get(long n, long k) {
    if (k < 0 || k > n)
      throw MapUndefined("g' needs 0 <= k <= n");
    const auto key = std::make_pair(n, k);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Rational v = p_.family == Family::racah ? compute_r(n, k)
                                                  : compute_qr(n, k);
    cache_.emplace(key, v);
    return v;
  }

 private:
  /// Base coefficients for the quadratic coordinate x^2 (Wilson-type):
  /// (-1)^k 2^(-2k-1) binom(2n+2, 2k+1).
  static Rational base_w(long n, long k) {
    Rational v = binomial(2 * n + 2, 2 * k + 1) / Rational(2).pow(2 * k + 1);
    if (k % 2 == 1) v = -v;
    return v;
  }

  Rational compute_r(long n, long k) const {
    const Rational half_d = p_.d / Rational(2);
    const Rational half_dm1 = (p_.d - Rational(1)) / Rational(2);
    Rational acc(0);
    for (long r = 0; r <= k; ++r)
      for (long l = 0; l <= k - r; ++l) {
        const Rational b1 = binomial(n + 1, r);
        const Rational b2 = binomial(n - r - l, n - k);
        if (b1.is_zero() || b2.is_zero()) continue;
        Rational t = b1 * b2 * half_d.pow(2 * r) *
                     half_dm1.pow(2 * (k - r - l)) * base_w(n - r, l);
        if ((r + l) % 2 == 1) t = -t;
        acc += t;
      }
    return acc;
  }

  /// q-family double sum with the base coefficients folded in, so that only
  /// integer powers of d and q appear.
  Rational compute_qr(long n, long k) const {
    const Rational one(1);
    const Rational& q = p_.q;
    const Rational& d = p_.d;
    Rational acc(0);
    for (long r = 0; r <= k; ++r)
      for (long l = 0; l <= k - r; l += 2) {
        const Rational b1 = binomial(n + 1, r);
        const Rational b2 = binomial(n - r - l, n - k);
        if (b1.is_zero() || b2.is_zero()) continue;
        const long m = n - r;  // base index
        Rational outer = b1 * b2 * (one + d).pow(r) *
                         (one + d / q).pow(k - r - l) * d.pow(l / 2) *
                         factorial(m + 1);
        if (r % 2 == 1) outer = -outer;
        Rational inner(0);
        for (long rp = 0; rp <= l / 2; ++rp) {
          const Rational b3 = binomial(m - l + rp, rp);
          if (b3.is_zero()) continue;
          Rational t = b3 * q.pow(-rp) /
                       (factorial(l / 2 - rp) * factorial(m - l / 2 + 1 + rp)) *
                       (one - q.pow(m - l + 1 + 2 * rp)) / (one - q);
          if (rp % 2 == 1) t = -t;
          inner += t;
        }
        acc += outer * inner;
      }
    return acc;
  }

  ParameterSet p_;
  std::map<std::pair<long, long>, Rational> cache_;
};

// ---------------------------------------------------------------------------
// The primitive-polynomial map I
// ---------------------------------------------------------------------------

/// The primitive polynomial P = I[p]: deg P = deg p + 1, P(0) = 0, and
///   P(eta(x)) - P(eta(x-1)) = (eta(x) - eta(x-1)) p(eta(x; lambda-delta)).
/// The map is taken at the parameters of `g`.
inline Poly imap(const Poly& p, GPrimeTable& g) {
  if (p.is_zero()) return Poly();
  if (p.is_laurent()) throw MapUndefined("I expects an ordinary polynomial");
  const long n = p.degree();
  std::vector<Rational> b(static_cast<std::size_t>(n) + 2, Rational(0));
  for (long k = n; k >= 0; --k) {
    Rational acc = p.coeff(k);
    for (long j = k + 1; j <= n; ++j)
      acc -= g.get(j, j - k) * b[static_cast<std::size_t>(j) + 1];
    const Rational g0 = g.get(k, 0);
    if (g0.is_zero())
      throw MapUndefined("g'^(0) vanishes at degree " + std::to_string(k));
    b[static_cast<std::size_t>(k) + 1] = acc / g0;
  }
  return Poly(std::move(b), 0);
}

/// The recurrence-generating polynomial X = I[Xi_D Y] at lambda + M delta.
/// deg X = ell_D + deg Y + 1 and X(0) = 0.
inline Poly xpoly(const DeformedFamily& fam, const Poly& Y) {
  if (Y.is_zero()) throw AssumptionViolated("Y must be nonzero");
  GPrimeTable g(fam.params().shifted(fam.M()));
  return imap(fam.xi_eta_poly() * Y, g);
}

/// Grid-sum form of the same X: X(eta(x; lambda+M delta)) equals
/// sum_(j=1..x) (eta(j) - eta(j-1)) Xi_D(j; lambda) Y(eta(j; lambda+(M-1)d)).
/// Serves as an independent route for cross-checking xpoly.
inline Rational xpoly_sum_form(const DeformedFamily& fam, const Poly& Y,
                               long x) {
  const ParameterSet& p = fam.params();
  const ParameterSet pM = p.shifted(fam.M());
  const ParameterSet pM1 = p.shifted(fam.M() - 1);
  Rational acc(0);
  for (long j = 1; j <= x; ++j)
    acc += (eta(j, pM) - eta(j - 1, pM)) * fam.xi_value(j) *
           Y.eval(eta(j, pM1));
  return acc;
}

// ---------------------------------------------------------------------------
// Expansion coefficients r_{n,k}
// ---------------------------------------------------------------------------

/// One row of expansion coefficients: X P_{D,n} = sum_k r_k P_{D,n+k}.
struct CoeffRow {
  long n = 0;
  long L = 0;
  std::map<long, Rational> r;  ///< k -> r_{n,k}; absent entries are zero

  Rational at(long k) const {
    const auto it = r.find(k);
    return it == r.end() ? Rational(0) : it->second;
  }
};

/// Expands X P_{D,n} in the basis {P_{D,m}} by repeated leading-term
/// elimination (the degrees ell_D + m are all distinct). Exact; needs no
/// weights, so it works in indeterminate mode. Throws TheoremViolation when
/// a nonzero remainder of degree < ell_D survives, or when a term outside
/// |k| <= deg X appears.
inline CoeffRow extract_rnk_elimination(const DeformedFamily& fam,
                                        const Poly& X, long n) {
  const long L = X.degree();
  const long ell = fam.ell();
  if (const std::optional<long> N = fam.params().finite_N(); N && n + L > *N)
    throw InsufficientBasis("basis P_{D,m} ends at m = " +
                            std::to_string(*N));
  CoeffRow row;
  row.n = n;
  row.L = L;
  Poly w = X * fam.p_eta_poly(n);
  for (long m = n + L; m >= 0 && !w.is_zero(); --m) {
    if (w.degree() > ell + m)
      throw TheoremViolation("stray high-degree term at m = " +
                             std::to_string(m));
    if (w.degree() < ell + m) continue;
    const Poly pm = fam.p_eta_poly(m);
    const Rational coeff = w.lead() / pm.lead();
    w -= coeff * pm;
    if (!coeff.is_zero()) {
      if (std::abs(m - n) > L)
        throw TheoremViolation("expansion term outside |k| <= L at m = " +
                               std::to_string(m));
      row.r.emplace(m - n, coeff);
    }
  }
  if (!w.is_zero())
    throw TheoremViolation("nonzero remainder of degree < ell_D: X is not a "
                           "recurrence generator");
  return row;
}

/// Finite-mode expansion via the orthogonality inner products:
/// r_{n,k} = d_{D,n+k}^2 sum_x w(x) X(x) P_{D,n}(x) P_{D,n+k}(x),
/// for k = -min(L,n) .. min(L, N-n).
inline CoeffRow extract_rnk_inner(const DeformedFamily& fam,
                                  const DeformedOperator& op, const Poly& X,
                                  long n) {
  const long L = X.degree();
  const long N = op.N();
  const ParameterSet pM = fam.params().shifted(fam.M());
  CoeffRow row;
  row.n = n;
  row.L = L;
  std::vector<Rational> xp(static_cast<std::size_t>(N) + 1);
  std::vector<Rational> wts(static_cast<std::size_t>(N) + 1);
  for (long x = 0; x <= N; ++x) {
    wts[static_cast<std::size_t>(x)] = op.weight(x);
    xp[static_cast<std::size_t>(x)] =
        X.eval(eta(x, pM)) * fam.p_value(n, x);
  }
  for (long k = -std::min(L, n); k <= std::min(L, N - n); ++k) {
    Rational acc(0);
    for (long x = 0; x <= N; ++x)
      acc += wts[static_cast<std::size_t>(x)] *
             xp[static_cast<std::size_t>(x)] * fam.p_value(n + k, x);
    const Rational rk = fam.d_Dn_sq(n + k) * acc;
    if (!rk.is_zero()) row.r.emplace(k, rk);
  }
  return row;
}

/// Checks the grid identity X(x) P_{D,n}(x) = sum_k r_{n,k} P_{D,n+k}(x)
/// for every x = 0..N.
inline bool verify_grid_identity(const DeformedFamily& fam, const Poly& X,
                                 const CoeffRow& row, long N) {
  const ParameterSet pM = fam.params().shifted(fam.M());
  for (long x = 0; x <= N; ++x) {
    Rational lhs = X.eval(eta(x, pM)) * fam.p_value(row.n, x);
    for (const auto& [k, rk] : row.r) lhs -= rk * fam.p_value(row.n + k, x);
    if (!lhs.is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Coefficient relations
// ---------------------------------------------------------------------------

/// The factor that Remark-type observations attach to r_{n,k} (k >= 1):
/// (a+n)_k resp. (a q^n; q)_k.
inline Rational rnk_plus_factor(const ParameterSet& p, long n, long k) {
  if (p.family == Family::racah) return pochhammer(p.a + Rational(n), k);
  return q_pochhammer(p.a * p.q.pow(n), p.q, k);
}

/// The factor attached to r_{n,-k} (k >= 1): (n-k+1)_k resp.
/// (q^(n-k+1); q)_k.
inline Rational rnk_minus_factor(const ParameterSet& p, long n, long k) {
  if (p.family == Family::racah) return pochhammer(Rational(n - k + 1), k);
  return q_pochhammer(p.q.pow(n - k + 1), p.q, k);
}

/// Outcome of the coefficient-relation checks on a set of rows.
struct CoeffRelationReport {
  bool sum_rule = true;          ///< r_{n,0} = -sum_k (r_{n,k} + r_{n,-k})
  bool norm_relation = true;     ///< r_{n+k,-k} d_{D,n+k}^2 = r_{n,k} d_{D,n}^2
  bool top_coefficient = true;   ///< r_{n,L} = c^X c^P_{D,n} / c^P_{D,n+L}
  bool factor_vanishing = true;  ///< factor zero forces the coefficient zero
  std::string witness;
  bool all() const {
    return sum_rule && norm_relation && top_coefficient && factor_vanishing;
  }
};

/// Verifies the relations among expansion coefficients on the given rows.
/// The norm relation needs the finite mode and is checked when rows for both
/// n and n+k are present.
inline CoeffRelationReport verify_coeff_relations(const DeformedFamily& fam,
                                                  const Poly& X,
                                                  const std::vector<CoeffRow>& rows) {
  CoeffRelationReport rep;
  const ParameterSet& p = fam.params();
  const std::optional<long> N = p.finite_N();
  std::map<long, const CoeffRow*> by_n;
  for (const auto& row : rows) by_n[row.n] = &row;
  const Rational cX = X.lead();
  for (const auto& row : rows) {
    const long n = row.n;
    const long L = row.L;
    // Sum rule at eta = 0.
    {
      Rational acc = row.at(0);
      for (long k = 1; k <= L; ++k) acc += row.at(k) + row.at(-k);
      if (!acc.is_zero()) {
        rep.sum_rule = false;
        rep.witness = "sum rule at n = " + std::to_string(n);
      }
    }
    // Norm relation against the reflected row.
    for (long k = 1; k <= L; ++k) {
      if (N && n + k > *N) continue;
      const auto it = by_n.find(n + k);
      if (it == by_n.end() || !N) continue;
      const Rational lhs = it->second->at(-k) * fam.d_Dn_sq(n + k);
      const Rational rhs = row.at(k) * fam.d_Dn_sq(n);
      if (lhs != rhs) {
        rep.norm_relation = false;
        rep.witness = "norm relation at n = " + std::to_string(n) +
                      ", k = " + std::to_string(k);
      }
    }
    // Top coefficient (only when the k = L term is inside the window).
    if (!N || n + L <= *N) {
      const Rational expect = cX * fam.c_p(n) / fam.c_p(n + L);
      if (row.at(L) != expect) {
        rep.top_coefficient = false;
        rep.witness = "top coefficient at n = " + std::to_string(n);
      }
    }
    // Vanishing forced by the attached factors.
    for (long k = 1; k <= L; ++k) {
      if (rnk_plus_factor(p, n, k).is_zero() && !row.at(k).is_zero()) {
        rep.factor_vanishing = false;
        rep.witness = "factor does not force r_{n,k} = 0 at n = " +
                      std::to_string(n) + ", k = " + std::to_string(k);
      }
      if (rnk_minus_factor(p, n, k).is_zero() && !row.at(-k).is_zero()) {
        rep.factor_vanishing = false;
        rep.witness = "factor does not force r_{n,-k} = 0 at n = " +
                      std::to_string(n) + ", k = -" + std::to_string(k);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Spectral polynomial fit (degree 2L)
// ---------------------------------------------------------------------------

/// Pair combinations of the shift roots alpha_j(z), j and 2L+1-j, written
/// with m = L+1-j (m = 1..L). Both are polynomials in z with rational
/// coefficients.
inline Poly alpha_pair_sum(long m, long /*L*/, const ParameterSet& p) {
  const Rational dt = p.dtilde();
  if (p.family == Family::racah)
    return Poly(Rational(2 * m * m));
  const Rational cm = p.q.pow(-m) - Rational(2) + p.q.pow(m);
  // cm (z + 1 + d~)
  return Poly({cm * (Rational(1) + dt), cm}, 0);
}

inline Poly alpha_pair_product(long m, long /*L*/, const ParameterSet& p) {
  const Rational dt = p.dtilde();
  if (p.family == Family::racah) {
    const Rational m2(m * m);
    // m^2 (m^2 - 4z - d~^2)
    return Poly({m2 * (m2 - dt * dt), Rational(-4) * m2}, 0);
  }
  const Rational one(1);
  const Rational cm = p.q.pow(-m) - Rational(2) + p.q.pow(m);
  const Rational sm = p.q.pow(-m) + Rational(2) + p.q.pow(m);
  // cm (sm d~ - (z + 1 + d~)^2)
  const Rational s = one + dt;
  return Poly({cm * (sm * dt - s * s), cm * Rational(-2) * s, -cm}, 0);
}

/// Result of fitting I(z) = prod_m alpha-pair-product(z) * sum_k I_k(z)
/// through the energies E_0..E_(2L) and checking holdout energies.
struct SpectralFitReport {
  long L = 0;
  long degree = -1;        ///< degree of the fitted polynomial (-1 for zero)
  bool holdouts_ok = false;
  Poly fit;                ///< the fitted polynomial in z
};

/// Fits the degree-2L spectral polynomial from coefficient rows (indexed by
/// n = 0..2L for the fit and at least two more rows for holdouts). Throws
/// ConjectureCounterexample when a holdout fails.
inline SpectralFitReport spectral_fit(const DeformedFamily& fam,
                                      const std::vector<CoeffRow>& rows) {
  if (rows.empty()) throw AssumptionViolated("no rows to fit");
  const long L = rows.front().L;
  const long fit_count = 2 * L + 1;
  if (static_cast<long>(rows.size()) < fit_count + 2)
    throw AssumptionViolated("need at least 2L+3 rows (fit + 2 holdouts)");
  const ParameterSet& p = fam.params();
  auto value_at = [&](const CoeffRow& row) {
    const Rational z = energy(row.n, p);
    Rational pref(1);
    for (long m = 1; m <= L; ++m) pref *= alpha_pair_product(m, L, p).eval(z);
    Rational s(0);
    for (long k = 1; k <= L; ++k) s += row.at(k) + row.at(-k);
    return pref * s;
  };
  NewtonInterpolator ni;
  for (long i = 0; i < fit_count; ++i)
    ni.add_node(energy(rows[static_cast<std::size_t>(i)].n, p),
                value_at(rows[static_cast<std::size_t>(i)]));
  SpectralFitReport rep;
  rep.L = L;
  rep.fit = ni.polynomial();
  rep.degree = rep.fit.is_zero() ? -1 : rep.fit.degree();
  rep.holdouts_ok = true;
  for (std::size_t i = static_cast<std::size_t>(fit_count); i < rows.size();
       ++i) {
    const Rational z = energy(rows[i].n, p);
    if (rep.fit.eval(z) != value_at(rows[i])) {
      rep.holdouts_ok = false;
      throw ConjectureCounterexample(
          "spectral fit fails at holdout n = " + std::to_string(rows[i].n),
          "params " + p.str());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Membership test for span{P_{D,n}} (divisibility criterion)
// ---------------------------------------------------------------------------

/// Decides whether p(eta) lies in span{P_{D,n} : n >= 0} by assembling the
/// deformed difference operator applied to p as an exact rational function
/// of the grid variable and testing whether its denominator divides its
/// numerator.
inline bool polynomiality_test(const DeformedFamily& fam, const Poly& p_eta) {
  if (p_eta.is_zero()) return true;
  const ParameterSet& p = fam.params();
  const long M = fam.M();
  const DeformedFamily next(p.shifted(1), fam.index_set());

  // Grid realizations (polynomial in x for Racah, Laurent in z = q^x
  // otherwise).
  const Poly xi0 = fam.xi_eta_poly().composed(eta_grid_poly(p.shifted(M - 1)));
  const Poly xi1 = next.xi_eta_poly().composed(eta_grid_poly(p.shifted(M)));
  const Poly pc = p_eta.composed(eta_grid_poly(p.shifted(M)));

  const Poly xi0_up = shift_grid_arg(xi0, 1, p);
  const Poly xi1_up = shift_grid_arg(xi1, 1, p);
  const Poly xi1_dn = shift_grid_arg(xi1, -1, p);
  const Poly pc_up = shift_grid_arg(pc, 1, p);
  const Poly pc_dn = shift_grid_arg(pc, -1, p);

  const ParameterSet tilted = p.shifted_partial(M);
  const auto [nb, db] = b_potential_ratfun(tilted);
  const auto [nd, dd] = d_potential_ratfun(tilted);

  const Poly numerator = nb * dd * xi0 * xi0 * (xi1_up * pc - xi1 * pc_up) +
                         nd * db * xi0_up * xi0_up * (xi1_dn * pc - xi1 * pc_dn);
  const Poly denominator = db * dd * xi0 * xi0_up * xi1;
  if (denominator.is_zero()) throw SingularDeformation("zero denominator");
  if (numerator.is_zero()) return true;
  return divides(denominator, numerator);
}

}  // namespace mirec
