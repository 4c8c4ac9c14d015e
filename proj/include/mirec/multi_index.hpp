#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/interpolate.hpp"
#include "mirec/linalg.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"

namespace mirec {

// ---------------------------------------------------------------------------
// Index sets
// ---------------------------------------------------------------------------

/// A set D = {d_1 < ... < d_M} of distinct positive integers selecting the
/// virtual states used for the deformation. The empty set is allowed and
/// leaves the family undeformed.
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<long> d) : d_(std::move(d)) {
    std::sort(d_.begin(), d_.end());
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (d_[i] < 1)
        throw UnsupportedIndexType("index set entries must be >= 1");
      if (i > 0 && d_[i] == d_[i - 1])
        throw UnsupportedIndexType("index set entries must be distinct");
    }
  }

  const std::vector<long>& indices() const { return d_; }
  long M() const { return static_cast<long>(d_.size()); }
  bool empty() const { return d_.empty(); }

  /// Degree increment ell_D = sum d_j - M(M-1)/2.
  long ell() const {
    long s = 0;
    for (long v : d_) s += v;
    return s - M() * (M() - 1) / 2;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(d_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<long> d_;
};

// ---------------------------------------------------------------------------
// Fitting grid data as a polynomial in eta
// ---------------------------------------------------------------------------

/// Interpolates x -> value_at(x) (x = 0, 1, 2, ...) as a polynomial of degree
/// <= deg in eta(x; shifted), then certifies the fit at `certify` further grid
/// points. Grid points whose eta abscissa repeats are skipped.
template <typename F>
Poly fit_eta_polynomial(const ParameterSet& shifted, long deg, long certify,
                        F&& value_at, const char* what) {
  NewtonInterpolator ni;
  std::vector<std::pair<long, Rational>> held;
  long x = 0;
  const long needed = deg + 1;
  const long limit = needed + certify + 64;
  while (ni.size() < static_cast<std::size_t>(needed) ||
         static_cast<long>(held.size()) < certify) {
    if (x > limit)
      throw DegenerateGrid(std::string(what) +
                           ": not enough distinct eta abscissae");
    const Rational ex = eta(x, shifted);
    try {
      if (ni.size() < static_cast<std::size_t>(needed))
        ni.add_node(ex, value_at(x));
      else
        held.emplace_back(x, value_at(x));
    } catch (const DuplicateNode&) {
      // fall through to the next grid point
    }
    ++x;
  }
  Poly r = ni.polynomial();
  for (const auto& [hx, hv] : held) {
    if (r.eval(eta(hx, shifted)) != hv)
      throw VerificationFailure(std::string(what) +
                                    " fails degree certification",
                                "x = " + std::to_string(hx));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Deformed family
// ---------------------------------------------------------------------------

/// Builds and caches the Casoratian-deformed polynomial family attached to a
/// parameter point and an index set: the denominator polynomial Xi_D, the
/// deformed polynomials P_{D,n}, their normalization constants, weights and
/// the deformed second-order difference operator.
class DeformedFamily {
 public:
  DeformedFamily(ParameterSet p, IndexSet D)
      : p_(std::move(p)), D_(std::move(D)) {
    const long M = D_.M();
    xi_.reserve(static_cast<std::size_t>(M));
    for (long v : D_.indices()) xi_.push_back(xi_poly(v, p_));
  }

  const ParameterSet& params() const { return p_; }
  const IndexSet& index_set() const { return D_; }
  long M() const { return D_.M(); }
  long ell() const { return D_.ell(); }

  // -- normalization constants (closed forms) -------------------------------

  Rational C_D() const {
    const auto& d = D_.indices();
    Rational r = phi_m(0, M(), p_).inv();
    const Rational al = alpha_const(p_);
    for (std::size_t j = 0; j < d.size(); ++j)
      for (std::size_t k = j + 1; k < d.size(); ++k) {
        const Rational den = al * b_prime(static_cast<long>(j), p_);
        if (den.is_zero())
          throw SingularDeformation("alpha B'(j-1) vanishes in C_D");
        r *= (virtual_energy(d[j], p_) - virtual_energy(d[k], p_)) / den;
      }
    return r;
  }

  Rational dtilde_Dn_sq(long n) const {
    const auto& d = D_.indices();
    Rational r = phi_m(0, M(), p_) / phi_m(0, M() + 1, p_);
    const Rational al = alpha_const(p_);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Rational den = al * b_prime(static_cast<long>(j), p_);
      if (den.is_zero())
        throw SingularDeformation("alpha B'(j-1) vanishes in d~_{D,n}^2");
      r *= energy_minus_virtual(n, d[j], p_) / den;
    }
    return r;
  }

  Rational C_Dn(long n) const {
    Rational r = C_D() * dtilde_Dn_sq(n);
    if (M() % 2 == 1) r = -r;
    return r;
  }

  /// d_{D,n}^2 = d_n^2 d~_{D,n}^2 for the finite member with grid size N.
  Rational d_Dn_sq(long n) const {
    const std::optional<long> N = p_.finite_N();
    if (!N) throw AssumptionViolated("d_{D,n}^2 needs the finite mode");
    return dn_sq(n, *N, p_) * dtilde_Dn_sq(n);
  }

  // -- leading coefficients (closed forms) ----------------------------------

  Rational c_xi() const {
    const auto& d = D_.indices();
    const Rational one(1);
    Rational r(1);
    for (long v : d) r *= ctilde_v_lead(v, p_);
    if (p_.family == Family::racah) {
      for (long j = 1; j <= M(); ++j)
        r *= pochhammer(p_.d - p_.a + one, j - 1) *
             pochhammer(p_.d - p_.b + one, j - 1) * pochhammer(p_.c, j - 1);
      for (std::size_t j = 0; j < d.size(); ++j)
        for (std::size_t k = j + 1; k < d.size(); ++k)
          r /= p_.c + p_.d - p_.a - p_.b + Rational(d[j] + d[k] + 1);
    } else {
      const Rational& q = p_.q;
      for (long j = 1; j <= M(); ++j)
        r *= q_pochhammer(p_.d * q / p_.a, q, j - 1) *
             q_pochhammer(p_.d * q / p_.b, q, j - 1) *
             q_pochhammer(p_.c, q, j - 1);
      for (std::size_t j = 0; j < d.size(); ++j)
        for (std::size_t k = j + 1; k < d.size(); ++k)
          r /= one - p_.c * p_.d * q.pow(d[j] + d[k] + 1) / (p_.a * p_.b);
    }
    return r;
  }

  Rational c_p(long n) const {
    const auto& d = D_.indices();
    const Rational one(1);
    Rational r = c_xi() * c_n_lead(n, p_);
    if (p_.family == Family::racah) {
      for (std::size_t j = 0; j < d.size(); ++j)
        r *= (p_.c + Rational(static_cast<long>(j))) /
             (p_.c + Rational(d[j] + n));
    } else {
      for (std::size_t j = 0; j < d.size(); ++j)
        r *= (one - p_.c * p_.q.pow(static_cast<long>(j))) /
             (one - p_.c * p_.q.pow(d[j] + n));
    }
    return r;
  }

  // -- pointwise values (Casoratian route) -----------------------------------

  /// Raw Casoratian det(xi_{d_k}(x + j - 1))_{j,k=1..M}; 1 for M = 0.
  Rational xi_casoratian(long x) const {
    const long M = D_.M();
    if (M == 0) return Rational(1);
    Matrix m(static_cast<std::size_t>(M), static_cast<std::size_t>(M));
    for (long j = 0; j < M; ++j) {
      const Rational ev = eta(x + j, p_);
      for (long k = 0; k < M; ++k)
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) =
            xi_[static_cast<std::size_t>(k)].eval(ev);
    }
    return det(m);
  }

  /// Raw (M+1) x (M+1) determinant with the r_j P_n column appended.
  Rational p_casoratian(long n, long x) const {
    const long M = D_.M();
    const Poly pn = base_poly(n);
    if (M == 0) return pn.eval(eta(x, p_));
    Matrix m(static_cast<std::size_t>(M) + 1, static_cast<std::size_t>(M) + 1);
    for (long j = 0; j <= M; ++j) {
      const Rational ev = eta(x + j, p_);
      for (long k = 0; k < M; ++k)
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) =
            xi_[static_cast<std::size_t>(k)].eval(ev);
      m(static_cast<std::size_t>(j), static_cast<std::size_t>(M)) =
          r_aux(j + 1, x, M, p_) * pn.eval(ev);
    }
    return det(m);
  }

  /// Normalized denominator polynomial value Xi_D(x; lambda).
  Rational xi_value(long x) const {
    if (D_.empty()) return Rational(1);
    const auto it = xi_values_.find(x);
    if (it != xi_values_.end()) return it->second;
    const Rational phi = phi_m(x, M(), p_);
    if (phi.is_zero())
      throw DegenerateGrid("phi_M vanishes at x = " + std::to_string(x));
    const Rational cd = C_D();
    if (cd.is_zero()) throw SingularDeformation("C_D vanishes");
    const Rational v = xi_casoratian(x) / (cd * phi);
    xi_values_.emplace(x, v);
    return v;
  }

  /// Normalized deformed polynomial value P_{D,n}(x; lambda).
  Rational p_value(long n, long x) const {
    const auto it = p_values_.find({n, x});
    if (it != p_values_.end()) return it->second;
    const Rational phi = phi_m(x, M() + 1, p_);
    if (phi.is_zero())
      throw DegenerateGrid("phi_{M+1} vanishes at x = " + std::to_string(x));
    const Rational cdn = C_Dn(n);
    if (cdn.is_zero())
      throw SingularDeformation("C_{D,n} vanishes at n = " +
                                std::to_string(n));
    const Rational v = p_casoratian(n, x) / (cdn * phi);
    p_values_.emplace(std::make_pair(n, x), v);
    return v;
  }

  // -- polynomials in eta ----------------------------------------------------

  /// Xi_D as a polynomial in eta(x; lambda + (M-1) delta), certified at
  /// `certify` extra grid points beyond the interpolation nodes.
  Poly xi_eta_poly(long certify = 2) const {
    if (D_.empty()) return Poly::one();
    if (!xi_eta_.is_zero()) return xi_eta_;
    xi_eta_ = fit_eta_polynomial(
        p_.shifted(M() - 1), ell(), certify,
        [this](long x) { return xi_value(x); }, "Xi_D");
    return xi_eta_;
  }

  /// P_{D,n} as a polynomial in eta(x; lambda + M delta).
  Poly p_eta_poly(long n, long certify = 2) const {
    const auto it = p_eta_.find(n);
    if (it != p_eta_.end()) return it->second;
    Poly r = fit_eta_polynomial(
        p_.shifted(M()), ell() + n, certify,
        [this, n](long x) { return p_value(n, x); }, "P_{D,n}");
    p_eta_.emplace(n, r);
    return r;
  }

  /// The undeformed polynomial P_n in eta(x; lambda), cached.
  Poly base_poly(long n) const {
    if (n < 0) throw PoleInCoefficient("P_n needs n >= 0");
    if (static_cast<std::size_t>(n) >= base_.size()) {
      auto ps = racah_polys(n, p_);
      base_ = std::move(ps);
    }
    return base_[static_cast<std::size_t>(n)];
  }

 private:
  ParameterSet p_;
  IndexSet D_;
  std::vector<Poly> xi_;                       // virtual polynomials in eta
  mutable std::vector<Poly> base_;             // P_n cache
  mutable Poly xi_eta_;                        // Xi_D in eta, lazily built
  mutable std::map<long, Poly> p_eta_;         // P_{D,n} in eta
  mutable std::map<long, Rational> xi_values_;
  mutable std::map<std::pair<long, long>, Rational> p_values_;
};

// ---------------------------------------------------------------------------
// Deformed difference operator (finite mode)
// ---------------------------------------------------------------------------

/// The similarity-transformed deformed operator as an exact tridiagonal
/// matrix acting on grid functions (f(0), ..., f(N)), together with the
/// weight and norm data of the deformed family.
class DeformedOperator {
 public:
  explicit DeformedOperator(const DeformedFamily& fam)
      : fam_(&fam), p_(fam.params()) {
    const std::optional<long> N = p_.finite_N();
    if (!N)
      throw AssumptionViolated("the deformed operator needs the finite mode");
    N_ = *N;
    const ParameterSet shifted_tilde = p_.shifted_partial(fam.M());
    const ParameterSet shifted_full = p_.shifted(1);
    const DeformedFamily fam_next(shifted_full, fam.index_set());
    // Xi values at both parameter points, with singularity screening.
    std::vector<Rational> xi0(static_cast<std::size_t>(N_) + 2);
    std::vector<Rational> xi1(static_cast<std::size_t>(N_) + 2);
    for (long x = 0; x <= N_ + 1; ++x) {
      xi0[static_cast<std::size_t>(x)] = fam.xi_value(x);
      xi1[static_cast<std::size_t>(x)] = fam_next.xi_value(x);
      if (xi0[static_cast<std::size_t>(x)].is_zero() ||
          xi1[static_cast<std::size_t>(x)].is_zero())
        throw SingularDeformation("Xi_D vanishes on the grid at x = " +
                                  std::to_string(x));
    }
    h_ = Matrix(static_cast<std::size_t>(N_) + 1,
                static_cast<std::size_t>(N_) + 1);
    b_d_.assign(static_cast<std::size_t>(N_) + 1, Rational(0));
    d_d_.assign(static_cast<std::size_t>(N_) + 1, Rational(0));
    for (long x = 0; x <= N_; ++x) {
      const std::size_t xi = static_cast<std::size_t>(x);
      const Rational bx =
          (x == N_) ? Rational(0) : b_potential(x, shifted_tilde);
      const Rational dx =
          (x == 0) ? Rational(0) : d_potential(x, shifted_tilde);
      if (x < N_) {
        const Rational bfac = bx * xi0[xi] / xi0[xi + 1];
        b_d_[xi] = bfac * xi1[xi + 1] / xi1[xi];
        h_(xi, xi + 1) = -bfac;
      }
      if (x > 0) {
        const Rational dfac = dx * xi0[xi + 1] / xi0[xi];
        d_d_[xi] = dfac * xi1[xi - 1] / xi1[xi];
        h_(xi, xi - 1) = -dfac;
      }
      h_(xi, xi) = b_d_[xi] + d_d_[xi];
    }
  }

  long N() const { return N_; }
  const Matrix& matrix() const { return h_; }
  const Rational& B_D(long x) const {
    return b_d_[static_cast<std::size_t>(x)];
  }
  const Rational& D_D(long x) const {
    return d_d_[static_cast<std::size_t>(x)];
  }

  /// Orthogonality weight w(x) = psi_D(x)^2 / Xi_D(1), so that
  /// sum_x w(x) P_{D,n}(x) P_{D,m}(x) = delta_nm / d_{D,n}^2.
  Rational weight(long x) const {
    const ParameterSet shifted_tilde = p_.shifted_partial(fam_->M());
    const Rational num = phi0_sq(x, shifted_tilde);
    const Rational den = fam_->xi_value(x) * fam_->xi_value(x + 1);
    if (den.is_zero()) throw SingularDeformation("Xi_D vanishes in weight");
    return num / den;
  }

  /// Grid vector (P_{D,n}(0), ..., P_{D,n}(N)).
  std::vector<Rational> eigenvector(long n) const {
    std::vector<Rational> v;
    v.reserve(static_cast<std::size_t>(N_) + 1);
    for (long x = 0; x <= N_; ++x) v.push_back(fam_->p_value(n, x));
    return v;
  }

 private:
  const DeformedFamily* fam_;
  ParameterSet p_;
  long N_ = 0;
  Matrix h_{1, 1};
  std::vector<Rational> b_d_, d_d_;
};

}  // namespace mirec
