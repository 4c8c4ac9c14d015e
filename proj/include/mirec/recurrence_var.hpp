#pragma once

#include <chrono>
#include <cstdlib>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"

namespace mirec {

// ---------------------------------------------------------------------------
// The R-table: coefficients of the 3+2M term recurrence relations
// ---------------------------------------------------------------------------

/// Memoized table of the recurrence kernels R^[s]_{n,k}. Entries are built
/// from the three-term recurrence data by
///   R^[s]_{n,k} = A_n R^[s-1]_{n+1,k-1} + (B_n - eta(x+s)) R^[s-1]_{n,k}
///                 + C_n R^[s-1]_{n-1,k+1},
/// with R^[-1]_{n,0} = 1 and R^[s]_{n,k} = 0 for |k| > s+1 or n+k < 0 or
/// n < 0. The entries at k = +-(s+1) are independent of x.
class RTable {
 public:
  explicit RTable(ParameterSet p) : p_(std::move(p)) {}

  const ParameterSet& params() const { return p_; }

  /// R^[s]_{n,k} as a grid polynomial (in x for Racah, in z = q^x for the
  /// q-family).
  const Poly& grid(long s, long n, long k) {
    static const Poly kZero;
    if (s < -1) return kZero;
    if (n < 0 || n + k < 0 || std::abs(k) > s + 1) return kZero;
    if (s == -1) {
      static const Poly kOne = Poly::one();
      return k == 0 ? kOne : kZero;
    }
    const auto key = std::make_tuple(s, n, k);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const TTRC t = ttrc(n, p_);
    Poly acc;
    if (const Poly& up = grid(s - 1, n + 1, k - 1); !up.is_zero())
      acc += t.A * up;
    if (const Poly& mid = grid(s - 1, n, k); !mid.is_zero())
      acc += (Poly(t.B) - shift_grid_arg(eta_grid_poly(p_), s, p_)) * mid;
    if (const Poly& down = grid(s - 1, n - 1, k + 1); !down.is_zero())
      acc += t.C * down;
    return cache_.emplace(key, std::move(acc)).first->second;
  }

  /// R^[s]_{n,k} as a polynomial of degree s+1-|k| in eta(x; lambda+s delta).
  Poly eta_poly(long s, long n, long k, long certify = 2) {
    if (n < 0 || n + k < 0 || std::abs(k) > s + 1) return Poly();
    const auto key = std::make_tuple(s, n, k);
    const auto it = eta_cache_.find(key);
    if (it != eta_cache_.end()) return it->second;
    const Poly& g = grid(s, n, k);
    if (g.is_zero()) return Poly();
    Poly r = fit_eta_polynomial(
        p_.shifted(s), s + 1 - std::abs(k), certify,
        [&](long x) { return eval_grid(g, x, p_); }, "R^[s]_{n,k}");
    eta_cache_.emplace(key, r);
    return r;
  }

  /// The x-independent top entry R^[s]_{n,s+1} = A_n A_(n+1) ... A_(n+s).
  Rational top_constant(long s, long n) {
    Rational r(1);
    for (long j = 0; j <= s; ++j) r *= ttrc(n + j, p_).A;
    return r;
  }

 private:
  ParameterSet p_;
  std::map<std::tuple<long, long, long>, Poly> cache_;
  std::map<std::tuple<long, long, long>, Poly> eta_cache_;
};

/// Checks the shift identity
///   R^[s]_{n,k}(x+1) - R^[s]_{n,k}(x)
///     = (eta(x) - eta(x+s+1)) R^[s-1]_{n,k}(x+1)
/// as an exact identity of grid polynomials.
inline bool verify_shift_identity(RTable& rt, long s, long n, long k) {
  const ParameterSet& p = rt.params();
  const Poly& cur = rt.grid(s, n, k);
  const Poly& prev = rt.grid(s - 1, n, k);
  const Poly lhs = shift_grid_arg(cur, 1, p) - cur;
  const Poly eta_p = eta_grid_poly(p);
  const Poly rhs =
      (eta_p - shift_grid_arg(eta_p, s + 1, p)) * shift_grid_arg(prev, 1, p);
  return lhs == rhs;
}

// ---------------------------------------------------------------------------
// The 3+2M term recurrence relations
// ---------------------------------------------------------------------------

/// Results of the three independent verification routes for the variable
/// coefficient recurrence of P_{D,n}.
struct VarRecurrenceReport {
  bool poly_identity = false;        ///< eta-polynomial form, raw weights
  bool normalized_identity = false;  ///< eta-polynomial form, energy quotients
  bool grid_identity = false;        ///< pointwise on the integer grid
  bool all() const {
    return poly_identity && normalized_identity && grid_identity;
  }
};

/// Verifies sum_k C_{D,n+k} R^[M]_{n,k} P_{D,n+k} = 0 (and its normalized
/// variant) for one n, along three routes that share no intermediate data
/// beyond the table entries themselves.
inline VarRecurrenceReport verify_var_recurrence(const DeformedFamily& fam,
                                                 RTable& rt, long n,
                                                 long grid_xmax = 8) {
  const long M = fam.M();
  const ParameterSet& p = fam.params();
  const auto& d = fam.index_set().indices();
  VarRecurrenceReport rep;

  // Route 1: polynomial identity in eta with weights C_{D,n+k}.
  {
    Poly acc;
    for (long k = -M - 1; k <= M + 1; ++k) {
      if (n + k < 0) continue;
      const Poly rk = rt.eta_poly(M, n, k);
      if (rk.is_zero()) continue;
      acc += fam.C_Dn(n + k) * rk * fam.p_eta_poly(n + k);
    }
    rep.poly_identity = acc.is_zero();
  }

  // Route 2: polynomial identity with the energy-quotient weights
  // prod_j (E_{n+k} - E~_{d_j}) / (E_n - E~_{d_j}).
  {
    Poly acc;
    for (long k = -M - 1; k <= M + 1; ++k) {
      if (n + k < 0) continue;
      const Poly rk = rt.eta_poly(M, n, k);
      if (rk.is_zero()) continue;
      Rational w(1);
      for (long dj : d) {
        const Rational den = energy_minus_virtual(n, dj, p);
        if (den.is_zero())
          throw DegenerateSpectrum("E_n meets a virtual energy");
        w *= energy_minus_virtual(n + k, dj, p) / den;
      }
      acc += w * rk * fam.p_eta_poly(n + k);
    }
    rep.normalized_identity = acc.is_zero();
  }

  // Route 3: pointwise on the grid, using Casoratian values and the grid
  // form of the table entries.
  {
    bool ok = true;
    for (long x = 0; x <= grid_xmax && ok; ++x) {
      Rational acc(0);
      for (long k = -M - 1; k <= M + 1; ++k) {
        if (n + k < 0) continue;
        const Poly& rk = rt.grid(M, n, k);
        if (rk.is_zero()) continue;
        acc += fam.C_Dn(n + k) * eval_grid(rk, x, p) * fam.p_value(n + k, x);
      }
      ok = acc.is_zero();
    }
    rep.grid_identity = ok;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Generation of P_{D,n} by the recurrence
// ---------------------------------------------------------------------------

/// Advances the family one step: given P_{D,m} for m <= n+M in `ps`, appends
/// P_{D,n+M+1} computed from the 3+2M term recurrence at index n. Throws
/// CannotAdvance when the top coefficient vanishes.
inline void advance_by_recurrence(const DeformedFamily& fam, RTable& rt,
                                  std::vector<Poly>& ps) {
  const long M = fam.M();
  const long n = static_cast<long>(ps.size()) - 1 - M;
  if (n < 0)
    throw CannotAdvance("need the initial data P_{D,0..M} before advancing");
  const Rational top = fam.C_Dn(n + M + 1) * rt.top_constant(M, n);
  if (top.is_zero())
    throw CannotAdvance("vanishing top coefficient at n = " +
                        std::to_string(n));
  Poly acc;
  for (long k = -M - 1; k <= M; ++k) {
    if (n + k < 0) continue;
    const Poly rk = rt.eta_poly(M, n, k);
    if (rk.is_zero()) continue;
    acc += fam.C_Dn(n + k) * rk * ps[static_cast<std::size_t>(n + k)];
  }
  ps.push_back(-(acc / top));
}

/// Builds P_{D,0..nmax} in eta via the recurrence, seeding with the
/// determinant route for n = 0..M.
inline std::vector<Poly> generate_by_recurrence(const DeformedFamily& fam,
                                                RTable& rt, long nmax) {
  const long M = fam.M();
  std::vector<Poly> ps;
  for (long n = 0; n <= std::min(M, nmax); ++n)
    ps.push_back(fam.p_eta_poly(n));
  while (static_cast<long>(ps.size()) <= nmax)
    advance_by_recurrence(fam, rt, ps);
  return ps;
}

// ---------------------------------------------------------------------------
// Cost comparison
// ---------------------------------------------------------------------------

/// One measurement: exact multiplication count and wall time for producing
/// P_{D,n} by the named method.
struct BenchRow {
  std::string method;
  long n = 0;
  unsigned long long mults = 0;
  double millis = 0.0;
};

/// Marginal cost of the determinant route at degree index n: a fresh family
/// is built and P_{D,n} is interpolated from Casoratian values.
inline BenchRow bench_determinant_step(const ParameterSet& p,
                                       const IndexSet& D, long n) {
  DeformedFamily fresh(p, D);
  opcount::reset();
  const auto t0 = std::chrono::steady_clock::now();
  (void)fresh.p_eta_poly(n);
  const auto t1 = std::chrono::steady_clock::now();
  return {"determinant", n, opcount::multiplications(),
          std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

/// Marginal costs of the recurrence route for n = M+1..nmax: each row counts
/// one advance step (table updates for that step included).
inline std::vector<BenchRow> bench_recurrence_steps(const ParameterSet& p,
                                                    const IndexSet& D,
                                                    long nmax) {
  DeformedFamily fam(p, D);
  RTable rt(p);
  const long M = fam.M();
  std::vector<Poly> ps;
  for (long n = 0; n <= std::min(M, nmax); ++n)
    ps.push_back(fam.p_eta_poly(n));
  std::vector<BenchRow> rows;
  while (static_cast<long>(ps.size()) <= nmax) {
    opcount::reset();
    const auto t0 = std::chrono::steady_clock::now();
    advance_by_recurrence(fam, rt, ps);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back(
        {"recurrence", static_cast<long>(ps.size()) - 1,
         opcount::multiplications(),
         std::chrono::duration<double, std::milli>(t1 - t0).count()});
  }
  return rows;
}

}  // namespace mirec
