#include "catch_amalgamated.hpp"

#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"

#include "oracles.hpp"

using mirec::DeformedFamily;
using mirec::DeformedOperator;
using mirec::Family;
using mirec::IndexSet;
using mirec::ParameterSet;
using mirec::Poly;
using mirec::Rational;

namespace {

ParameterSet finite_racah8() {
  return ParameterSet::finite_racah(8, Rational(27, 2), Rational(3, 4),
                                    Rational(1, 2));
}

ParameterSet finite_q_racah8() {
  return ParameterSet::finite_q_racah(8, Rational(1, 10000), Rational(2, 5),
                                      Rational(1, 2), Rational(1, 2));
}

ParameterSet generic_racah() {
  return ParameterSet::racah(Rational(7, 3), Rational(5, 2), Rational(3, 7),
                             Rational(13, 5));
}

ParameterSet generic_q_racah() {
  return ParameterSet::q_racah(Rational(2, 7), Rational(3, 5), Rational(5, 9),
                               Rational(7, 4), Rational(1, 3));
}

}  // namespace

TEST_CASE("index sets normalize and validate", "[multi_index]") {
  const IndexSet d({3, 1});
  CHECK(d.M() == 2);
  CHECK(d.indices() == std::vector<long>{1, 3});
  CHECK(d.ell() == 1 + 3 - 1);  // sum d_j - M(M-1)/2
  CHECK(IndexSet(std::vector<long>{}).empty());
  CHECK(IndexSet(std::vector<long>{}).ell() == 0);
  CHECK_THROWS_AS(IndexSet({1, 1}), mirec::Error);
  CHECK_THROWS_AS(IndexSet({0}), mirec::Error);
  CHECK_THROWS_AS(IndexSet({-2}), mirec::Error);
}

TEST_CASE("empty index set reproduces the base family", "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet(std::vector<long>{}));
    CHECK(fam.ell() == 0);
    CHECK(fam.xi_eta_poly() == Poly::one());
    for (long n = 0; n <= 5; ++n) {
      CHECK(fam.p_eta_poly(n) == mirec::racah_poly(n, p));
      CHECK(fam.c_p(n) == mirec::c_n_lead(n, p));
    }
  }
}

TEST_CASE("one-index deformation matches the virtual polynomial",
          "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    // Xi_{{1}} in eta, normalized to 1 at x = 0, must be the v = 1 virtual
    // state polynomial at the right parameter point.
    const Poly xi = fam.xi_eta_poly();
    CHECK(xi.degree() == 1);
    CHECK(xi.coeff(0) == Rational(1));
    // The single-entry Casoratian is the virtual polynomial itself, and eta
    // does not see the twist, so both routes use the same abscissae.
    const Poly xi1 = mirec::xi_poly(1, p);
    for (long x = 0; x <= 5; ++x)
      CHECK(fam.xi_value(x) == xi1.eval(mirec::eta(x, p)));
  }
}

TEST_CASE("normalization, degrees, leading coefficients", "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    for (const std::vector<long>& dset :
         {std::vector<long>{1}, {2}, {1, 2}, {1, 3}}) {
      const DeformedFamily fam(p, IndexSet(dset));
      const long ell = fam.ell();
      const Poly xi = fam.xi_eta_poly();
      CHECK(xi.degree() == ell);
      CHECK(xi.coeff(0) == Rational(1));
      CHECK(xi.lead() == fam.c_xi());
      for (long n = 0; n <= 4; ++n) {
        const Poly pn = fam.p_eta_poly(n);
        CHECK(pn.degree() == ell + n);
        CHECK(pn.coeff(0) == Rational(1));
        CHECK(pn.lead() == fam.c_p(n));
      }
    }
  }
}

TEST_CASE("eta polynomials reproduce grid values", "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet({1, 2}));
    const long M = fam.M();
    for (long n = 0; n <= 3; ++n) {
      const Poly pn = fam.p_eta_poly(n);
      for (long x = 0; x <= 6; ++x)
        CHECK(pn.eval(mirec::eta(x, p.shifted(M))) == fam.p_value(n, x));
    }
    const Poly xi = fam.xi_eta_poly();
    for (long x = 0; x <= 6; ++x)
      CHECK(xi.eval(mirec::eta(x, p.shifted(M - 1))) == fam.xi_value(x));
  }
}

TEST_CASE("shape invariance", "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    for (const std::vector<long>& dset : {std::vector<long>{1}, {2}, {1, 2}}) {
      const IndexSet D(dset);
      const DeformedFamily fam(p, D);
      const DeformedFamily up(p.shifted(1), D);
      CHECK(fam.p_eta_poly(0) == up.xi_eta_poly());
    }
  }
}

TEST_CASE("norm constants tie together", "[multi_index]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet({1, 2}));
    const long M = fam.M();
    const Rational sign = M % 2 == 0 ? Rational(1) : Rational(-1);
    for (long n = 0; n <= 4; ++n)
      CHECK(fam.C_Dn(n) == sign * fam.C_D() * fam.dtilde_Dn_sq(n));
  }
}

TEST_CASE("deformed operator is tridiagonal with the base spectrum",
          "[multi_index]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    for (const std::vector<long>& dset : {std::vector<long>{1}, {1, 2}}) {
      const DeformedFamily fam(p, IndexSet(dset));
      const DeformedOperator op(fam);
      const long N = op.N();
      REQUIRE(N == 8);
      const mirec::Matrix& h = op.matrix();
      for (long i = 0; i <= N; ++i)
        for (long j = 0; j <= N; ++j)
          if (std::abs(i - j) > 1)
            CHECK(h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ==
                  Rational(0));
      for (long n = 0; n <= N; ++n) {
        const std::vector<Rational> v = op.eigenvector(n);
        const std::vector<Rational> hv = h.apply(v);
        const Rational e = mirec::energy(n, p);
        for (long x = 0; x <= N; ++x)
          CHECK(hv[static_cast<std::size_t>(x)] ==
                e * v[static_cast<std::size_t>(x)]);
      }
    }
  }
}

TEST_CASE("deformed orthogonality against two norm routes", "[multi_index]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    const DeformedOperator op(fam);
    const long N = op.N();
    std::vector<std::vector<Rational>> vs;
    for (long n = 0; n <= N; ++n) vs.push_back(op.eigenvector(n));
    for (long n = 0; n <= N; ++n)
      for (long m = n; m <= N; ++m) {
        Rational acc(0);
        for (long x = 0; x <= N; ++x)
          acc += op.weight(x) * vs[static_cast<std::size_t>(n)]
                                  [static_cast<std::size_t>(x)] *
                 vs[static_cast<std::size_t>(m)][static_cast<std::size_t>(x)];
        if (n == m)
          CHECK(acc == fam.d_Dn_sq(n).inv());  // closed-form norm
        else
          CHECK(acc == Rational(0));
      }
  }
}

TEST_CASE("weights are positive in range", "[multi_index]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    for (const std::vector<long>& dset :
         {std::vector<long>{1}, {2}, {1, 2}, {1, 3}}) {
      const long max_index = dset.back();
      REQUIRE(mirec::range_violations(p, max_index).empty());
      const DeformedFamily fam(p, IndexSet(dset));
      const DeformedOperator op(fam);
      for (long x = 0; x <= op.N(); ++x) CHECK(op.weight(x).sign() > 0);
      for (long n = 0; n <= op.N(); ++n) CHECK(fam.d_Dn_sq(n).sign() > 0);
    }
  }
}

TEST_CASE("operator requires the finite mode", "[multi_index]") {
  const DeformedFamily fam(generic_racah(), IndexSet({1}));
  CHECK_THROWS_AS(DeformedOperator(fam), mirec::AssumptionViolated);
}

TEST_CASE("random finite parameter draws stay consistent",
          "[multi_index][property]") {
  oracle::Rng rng(0x5eed0007);
  for (int i = 0; i < 8; ++i) {
    const Family f = i % 2 == 0 ? Family::racah : Family::q_racah;
    const ParameterSet p = oracle::random_finite(rng, f, 6, 2);
    const DeformedFamily fam(p, IndexSet({2}));
    const DeformedOperator op(fam);
    for (long n = 0; n <= 6; ++n) {
      Rational acc(0);
      for (long x = 0; x <= 6; ++x) {
        const Rational v = fam.p_value(n, x);
        acc += op.weight(x) * v * v;
      }
      CHECK(acc == fam.d_Dn_sq(n).inv());
    }
  }
}
