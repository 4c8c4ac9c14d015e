#include "catch_amalgamated.hpp"

#include <vector>

#include "mirec/closed_forms.hpp"
#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"
#include "mirec/recurrence_const.hpp"

#include "oracles.hpp"

using mirec::CoeffRow;
using mirec::DeformedFamily;
using mirec::DeformedOperator;
using mirec::Family;
using mirec::GPrimeTable;
using mirec::IndexSet;
using mirec::ParameterSet;
using mirec::Poly;
using mirec::Rational;

namespace {

ParameterSet generic_racah() {
  return ParameterSet::racah(Rational(7, 3), Rational(5, 2), Rational(3, 7),
                             Rational(13, 5));
}

ParameterSet generic_q_racah() {
  return ParameterSet::q_racah(Rational(2, 7), Rational(3, 5), Rational(5, 9),
                               Rational(7, 4), Rational(1, 3));
}

ParameterSet finite_racah8() {
  return ParameterSet::finite_racah(8, Rational(27, 2), Rational(3, 4),
                                    Rational(1, 2));
}

ParameterSet finite_q_racah8() {
  return ParameterSet::finite_q_racah(8, Rational(1, 10000), Rational(2, 5),
                                      Rational(1, 2), Rational(1, 2));
}

}  // namespace

TEST_CASE("lowest order difference-quotient coefficients",
          "[recurrence_const]") {
  GPrimeTable gr(generic_racah());
  for (long n = 0; n <= 6; ++n) CHECK(gr.get(n, 0) == Rational(n + 1));
  const ParameterSet qp = generic_q_racah();
  GPrimeTable gq(qp);
  for (long n = 0; n <= 6; ++n)
    CHECK(gq.get(n, 0) ==
          (Rational(1) - qp.q.pow(n + 1)) / (Rational(1) - qp.q));
}

TEST_CASE("closed forms satisfy the defining difference quotient",
          "[recurrence_const]") {
  // Independent oracle for every g' value the closed forms can produce:
  //   (eta(x)^(n+1) - eta(x-1)^(n+1)) / (eta(x) - eta(x-1))
  //     = sum_k g'^(k)_n eta(x; down-shifted)^(n-k).
  for (const ParameterSet& p : {generic_racah(), generic_q_racah(),
                                finite_racah8(), finite_q_racah8()}) {
    GPrimeTable g(p);
    const ParameterSet down = p.shifted(-1);
    for (long n = 0; n <= 5; ++n)
      for (long x = 1; x <= n + 3; ++x) {
        const Rational hi = mirec::eta(x, p), lo = mirec::eta(x - 1, p);
        const Rational lhs = (hi.pow(n + 1) - lo.pow(n + 1)) / (hi - lo);
        Rational rhs(0);
        const Rational w = mirec::eta(x, down);
        for (long k = 0; k <= n; ++k) rhs += g.get(n, k) * w.pow(n - k);
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("imap builds the primitive of the telescoping sum",
          "[recurrence_const]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    GPrimeTable g(p);
    const ParameterSet down = p.shifted(-1);
    const Poly f({Rational(5, 3), Rational(-1, 2), Rational(2)}, 0);
    const Poly prim = mirec::imap(f, g);
    REQUIRE(prim.degree() == f.degree() + 1);
    REQUIRE(prim.coeff(0).is_zero());
    // Difference identity defining the primitive.
    for (long x = 1; x <= 6; ++x) {
      const Rational hi = mirec::eta(x, p), lo = mirec::eta(x - 1, p);
      CHECK(prim.eval(hi) - prim.eval(lo) ==
            (hi - lo) * f.eval(mirec::eta(x, down)));
    }
    // Cumulative form from the origin (prim vanishes at zero).
    for (long x = 0; x <= 6; ++x) {
      Rational acc(0);
      for (long j = 1; j <= x; ++j)
        acc += (mirec::eta(j, p) - mirec::eta(j - 1, p)) *
               f.eval(mirec::eta(j, down));
      CHECK(acc == prim.eval(mirec::eta(x, p)));
    }
  }
}

TEST_CASE("imap rejects unusable input", "[recurrence_const]") {
  GPrimeTable g(generic_racah());
  CHECK_THROWS_AS(mirec::imap(Poly::monomial(Rational(1), -1), g),
                  mirec::MapUndefined);
}

TEST_CASE("empty deformation yields eta itself", "[recurrence_const]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet(std::vector<long>{}));
    CHECK(mirec::xpoly(fam, Poly::one()) == Poly({0, 1}, 0));
  }
}

TEST_CASE("x polynomial degree, zero value, summation form",
          "[recurrence_const]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    for (const std::vector<long>& dset : {std::vector<long>{1}, {2}, {1, 2}}) {
      const DeformedFamily fam(p, IndexSet(dset));
      for (const Poly& y : {Poly::one(), Poly({0, 1}, 0)}) {
        const Poly X = mirec::xpoly(fam, y);
        CHECK(X.degree() == fam.ell() + y.degree() + 1);
        CHECK(X.coeff(0) == Rational(0));
        const ParameterSet pm = p.shifted(fam.M());
        for (long x = 0; x <= X.degree() + 3; ++x)
          CHECK(X.eval(mirec::eta(x, pm)) ==
                mirec::xpoly_sum_form(fam, y, x));
      }
    }
  }
}

TEST_CASE("expansion coefficients by two independent routes",
          "[recurrence_const]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const long N = 8;
    for (const std::vector<long>& dset : {std::vector<long>{1}, {2}}) {
      const DeformedFamily fam(p, IndexSet(dset));
      const DeformedOperator op(fam);
      const Poly X = mirec::xpoly(fam, Poly::one());
      const long L = X.degree();
      for (long n = 0; n + L <= N; ++n) {
        const CoeffRow byelim = mirec::extract_rnk_elimination(fam, X, n);
        const CoeffRow byinner = mirec::extract_rnk_inner(fam, op, X, n);
        for (long k = -L; k <= L; ++k) CHECK(byelim.at(k) == byinner.at(k));
      }
    }
  }
}

TEST_CASE("grid identity for every admissible level", "[recurrence_const]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    const DeformedOperator op(fam);
    const Poly X = mirec::xpoly(fam, Poly::one());
    for (long n = 0; n <= 8; ++n) {
      const CoeffRow row = mirec::extract_rnk_inner(fam, op, X, n);
      CHECK(mirec::verify_grid_identity(fam, X, row, 8));
    }
  }
}

TEST_CASE("elimination needs enough basis room", "[recurrence_const]") {
  const ParameterSet p = finite_racah8();
  const DeformedFamily fam(p, IndexSet({1}));
  const Poly X = mirec::xpoly(fam, Poly::one());  // L = 2
  CHECK_THROWS_AS(mirec::extract_rnk_elimination(fam, X, 7),
                  mirec::InsufficientBasis);
}

TEST_CASE("plain eta multiplication does not close after deformation",
          "[recurrence_const]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    CHECK_THROWS_AS(mirec::extract_rnk_elimination(fam, Poly({0, 1}, 0), 1),
                    mirec::TheoremViolation);
  }
}

TEST_CASE("coefficient relations hold on extracted rows",
          "[recurrence_const]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    for (const std::vector<long>& dset : {std::vector<long>{1}, {2}}) {
      const DeformedFamily fam(p, IndexSet(dset));
      const DeformedOperator op(fam);
      const Poly X = mirec::xpoly(fam, Poly::one());
      std::vector<CoeffRow> rows;
      for (long n = 0; n <= 8; ++n)
        rows.push_back(mirec::extract_rnk_inner(fam, op, X, n));
      const auto rep = mirec::verify_coeff_relations(fam, X, rows);
      INFO(rep.witness);
      CHECK(rep.sum_rule);
      CHECK(rep.norm_relation);
      CHECK(rep.top_coefficient);
      CHECK(rep.factor_vanishing);
    }
  }
}

TEST_CASE("vanishing tail at the end of the finite grid",
          "[recurrence_const]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    const DeformedOperator op(fam);
    const Poly X = mirec::xpoly(fam, Poly::one());  // L = 2
    const CoeffRow row = mirec::extract_rnk_inner(fam, op, X, 7);
    // n + k beyond the grid: the coefficient and its closed factor vanish.
    CHECK(row.at(2) == Rational(0));
    CHECK(mirec::rnk_plus_factor(p, 7, 2) == Rational(0));
    const CoeffRow last = mirec::extract_rnk_inner(fam, op, X, 8);
    CHECK(last.at(1) == Rational(0));
    CHECK(last.at(2) == Rational(0));
  }
}

TEST_CASE("indeterminate extraction matches the finite specialization",
          "[recurrence_const]") {
  // Coefficients extracted with generic a, then specialized, must equal the
  // coefficients extracted at the finite member directly: the expansion is
  // rational in a.
  const ParameterSet p = generic_racah();
  const DeformedFamily fam(p, IndexSet({1}));
  const Poly X = mirec::xpoly(fam, Poly::one());
  for (long n = 0; n <= 4; ++n) {
    const CoeffRow row = mirec::extract_rnk_elimination(fam, X, n);
    CHECK(row.L == X.degree());
    CHECK(mirec::verify_grid_identity(fam, X, row, 8));
  }
}

TEST_CASE("five term closed forms match extraction ratios",
          "[recurrence_const]") {
  // Reference member: single deformation index 1, lowest admissible degree.
  // The closed forms carry their own overall normalization, so compare
  // scale-invariant ratios r_{n,k} / r_{n,L}.
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    const DeformedOperator op(fam);
    const Poly X = mirec::xpoly(fam, Poly::one());
    REQUIRE(X.degree() == 2);
    // The reference x-polynomial is the same object up to one overall factor.
    CHECK(mirec::five_term_x(p) == X * mirec::five_term_scale(p));
    for (long n = 0; n <= 6; ++n) {
      const CoeffRow row = mirec::extract_rnk_inner(fam, op, X, n);
      const Rational arg = mirec::spectral_arg(p, n);
      const Rational ref_top = mirec::five_term_r(p, arg, 2);
      REQUIRE(!ref_top.is_zero());
      for (long k = -2; k <= 2; ++k) {
        if (n + k < 0 || n + k > 8) continue;
        CHECK(row.at(k) * ref_top ==
              mirec::five_term_r(p, arg, k) * row.at(2));
      }
    }
  }
}

TEST_CASE("closed form sum is reflection symmetric", "[recurrence_const]") {
  // The combination entering the spectral function is invariant under the
  // index reflection that fixes the energy.
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    for (const Rational& t :
         {Rational(1, 3), Rational(7, 5), Rational(11, 4)}) {
      const Rational arg =
          p.family == Family::racah ? t : p.q.pow(2) * t;  // any rational
      const Rational mirrored = mirec::reflected_arg(p, arg);
      // Compare the full symmetric combination sum_k (r_k + r_-k).
      Rational u1(0), u2(0);
      for (long k = 1; k <= 2; ++k) {
        u1 += mirec::five_term_r(p, arg, k) + mirec::five_term_r(p, arg, -k);
        u2 += mirec::five_term_r(p, mirrored, k) +
              mirec::five_term_r(p, mirrored, -k);
      }
      CHECK(u1 == u2);
    }
  }
}

TEST_CASE("spectral polynomial has degree twice the width",
          "[recurrence_const]") {
  for (const ParameterSet& p : {finite_racah8(), finite_q_racah8()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    const DeformedOperator op(fam);
    const Poly X = mirec::xpoly(fam, Poly::one());
    std::vector<CoeffRow> rows;
    for (long n = 0; n <= 8; ++n)
      rows.push_back(mirec::extract_rnk_inner(fam, op, X, n));
    const auto fit = mirec::spectral_fit(fam, rows);
    CHECK(fit.L == 2);
    CHECK(fit.degree == 4);
    CHECK(fit.holdouts_ok);
  }
}

TEST_CASE("ladder root pair polynomials at width one", "[recurrence_const]") {
  const ParameterSet p = generic_racah();
  const Rational dt = p.dtilde();
  CHECK(mirec::alpha_pair_sum(1, 1, p) == Poly({2}, 0));
  CHECK(mirec::alpha_pair_product(1, 1, p) ==
        Poly({Rational(1) - dt * dt, Rational(-4)}, 0));
  const ParameterSet qp = generic_q_racah();
  const Rational q = qp.q, qdt = qp.dtilde();
  const Rational c1 = q.pow(-1) - Rational(2) + q;
  const Rational s1 = q.pow(-1) + Rational(2) + q;
  CHECK(mirec::alpha_pair_sum(1, 1, qp) ==
        Poly({c1 * (Rational(1) + qdt), c1}, 0));
  CHECK(mirec::alpha_pair_product(1, 1, qp) ==
        Poly({c1 * (s1 * qdt - (Rational(1) + qdt) * (Rational(1) + qdt)),
              Rational(-2) * c1 * (Rational(1) + qdt), -c1},
             0));
}

TEST_CASE("membership test separates the family from perturbations",
          "[recurrence_const]") {
  for (const ParameterSet& p : {generic_racah(), generic_q_racah()}) {
    const DeformedFamily fam(p, IndexSet({1}));
    for (long n = 0; n <= 3; ++n)
      CHECK(mirec::polynomiality_test(fam, fam.p_eta_poly(n)));
    Poly fake = fam.p_eta_poly(2);
    fake += Poly::monomial(Rational(1, 7), 1);
    CHECK_FALSE(mirec::polynomiality_test(fam, fake));
  }
}

TEST_CASE("random imap telescoping", "[recurrence_const][property]") {
  oracle::Rng rng(0x5eed0008);
  mirec::GenericityNeeds need;
  need.nmax = 4;
  need.xmax = 6;
  need.max_shift = 1;
  for (int i = 0; i < 200; ++i) {
    const Family f = i % 2 == 0 ? Family::racah : Family::q_racah;
    const ParameterSet p = oracle::random_generic(rng, f, need);
    GPrimeTable g(p);
    const ParameterSet down = p.shifted(-1);
    std::vector<Rational> coeffs;
    const long deg = rng.pick(0, 3);
    for (long k = 0; k <= deg; ++k) coeffs.push_back(rng.rational(9, 5));
    if (coeffs.back().is_zero()) coeffs.back() = Rational(1);
    const Poly integrand(coeffs, 0);
    const Poly prim = mirec::imap(integrand, g);
    CHECK(prim.degree() == integrand.degree() + 1);
    CHECK(prim.coeff(0).is_zero());
    for (long x = 1; x <= 4; ++x) {
      const Rational hi = mirec::eta(x, p), lo = mirec::eta(x - 1, p);
      CHECK(prim.eval(hi) - prim.eval(lo) ==
            (hi - lo) * integrand.eval(mirec::eta(x, down)));
    }
  }
}
