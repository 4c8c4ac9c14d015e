#include "catch_amalgamated.hpp"

#include "mirec/errors.hpp"
#include "mirec/poly.hpp"
#include "mirec/rational.hpp"

#include "oracles.hpp"

using mirec::Poly;
using mirec::Rational;

namespace {

Poly random_poly(oracle::Rng& rng, long deg, long low = 0) {
  std::vector<Rational> c;
  for (long i = 0; i <= deg - low; ++i) c.push_back(rng.rational(9, 5));
  Poly p(c, low);
  if (p.is_zero()) return Poly::one();
  return p;
}

}  // namespace

TEST_CASE("construction normalizes zero padding", "[poly]") {
  const Poly p({Rational(0), Rational(1), Rational(0)}, 0);
  CHECK(p.degree() == 1);
  CHECK(p.low() == 1);
  CHECK(p.coeff(0) == Rational(0));
  CHECK(p.coeff(1) == Rational(1));
  CHECK(p.coeff(5) == Rational(0));
  CHECK(Poly({Rational(0)}, 0).is_zero());
  CHECK_THROWS_AS(Poly().degree(), mirec::Error);
}

TEST_CASE("ring operations", "[poly]") {
  const Poly one_plus_x({1, 1}, 0);
  const Poly one_minus_x({1, -1}, 0);
  CHECK(one_plus_x * one_minus_x == Poly({1, 0, -1}, 0));
  CHECK(one_plus_x + one_minus_x == Poly({2}, 0));
  CHECK(one_plus_x - one_plus_x == Poly());
  CHECK(one_plus_x * Rational(3) == Poly({3, 3}, 0));
  CHECK((Poly() * one_plus_x).is_zero());
}

TEST_CASE("evaluation", "[poly]") {
  const Poly p({2, -3, 1}, 0);  // 2 - 3x + x^2 = (x-1)(x-2)
  CHECK(p.eval(Rational(1)) == Rational(0));
  CHECK(p.eval(Rational(2)) == Rational(0));
  CHECK(p.eval(Rational(1, 2)) == Rational(3, 4));
  CHECK(Poly().eval(Rational(7)) == Rational(0));
}

TEST_CASE("argument transforms", "[poly]") {
  const Poly p({0, 0, 1}, 0);  // x^2
  // P(s x + t) with s = 2, t = 3.
  CHECK(p.composed_affine(Rational(2), Rational(3)) == Poly({9, 12, 4}, 0));
  // P(c x) for the multiplicative shift.
  CHECK(p.scaled_arg(Rational(3)) == Poly({0, 0, 9}, 0));
  // Composition with a full polynomial.
  const Poly q({1, 1}, 0);  // 1 + x
  CHECK(p.composed(q) == Poly({1, 2, 1}, 0));
  // x^2 shifted by exponent -3 becomes a Laurent monomial.
  const Poly lp = p.shifted_exp(-3);
  CHECK(lp.low() == -1);
  CHECK(lp.is_laurent());
}

TEST_CASE("laurent evaluation guards zero", "[poly]") {
  const Poly lp = Poly::monomial(Rational(1), -2);
  CHECK(lp.eval(Rational(2)) == Rational(1, 4));
  CHECK_THROWS_AS(lp.eval(Rational(0)), mirec::DivisionByZeroPoly);
}

TEST_CASE("division with remainder", "[poly]") {
  const Poly num({-1, 0, 1}, 0);  // x^2 - 1
  const Poly den({-1, 1}, 0);     // x - 1
  const auto [q, r] = mirec::divrem(num, den);
  CHECK(q == Poly({1, 1}, 0));
  CHECK(r.is_zero());
  CHECK(mirec::divides(den, num));
  CHECK_FALSE(mirec::divides(Poly({1, 1}, 0), Poly({1, 0, 0, 1}, 0) + Poly({1}, 0)));
}

TEST_CASE("printing is stable", "[poly]") {
  const Poly p({Rational(1, 2), Rational(0), Rational(-3)}, 0);
  const std::string s = p.str("t");
  CHECK(s.find("t") != std::string::npos);
  CHECK(s.find("1/2") != std::string::npos);
}

TEST_CASE("random divrem round trips", "[poly][property]") {
  oracle::Rng rng(0x5eed0002);
  for (int i = 0; i < 200; ++i) {
    const Poly a = random_poly(rng, rng.pick(0, 6));
    const Poly b = random_poly(rng, rng.pick(0, 3));
    const auto [q, r] = mirec::divrem(a, b);
    CHECK(q * b + r == a);
    if (!r.is_zero()) CHECK(r.degree() < b.degree());
  }
}

TEST_CASE("random evaluation homomorphism", "[poly][property]") {
  oracle::Rng rng(0x5eed0003);
  for (int i = 0; i < 100; ++i) {
    const Poly a = random_poly(rng, rng.pick(0, 5));
    const Poly b = random_poly(rng, rng.pick(0, 5));
    const Rational t = rng.rational(9, 7);
    CHECK((a * b).eval(t) == a.eval(t) * b.eval(t));
    CHECK((a + b).eval(t) == a.eval(t) + b.eval(t));
    CHECK(a.composed_affine(Rational(2), Rational(-1)).eval(t) ==
          a.eval(Rational(2) * t - Rational(1)));
  }
}
