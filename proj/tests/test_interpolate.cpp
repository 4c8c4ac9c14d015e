#include "catch_amalgamated.hpp"

#include "mirec/errors.hpp"
#include "mirec/interpolate.hpp"
#include "mirec/poly.hpp"
#include "mirec/rational.hpp"

#include "oracles.hpp"

using mirec::NewtonInterpolator;
using mirec::Poly;
using mirec::Rational;

TEST_CASE("recovers a known polynomial exactly", "[interpolate]") {
  const Poly p({Rational(1, 3), Rational(-2), Rational(0), Rational(5, 7)}, 0);
  NewtonInterpolator ni;
  for (long x = 0; x <= 3; ++x)
    ni.add_node(Rational(x), p.eval(Rational(x)));
  CHECK(ni.polynomial() == p);
  CHECK(ni.eval(Rational(11, 2)) == p.eval(Rational(11, 2)));
}

TEST_CASE("constant interpolation", "[interpolate]") {
  NewtonInterpolator ni;
  ni.add_node(Rational(4), Rational(9));
  CHECK(ni.polynomial() == Poly({9}, 0));
  CHECK(ni.eval(Rational(-100)) == Rational(9));
}

TEST_CASE("duplicate nodes are rejected", "[interpolate]") {
  NewtonInterpolator ni;
  ni.add_node(Rational(1), Rational(2));
  CHECK_THROWS_AS(ni.add_node(Rational(1), Rational(3)),
                  mirec::DuplicateNode);
}

TEST_CASE("incremental nodes refine the fit", "[interpolate]") {
  // Adding nodes of a quadratic one at a time: after three the fit is exact
  // everywhere, and extra consistent nodes leave it unchanged.
  const Poly p({Rational(2), Rational(-1), Rational(3)}, 0);
  NewtonInterpolator ni;
  ni.add_node(Rational(0), p.eval(Rational(0)));
  ni.add_node(Rational(1), p.eval(Rational(1)));
  ni.add_node(Rational(2), p.eval(Rational(2)));
  const Poly fit = ni.polynomial();
  CHECK(fit == p);
  ni.add_node(Rational(7), p.eval(Rational(7)));
  CHECK(ni.polynomial() == p);
}

TEST_CASE("random interpolation round trips", "[interpolate][property]") {
  oracle::Rng rng(0x5eed0004);
  for (int i = 0; i < 200; ++i) {
    const long deg = rng.pick(0, 6);
    std::vector<Rational> coeffs;
    for (long k = 0; k <= deg; ++k) coeffs.push_back(rng.rational(9, 6));
    Poly p(coeffs, 0);
    if (p.is_zero()) p = Poly::one();
    // Distinct rational nodes.
    NewtonInterpolator ni;
    std::vector<Rational> nodes;
    while (static_cast<long>(nodes.size()) <= p.degree()) {
      const Rational x = rng.rational(40, 7);
      bool seen = false;
      for (const auto& y : nodes) seen = seen || y == x;
      if (seen) continue;
      nodes.push_back(x);
      ni.add_node(x, p.eval(x));
    }
    CHECK(ni.polynomial() == p);
    const Rational probe = Rational(1000003);
    CHECK(ni.eval(probe) == p.eval(probe));
  }
}
