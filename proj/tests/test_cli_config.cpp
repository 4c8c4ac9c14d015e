#include "catch_amalgamated.hpp"

#include <cstdlib>
#include <numeric>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/parallel.hpp"
#include "mirec/params.hpp"
#include "mirec/rational.hpp"

#include "oracles.hpp"

using mirec::Rational;

TEST_CASE("thread budget honors the environment cap", "[cli]") {
  ::setenv("MIREC_THREADS", "1", 1);
  CHECK(mirec::thread_budget() == 1);
  ::setenv("MIREC_THREADS", "0", 1);
  CHECK(mirec::thread_budget() == 1);
  ::unsetenv("MIREC_THREADS");
  CHECK(mirec::thread_budget() >= 1);
}

TEST_CASE("parallel for visits every slot exactly once", "[cli]") {
  const char* caps[] = {"1", "3", nullptr};
  for (const char* cap : caps) {
    if (cap)
      ::setenv("MIREC_THREADS", cap, 1);
    else
      ::unsetenv("MIREC_THREADS");
    std::vector<long> slots(257, 0);
    mirec::parallel_for(slots.size(), [&](std::size_t i) {
      slots[i] += static_cast<long>(i) + 1;
    });
    for (std::size_t i = 0; i < slots.size(); ++i)
      CHECK(slots[i] == static_cast<long>(i) + 1);
  }
  ::unsetenv("MIREC_THREADS");
}

TEST_CASE("parallel for propagates worker exceptions", "[cli]") {
  CHECK_THROWS_AS(mirec::parallel_for(8,
                                      [&](std::size_t i) {
                                        if (i == 5)
                                          throw mirec::VerificationFailure(
                                              "boom", "slot 5");
                                      }),
                  mirec::VerificationFailure);
}

TEST_CASE("emitted rationals round trip", "[cli][property]") {
  // Everything the reports print is Rational::str(); parsing it back must
  // reproduce the value bit for bit.
  oracle::Rng rng(0x5eed0009);
  for (int i = 0; i < 200; ++i) {
    const Rational x = rng.rational(1000000, 999983);
    CHECK(Rational::parse(x.str()) == x);
  }
  CHECK(Rational::parse(Rational(0).str()) == Rational(0));
}

TEST_CASE("parameter set prints all fields", "[cli]") {
  const mirec::ParameterSet p = mirec::ParameterSet::q_racah(
      Rational(2, 7), Rational(3, 5), Rational(5, 9), Rational(7, 4),
      Rational(1, 3));
  const std::string s = p.str();
  CHECK(s.find("2/7") != std::string::npos);
  CHECK(s.find("q=1/3") != std::string::npos);
}
