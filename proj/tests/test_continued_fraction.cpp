#include <random>

#include "doctest.h"
#include "tfa/circle.hpp"
#include "tfa/continued_fraction.hpp"
#include "tfa/errors.hpp"
#include "tfa/parse.hpp"

using namespace tfa;

namespace {

// Independent oracle: Euclid on (p, q) with integer division only.
std::vector<mpz_class> euclid(mpz_class p, mpz_class q) {
  std::vector<mpz_class> out;
  while (q != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    out.push_back(a);
    mpz_class r = p - a * q;
    p = q;
    q = r;
  }
  return out;
}

mpq_class evaluate(const std::vector<mpz_class>& a) {
  mpq_class v = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) v = a[i] + 1 / v;
  return v;
}

}  // namespace

TEST_CASE("golden ratio expands to all ones with Fibonacci denominators") {
  const Real phi = parseReal("golden");
  const ContinuedFraction cf = expand(phi, 10);
  REQUIRE(cf.size() == 10);
  mpz_class f0 = 1, f1 = 1;
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(cf.quotients[k] == 1);
    CHECK(cf.q[k] == f0);
    mpz_class f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  CHECK(determinantIdentityHolds(cf));
  CHECK(convergentAlternation(cf, phi).pass);
}

TEST_CASE("sqrt 2 expands to [1;2,2,2,2,2]") {
  const ContinuedFraction cf = expand(parseReal("sqrt:2"), 6);
  CHECK(cf.quotients == std::vector<mpz_class>{1, 2, 2, 2, 2, 2});
  CHECK_FALSE(cf.terminal);
}

TEST_CASE("415/93 is [4;2,6,7] and terminal") {
  const ContinuedFraction cf = expand(parseReal("rat:415/93"), 20);
  CHECK(cf.quotients == std::vector<mpz_class>{4, 2, 6, 7});
  CHECK(cf.quotients == euclid(415, 93));
  CHECK(cf.terminal);
  CHECK(mpq_class(cf.p.back(), cf.q.back()) == mpq_class(415, 93));
  const AlternationReport alt = convergentAlternation(cf, parseReal("rat:415/93"));
  CHECK(alt.pass);
  CHECK(alt.signs.back() == 0);
}

TEST_CASE("random rationals agree with the Euclid oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> num(-5000000, 5000000);
  std::uniform_int_distribution<long> den(1, 999999);
  for (int i = 0; i < 2000; ++i) {
    mpq_class v(num(rng), den(rng));
    v.canonicalize();
    const ContinuedFraction cf = expand(Real::fromRational(v, 128), 200);
    REQUIRE(cf.terminal);
    CHECK(cf.quotients == euclid(v.get_num(), v.get_den()));
    CHECK(evaluate(cf.quotients) == v);
    CHECK(determinantIdentityHolds(cf));
    for (std::size_t k = 1; k < cf.size(); ++k) CHECK(cf.quotients[k] >= 1);
    if (cf.size() > 1) CHECK(cf.quotients.back() >= 2);
  }
}

TEST_CASE("enclosure limits the certified depth") {
  const Real coarse = parseReal("sqrt:2", 5);
  const ContinuedFraction avail = expandAvailable(coarse, 1000);
  CHECK(avail.size() > 3);
  CHECK(avail.size() < 40);
  try {
    (void)expand(coarse, 1000);
    FAIL("expected DepthExhaustedError");
  } catch (const DepthExhaustedError& e) {
    CHECK(e.validDepth() == avail.validDepth());
  }
  // Every certified quotient is correct: compare with a finer expansion.
  const ContinuedFraction fine = expand(parseReal("sqrt:2", 200), avail.size());
  for (std::size_t k = 0; k < avail.size(); ++k) CHECK(avail.quotients[k] == fine.quotients[k]);
}

TEST_CASE("alternation holds for quadratic irrationals and infinite literals") {
  for (const char* lit : {"sqrt:3", "sqrt:7", "cf:[0;1,50,...]", "cf:[0;1,2,4,8,16,...]"}) {
    const Real x = parseReal(lit, 120);
    const ContinuedFraction cf = expandAvailable(x, 30);
    REQUIRE(cf.size() >= 10);
    CHECK(determinantIdentityHolds(cf));
    CHECK(convergentAlternation(cf, x).pass);
  }
}

TEST_CASE("infinite literal reproduces its listed quotients") {
  const ContinuedFraction cf = expand(parseReal("cf:[0;1,2,4,8,16,...]", 200), 9);
  CHECK(cf.quotients == std::vector<mpz_class>{0, 1, 2, 4, 8, 16, 32, 64, 128});
}

TEST_CASE("best approximation for golden n = 4") {
  const BestApproxReport r = bestApproxBruteCheck(parseReal("golden"), 4);
  CHECK(r.pass);
  CHECK(r.qn == 5);
  CHECK(r.qNext == 8);
  CHECK(r.minimizingK == 5);
  CHECK(r.scanned == 7);
}

TEST_CASE("best approximation over many indices") {
  for (const char* lit : {"sqrt:2", "sqrt:11", "golden", "rat:415/93"}) {
    const Real x = parseReal(lit);
    const ContinuedFraction cf = expandAvailable(x, 12);
    for (std::size_t n = 0; n + 1 < cf.size(); ++n) {
      if (cf.q[n + 1] > 20000) break;
      const BestApproxReport r = bestApproxBruteCheck(x, cf, n);
      CHECK(r.pass);
      if (!r.vacuous) CHECK(r.minimizingK == cf.q[n]);
    }
  }
}

TEST_CASE("best approximation rejects oversize scans and terminal overruns") {
  CHECK_THROWS_AS(bestApproxBruteCheck(parseReal("sqrt:2"), 30, 1000), CapExceededError);
  CHECK_THROWS_AS(bestApproxBruteCheck(parseReal("rat:1/3"), 2), TerminalInputError);
  CHECK_THROWS_AS(qualityBounds(parseReal("rat:1/3"), 5), TerminalInputError);
}

TEST_CASE("quality bounds for golden n = 5") {
  const QualityReport r = qualityBounds(parseReal("golden"), 5);
  CHECK(r.qn == 8);
  CHECK(r.qNext == 13);
  CHECK(r.lower == mpq_class(1, 26));
  CHECK(r.upper == mpq_class(1, 13));
  CHECK(r.pass);
  CHECK(r.distance.lower() >= r.lower);
  CHECK(r.distance.upper() <= r.upper);
}

TEST_CASE("quality bounds hold along the expansion") {
  for (const char* lit : {"sqrt:5", "cf:[0;1,50,...]", "cf:[2;1,2,4,8,16,...]"}) {
    const Real x = parseReal(lit, 200);
    const ContinuedFraction cf = expandAvailable(x, 25);
    for (std::size_t n = 1; n + 1 < cf.size(); ++n) CHECK(qualityBounds(x, cf, n).pass);
  }
}

TEST_CASE("quality bounds at n = 0 depend on the first quotient") {
  // With a_1 = 1 the nearest integer to x is a_0 + 1, so ||x|| < 1/2 = 1/(2 q_1).
  CHECK_FALSE(qualityBounds(parseReal("golden"), 0).pass);
  CHECK(qualityBounds(parseReal("sqrt:2"), 0).pass);
}
