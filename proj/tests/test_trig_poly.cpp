#include <cmath>
#include <random>

#include "doctest.h"
#include "tfa/errors.hpp"
#include "tfa/parse.hpp"
#include "tfa/trig_poly.hpp"

using namespace tfa;

namespace {

const mpfr_prec_t kBits = digitsToBits(60);

Complex cr(long re, long im = 0) { return Complex::fromRational(re, im, kBits); }

Complex randomCoefficient(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> logMod(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> phase(0, 2 * M_PI);
  const double r = std::exp(logMod(rng));
  const double th = phase(rng);
  return Complex::fromRational(mpq_class(r * std::cos(th)), mpq_class(r * std::sin(th)), kBits);
}

// Independent classification from double moduli; the random draws never sit
// within 1e-9 of a degenerate triangle.
int expectedCount(const Complex& c0, const Complex& c1, const Complex& c2) {
  const double m0 = abs(c0).toDouble(), m1 = abs(c1).toDouble(), m2 = abs(c2).toDouble();
  const bool inside = std::abs(m1 - m2) < m0 && m0 < m1 + m2;
  return inside ? 2 : 0;
}

}  // namespace

TEST_CASE("evalP examples") {
  TrigPoly P{cr(1), cr(1), cr(1), Real(1, kBits), Real(2, kBits)};
  const Complex v = evalP(P, Real::fromRational(mpq_class(1, 3), kBits));
  CHECK(v.re.contains(0));
  CHECK(v.im.contains(0));
  CHECK(abs(v).upper() < mpq_class(1, mpz_class("1000000000000000000000000000000")));

  TrigPoly Q{cr(2), cr(1), cr(1), parseReal("sqrt:3", 60), parseReal("golden", 60)};
  const Complex w = evalP(Q, Real(0, kBits));
  CHECK(w.re.value() == 4);
  CHECK(w.im.value() == 0);
}

TEST_CASE("evalP agrees with evaluation at doubled precision") {
  const mpfr_prec_t lo = digitsToBits(50), hi = digitsToBits(100);
  auto build = [](mpfr_prec_t bits, int digits) {
    return TrigPoly{Complex::fromRational(1, 0, bits), Complex::fromRational(1, 0, bits),
                    Complex::fromRational(1, 0, bits), parseReal("sqrt:2", digits),
                    Real(1, bits)};
  };
  const Real x = Real::fromRational(mpq_class(1, 4), lo);
  const Complex a = evalP(build(lo, 50), x);
  const Complex b = evalP(build(hi, 100), x.withPrecision(hi));
  CHECK(a.re.contains(b.re.value()));
  CHECK(a.im.contains(b.im.value()));
  CHECK(b.re.radiusUpper() < a.re.radiusUpper());
}

TEST_CASE("zeros of (1,1,1) are the cube-root pairs with t = -1/2") {
  const TorusZeroData d = findTorusZeros(cr(1), cr(1), cr(1));
  CHECK(d.cls == ZeroClass::Two);
  REQUIRE(d.zeros.size() == 2);
  CHECK(d.zeros[0].gamma1.contains(mpq_class(1, 3)));
  CHECK(d.zeros[0].gamma2.contains(mpq_class(2, 3)));
  CHECK(d.zeros[1].gamma1.contains(mpq_class(2, 3)));
  CHECK(d.zeros[1].gamma2.contains(mpq_class(1, 3)));
  for (const auto& z : d.zeros) {
    CHECK(z.t.contains(mpq_class(-1, 2)));
    CHECK(z.residual < 1e-30);
    CHECK_FALSE(z.tIsZero);
  }
}

TEST_CASE("zeros of (2,1,1) and (3,1,1)") {
  const TorusZeroData one = findTorusZeros(cr(2), cr(1), cr(1));
  CHECK(one.cls == ZeroClass::One);
  REQUIRE(one.zeros.size() == 1);
  CHECK(one.zeros[0].gamma1.value() == mpq_class(1, 2));
  CHECK(one.zeros[0].gamma2.value() == mpq_class(1, 2));
  CHECK(one.zeros[0].t.value() == 1);
  const TorusZeroData none = findTorusZeros(cr(3), cr(1), cr(1));
  CHECK(none.cls == ZeroClass::None);
  CHECK(none.zeros.empty());
}

TEST_CASE("zero coefficients are rejected") {
  CHECK_THROWS_AS(findTorusZeros(cr(0), cr(1), cr(1)), DomainError);
  CHECK_THROWS_AS(findTorusZeros(cr(1), cr(1), cr(0, 0)), DomainError);
}

TEST_CASE("right-angle moduli give t = 0 with a warning") {
  // 5^2 = 3^2 + 4^2
  const TorusZeroData d = findTorusZeros(cr(5), cr(3), cr(4));
  REQUIRE(d.zeros.size() == 2);
  for (const auto& z : d.zeros) {
    CHECK(z.tIsZero);
    CHECK(z.residual < 1e-30);
  }
  CHECK_FALSE(d.warnings.empty());
}

TEST_CASE("random triples: count, residuals, closed-form t, symmetry, scaling") {
  std::mt19937_64 rng(4242);
  int twos = 0;
  for (int i = 0; i < 1000; ++i) {
    const Complex c0 = randomCoefficient(rng), c1 = randomCoefficient(rng), c2 = randomCoefficient(rng);
    const TorusZeroData d = findTorusZeros(c0, c1, c2);
    REQUIRE(static_cast<int>(d.zeros.size()) == expectedCount(c0, c1, c2));
    if (d.zeros.empty()) continue;
    ++twos;
    // Closed form: Re(w2/w1) = (|C0|^2 - |C1|^2 - |C2|^2) / (2|C1|^2).
    const Real a = abs2(c0), b = abs2(c1), c = abs2(c2);
    const Real tForm = (a - b - c) / b.mulInteger(2);
    for (const auto& z : d.zeros) {
      CHECK(z.residual < 1e-30);
      CHECK(z.t.contains(tForm.value()));
      CHECK(mpfr_sgn(z.gamma1.mid().get()) >= 0);
      CHECK(mpfr_cmp_ui(z.gamma1.mid().get(), 1) < 0);
    }
    const TorusZeroData swapped = findTorusZeros(c0, c2, c1);
    REQUIRE(swapped.zeros.size() == d.zeros.size());
    for (const auto& z : d.zeros) {
      bool found = false;
      for (const auto& s : swapped.zeros) {
        if (std::abs(s.gamma1.toDouble() - z.gamma2.toDouble()) < 1e-20 &&
            std::abs(s.gamma2.toDouble() - z.gamma1.toDouble()) < 1e-20) {
          found = true;
        }
      }
      CHECK(found);
    }
    const Complex lambda = randomCoefficient(rng);
    const TorusZeroData scaled = findTorusZeros(c0 * lambda, c1 * lambda, c2 * lambda);
    REQUIRE(scaled.zeros.size() == 2);
    CHECK(std::abs(scaled.zeros[0].t.toDouble() - d.zeros[0].t.toDouble()) < 1e-20);
  }
  CHECK(twos > 20);
}

TEST_CASE("lower-bound constant examples") {
  const LowerBoundReport none = lowerBoundConstant(cr(3), cr(1), cr(1), 128);
  CHECK(none.zeroFree);
  CHECK(none.constant >= 1.0 - 1e-12);
  CHECK(none.constant == doctest::Approx(1.0).epsilon(1e-6));

  const LowerBoundReport two = lowerBoundConstant(cr(1), cr(1), cr(1), 256, 2);
  CHECK(two.zeroCount == 2);
  CHECK(two.constant > 1e-6);
  CHECK(two.refinedCenters == kRefineCenters);
  // Regression baseline: attained at (0, 1/2) where |p| = 1 and the
  // denominator is 1/4 + 1/9 + 1/36 = 7/18.
  CHECK(two.constant == doctest::Approx(18.0 / 7.0).epsilon(1e-9));

  const LowerBoundReport one = lowerBoundConstant(cr(2), cr(1), cr(1), 256);
  CHECK(one.zeroCount == 1);
  CHECK(one.skipped >= 1);  // (1/2, 1/2) sits on the grid
  CHECK(one.constant > 1e-6);
  // Baseline: |p(0, 1/2)| = 2 over 1/2 + 1/4 = 3/4.
  CHECK(one.constant == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("lower-bound constant does not depend on the thread count") {
  const LowerBoundReport a = lowerBoundConstant(cr(1), cr(2, 1), cr(2), 96, 1);
  const LowerBoundReport b = lowerBoundConstant(cr(1), cr(2, 1), cr(2), 96, 4);
  CHECK(a.constant == b.constant);
  CHECK(a.argminX == b.argminX);
  CHECK(a.evaluated == b.evaluated);
}
