#include <random>

#include "doctest.h"
#include "tfa/circle.hpp"
#include "tfa/complex.hpp"
#include "tfa/errors.hpp"
#include "tfa/parse.hpp"

using namespace tfa;

namespace {

mpq_class q(long p, long d) {
  mpq_class r(p, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("rat literal is exact with zero radius") {
  const Real x = parseReal("rat:3/7");
  CHECK(x.isExact());
  CHECK(x.value() == q(3, 7));
  CHECK(x.radius() == 0);
  REQUIRE(x.source());
  CHECK(x.source()->kind == SourceKind::Rational);
}

TEST_CASE("sqrt literal at 100 digits has width below 1e-100") {
  const Real x = parseReal("sqrt:2", 100);
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, 100);
  CHECK(2 * x.radius() <= mpq_class(1, ten));
  // The square of the enclosure must contain 2.
  const mpq_class lo = x.lower();
  const mpq_class hi = x.upper();
  CHECK(lo * lo <= 2);
  CHECK(hi * hi >= 2);
}

TEST_CASE("periodic cf literal encloses (sqrt5 - 1)/2") {
  const Real x = parseReal("cf:[0;1,1,1,...]", 80);
  CHECK_FALSE(x.isExact());
  // Fixed point of y = 1/(1+y): y^2 + y - 1 = 0. Check the sign change of the
  // quadratic across the enclosure.
  auto f = [](const mpq_class& y) { return mpq_class(y * y + y - 1); };
  CHECK(f(x.lower()) <= 0);
  CHECK(f(x.upper()) >= 0);
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, 80);
  CHECK(x.radius() < mpq_class(1, ten));
}

TEST_CASE("geometric cf tail extends by its ratio") {
  const CfSpec spec = parseCfSpec("cf:[0;1,2,4,8,16,...]");
  CHECK(spec.mode == TailMode::Geometric);
  CHECK(spec.quotient(6) == 32);
  CHECK(spec.quotient(10) == 512);
  const CfSpec periodic = parseCfSpec("cf:[0;1,50,...]");
  CHECK(periodic.mode == TailMode::Periodic);
  CHECK(periodic.quotient(3) == 1);
  CHECK(periodic.quotient(4) == 50);
}

TEST_CASE("malformed literals are parse errors") {
  CHECK_THROWS_AS(parseReal("rat:1/0"), ParseError);
  CHECK_THROWS_AS(parseReal("sqrt:4"), ParseError);
  CHECK_THROWS_AS(parseReal("sqrt:-3"), ParseError);
  CHECK_THROWS_AS(parseReal("cf:[1;0,2]"), ParseError);
  CHECK_THROWS_AS(parseReal("cf:[1;...]"), ParseError);
  CHECK_THROWS_AS(parseReal("nonsense"), ParseError);
  CHECK_THROWS_AS(parseReal("dec:1.2.3"), ParseError);
}

TEST_CASE("truncated decimal raises a precision error when too short") {
  CHECK_THROWS_AS(parseReal("dec:3.14159...", 50), PrecisionError);
  const Real x = parseReal("dec:3.14159...", 5);
  CHECK(x.contains(q(314159, 100000)));
  CHECK(x.contains(q(3141595, 1000000)));
  const Real exact = parseReal("dec:-1.25");
  CHECK(exact.isExact());
  CHECK(exact.value() == q(-5, 4));
}

TEST_CASE("complex literal grammar") {
  const Complex z = parseComplex("1+0i");
  CHECK(z.re.value() == 1);
  CHECK(z.im.value() == 0);
  const Complex w = parseComplex("rat:-1/2-rat:3/4i");
  CHECK(w.re.value() == q(-1, 2));
  CHECK(w.im.value() == q(-3, 4));
  const Complex s = parseComplex("sqrt:2+i");
  CHECK(s.im.value() == 1);
  CHECK(s.re.contains(mpq_class(141421356, 100000000)) == false);
  CHECK(s.re.toDouble() == doctest::Approx(1.41421356237));
  const Complex pure = parseComplex("-2i");
  CHECK(pure.re.value() == 0);
  CHECK(pure.im.value() == -2);
}

TEST_CASE("circle reduction examples") {
  const CircleValue a = circleReduce(parseReal("dec:0.4"));
  CHECK(a.frac.value() == q(2, 5));
  CHECK(a.dist.value() == q(2, 5));
  CHECK(a.signedRep.value() == q(2, 5));

  const CircleValue b = circleReduce(parseReal("dec:0.75"));
  CHECK(b.frac.value() == q(3, 4));
  CHECK(b.dist.value() == q(1, 4));
  CHECK(b.signedRep.value() == q(-1, 4));

  const CircleValue c = circleReduce(parseReal("dec:-1.25"));
  CHECK(c.frac.value() == q(3, 4));
  CHECK(c.dist.value() == q(1, 4));
  CHECK(c.signedRep.value() == q(-1, 4));
  CHECK(c.integerPart == -2);
}

TEST_CASE("circle reduction refuses enclosures straddling a boundary") {
  const mpfr_prec_t bits = digitsToBits(30);
  const Real nearInteger = Real::fromInterval(q(-1, 1000), q(1, 1000), bits);
  CHECK_THROWS_AS(circleReduce(nearInteger), PrecisionError);
  const Real nearHalf = Real::fromInterval(q(499, 1000), q(501, 1000), bits);
  CHECK_THROWS_AS(circleReduce(nearHalf), PrecisionError);
  // The distance alone stays well defined.
  const Real d = circleDistance(nearInteger);
  CHECK(d.contains(0));
  CHECK(d.upper() <= q(1001, 1000000));
  const Real dh = circleDistance(nearHalf);
  CHECK(dh.contains(q(1, 2)));
  CHECK(dh.upper() <= q(1, 2));
}

TEST_CASE("circle invariants over random rationals") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 9999);
  const mpq_class half(1, 2);
  for (int i = 0; i < 10000; ++i) {
    const mpq_class value = q(num(rng), den(rng));
    const Real x = Real::fromRational(value, 128);
    const CircleValue c = circleReduce(x);
    REQUIRE(c.dist.isExact());
    CHECK(c.dist.value() == abs(c.signedRep.value()));
    CHECK(circleDistance(x.addInteger(1)).value() == c.dist.value());
    CHECK(circleDistance(-x).value() == c.dist.value());
    CHECK(c.dist.value() <= half);
    CHECK(mpq_class(c.frac.value() + c.integerPart) == value);
    const mpq_class gap = c.frac.value() - c.signedRep.value();
    CHECK((gap == 0 || gap == 1));
  }
}

TEST_CASE("interval soundness for closed forms") {
  const mpfr_prec_t bits = digitsToBits(60);
  const Real r2 = sqrt(Real(2, bits));
  CHECK((r2 * r2).contains(2));
  const Real golden = parseReal("golden", 60);
  // phi^2 = phi + 1
  CHECK((golden * golden - golden).contains(1));
  const Real e = exp(Real(1, bits));
  CHECK(log(e).contains(1));
  const Real p = pi(bits);
  CHECK(abs(sin(p)).upper() < mpq_class(1, 1000000));
  CHECK(cos(p).contains(-1));
  const Complex w = cis2pi(Real::fromRational(q(1, 3), bits));
  const Complex sum = Complex::fromRational(1, 0, bits) + w + w * w;
  CHECK(sum.re.contains(0));
  CHECK(sum.im.contains(0));
}

TEST_CASE("exact arithmetic stays exact and division by zero is rejected") {
  const Real a = Real::fromRational(q(1, 3), 64);
  const Real b = Real::fromRational(q(2, 7), 64);
  CHECK((a + b).isExact());
  CHECK((a * b).value() == q(2, 21));
  CHECK((a / b).value() == q(7, 6));
  CHECK_THROWS_AS(a / Real(0, 64), DomainError);
  const Real wide = Real::fromInterval(q(-1, 10), q(1, 10), 64);
  CHECK_THROWS_AS(a / wide, PrecisionError);
  CHECK_THROWS_AS(log(Real(-1, 64)), DomainError);
}

TEST_CASE("certified comparisons and floors") {
  const mpfr_prec_t bits = 128;
  const Real x = Real::fromInterval(q(1, 3), q(2, 3), bits);
  CHECK(x.floor() == mpz_class(0));
  CHECK_FALSE(Real::fromInterval(q(9, 10), q(11, 10), bits).floor().has_value());
  CHECK(certainlyLess(Real(0, bits), x));
  CHECK_FALSE(compare(x, Real::fromRational(q(1, 2), bits)).has_value());
  CHECK(compare(Real::fromRational(q(1, 2), bits), Real::fromRational(q(2, 4), bits)) == 0);
}

TEST_CASE("argument of a complex number in turns") {
  const mpfr_prec_t bits = 128;
  CHECK(argTurns(Complex::fromRational(-1, 0, bits)).value() == q(1, 2));
  CHECK(argTurns(Complex::fromRational(0, -3, bits)).value() == q(-1, 4));
  const Real t = argTurns(Complex(Real(1, bits), sqrt(Real(3, bits))));
  CHECK(t.contains(q(1, 6)));
  CHECK(t.toDouble() == doctest::Approx(1.0 / 6.0));
  CHECK(t.radiusUpper() < 1e-30);
}
