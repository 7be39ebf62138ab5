#include "tfa/complex.hpp"

#include "tfa/errors.hpp"

namespace tfa {

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator/(const Complex& a, const Complex& b) {
  const Real d = abs2(b);
  const Complex n = a * conj(b);
  return {n.re / d, n.im / d};
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real abs2(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z) {
  if (z.im.isExact() && sgn(z.im.exactValue()) == 0) return abs(z.re);
  if (z.re.isExact() && sgn(z.re.exactValue()) == 0) return abs(z.im);
  return sqrt(abs2(z));
}

Complex cis2pi(const Real& theta) {
  const mpfr_prec_t prec = theta.precision();
  mpz_class k;
  mpfr_get_z(k.get_mpz_t(), theta.mid().get(), MPFR_RNDN);
  const Real reduced = theta.addInteger(-k);
  if (reduced.isExact()) {
    const mpq_class& q = reduced.exactValue();
    const mpq_class quarter(1, 4);
    if (q == 0) return Complex::fromRational(1, 0, prec);
    if (q == quarter) return Complex::fromRational(0, 1, prec);
    if (q == -quarter) return Complex::fromRational(0, -1, prec);
    if (q == mpq_class(1, 2) || q == mpq_class(-1, 2)) return Complex::fromRational(-1, 0, prec);
  }
  Real angle = reduced * pi(prec);
  angle = angle.mulInteger(2);
  return {cos(angle), sin(angle)};
}

Real argTurns(const Complex& z) {
  const mpfr_prec_t prec = z.precision();
  if (z.isExact()) {
    const int sr = sgn(z.re.exactValue());
    const int si = sgn(z.im.exactValue());
    if (si == 0 && sr > 0) return Real(0, prec);
    if (si == 0 && sr < 0) return Real::fromRational(mpq_class(1, 2), prec);
    if (sr == 0 && si > 0) return Real::fromRational(mpq_class(1, 4), prec);
    if (sr == 0 && si < 0) return Real::fromRational(mpq_class(-1, 4), prec);
    if (sr == 0 && si == 0) throw DomainError("argument of zero");
  }
  BigFloat spread(64);
  mpfr_add(spread.get(), z.re.rad().get(), z.im.rad().get(), MPFR_RNDU);
  BigFloat modulus(64);
  mpfr_hypot(modulus.get(), z.re.mid().get(), z.im.mid().get(), MPFR_RNDD);
  if (mpfr_cmp(spread.get(), modulus.get()) >= 0) {
    throw PrecisionError("argument of an enclosure that reaches the origin");
  }
  BigFloat angle(prec);
  mpfr_atan2(angle.get(), z.im.mid().get(), z.re.mid().get(), MPFR_RNDN);
  // asin(s) <= (pi/2) s on [0, 1].
  BigFloat rad(64);
  mpfr_div(rad.get(), spread.get(), modulus.get(), MPFR_RNDU);
  mpfr_mul_d(rad.get(), rad.get(), 1.5707963267948968, MPFR_RNDU);
  // One extra ulp for the rounding of atan2.
  BigFloat ulp(64);
  if (!mpfr_zero_p(angle.get())) {
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(angle.get()) - prec, MPFR_RNDU);
  }
  mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
  const Real radians = Real::fromBall(angle, rad, prec);
  return radians / pi(prec).mulInteger(2);
}

}  // namespace tfa
