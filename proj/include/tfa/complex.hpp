#pragma once

#include "tfa/real.hpp"

namespace tfa {

// Rectangular complex ball.
struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  static Complex fromRational(const mpq_class& re, const mpq_class& im, mpfr_prec_t prec) {
    return {Real::fromRational(re, prec), Real::fromRational(im, prec)};
  }

  bool isExact() const { return re.isExact() && im.isExact(); }
  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex operator-() const { return {-re, -im}; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator/(const Complex& a, const Complex& b);
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
};

Complex conj(const Complex& z);
Real abs2(const Complex& z);
Real abs(const Complex& z);
// e^{2 pi i theta}; quarter-turn rational arguments come out exact.
Complex cis2pi(const Real& theta);
// arg(z) / (2 pi) in (-1/2, 1/2], reduced at the midpoint. Throws
// PrecisionError when the enclosure of z reaches the origin.
Real argTurns(const Complex& z);

}  // namespace tfa
