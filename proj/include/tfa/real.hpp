#pragma once

// Certified real arithmetic.
//
// A Real is a ball [mid - rad, mid + rad] with an MPFR midpoint (a dyadic,
// hence exact, rational) and an upward-rounded radius. Values that are known
// exactly as rationals additionally carry the rational itself and stay exact
// through + - * / as long as their size stays within a budget tied to the
// working precision. Every operation rounds the radius outward, so the true
// real always lies inside the ball.

#include <gmpxx.h>
#include <mpfr.h>

#include <memory>
#include <optional>
#include <string>

namespace tfa {

// Precision helpers. Working precision is specified in decimal digits at the
// API surface and carried in bits internally.
constexpr int kDefaultDigits = 256;
mpfr_prec_t digitsToBits(int digits);
int bitsToDigits(mpfr_prec_t bits);

// RAII holder for an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

// Exact conversion of a finite MPFR value to a rational.
mpq_class toRational(mpfr_srcptr x);

enum class SourceKind { Rational, Decimal, QuadraticSurd, SyntheticCF, Derived };

struct Source {
  SourceKind kind = SourceKind::Derived;
  std::string text;   // the grammar literal it was parsed from
  int digits = 0;     // literal digit count (decimals) or requested digits
};

const char* sourceKindName(SourceKind kind) noexcept;

class Real {
 public:
  // Exact zero at the default precision.
  Real();
  Real(long value, mpfr_prec_t prec);

  static Real fromRational(const mpq_class& q, mpfr_prec_t prec);
  static Real fromInteger(const mpz_class& z, mpfr_prec_t prec);
  // Smallest ball (at this precision) containing [lo, hi].
  static Real fromInterval(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);
  static Real fromBall(const BigFloat& mid, const BigFloat& rad, mpfr_prec_t prec);

  bool isExact() const noexcept { return exact_ != nullptr; }
  // Only meaningful when isExact().
  const mpq_class& exactValue() const { return *exact_; }

  // The rational centre and radius of the enclosure.
  mpq_class value() const;
  mpq_class radius() const;
  mpq_class lower() const;
  mpq_class upper() const;

  const BigFloat& mid() const noexcept { return mid_; }
  const BigFloat& rad() const noexcept { return rad_; }
  mpfr_prec_t precision() const noexcept { return prec_; }

  double toDouble() const;
  double radiusUpper() const;  // radius rounded up to double
  // Decimal rendering of the centre with `digits` significant digits.
  std::string toDecimal(int digits) const;
  // Radius rendered with a few significant digits, rounded up.
  std::string radiusString() const;

  Real withPrecision(mpfr_prec_t prec) const;

  bool contains(const mpq_class& q) const;
  bool containsZero() const;
  // +1 / -1 when certain, 0 only for an exact zero, nullopt when ambiguous.
  std::optional<int> sign() const;
  // Floor when every point of the ball has the same integer part.
  std::optional<mpz_class> floor() const;

  const Source* source() const noexcept { return source_.get(); }
  Real& setSource(Source source);

  Real operator-() const;
  Real& operator+=(const Real& other);
  Real& operator-=(const Real& other);
  Real& operator*=(const Real& other);
  Real& operator/=(const Real& other);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  Real mulInteger(const mpz_class& k) const;
  Real addInteger(const mpz_class& k) const;

 private:
  friend class RealAccess;
  void setExact(const mpq_class& q);
  void demoteIfLarge();

  mpfr_prec_t prec_;
  BigFloat mid_;
  BigFloat rad_;
  std::shared_ptr<const mpq_class> exact_;
  std::shared_ptr<const Source> source_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real pi(mpfr_prec_t prec);
// Natural logarithm of a positive integer.
Real logInteger(const mpz_class& n, mpfr_prec_t prec);
// Union hull of two balls.
Real hull(const Real& a, const Real& b);

// Certified comparisons: nullopt when the enclosures overlap (and are not
// both exact and equal).
std::optional<int> compare(const Real& a, const Real& b);
bool certainlyLess(const Real& a, const Real& b);
bool certainlyLessEq(const Real& a, const Real& b);
bool certainlyGreater(const Real& a, const Real& b);
// Throws PrecisionError when the comparison cannot be decided.
int compareOrThrow(const Real& a, const Real& b, const char* what);

}  // namespace tfa
