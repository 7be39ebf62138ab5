#include "tfa/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tfa/errors.hpp"

namespace tfa {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// Extra room an exact rational may take before it is demoted to a ball.
bool exceedsBudget(const mpq_class& q, mpfr_prec_t prec) {
  const std::size_t bits = mpz_sizeinbase(q.get_num_mpz_t(), 2) +
                           mpz_sizeinbase(q.get_den_mpz_t(), 2);
  return bits > static_cast<std::size_t>(8 * prec + 512);
}

// Adds one ulp of `mid` to `rad` when the rounding that produced `mid` was
// inexact.
void addRoundingError(mpfr_ptr rad, mpfr_srcptr mid, int ternary) {
  if (ternary == 0 || mpfr_zero_p(mid)) return;
  BigFloat ulp(kRadPrec);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid) - mpfr_get_prec(mid), MPFR_RNDU);
  mpfr_add(rad, rad, ulp.get(), MPFR_RNDU);
}

// |x| rounded up into a radius-precision float.
BigFloat absUp(mpfr_srcptr x) {
  BigFloat r(kRadPrec);
  mpfr_abs(r.get(), x, MPFR_RNDU);
  return r;
}

BigFloat absDown(mpfr_srcptr x) {
  BigFloat r(kRadPrec);
  mpfr_abs(r.get(), x, MPFR_RNDD);
  return r;
}

// Lower end of |ball| (can be <= 0 when the ball contains zero).
BigFloat magnitudeLower(const Real& x) {
  BigFloat m = absDown(x.mid().get());
  mpfr_sub(m.get(), m.get(), x.rad().get(), MPFR_RNDD);
  return m;
}

}  // namespace

mpfr_prec_t digitsToBits(int digits) {
  if (digits < 1) digits = 1;
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

int bitsToDigits(mpfr_prec_t bits) {
  const double d = static_cast<double>(bits - 16) / 3.3219280948873623;
  return std::max(1, static_cast<int>(std::floor(d)));
}

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpq_class toRational(mpfr_srcptr x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

const char* sourceKindName(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::Rational: return "rational";
    case SourceKind::Decimal: return "decimal";
    case SourceKind::QuadraticSurd: return "quadratic-surd";
    case SourceKind::SyntheticCF: return "synthetic-cf";
    case SourceKind::Derived: return "derived";
  }
  return "derived";
}

// -------------------------------------------------------------------- Real

Real::Real() : prec_(64), mid_(64), rad_(kRadPrec) {
  exact_ = std::make_shared<const mpq_class>(0);
}

Real::Real(long value, mpfr_prec_t prec) : prec_(prec), mid_(prec), rad_(kRadPrec) {
  setExact(mpq_class(value));
}

Real Real::fromRational(const mpq_class& q, mpfr_prec_t prec) {
  Real r;
  r.prec_ = prec;
  r.setExact(q);
  r.demoteIfLarge();
  return r;
}

Real Real::fromInteger(const mpz_class& z, mpfr_prec_t prec) {
  return fromRational(mpq_class(z), prec);
}

Real Real::fromInterval(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
  if (lo == hi) return fromRational(lo, prec);
  const mpq_class& a = lo < hi ? lo : hi;
  const mpq_class& b = lo < hi ? hi : lo;
  Real r;
  r.prec_ = prec;
  r.exact_.reset();
  r.mid_ = BigFloat(prec);
  mpq_class centre = (a + b) / 2;
  mpfr_set_q(r.mid_.get(), centre.get_mpq_t(), MPFR_RNDN);
  const mpq_class m = toRational(r.mid_.get());
  const mpq_class span = std::max(mpq_class(m - a), mpq_class(b - m));
  mpfr_set_q(r.rad_.get(), span.get_mpq_t(), MPFR_RNDU);
  return r;
}

Real Real::fromBall(const BigFloat& mid, const BigFloat& rad, mpfr_prec_t prec) {
  Real r;
  r.prec_ = prec;
  r.exact_.reset();
  r.mid_ = BigFloat(prec);
  const int t = mpfr_set(r.mid_.get(), mid.get(), MPFR_RNDN);
  mpfr_abs(r.rad_.get(), rad.get(), MPFR_RNDU);
  addRoundingError(r.rad_.get(), r.mid_.get(), t);
  return r;
}

void Real::setExact(const mpq_class& q) {
  exact_ = std::make_shared<const mpq_class>(q);
  mid_ = BigFloat(prec_);
  mpfr_set_zero(rad_.get(), 1);
  const int t = mpfr_set_q(mid_.get(), q.get_mpq_t(), MPFR_RNDN);
  addRoundingError(rad_.get(), mid_.get(), t);
}

void Real::demoteIfLarge() {
  if (exact_ && exceedsBudget(*exact_, prec_)) exact_.reset();
}

mpq_class Real::value() const {
  if (exact_) return *exact_;
  return toRational(mid_.get());
}

mpq_class Real::radius() const {
  if (exact_) return mpq_class(0);
  return toRational(rad_.get());
}

mpq_class Real::lower() const {
  if (exact_) return *exact_;
  return toRational(mid_.get()) - toRational(rad_.get());
}

mpq_class Real::upper() const {
  if (exact_) return *exact_;
  return toRational(mid_.get()) + toRational(rad_.get());
}

double Real::toDouble() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }

double Real::radiusUpper() const {
  if (exact_) return 0.0;
  return mpfr_get_d(rad_.get(), MPFR_RNDU);
}

std::string Real::toDecimal(int digits) const {
  if (exact_ && exact_->get_den() == 1) return exact_->get_num().get_str();
  if (mpfr_zero_p(mid_.get())) return "0";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", std::max(1, digits), mid_.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string Real::radiusString() const {
  if (exact_ || mpfr_zero_p(rad_.get())) return "0";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.6RUe", rad_.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

Real Real::withPrecision(mpfr_prec_t prec) const {
  if (exact_) return fromRational(*exact_, prec);
  Real r = fromBall(mid_, rad_, prec);
  r.source_ = source_;
  return r;
}

bool Real::contains(const mpq_class& q) const {
  if (exact_) return *exact_ == q;
  return lower() <= q && q <= upper();
}

bool Real::containsZero() const { return contains(mpq_class(0)); }

std::optional<int> Real::sign() const {
  if (exact_) return sgn(*exact_);
  const int c = mpfr_cmpabs(mid_.get(), rad_.get());
  if (c > 0) return mpfr_sgn(mid_.get()) > 0 ? 1 : -1;
  if (mpfr_zero_p(mid_.get()) && mpfr_zero_p(rad_.get())) return 0;
  return std::nullopt;
}

std::optional<mpz_class> Real::floor() const {
  auto floorOf = [](const mpq_class& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z;
  };
  if (exact_) return floorOf(*exact_);
  mpz_class lo = floorOf(lower());
  mpz_class hi = floorOf(upper());
  if (lo != hi) return std::nullopt;
  return lo;
}

Real& Real::setSource(Source source) {
  source_ = std::make_shared<const Source>(std::move(source));
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  r.source_.reset();
  if (exact_) {
    r.exact_ = std::make_shared<const mpq_class>(-*exact_);
  }
  mpfr_neg(r.mid_.get(), mid_.get(), MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& other) {
  prec_ = std::max(prec_, other.prec_);
  source_.reset();
  if (exact_ && other.exact_) {
    setExact(*exact_ + *other.exact_);
    demoteIfLarge();
    return *this;
  }
  BigFloat m(prec_);
  const int t = mpfr_add(m.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  BigFloat r(kRadPrec);
  mpfr_add(r.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  addRoundingError(r.get(), m.get(), t);
  mid_ = std::move(m);
  rad_ = std::move(r);
  exact_.reset();
  return *this;
}

Real& Real::operator-=(const Real& other) { return *this += -other; }

Real& Real::operator*=(const Real& other) {
  prec_ = std::max(prec_, other.prec_);
  source_.reset();
  if (exact_ && other.exact_) {
    setExact(*exact_ * *other.exact_);
    demoteIfLarge();
    return *this;
  }
  BigFloat m(prec_);
  const int t = mpfr_mul(m.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  // |a b - am bm| <= |am| rb + |bm| ra + ra rb
  BigFloat r(kRadPrec), tmp(kRadPrec);
  BigFloat am = absUp(mid_.get());
  BigFloat bm = absUp(other.mid_.get());
  mpfr_mul(r.get(), am.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_mul(tmp.get(), bm.get(), rad_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), tmp.get(), MPFR_RNDU);
  mpfr_mul(tmp.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), tmp.get(), MPFR_RNDU);
  addRoundingError(r.get(), m.get(), t);
  mid_ = std::move(m);
  rad_ = std::move(r);
  exact_.reset();
  return *this;
}

Real& Real::operator/=(const Real& other) {
  prec_ = std::max(prec_, other.prec_);
  source_.reset();
  if (other.exact_ && sgn(*other.exact_) == 0) {
    throw DomainError("division by exact zero");
  }
  if (exact_ && other.exact_) {
    setExact(*exact_ / *other.exact_);
    demoteIfLarge();
    return *this;
  }
  BigFloat denom = magnitudeLower(other);
  if (mpfr_sgn(denom.get()) <= 0) {
    throw PrecisionError("division by an enclosure that contains zero");
  }
  BigFloat m(prec_);
  const int t = mpfr_div(m.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  // |a/b - am/bm| <= (ra |bm| + |am| rb) / (|bm| (|bm| - rb))
  BigFloat num(kRadPrec), tmp(kRadPrec);
  BigFloat am = absUp(mid_.get());
  BigFloat bm = absUp(other.mid_.get());
  mpfr_mul(num.get(), rad_.get(), bm.get(), MPFR_RNDU);
  mpfr_mul(tmp.get(), am.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), tmp.get(), MPFR_RNDU);
  BigFloat den = absDown(other.mid_.get());
  mpfr_mul(den.get(), den.get(), denom.get(), MPFR_RNDD);
  BigFloat r(kRadPrec);
  mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
  addRoundingError(r.get(), m.get(), t);
  mid_ = std::move(m);
  rad_ = std::move(r);
  exact_.reset();
  return *this;
}

Real Real::mulInteger(const mpz_class& k) const {
  Real r(*this);
  r.source_.reset();
  if (exact_) {
    r.setExact(*exact_ * k);
    r.demoteIfLarge();
    return r;
  }
  BigFloat m(prec_);
  const int t = mpfr_mul_z(m.get(), mid_.get(), k.get_mpz_t(), MPFR_RNDN);
  BigFloat kabs(kRadPrec);
  const mpz_class ka = abs(k);
  mpfr_set_z(kabs.get(), ka.get_mpz_t(), MPFR_RNDU);
  mpfr_mul(r.rad_.get(), rad_.get(), kabs.get(), MPFR_RNDU);
  addRoundingError(r.rad_.get(), m.get(), t);
  r.mid_ = std::move(m);
  return r;
}

Real Real::addInteger(const mpz_class& k) const {
  Real r(*this);
  r.source_.reset();
  if (exact_) {
    r.setExact(*exact_ + k);
    return r;
  }
  BigFloat m(prec_);
  const int t = mpfr_add_z(m.get(), mid_.get(), k.get_mpz_t(), MPFR_RNDN);
  addRoundingError(r.rad_.get(), m.get(), t);
  r.mid_ = std::move(m);
  return r;
}

// The accessors below need to build balls directly.
class RealAccess {
 public:
  static Real ball(BigFloat mid, BigFloat rad, mpfr_prec_t prec) {
    Real r;
    r.prec_ = prec;
    r.exact_.reset();
    r.mid_ = std::move(mid);
    r.rad_ = std::move(rad);
    return r;
  }
};

namespace {

// Applies a correctly rounded MPFR function to the midpoint; the caller
// supplies the propagated radius.
template <typename Fn>
Real applyAtMid(const Real& x, Fn fn, BigFloat propagated) {
  BigFloat m(x.precision());
  const int t = fn(m.get(), x.mid().get());
  addRoundingError(propagated.get(), m.get(), t);
  return RealAccess::ball(std::move(m), std::move(propagated), x.precision());
}

bool isPerfectSquare(const mpq_class& q) {
  return sgn(q) >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) &&
         mpz_perfect_square_p(q.get_den_mpz_t());
}

}  // namespace

Real abs(const Real& x) {
  const auto s = x.sign();
  if (s && *s >= 0) return x;
  if (s && *s < 0) return -x;
  // Ball straddles zero: [0, max(|lo|, |hi|)].
  BigFloat hi = absUp(x.mid().get());
  mpfr_add(hi.get(), hi.get(), x.rad().get(), MPFR_RNDU);
  return Real::fromInterval(mpq_class(0), toRational(hi.get()), x.precision());
}

Real sqrt(const Real& x) {
  const mpfr_prec_t prec = x.precision();
  if (x.isExact()) {
    const mpq_class& q = x.exactValue();
    if (sgn(q) < 0) throw DomainError("square root of a negative number");
    if (isPerfectSquare(q)) {
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
      return Real::fromRational(mpq_class(n, d), prec);
    }
  }
  BigFloat lo(prec);
  mpfr_sub(lo.get(), x.mid().get(), x.rad().get(), MPFR_RNDD);
  if (mpfr_sgn(lo.get()) > 0) {
    // |sqrt(y) - sqrt(m)| <= r / (2 sqrt(lo))
    BigFloat s(kRadPrec);
    mpfr_sqrt(s.get(), lo.get(), MPFR_RNDD);
    mpfr_mul_2ui(s.get(), s.get(), 1, MPFR_RNDD);
    BigFloat r(kRadPrec);
    mpfr_div(r.get(), x.rad().get(), s.get(), MPFR_RNDU);
    return applyAtMid(x, [](mpfr_ptr out, mpfr_srcptr in) { return mpfr_sqrt(out, in, MPFR_RNDN); },
                      std::move(r));
  }
  BigFloat hi(prec);
  mpfr_add(hi.get(), x.mid().get(), x.rad().get(), MPFR_RNDU);
  if (mpfr_sgn(hi.get()) < 0) throw DomainError("square root of a negative number");
  BigFloat s(prec);
  mpfr_sqrt(s.get(), hi.get(), MPFR_RNDU);
  return Real::fromInterval(mpq_class(0), toRational(s.get()), prec);
}

Real exp(const Real& x) {
  if (x.isExact() && sgn(x.exactValue()) == 0) return Real(1, x.precision());
  // |exp(y) - exp(m)| <= exp(m + r) r
  BigFloat top(kRadPrec);
  mpfr_add(top.get(), x.mid().get(), x.rad().get(), MPFR_RNDU);
  mpfr_exp(top.get(), top.get(), MPFR_RNDU);
  BigFloat r(kRadPrec);
  mpfr_mul(r.get(), top.get(), x.rad().get(), MPFR_RNDU);
  return applyAtMid(x, [](mpfr_ptr out, mpfr_srcptr in) { return mpfr_exp(out, in, MPFR_RNDN); },
                    std::move(r));
}

Real log(const Real& x) {
  if (x.isExact()) {
    if (sgn(x.exactValue()) <= 0) throw DomainError("logarithm of a non-positive number");
    if (x.exactValue() == 1) return Real(0, x.precision());
  }
  BigFloat lo(kRadPrec);
  mpfr_sub(lo.get(), x.mid().get(), x.rad().get(), MPFR_RNDD);
  if (mpfr_sgn(lo.get()) <= 0) {
    if (mpfr_sgn(x.mid().get()) <= 0) throw DomainError("logarithm of a non-positive number");
    throw PrecisionError("logarithm of an enclosure that reaches zero");
  }
  BigFloat r(kRadPrec);
  mpfr_div(r.get(), x.rad().get(), lo.get(), MPFR_RNDU);
  return applyAtMid(x, [](mpfr_ptr out, mpfr_srcptr in) { return mpfr_log(out, in, MPFR_RNDN); },
                    std::move(r));
}

Real sin(const Real& x) {
  if (x.isExact() && sgn(x.exactValue()) == 0) return Real(0, x.precision());
  BigFloat r(kRadPrec);
  mpfr_set(r.get(), x.rad().get(), MPFR_RNDU);
  return applyAtMid(x, [](mpfr_ptr out, mpfr_srcptr in) { return mpfr_sin(out, in, MPFR_RNDN); },
                    std::move(r));
}

Real cos(const Real& x) {
  if (x.isExact() && sgn(x.exactValue()) == 0) return Real(1, x.precision());
  BigFloat r(kRadPrec);
  mpfr_set(r.get(), x.rad().get(), MPFR_RNDU);
  return applyAtMid(x, [](mpfr_ptr out, mpfr_srcptr in) { return mpfr_cos(out, in, MPFR_RNDN); },
                    std::move(r));
}

Real pi(mpfr_prec_t prec) {
  BigFloat m(prec);
  const int t = mpfr_const_pi(m.get(), MPFR_RNDN);
  BigFloat r(kRadPrec);
  addRoundingError(r.get(), m.get(), t);
  return RealAccess::ball(std::move(m), std::move(r), prec);
}

Real logInteger(const mpz_class& n, mpfr_prec_t prec) {
  if (sgn(n) <= 0) throw DomainError("logarithm of a non-positive integer");
  return log(Real::fromInteger(n, prec));
}

Real hull(const Real& a, const Real& b) {
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  if (a.isExact() && b.isExact() && a.exactValue() == b.exactValue()) return a;
  const mpq_class lo = std::min(a.lower(), b.lower());
  const mpq_class hi = std::max(a.upper(), b.upper());
  return Real::fromInterval(lo, hi, prec);
}

std::optional<int> compare(const Real& a, const Real& b) {
  if (a.isExact() && b.isExact()) return cmp(a.exactValue(), b.exactValue()) < 0 ? -1
                                         : (a.exactValue() == b.exactValue() ? 0 : 1);
  if (a.upper() < b.lower()) return -1;
  if (a.lower() > b.upper()) return 1;
  return std::nullopt;
}

bool certainlyLess(const Real& a, const Real& b) { return a.upper() < b.lower(); }
bool certainlyLessEq(const Real& a, const Real& b) { return a.upper() <= b.lower(); }
bool certainlyGreater(const Real& a, const Real& b) { return a.lower() > b.upper(); }

int compareOrThrow(const Real& a, const Real& b, const char* what) {
  const auto c = compare(a, b);
  if (!c) throw PrecisionError(std::string("cannot decide comparison: ") + what);
  return *c;
}

}  // namespace tfa
