#include "tfa/circle.hpp"

#include "tfa/errors.hpp"

namespace tfa {

Real fractionalPart(const Real& x) {
  const auto fl = x.floor();
  if (!fl) throw PrecisionError("fractional part: enclosure straddles an integer");
  return x.addInteger(-*fl);
}

Real signedRepresentative(const Real& x) {
  const Real shifted = x + Real::fromRational(mpq_class(1, 2), x.precision());
  const auto fl = shifted.floor();
  if (!fl) throw PrecisionError("signed representative: enclosure straddles a half-integer");
  return x.addInteger(-*fl);
}

CircleValue circleReduce(const Real& x) {
  const auto fl = x.floor();
  if (!fl) throw PrecisionError("circle reduction: enclosure straddles an integer");
  CircleValue out{x.addInteger(-*fl), Real(), signedRepresentative(x), *fl};
  out.dist = abs(out.signedRep);
  return out;
}

Real circleDistance(const Real& x) {
  if (x.isExact()) return abs(signedRepresentative(x));
  mpz_class k;
  mpfr_get_z(k.get_mpz_t(), x.mid().get(), MPFR_RNDN);
  const Real s = x.addInteger(-k);
  const Real d = abs(s);
  const mpq_class half(1, 2);
  if (d.upper() <= half) return d;
  // The ball reaches past a half-integer where the distance folds back.
  const mpq_class lo = std::min(d.lower(), mpq_class(1 - d.upper()));
  return Real::fromInterval(lo < 0 ? mpq_class(0) : lo, half, x.precision());
}

}  // namespace tfa
