#include "tfa/continued_fraction.hpp"

#include "tfa/circle.hpp"
#include "tfa/errors.hpp"

namespace tfa {

namespace {

mpz_class floorOf(const mpq_class& v) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return z;
}

ContinuedFraction expandRational(mpq_class v, std::size_t maxQuotients) {
  ContinuedFraction cf;
  while (cf.size() < maxQuotients) {
    const mpz_class a = floorOf(v);
    cf.push(a);
    v -= a;
    if (sgn(v) == 0) {
      cf.terminal = true;
      break;
    }
    v = 1 / v;
  }
  return cf;
}

}  // namespace

void ContinuedFraction::push(const mpz_class& a) {
  const std::size_t k = quotients.size();
  quotients.push_back(a);
  if (k == 0) {
    p.push_back(a);
    q.push_back(1);
  } else if (k == 1) {
    p.push_back(a * p[0] + 1);
    q.push_back(a);
  } else {
    p.push_back(a * p[k - 1] + p[k - 2]);
    q.push_back(a * q[k - 1] + q[k - 2]);
  }
}

ContinuedFraction ContinuedFraction::fromQuotients(const std::vector<mpz_class>& quotients,
                                                   bool terminal) {
  ContinuedFraction cf;
  for (const auto& a : quotients) cf.push(a);
  cf.terminal = terminal;
  return cf;
}

ContinuedFraction expandAvailable(const Real& x, std::size_t maxQuotients) {
  if (x.isExact()) return expandRational(x.exactValue(), maxQuotients);
  const mpq_class lo = x.lower();
  const mpq_class hi = x.upper();
  if (lo == hi) return expandRational(lo, maxQuotients);

  // Run the Gauss map on both endpoints; a quotient is certified when the
  // image interval of the previous remainder is narrower than 1/4 and has a
  // single integer part.
  ContinuedFraction cf;
  if (maxQuotients == 0) return cf;
  const mpz_class a0 = floorOf(lo);
  if (floorOf(hi) != a0) return cf;
  cf.push(a0);
  mpq_class rlo = lo - a0;
  mpq_class rhi = hi - a0;
  const mpq_class quarter(1, 4);
  while (cf.size() < maxQuotients) {
    if (sgn(rlo) <= 0) break;
    mpq_class ilo = 1 / rhi;
    mpq_class ihi = 1 / rlo;
    if (ihi - ilo >= quarter) break;
    const mpz_class a = floorOf(ilo);
    if (floorOf(ihi) != a) break;
    cf.push(a);
    rlo = ilo - a;
    rhi = ihi - a;
  }
  return cf;
}

ContinuedFraction expand(const Real& x, std::size_t depth) {
  if (depth == 0) throw DomainError("continued fraction depth must be positive");
  ContinuedFraction cf = expandAvailable(x, depth);
  if (cf.size() < depth && !cf.terminal) {
    throw DepthExhaustedError("precision exhausted after " + std::to_string(cf.size()) +
                                  " certified quotients (requested " + std::to_string(depth) + ")",
                              cf.validDepth());
  }
  return cf;
}

bool determinantIdentityHolds(const ContinuedFraction& cf) {
  for (std::size_t k = 1; k < cf.size(); ++k) {
    const mpz_class det = cf.p[k] * cf.q[k - 1] - cf.p[k - 1] * cf.q[k];
    const int expected = (k % 2 == 1) ? 1 : -1;  // (-1)^{k-1}
    if (det != expected) return false;
  }
  return true;
}

AlternationReport convergentAlternation(const ContinuedFraction& cf, const Real& x) {
  AlternationReport report;
  for (std::size_t k = 0; k < cf.size(); ++k) {
    const Real conv = Real::fromRational(mpq_class(cf.p[k], cf.q[k]), x.precision());
    const int s = compareOrThrow(conv, x, "convergent versus input");
    report.signs.push_back(s);
    if (s == 0) {
      // Only the last convergent of a rational may coincide with x.
      if (!(cf.terminal && k + 1 == cf.size())) report.pass = false;
      continue;
    }
    const int expected = (k % 2 == 0) ? -1 : 1;
    if (s != expected) report.pass = false;
  }
  return report;
}

namespace {

void requireIndex(const ContinuedFraction& cf, std::size_t n) {
  if (n + 1 < cf.size()) return;
  if (cf.terminal) {
    throw TerminalInputError("index " + std::to_string(n) +
                             " reaches past the last quotient of a rational input");
  }
  throw DepthExhaustedError("convergents through index " + std::to_string(n + 1) +
                                " are not certified",
                            cf.validDepth());
}

}  // namespace

BestApproxReport bestApproxBruteCheck(const Real& x, const ContinuedFraction& cf, std::size_t n,
                                      const mpz_class& cap) {
  requireIndex(cf, n);
  BestApproxReport report;
  report.n = n;
  report.qn = cf.q[n];
  report.qNext = cf.q[n + 1];
  if (report.qNext > cap) {
    throw CapExceededError("q_{n+1} = " + report.qNext.get_str() + " exceeds the brute-force cap " +
                           cap.get_str());
  }
  report.distanceAtQn = circleDistance(x.mulInteger(report.qn));
  if (report.qNext <= 1) {
    report.vacuous = true;
    report.pass = true;
    report.minDistance = report.distanceAtQn;
    return report;
  }
  const unsigned long limit = report.qNext.get_ui();
  bool ambiguous = false;
  bool beaten = false;
  for (unsigned long k = 1; k < limit; ++k) {
    const mpz_class kk(k);
    Real d = circleDistance(x.mulInteger(kk));
    ++report.scanned;
    if (report.minimizingK == 0 || mpfr_less_p(d.mid().get(), report.minDistance.mid().get())) {
      report.minimizingK = kk;
      report.minDistance = d;
    }
    if (kk == report.qn) continue;
    const auto c = compare(d, report.distanceAtQn);
    if (!c) {
      ambiguous = true;
    } else if (*c < 0) {
      beaten = true;
    }
  }
  if (beaten) {
    report.pass = false;
    return report;
  }
  if (ambiguous) {
    throw PrecisionError("best-approximation scan: distances overlap with ||q_n x||");
  }
  report.pass = true;
  // Exact ties keep the smallest k; report q_n when it attains the minimum.
  if (compare(report.minDistance, report.distanceAtQn) == 0 ||
      mpfr_equal_p(report.minDistance.mid().get(), report.distanceAtQn.mid().get())) {
    report.minimizingK = report.qn;
    report.minDistance = report.distanceAtQn;
  }
  return report;
}

BestApproxReport bestApproxBruteCheck(const Real& x, std::size_t n, const mpz_class& cap) {
  return bestApproxBruteCheck(x, expandAvailable(x, n + 2), n, cap);
}

QualityReport qualityBounds(const Real& x, const ContinuedFraction& cf, std::size_t n) {
  requireIndex(cf, n);
  QualityReport report;
  report.n = n;
  report.qn = cf.q[n];
  report.qNext = cf.q[n + 1];
  report.distance = circleDistance(x.mulInteger(report.qn));
  report.lower = mpq_class(1, 2 * report.qNext);
  report.upper = mpq_class(1, report.qNext);
  report.lower.canonicalize();
  report.upper.canonicalize();
  const mpq_class lo = report.distance.lower();
  const mpq_class hi = report.distance.upper();
  if (lo >= report.lower && hi <= report.upper) {
    report.pass = true;
  } else if (hi < report.lower || lo > report.upper) {
    report.pass = false;
  } else {
    throw PrecisionError("quality bounds: ||q_n x|| enclosure overlaps a bound");
  }
  return report;
}

QualityReport qualityBounds(const Real& x, std::size_t n) {
  return qualityBounds(x, expandAvailable(x, n + 2), n);
}

}  // namespace tfa
