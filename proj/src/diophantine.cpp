#include "tfa/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "tfa/circle.hpp"
#include "tfa/errors.hpp"
#include "tfa/parallel.hpp"
#include "tfa/random.hpp"

namespace tfa {

namespace {

mpz_class floorQ(const mpq_class& v) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return z;
}

mpz_class ceilQ(const mpq_class& v) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return z;
}

mpq_class fracQ(const mpq_class& v) { return v - floorQ(v); }

mpq_class canon(mpq_class v) {
  v.canonicalize();
  return v;
}

double circD(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

const mpfr_prec_t kSampleBits = digitsToBits(40);

Complex atPrecision(const Complex& z, mpfr_prec_t bits) {
  return {z.re.withPrecision(bits), z.im.withPrecision(bits)};
}

TrigPoly atPrecision(const TrigPoly& P, mpfr_prec_t bits) {
  return {atPrecision(P.c0, bits), atPrecision(P.c1, bits), atPrecision(P.c2, bits),
          P.alpha.withPrecision(bits), P.beta.withPrecision(bits)};
}

// Returns +1 when a <= b holds certainly, -1 when a > b holds certainly.
int certifiedLessEq(const Real& a, const Real& b, const char* what) {
  if (a.upper() <= b.lower()) return 1;
  if (a.lower() > b.upper()) return -1;
  throw PrecisionError(std::string(what) + ": enclosures overlap");
}

std::vector<double> capWitnesses(std::vector<double> v) {
  if (v.size() > kWitnessCap) v.resize(kWitnessCap);
  return v;
}

}  // namespace

// --- IntervalUnion -------------------------------------------------------

void IntervalUnion::insert(mpq_class lo, mpq_class hi) {
  if (hi <= lo) return;
  std::vector<Interval> out;
  out.reserve(intervals_.size() + 1);
  bool placed = false;
  for (auto& iv : intervals_) {
    if (iv.hi < lo) {
      out.push_back(std::move(iv));
    } else if (hi < iv.lo) {
      if (!placed) {
        out.push_back({lo, hi});
        placed = true;
      }
      out.push_back(std::move(iv));
    } else {
      if (iv.lo < lo) lo = iv.lo;
      if (iv.hi > hi) hi = iv.hi;
    }
  }
  if (!placed) out.push_back({lo, hi});
  intervals_ = std::move(out);
}

void IntervalUnion::addArc(mpq_class lo, mpq_class hi) {
  if (hi < lo) std::swap(lo, hi);
  const mpq_class len = hi - lo;
  if (len >= 1) {
    insert(0, 1);
    return;
  }
  const mpq_class l = fracQ(lo);
  const mpq_class h = l + len;
  if (h <= 1) {
    insert(l, h);
  } else {
    insert(l, 1);
    insert(0, h - 1);
  }
}

void IntervalUnion::addClipped(const mpq_class& lo, const mpq_class& hi) {
  const mpq_class l = lo < 0 ? mpq_class(0) : lo;
  const mpq_class h = hi > 1 ? mpq_class(1) : hi;
  insert(l, h);
}

void IntervalUnion::add(const IntervalUnion& other) {
  for (const auto& iv : other.intervals_) insert(iv.lo, iv.hi);
}

mpq_class IntervalUnion::measure() const {
  mpq_class m = 0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

bool IntervalUnion::contains(const mpq_class& x) const {
  const mpq_class r = fracQ(x);
  for (const auto& iv : intervals_) {
    if (iv.lo <= r && r <= iv.hi) return true;
  }
  return r == 0 && !intervals_.empty() && intervals_.back().hi == 1;
}

bool IntervalUnion::mayContain(const Real& x) const {
  if (intervals_.empty()) return false;
  const mpq_class lo = x.lower();
  const mpq_class width = x.upper() - lo;
  if (width >= 1) return true;
  const mpq_class l = fracQ(lo);
  const mpq_class h = l + width;
  auto hits = [&](const mpq_class& a, const mpq_class& b) {
    for (const auto& iv : intervals_) {
      if (iv.lo <= b && a <= iv.hi) return true;
    }
    return false;
  };
  if (h <= 1) return hits(l, h);
  return hits(l, 1) || hits(0, h - 1);
}

IntervalUnion IntervalUnion::complement() const {
  IntervalUnion out;
  mpq_class cursor = 0;
  for (const auto& iv : intervals_) {
    if (cursor < iv.lo) out.intervals_.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < 1) out.intervals_.push_back({cursor, 1});
  return out;
}

mpq_class IntervalUnion::complementPoint(const mpq_class& u) const {
  const IntervalUnion gaps = complement();
  const mpq_class total = gaps.measure();
  if (total == 0) throw DomainError("the complement of the exceptional set is empty");
  mpq_class target = u * total;
  for (const auto& iv : gaps.intervals_) {
    const mpq_class len = iv.hi - iv.lo;
    if (target < len) return iv.lo + target;
    target -= len;
  }
  return gaps.intervals_.back().lo;
}

double logFactor(double n) { return std::max(std::log(n), 1.0); }

// --- Gap and reciprocal-sum lemmas --------------------------------------

mpz_class convergentDenominator(const Real& alpha, std::size_t n) {
  const ContinuedFraction cf = expandAvailable(alpha, n + 1);
  if (cf.size() > n) return cf.q[n];
  if (cf.terminal) {
    throw TerminalInputError("index " + std::to_string(n) +
                             " reaches past the last quotient of a rational input");
  }
  throw DepthExhaustedError("q_" + std::to_string(n) + " is not certified", cf.validDepth());
}

namespace {

void requireWindow(const std::vector<long>& ks, const mpz_class& qn) {
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) throw DomainError("ks must be strictly increasing");
  }
  if (ks.size() >= 2 && mpz_class(ks.back()) - ks.front() >= qn) {
    throw HypothesisError(HypothesisKind::Window,
                          "window hypothesis fails: k_m - k_1 = " +
                              std::to_string(ks.back() - ks.front()) + " >= q_n = " + qn.get_str());
  }
}

}  // namespace

GapReport gapCheck(const std::vector<long>& ks, const Real& alpha, std::size_t n) {
  return gapCheck(ks, alpha, convergentDenominator(alpha, n));
}

GapReport gapCheck(const std::vector<long>& ks, const Real& alpha, const mpz_class& qn) {
  requireWindow(ks, qn);
  GapReport r;
  r.qn = qn;
  r.threshold = canon(mpq_class(1, 2 * qn));
  r.pairs = ks.size() < 2 ? 0 : ks.size() * (ks.size() - 1) / 2;
  if (r.pairs == 0) {
    r.vacuous = true;
    r.pass = true;
    return r;
  }
  // Only the differences matter; each distinct difference is evaluated once.
  std::vector<char> seen(static_cast<std::size_t>(ks.back() - ks.front()) + 1, 0);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = i + 1; j < ks.size(); ++j) seen[ks[j] - ks[i]] = 1;
  }
  const Real thr = Real::fromRational(r.threshold, alpha.precision());
  bool first = true;
  bool ok = true;
  for (std::size_t d = 1; d < seen.size(); ++d) {
    if (!seen[d]) continue;
    const Real dist = circleDistance(alpha.mulInteger(static_cast<long>(d)));
    if (first || mpfr_less_p(dist.mid().get(), r.minPairwise.mid().get())) {
      r.minPairwise = dist;
      r.argminDifference = static_cast<long>(d);
      first = false;
    }
    if (certifiedLessEq(thr, dist, "gap check") < 0) ok = false;
  }
  r.pass = ok;
  return r;
}

mpq_class reciprocalSumBound(const mpz_class& q) {
  mpq_class harmonic = 0;
  for (mpz_class j = 1; j <= q; ++j) harmonic += mpq_class(1, j);
  harmonic.canonicalize();
  return canon(8 * q + 4 * q * harmonic);
}

SumReport reciprocalSumLemma(const std::vector<long>& ks, const Real& alpha, const Real& x,
                             std::size_t n) {
  return reciprocalSumLemma(ks, alpha, x, convergentDenominator(alpha, n));
}

SumReport reciprocalSumLemma(const std::vector<long>& ks, const Real& alpha, const Real& x,
                             const mpz_class& qn) {
  requireWindow(ks, qn);
  const mpfr_prec_t prec = std::max(alpha.precision(), x.precision());
  SumReport r;
  r.bound = Real::fromRational(reciprocalSumBound(qn), prec);
  r.sum = Real(0, prec);
  r.referenceTerm = qn.get_d() * logFactor(qn.get_d());
  const Real sep = Real::fromRational(canon(mpq_class(1, 4 * qn)), prec);
  std::vector<double> witnesses;
  for (long k : ks) {
    const Real d = circleDistance(alpha.mulInteger(k) - x);
    if (d.upper() < sep.lower()) {
      throw HypothesisError(HypothesisKind::Separation,
                            "separation hypothesis fails at k = " + std::to_string(k) +
                                ": ||k alpha - x|| < 1/(4 q_n)");
    }
    if (d.lower() < sep.lower()) {
      throw PrecisionError("separation hypothesis is ambiguous at k = " + std::to_string(k));
    }
    const Real term = Real(1, prec) / d;
    if (witnesses.size() < kWitnessCap) witnesses.push_back(term.toDouble());
    r.sum += term;
  }
  r.witnesses = capWitnesses(std::move(witnesses));
  r.constantFit = r.sum.toDouble() / r.referenceTerm;
  r.pass = certifiedLessEq(r.sum, r.bound, "reciprocal-sum bound") > 0;
  return r;
}

// --- Exceptional sets ----------------------------------------------------

namespace {

constexpr int kInitialLevel = 12;
constexpr int kMaxLevel = 44;

struct CellPoints {
  std::vector<double> centers;
  std::vector<double> margins;
  double cap = 0;
  double t1 = 0;
  double t2 = 0;

  // 0: certainly clear, 1: certainly in a superlevel set, 2: undecided.
  int classify(double u, double v) const {
    double fUp = 0, fLo = 0, gUp = 0, gLo = 0;
    const double cap2 = cap * cap;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double p = centers[i];
      const double m = margins[i];
      double dmin;
      if (u <= p && p <= v) {
        dmin = 0;
      } else {
        dmin = std::min(circD(p, u), circD(p, v));
      }
      double anti = p + 0.5;
      if (anti >= 1) anti -= 1;
      const double dmax = (u <= anti && anti <= v) ? 0.5 : std::max(circD(p, u), circD(p, v));
      const double lo = dmin - m;
      const double hi = dmax + m;
      const double termUp = lo <= 0 ? cap : std::min(cap, 1.0 / lo);
      const double termLo = std::min(cap, 1.0 / hi);
      fUp += termUp;
      fLo += termLo;
      gUp += lo <= 0 ? cap2 : std::min(cap2, 1.0 / (lo * lo));
      gLo += std::min(cap2, 1.0 / (hi * hi));
    }
    constexpr double rel = 1e-12;
    fUp *= 1 + rel;
    gUp *= 1 + rel;
    fLo *= 1 - rel;
    gLo *= 1 - rel;
    if (fLo > t1 || gLo > t2) return 1;
    if (fUp <= t1 && gUp <= t2) return 0;
    return 2;
  }
};

struct Cell {
  std::uint64_t index;
  int level;
};

mpq_class dyadic(std::uint64_t index, int level) {
  mpq_class q{mpz_class(static_cast<unsigned long>(index))};
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(level));
  return q;
}

}  // namespace

ExceptionalSet buildExceptionalSet(const std::vector<Real>& points, const mpq_class& delta,
                                   unsigned threads) {
  if (points.empty()) throw DomainError("exceptional set needs at least one point");
  if (delta <= 0 || delta >= 1) throw DomainError("delta must lie in (0, 1)");
  ExceptionalSet E;
  E.delta = delta;
  E.n = points.size();
  const mpz_class N(static_cast<unsigned long>(E.n));
  E.radius = canon(delta / (4 * N));

  CellPoints cp;
  cp.centers.reserve(E.n);
  cp.margins.reserve(E.n);
  for (const Real& p : points) {
    const mpq_class c = fracQ(toRational(p.mid().get()));
    const mpq_class r = E.radius + p.radius();
    E.stage1.addArc(c - r, c + r);
    double cd = c.get_d();
    if (cd >= 1) cd = 0;
    cp.centers.push_back(cd);
    cp.margins.push_back(1e-15 + p.radiusUpper());
  }
  E.stage1Measure = E.stage1.measure();

  const double Nd = static_cast<double>(E.n);
  const double dd = delta.get_d();
  E.cap = 4 * Nd / dd;
  E.threshold1 = 16 * Nd / dd * std::log(4 * Nd / dd);
  E.threshold2 = 32 * Nd * Nd / (dd * dd);
  cp.cap = E.cap;
  cp.t1 = E.threshold1;
  cp.t2 = E.threshold2;

  const std::size_t roots = std::size_t{1} << kInitialLevel;
  struct Local {
    std::vector<Cell> hits;
    std::size_t examined = 0;
    std::size_t ambiguous = 0;
  };
  std::vector<Local> locals(roots);
  parallelFor(roots, threads, [&](std::size_t r) {
    Local& loc = locals[r];
    std::vector<Cell> stack{{r, kInitialLevel}};
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      ++loc.examined;
      const double w = std::ldexp(1.0, -c.level);
      const double u = static_cast<double>(c.index) * w;
      const int verdict = cp.classify(u, u + w);
      if (verdict == 0) continue;
      if (verdict == 1) {
        loc.hits.push_back(c);
        continue;
      }
      if (c.level >= kMaxLevel) {
        ++loc.ambiguous;
        loc.hits.push_back(c);
        continue;
      }
      // Push the right half first so the left half is handled first.
      stack.push_back({2 * c.index + 1, c.level + 1});
      stack.push_back({2 * c.index, c.level + 1});
    }
  });

  IntervalUnion cover;
  for (const auto& loc : locals) {
    E.cellsExamined += loc.examined;
    E.ambiguousLeaves += loc.ambiguous;
    for (const Cell& c : loc.hits) cover.addClipped(dyadic(c.index, c.level), dyadic(c.index + 1, c.level));
  }
  E.set = E.stage1;
  E.set.add(cover);
  E.measure = E.set.measure();
  E.stage2Measure = E.measure - E.stage1Measure;
  if (E.measure > delta) {
    throw BudgetInfeasibleError("exceptional set measure " + std::to_string(E.measure.get_d()) +
                                " exceeds delta = " + std::to_string(dd));
  }
  return E;
}

OutsideSumsReport sumBoundsOutside(const std::vector<Real>& points, const ExceptionalSet& E,
                                   std::size_t samples, std::uint64_t seed, unsigned threads) {
  if (E.measure >= 1) throw DomainError("the complement of the exceptional set is empty");
  OutsideSumsReport r;
  r.n = points.size();
  r.samples = samples;
  r.seed = seed;
  const double Nd = static_cast<double>(r.n);
  const double dd = E.delta.get_d();
  r.design1 = 16 * std::log(4 * Nd / dd) / (dd * logFactor(Nd));
  r.design2 = 32 / (dd * dd);
  mpfr_prec_t prec = 64;
  for (const Real& p : points) prec = std::max(prec, p.precision());
  r.maxSum1 = Real(0, prec);
  r.maxSum2 = Real(0, prec);
  if (samples == 0) return r;

  const mpz_class N(static_cast<unsigned long>(r.n));
  const Real T1 = Real::fromRational(canon(16 * N / E.delta), prec) *
                  log(Real::fromRational(canon(4 * N / E.delta), prec));
  const Real T2 = Real::fromRational(canon(32 * N * N / (E.delta * E.delta)), prec);
  const mpq_class cap = canon(4 * N / E.delta);

  Rng rng(seed);
  std::vector<mpq_class> xs(samples);
  for (auto& x : xs) x = E.set.complementPoint(dyadicUniform(rng));

  struct Result {
    Real s1, s2;
    double maxTerm = 0;
    bool termOk = true, ok1 = true, ok2 = true;
  };
  std::vector<Result> results(samples);
  parallelFor(samples, threads, [&](std::size_t i) {
    const Real x = Real::fromRational(xs[i], prec);
    Result res{Real(0, prec), Real(0, prec)};
    const Real one(1, prec);
    for (const Real& p : points) {
      const Real d = circleDistance(x - p);
      const Real term = one / d;
      res.s1 += term;
      res.s2 += term * term;
      res.maxTerm = std::max(res.maxTerm, term.toDouble());
      if (term.upper() > cap) res.termOk = false;
    }
    res.ok1 = certifiedLessEq(res.s1, T1, "first outside-sum bound") > 0;
    res.ok2 = certifiedLessEq(res.s2, T2, "second outside-sum bound") > 0;
    results[i] = std::move(res);
  });

  for (std::size_t i = 0; i < samples; ++i) {
    const Result& res = results[i];
    if (i == 0 || mpfr_greater_p(res.s1.mid().get(), r.maxSum1.mid().get())) {
      r.maxSum1 = res.s1;
      r.argmax1 = xs[i].get_d();
    }
    if (i == 0 || mpfr_greater_p(res.s2.mid().get(), r.maxSum2.mid().get())) {
      r.maxSum2 = res.s2;
      r.argmax2 = xs[i].get_d();
    }
    r.maxTerm = std::max(r.maxTerm, res.maxTerm);
    r.termPass = r.termPass && res.termOk;
    r.pass1 = r.pass1 && res.ok1;
    r.pass2 = r.pass2 && res.ok2;
  }
  r.fitted1 = r.maxSum1.toDouble() / (Nd * logFactor(Nd));
  r.fitted2 = r.maxSum2.toDouble() / (Nd * Nd);
  return r;
}

// --- Product reciprocal sums ---------------------------------------------

std::size_t admissibleIndex(const ContinuedFraction& cf, const mpz_class& Qk,
                            const mpq_class& gammaLo, const mpq_class& gammaHi) {
  std::optional<std::size_t> best;
  for (std::size_t n = 0; n < cf.size(); ++n) {
    const mpq_class q(cf.q[n]);
    if (gammaLo * q <= Qk && Qk <= gammaHi * q) best = n;
  }
  if (!best) {
    throw HypothesisError(HypothesisKind::Admissibility,
                          "Q_k = " + Qk.get_str() +
                              " is outside [gamma q_n, gamma_hat q_n] for every certified n <= " +
                              std::to_string(cf.validDepth()));
  }
  return *best;
}

Real reciprocalProductSum(const TrigPoly& P, const Real& x, const mpz_class& count) {
  const mpfr_prec_t prec = std::max(x.precision(), P.alpha.precision());
  Real sum(0, prec);
  const Real one(1, prec);
  for (mpz_class n = 0; n < count; ++n) {
    sum += one / abs(evalP(P, x.addInteger(n)));
  }
  return sum;
}

namespace {

// Preimage under x -> lambda x (mod 1), x in [0, 1), of a set on the circle.
IntervalUnion preimage(const IntervalUnion& image, const Real& lambda) {
  IntervalUnion out;
  const mpq_class lo = std::min(mpq_class(0), lambda.lower());
  const mpq_class hi = std::max(mpq_class(0), lambda.upper());
  const mpz_class sLo = floorQ(lo) - 1;
  const mpz_class sHi = ceilQ(hi) + 1;
  for (const auto& iv : image.intervals()) {
    for (mpz_class s = sLo; s <= sHi; ++s) {
      const Real a = Real::fromRational(canon(iv.lo + s), lambda.precision()) / lambda;
      const Real b = Real::fromRational(canon(iv.hi + s), lambda.precision()) / lambda;
      const mpq_class l = std::min(a.lower(), b.lower());
      const mpq_class h = std::max(a.upper(), b.upper());
      if (h <= 0 || l >= 1) continue;
      out.addClipped(l, h);
    }
  }
  return out;
}

// delta' such that the preimage of a set of measure delta' under x -> lambda x
// has measure at most `budget`.
mpq_class rescaledBudget(const mpq_class& budget, const Real& lambda) {
  const Real a = abs(lambda);
  const mpz_class c = std::max(mpz_class(1), ceilQ(a.upper()));
  mpq_class d = canon(budget * a.lower() / c);
  if (d >= 1) d = mpq_class(1, 2);
  return d;
}

Real designT1(std::size_t n, const mpq_class& delta, mpfr_prec_t prec) {
  const mpz_class N(static_cast<unsigned long>(n));
  return Real::fromRational(canon(16 * N / delta), prec) *
         log(Real::fromRational(canon(4 * N / delta), prec));
}

Real designT2(std::size_t n, const mpq_class& delta, mpfr_prec_t prec) {
  const mpz_class N(static_cast<unsigned long>(n));
  return Real::fromRational(canon(32 * N * N / (delta * delta)), prec);
}

// Integer parts of beta (x + n) - gamma2 over x in [0, 1), padded outward.
std::pair<long, long> integerPartRange(const Real& beta, const Real& gamma2, long n) {
  const Real v0 = beta.mulInteger(n) - gamma2;
  const Real v1 = v0 + beta;
  const mpq_class lo = std::min(v0.lower(), v1.lower());
  const mpq_class hi = std::max(v0.upper(), v1.upper());
  return {floorQ(lo).get_si(), floorQ(hi).get_si()};
}

}  // namespace

ProductSumReport productReciprocalSumAnalysis(const TrigPoly& P, const mpz_class& Qk,
                                              const mpq_class& gammaLo, const mpq_class& gammaHi,
                                              const mpq_class& delta,
                                              const ProductSumOptions& options) {
  P.validate();
  if (delta <= 0 || delta >= 1) throw DomainError("delta must lie in (0, 1)");
  if (gammaLo <= 0 || gammaHi < gammaLo) throw DomainError("need 0 < gamma <= gamma_hat");
  if (Qk < 2) throw DomainError("Q_k must be at least 2");
  if (Qk > 10000000) throw CapExceededError("Q_k above 10^7 is outside desk scale");

  const mpfr_prec_t prec = std::max(P.alpha.precision(), P.beta.precision());
  const Real ratio = P.alpha / P.beta;
  const ContinuedFraction cf = expandAvailable(ratio, 400);
  if (cf.terminal) {
    throw HypothesisError(HypothesisKind::Admissibility, "alpha/beta is rational");
  }

  ProductSumReport r;
  r.Qk = Qk;
  r.gammaLo = gammaLo;
  r.gammaHi = gammaHi;
  r.delta = delta;
  r.n = admissibleIndex(cf, Qk, gammaLo, gammaHi);
  r.qn = cf.q[r.n];
  r.samples = options.samples;
  r.seed = options.seed;

  const TorusZeroData zeros = findTorusZeros(P.c0, P.c1, P.c2);
  r.zeroClass = zeros.cls;
  const long Q = Qk.get_si();

  Real boundSum(0, prec);
  if (zeros.zeros.empty()) {
    // One modulus exceeds the sum of the other two: |p| >= that excess.
    const Real m0 = abs(P.c0), m1 = abs(P.c1), m2 = abs(P.c2);
    Real excess;
    bool found = false;
    for (const Real& e : {m0 - m1 - m2, m1 - m0 - m2, m2 - m0 - m1}) {
      if (e.lower() > 0) {
        excess = e;
        found = true;
      }
    }
    if (!found) throw PrecisionError("cannot certify the zero-free lower bound on |p|");
    r.lowerConstant = excess.lower().get_d();
    r.bound = Real::fromRational(canon(mpq_class(Qk) / excess.lower()), prec);
  } else {
    const LowerBoundReport lb =
        lowerBoundConstant(P.c0, P.c1, P.c2, options.gridN, zeros, options.threads);
    if (!(lb.constant > 0)) throw InternalConsistencyError("empirical lower-bound constant is not positive");
    r.lowerConstant = lb.constant;
    const mpz_class zc(static_cast<unsigned long>(zeros.zeros.size()));
    const mpq_class share = canon(delta / zc);

    for (const TorusZero& z : zeros.zeros) {
      ZeroCaseAnalysis za;
      za.budget = share;
      za.lambda = P.alpha + z.t * P.beta;
      const auto sign = za.lambda.sign();
      if (options.caseChoice == CaseChoice::ForceCase2) {
        if (sign && *sign != 0) {
          throw DomainError("Case 2 requested but alpha + t beta is certainly nonzero");
        }
        za.caseUsed = 2;
        za.forced = !sign.has_value();
      } else if (!sign) {
        throw UnresolvedCaseError("the enclosure of alpha + t beta straddles 0");
      } else {
        za.caseUsed = *sign == 0 ? 2 : 1;
      }

      IntervalUnion zoneSet;
      if (za.caseUsed == 1) {
        const Real base = z.gamma1 + z.t * z.gamma2;
        std::vector<Real> pts;
        for (long n = 0; n < Q; ++n) {
          const auto [l0, l1] = integerPartRange(P.beta, z.gamma2, n);
          const Real ln = za.lambda.mulInteger(n);
          for (long l = l0; l <= l1; ++l) {
            const Real core = base + z.t.mulInteger(l) - ln;
            pts.push_back(core);          // m = 0
            pts.push_back(core + z.t);    // m = -1
          }
        }
        za.pointCount = pts.size();
        za.rescaledDelta = rescaledBudget(share, za.lambda);
        const ExceptionalSet Ez = buildExceptionalSet(pts, za.rescaledDelta, options.threads);
        zoneSet = preimage(Ez.set, za.lambda);
        za.designBound = designT1(pts.size(), za.rescaledDelta, prec);
      } else {
        const Real xi0 = z.gamma1 + z.t * z.gamma2;
        const Real xi1 = xi0 + z.t;
        const mpq_class nearThr = canon(mpq_class(1, 4 * r.qn));
        const Real thr = Real::fromRational(nearThr, prec);
        std::map<long, long> farCount;
        for (long n = 0; n < Q; ++n) {
          const auto [l0, l1] = integerPartRange(P.beta, z.gamma2, n);
          bool near = false;
          for (long l = l0; l <= l1 && !near; ++l) {
            const Real rl = ratio.mulInteger(l);
            for (const Real* xi : {&xi0, &xi1}) {
              if (circleDistance(rl - *xi).lower() <= thr.upper()) near = true;
            }
          }
          if (near) {
            za.nearSet.push_back(n);
          } else {
            for (long l = l0; l <= l1; ++l) ++farCount[l];
          }
        }
        const mpq_class capQ = 8 * (gammaHi / gammaLo + 1);
        za.nearCap = floorQ(capQ).get_ui();
        if (za.nearSet.size() > za.nearCap) {
          throw InternalConsistencyError("near set has " + std::to_string(za.nearSet.size()) +
                                         " elements, above the cap " + std::to_string(za.nearCap));
        }
        // Far terms: the lemma bound on each block of q_n consecutive
        // integer parts, times the largest multiplicity, for both xi.
        za.farBound = Real(0, prec);
        if (!farCount.empty()) {
          long mult = 0;
          for (const auto& [l, c] : farCount) mult = std::max(mult, c);
          const mpz_class span(farCount.rbegin()->first - farCount.begin()->first + 1);
          mpz_class blocks;
          mpz_cdiv_q(blocks.get_mpz_t(), span.get_mpz_t(), r.qn.get_mpz_t());
          za.farBound = Real::fromRational(canon(2 * mult * blocks * reciprocalSumBound(r.qn)), prec);
        }
        za.nearBound = Real(0, prec);
        if (!za.nearSet.empty()) {
          if (P.alpha.containsZero()) throw DomainError("alpha must be nonzero");
          std::vector<Real> pts;
          for (long n : za.nearSet) pts.push_back(z.gamma1 - P.alpha.mulInteger(n));
          za.pointCount = pts.size();
          za.rescaledDelta = rescaledBudget(share, P.alpha);
          const ExceptionalSet Ez = buildExceptionalSet(pts, za.rescaledDelta, options.threads);
          zoneSet = preimage(Ez.set, P.alpha);
          za.nearBound = designT2(pts.size(), za.rescaledDelta, prec);
        }
        za.designBound = za.farBound + za.nearBound;
      }
      za.measure = zoneSet.measure();
      r.exceptional.add(zoneSet);
      boundSum += za.designBound;
      r.perZero.push_back(std::move(za));
    }
    const Real C = Real::fromRational(mpq_class(r.lowerConstant), prec);
    r.bound = boundSum / C;
  }
  r.measure = r.exceptional.measure();
  if (r.measure > delta) {
    throw BudgetInfeasibleError("combined exceptional set measure exceeds delta");
  }

  const double qd = Qk.get_d();
  const double ref = qd * logFactor(qd);
  r.boundConstant = r.bound.toDouble() / ref;
  r.maxSum = Real(0, prec);
  r.pass = true;
  if (options.samples == 0) return r;

  Rng rng(options.seed);
  std::vector<mpq_class> xs(options.samples);
  for (auto& x : xs) x = r.exceptional.complementPoint(dyadicUniform(rng));
  const TrigPoly Ps = atPrecision(P, kSampleBits);
  std::vector<Real> sums(options.samples);
  parallelFor(options.samples, options.threads, [&](std::size_t i) {
    sums[i] = reciprocalProductSum(Ps, Real::fromRational(xs[i], kSampleBits), Qk);
  });
  std::vector<double> shown;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (i == 0 || mpfr_greater_p(sums[i].mid().get(), r.maxSum.mid().get())) {
      r.maxSum = sums[i];
      r.argmax = xs[i].get_d();
    }
    if (shown.size() < kWitnessCap) shown.push_back(sums[i].toDouble());
    if (certifiedLessEq(sums[i], r.bound, "product reciprocal sum bound") < 0) r.pass = false;
  }
  r.sampleSums = std::move(shown);
  r.fittedConstant = r.maxSum.toDouble() / ref;
  return r;
}

}  // namespace tfa
