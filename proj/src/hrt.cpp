#include "tfa/hrt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "tfa/circle.hpp"
#include "tfa/errors.hpp"
#include "tfa/parallel.hpp"
#include "tfa/parse.hpp"
#include "tfa/random.hpp"

namespace tfa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> csvRows(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(line);
  }
  return rows;
}

Real cross(const PlanePoint& u, const PlanePoint& v) { return u.a * v.b - u.b * v.a; }

PlanePoint minus(const PlanePoint& u, const PlanePoint& v) { return {u.a - v.a, u.b - v.b}; }

PlanePoint apply(const TransformStep& t, const PlanePoint& p) {
  return {t.matrix[0] * p.a + t.matrix[1] * p.b + t.shift[0],
          t.matrix[2] * p.a + t.matrix[3] * p.b + t.shift[1]};
}

bool lexLess(const PlanePoint& l, const PlanePoint& r) {
  const int c = mpfr_cmp(l.a.mid().get(), r.a.mid().get());
  if (c != 0) return c < 0;
  return mpfr_cmp(l.b.mid().get(), r.b.mid().get()) < 0;
}

// ln of a positive integer in double, safe beyond the double range.
double lnInteger(const mpz_class& n) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double ratioDouble(const mpz_class& num, const mpz_class& den) {
  return mpq_class(num, den).get_d();
}

struct FactorLog {
  Real log;
  Real phase;
  bool clamped = false;
};

FactorLog factorLog(const TrigPoly& P, const Real& arg) {
  const mpfr_prec_t prec = arg.precision();
  static const mpq_class floor2(1, mpz_class("1" + std::string(600, '0')));
  const Complex z = evalP(P, arg);
  const Real a2 = abs2(z);
  if (a2.upper() < floor2) {
    return {log(Real::fromRational(mpq_class(1, mpz_class("1" + std::string(300, '0'))), prec)),
            Real(0, prec), true};
  }
  Real half = log(a2);
  half = half / Real(2, prec);
  return {half, argTurns(z), false};
}

}  // namespace

// --- Configuration -----------------------------------------------------------

Configuration readConfigurationCsv(std::istream& in, int digits) {
  const auto rows = csvRows(in);
  if (rows.size() != 4) {
    throw ParseError("configuration CSV needs four rows, found " + std::to_string(rows.size()));
  }
  Configuration cfg;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto comma = rows[i].find(',');
    if (comma == std::string::npos || rows[i].find(',', comma + 1) != std::string::npos) {
      throw ParseError("configuration row " + std::to_string(i + 1) + " needs two columns");
    }
    cfg.points[i] = {parseReal(trim(rows[i].substr(0, comma)), digits),
                     parseReal(trim(rows[i].substr(comma + 1)), digits)};
  }
  return cfg;
}

std::vector<Real> readPointsCsv(std::istream& in, int digits) {
  std::vector<Real> points;
  for (const auto& row : csvRows(in)) points.push_back(parseReal(row, digits));
  return points;
}

NormalizedConfiguration normalizeConfiguration(const Configuration& cfg) {
  const auto& p = cfg.points;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != i) rest.push_back(j);
    }
    const Real c = cross(minus(p[rest[1]], p[rest[0]]), minus(p[rest[2]], p[rest[0]]));
    if (c.containsZero()) candidates.push_back(i);
  }
  if (candidates.empty()) {
    throw HypothesisError(HypothesisKind::Configuration, "no three of the points are collinear");
  }
  if (candidates.size() > 1) {
    throw HypothesisError(HypothesisKind::Configuration,
                          "more than one collinear triple: the points are (nearly) all collinear");
  }

  NormalizedConfiguration out;
  out.offLine = candidates[0];
  std::vector<std::size_t> line;
  for (std::size_t j = 0; j < 4; ++j) {
    if (j != out.offLine) line.push_back(j);
  }
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t v = u + 1; v < 3; ++v) {
      const PlanePoint d = minus(p[line[u]], p[line[v]]);
      const auto s = (d.a * d.a + d.b * d.b).sign();
      if (!s || *s == 0) {
        throw HypothesisError(HypothesisKind::Configuration, "the collinear points are not distinct");
      }
    }
  }
  out.base = line[0];
  for (std::size_t j : line) {
    if (lexLess(p[j], p[out.base])) out.base = j;
  }
  std::vector<std::size_t> others;
  for (std::size_t j : line) {
    if (j != out.base) others.push_back(j);
  }
  out.alphaIndex = others[0];
  out.betaIndex = others[1];

  const PlanePoint base = p[out.base];
  const PlanePoint d = minus(p[out.alphaIndex], base);
  const auto offSign = cross(d, minus(p[out.offLine], base)).sign();
  if (!offSign || *offSign == 0) {
    throw HypothesisError(HypothesisKind::Configuration,
                          "the fourth point lies on the line within precision");
  }

  const mpfr_prec_t prec = std::max(base.a.precision(), base.b.precision());
  const Real zero(0, prec), one(1, prec);
  const Real len = sqrt(d.a * d.a + d.b * d.b);
  const Real c = d.a / len, s = d.b / len;

  out.steps.push_back({"translate", {one, zero, zero, one}, {-base.a, -base.b}});
  out.steps.push_back({"rotate", {c, s, -s, c}, {zero, zero}});
  PlanePoint off = p[out.offLine];
  for (const auto& step : out.steps) off = apply(step, off);
  out.steps.push_back({"shear", {one, -(off.a / off.b), zero, one}, {zero, zero}});
  const Real v = off.b;
  out.steps.push_back({"scale", {v, zero, zero, one / v}, {zero, zero}});

  for (std::size_t i = 0; i < 4; ++i) {
    PlanePoint q = p[i];
    for (const auto& step : out.steps) q = apply(step, q);
    out.image[i] = q;
  }
  out.alpha = out.image[out.alphaIndex].a;
  out.beta = out.image[out.betaIndex].a;
  return out;
}

// --- Condition classifier ---------------------------------------------------

double growthProxy(const ContinuedFraction& cf, std::size_t depth) {
  double best = 0;
  for (std::size_t k = 1; k < depth && k + 1 < cf.size(); ++k) {
    if (cf.q[k] < 2) continue;
    best = std::max(best, ratioDouble(cf.q[k + 1], cf.q[k]) / lnInteger(cf.q[k]));
  }
  return best;
}

ConditionReport classifyCondition(const Real& ratio, std::size_t depth) {
  if (depth < 3) throw DomainError("classification needs depth >= 3");
  ConditionReport r;
  r.depth = depth;
  r.note = "finite-depth evidence over k <= depth; not a limsup verdict";
  const ContinuedFraction cf = expand(ratio, depth + 2);
  r.rational = cf.terminal;

  double qMax = 0, gMax = 0;
  for (std::size_t k = 1; k <= depth && k + 1 < cf.size(); ++k) {
    if (cf.q[k] < 2) continue;
    ConditionRow row;
    row.k = k;
    row.a = cf.quotients[k];
    row.q = cf.q[k];
    const double lq = lnInteger(cf.q[k]);
    row.quotientRatio = cf.quotients[k].get_d() / lq;
    row.growthRatio = ratioDouble(cf.q[k + 1], cf.q[k]) / lq;
    qMax = std::max(qMax, row.quotientRatio);
    gMax = std::max(gMax, row.growthRatio);
    row.quotientMax = qMax;
    row.growthMax = gMax;
    r.rows.push_back(row);
  }

  const std::vector<mpq_class> grid = {mpq_class(11, 10), mpq_class(5, 4), mpq_class(3, 2),
                                       mpq_class(2)};
  for (const auto& g : grid) {
    GammaWitness w;
    w.gamma = g;
    for (const auto& row : r.rows) {
      const mpz_class& next = cf.q[row.k + 1];
      mpz_class lhs, rhs;
      mpz_pow_ui(lhs.get_mpz_t(), next.get_mpz_t(), g.get_den().get_ui());
      mpz_pow_ui(rhs.get_mpz_t(), row.q.get_mpz_t(), g.get_num().get_ui());
      if (lhs >= rhs) {
        w.found = true;
        w.k = row.k;
        break;
      }
    }
    r.gammas.push_back(w);
  }

  if (r.rational) {
    r.quotientVerdict = r.growthVerdict = r.gammaVerdict = "rational";
    r.note = "terminal expansion: at least one of alpha, beta is rational relative to the other";
    return r;
  }
  const std::size_t half = r.rows.size() / 2;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    double& qm = i < half ? r.headQuotientMax : r.tailQuotientMax;
    double& gm = i < half ? r.headGrowthMax : r.tailGrowthMax;
    qm = std::max(qm, r.rows[i].quotientRatio);
    gm = std::max(gm, r.rows[i].growthRatio);
  }
  if (half == 0) {
    r.quotientVerdict = r.growthVerdict = "insufficient";
  } else {
    r.quotientVerdict = r.tailQuotientMax >= 0.5 * r.headQuotientMax ? "positive" : "decay";
    r.growthVerdict = r.tailGrowthMax >= 0.5 * r.headGrowthMax ? "positive" : "decay";
  }
  r.gammaVerdict = std::any_of(r.gammas.begin(), r.gammas.end(),
                               [](const GammaWitness& w) { return w.found; })
                       ? "witnessed"
                       : "none";
  return r;
}

// --- N_k construction -------------------------------------------------------

NkReport constructNk(const Real& alpha, const Real& beta, const mpq_class& s, std::size_t depth,
                     const mpq_class& c) {
  if (s <= 0 || s >= 1) throw DomainError("s must lie in (0, 1)");
  if (c <= 0) throw DomainError("c must be positive");
  if (depth < 2) throw DomainError("N_k construction needs depth >= 2");
  const auto bs = beta.sign();
  if (!bs || *bs == 0) throw DomainError("beta must be certainly nonzero");

  NkReport r;
  r.s = s;
  r.c = c;
  r.depth = depth;
  mpz_cdiv_q(r.mCap.get_mpz_t(), s.get_den().get_mpz_t(), s.get_num().get_mpz_t());
  r.mCap += 1;

  const mpfr_prec_t prec = std::max(alpha.precision(), beta.precision());
  const Real ratio = alpha / beta;
  const ContinuedFraction cf = expand(ratio, depth + 1);
  if (cf.terminal) throw TerminalInputError("alpha/beta is rational");
  const Real sReal = Real::fromRational(s, prec);
  const Real cReal = Real::fromRational(c, prec);

  for (std::size_t n = 1; n + 1 < cf.size(); ++n) {
    const mpz_class& qn = cf.q[n];
    if (qn < 2) continue;
    const Real rhs = cReal.mulInteger(qn) * logInteger(qn, prec);
    if (compareOrThrow(Real::fromInteger(cf.q[n + 1], prec), rhs, "quotient filter") < 0) continue;
    r.selected.push_back(n);

    bool found = false;
    for (mpz_class m = 1; m <= r.mCap; ++m) {
      const mpz_class N = m * qn;
      const Real frac = fractionalPart(Real::fromInteger(N, prec) / beta);
      if (compareOrThrow(frac, sReal, "{N/beta} <= s") > 0) continue;
      NkCertificate cert;
      cert.nIndex = n;
      cert.m = m;
      cert.qn = qn;
      cert.qNext = cf.q[n + 1];
      cert.Nk = N;
      cert.fracOverBeta = frac;
      cert.distAlphaBeta = circleDistance(ratio.mulInteger(N));
      cert.ratio = (logInteger(N, prec) * cert.distAlphaBeta).mulInteger(N);
      r.certificates.push_back(std::move(cert));
      found = true;
      break;
    }
    if (!found) {
      r.misses.push_back({n, "no m <= " + r.mCap.get_str() + " with {m q_n / beta} <= s"});
    }
  }
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    const double v = r.certificates[i].ratio.toDouble();
    r.ratioMin = i == 0 ? v : std::min(r.ratioMin, v);
    r.ratioMax = i == 0 ? v : std::max(r.ratioMax, v);
  }
  return r;
}

// --- Products and orbits ----------------------------------------------------

ProductLog productLog(const TrigPoly& P, const Real& x, std::size_t count) {
  const mpfr_prec_t prec = x.precision();
  ProductLog out{Real(0, prec), Real(0, prec), {}};
  for (std::size_t j = 0; j < count; ++j) {
    const FactorLog f = factorLog(P, x.addInteger(static_cast<unsigned long>(j)));
    if (f.clamped) out.clampEvents.push_back(static_cast<long long>(j));
    out.logMagnitude += f.log;
    out.phase += f.phase;
  }
  return out;
}

OrbitTrace orbit(const TrigPoly& P, const Real& x, long M, bool abortOnClamp) {
  if (M < 0) throw DomainError("orbit radius M must be non-negative");
  const mpfr_prec_t prec = x.precision();
  OrbitTrace t;
  t.x = x;
  t.M = M;
  t.logMagnitudes.assign(static_cast<std::size_t>(2 * M + 1), Real(0, prec));
  t.phases.assign(static_cast<std::size_t>(2 * M + 1), Real(0, prec));
  auto factor = [&](long j) {
    FactorLog f = factorLog(P, x.addInteger(j));
    if (f.clamped) {
      if (abortOnClamp) {
        throw ClampBreachError("|P(x + " + std::to_string(j) + ")| is below the clamp floor", j);
      }
      t.clampEvents.push_back(j);
    }
    return f;
  };
  const auto at = [M](long n) { return static_cast<std::size_t>(n + M); };
  for (long n = 1; n <= M; ++n) {
    const FactorLog f = factor(n - 1);
    t.logMagnitudes[at(n)] = t.logMagnitudes[at(n - 1)] + f.log;
    t.phases[at(n)] = t.phases[at(n - 1)] + f.phase;
  }
  for (long n = 1; n <= M; ++n) {
    const FactorLog f = factor(-n);
    t.logMagnitudes[at(-n)] = t.logMagnitudes[at(-n + 1)] - f.log;
    t.phases[at(-n)] = t.phases[at(-n + 1)] - f.phase;
  }
  return t;
}

void writeOrbitCsv(std::ostream& out, const OrbitTrace& trace, int digits) {
  out << "n,logMagnitude,phase\n";
  for (long n = -trace.M; n <= trace.M; ++n) {
    out << n << ',' << trace.logAt(n).toDecimal(digits) << ',' << trace.phaseAt(n).toDecimal(digits)
        << '\n';
  }
}

// --- Product comparison -----------------------------------------------------

bool indexIdentityHolds(const Real& y, const mpz_class& K) {
  const long k = K.get_si();
  const Real xPrime = y.addInteger(K);
  std::vector<long> left(static_cast<std::size_t>(k)), right(static_cast<std::size_t>(k));
  for (long n = 0; n < k; ++n) left[static_cast<std::size_t>(n)] = n;
  for (long n = 1; n <= k; ++n) right[static_cast<std::size_t>(n - 1)] = k - n;
  std::vector<long> sortedRight = right;
  std::sort(sortedRight.begin(), sortedRight.end());
  if (left != sortedRight) return false;
  // The matched arguments must enclose the same real.
  for (long n = 1; n <= k; ++n) {
    const Real r = xPrime.addInteger(-n);
    const Real l = y.addInteger(k - n);
    if (certainlyLess(l, r) || certainlyLess(r, l)) return false;
  }
  return true;
}

KeythReport keythCompare(const TrigPoly& P, const NkCertificate& cert, const mpq_class& delta,
                         const KeythOptions& options) {
  P.validate();
  const mpfr_prec_t prec = std::max(P.alpha.precision(), P.beta.precision());
  const auto bs = P.beta.sign();
  if (!bs || *bs == 0) throw DomainError("beta must be certainly nonzero");
  const Real ratio = P.alpha / P.beta;

  KeythReport r;
  r.Nk = cert.Nk;
  r.delta = delta;
  r.seed = options.seed;
  r.Pk = Real::fromInteger(cert.Nk, prec) / abs(P.beta);
  const auto K = r.Pk.floor();
  if (!K) throw PrecisionError("[P_k] is not certified at this precision");
  r.floorPk = *K;
  if (r.floorPk < 2) throw DomainError("[P_k] must be at least 2");
  if (r.floorPk > 10000000) throw CapExceededError("[P_k] above 10^7 is outside desk scale");
  r.perturbation = abs(cis2pi(ratio.mulInteger(cert.Nk)) - Complex(Real(1, prec), Real(0, prec)));
  r.gamma = mpq_class(r.floorPk, cert.qn);
  r.gamma.canonicalize();

  ProductSumOptions po;
  po.samples = 0;
  po.seed = options.seed;
  po.caseChoice = options.caseChoice;
  po.threads = options.threads;
  const ProductSumReport analysis =
      productReciprocalSumAnalysis(P, r.floorPk, r.gamma, r.gamma, delta, po);
  if (analysis.qn != cert.qn) {
    throw DomainError("the certificate's q_n is not a convergent denominator of P's alpha/beta");
  }
  r.exceptional = analysis.exceptional;
  r.measure = analysis.measure;

  std::vector<mpq_class> xs = options.xs;
  if (xs.empty()) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.samples; ++i) {
      xs.push_back(r.exceptional.complementPoint(dyadicUniform(rng)));
    }
  } else {
    for (const auto& x : xs) {
      if (r.exceptional.contains(x)) {
        throw SampleInExceptionalSetError("sample x = " + x.get_str() +
                                          " lies in the exceptional set");
      }
    }
  }

  const Real c1 = abs(P.c1);
  const std::size_t count = r.floorPk.get_ui();
  r.samples.resize(xs.size());
  parallelFor(xs.size(), options.threads, [&](std::size_t i) {
    KeythSample& s = r.samples[i];
    s.x = xs[i];
    const Real x = Real::fromRational(xs[i], prec);
    const Real y = x - r.Pk;
    const ProductLog lx = productLog(P, x, count);
    const ProductLog ly = productLog(P, y, count);
    s.logRatio = ly.logMagnitude - lx.logMagnitude;
    s.reciprocalSum = reciprocalProductSum(P, x, r.floorPk);
    s.logBound = c1 * r.perturbation * s.reciprocalSum;
    s.pass = compareOrThrow(s.logRatio, s.logBound, "product ratio against its bound") <= 0;
    s.identity = indexIdentityHolds(y, r.floorPk);
  });
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    r.pass = r.pass && s.pass;
    r.identity = r.identity && s.identity;
    const double lr = s.logRatio.toDouble(), lb = s.logBound.toDouble();
    r.maxLogRatio = i == 0 ? lr : std::max(r.maxLogRatio, lr);
    r.maxLogBound = i == 0 ? lb : std::max(r.maxLogBound, lb);
  }
  return r;
}

}  // namespace tfa
