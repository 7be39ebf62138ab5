#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tfa/errors.hpp"
#include "tfa/hrt.hpp"
#include "tfa/parse.hpp"

using namespace tfa;

namespace {

constexpr int kDigits = 60;
const mpfr_prec_t kBits = digitsToBits(kDigits);

Real rq(const mpq_class& q) { return Real::fromRational(q, kBits); }
Complex cr(long re) { return Complex::fromRational(re, 0, kBits); }

bool close(const Real& a, const Real& b, double tol) {
  return abs(a - b).upper() < mpq_class(tol);
}

Configuration canonical(const Real& alpha, const Real& beta) {
  return {{PlanePoint{rq(0), rq(1)}, PlanePoint{rq(0), rq(0)}, PlanePoint{alpha, rq(0)},
           PlanePoint{beta, rq(0)}}};
}

Configuration mapConfiguration(const Configuration& cfg, const std::array<Real, 4>& m,
                               const Real& sx, const Real& sy) {
  Configuration out;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = cfg.points[i];
    out.points[i] = {m[0] * p.a + m[1] * p.b + sx, m[2] * p.a + m[3] * p.b + sy};
  }
  return out;
}

// Denominators of [0; 1, 50, 1, 50, ...] by the recurrence.
std::vector<mpz_class> spikyDenominators(std::size_t count) {
  std::vector<mpz_class> q;
  mpz_class prev2 = 1, prev1 = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const long a = k == 0 ? 0 : (k % 2 == 1 ? 1 : 50);
    const mpz_class next = a * prev1 + prev2;
    q.push_back(next);
    prev2 = prev1;
    prev1 = next;
  }
  return q;
}

}  // namespace

TEST_CASE("normalisation of canonical, translated and rotated configurations") {
  const Real s2 = parseReal("sqrt:2", kDigits);
  const NormalizedConfiguration id = normalizeConfiguration(canonical(rq(1), s2));
  CHECK(close(id.alpha, rq(1), 1e-50));
  CHECK(close(id.beta, s2, 1e-50));
  CHECK(id.offLine == 0);
  CHECK(id.base == 1);
  REQUIRE(id.steps.size() == 4);
  for (const auto& step : id.steps) {
    CHECK(close(step.matrix[0], rq(1), 1e-50));
    CHECK(close(step.matrix[1], rq(0), 1e-50));
    CHECK(close(step.matrix[2], rq(0), 1e-50));
    CHECK(close(step.matrix[3], rq(1), 1e-50));
    CHECK(close(step.shift[0], rq(0), 1e-50));
    CHECK(close(step.shift[1], rq(0), 1e-50));
  }

  const std::array<Real, 4> identity{rq(1), rq(0), rq(0), rq(1)};
  const NormalizedConfiguration moved =
      normalizeConfiguration(mapConfiguration(canonical(rq(1), s2), identity, rq(2), rq(3)));
  CHECK(close(moved.alpha, rq(1), 1e-50));
  CHECK(close(moved.beta, s2, 1e-50));

  const Real th = pi(kBits) / Real(6, kBits);
  const std::array<Real, 4> rot{cos(th), -sin(th), sin(th), cos(th)};
  const NormalizedConfiguration rotated =
      normalizeConfiguration(mapConfiguration(canonical(rq(1), s2), rot, rq(0), rq(0)));
  CHECK(close(rotated.alpha, rq(1), 1e-50));
  CHECK(close(rotated.beta, s2, 1e-50));
  // The off-line point lands on (0, 1) and the line on the first axis.
  CHECK(close(rotated.image[0].a, rq(0), 1e-50));
  CHECK(close(rotated.image[0].b, rq(1), 1e-50));
  for (std::size_t i = 1; i < 4; ++i) CHECK(close(rotated.image[i].b, rq(0), 1e-50));
}

TEST_CASE("normalisation inverts random area-preserving affine maps") {
  const Real s2 = parseReal("sqrt:2", kDigits);
  const std::array<double, 3> t{0.0, 1.0, std::sqrt(2.0)};  // line coordinates of points 1..3
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> entry(-40, 40);
  int checked = 0;
  while (checked < 100) {
    const mpq_class a(entry(rng), 10), b(entry(rng), 10), c(entry(rng), 10);
    if (a == 0) continue;
    const mpq_class d = (1 + b * c) / a;  // det = 1 exactly
    const std::array<Real, 4> m{rq(a), rq(b), rq(c), rq(d)};
    const Real sx = rq(mpq_class(entry(rng), 7)), sy = rq(mpq_class(entry(rng), 7));
    const NormalizedConfiguration n = normalizeConfiguration(mapConfiguration(canonical(rq(1), s2), m, sx, sy));

    // Oracle: the base is the lexicographically smallest image; with det 1
    // the result is the pair of line coordinates relative to it, in input order.
    std::size_t base = 0;
    auto image = [&](std::size_t i) {
      return std::pair<double, double>{a.get_d() * t[i], c.get_d() * t[i]};
    };
    for (std::size_t i = 1; i < 3; ++i) {
      if (image(i) < image(base)) base = i;
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != base) others.push_back(i);
    }
    const Real coord[3] = {rq(0), rq(1), s2};
    CHECK(n.base == base + 1);
    CHECK(close(n.alpha, coord[others[0]] - coord[base], 1e-40));
    CHECK(close(n.beta, coord[others[1]] - coord[base], 1e-40));
    ++checked;
  }
}

TEST_CASE("degenerate configurations are rejected") {
  const Configuration allOnLine{{PlanePoint{rq(0), rq(0)}, PlanePoint{rq(1), rq(0)},
                                 PlanePoint{rq(2), rq(0)}, PlanePoint{rq(3), rq(0)}}};
  CHECK_THROWS_AS(normalizeConfiguration(allOnLine), HypothesisError);
  const Configuration square{{PlanePoint{rq(0), rq(0)}, PlanePoint{rq(1), rq(0)},
                              PlanePoint{rq(1), rq(1)}, PlanePoint{rq(0), rq(1)}}};
  CHECK_THROWS_AS(normalizeConfiguration(square), HypothesisError);
  const Configuration repeated{{PlanePoint{rq(0), rq(1)}, PlanePoint{rq(0), rq(0)},
                                PlanePoint{rq(0), rq(0)}, PlanePoint{rq(2), rq(0)}}};
  CHECK_THROWS_AS(normalizeConfiguration(repeated), HypothesisError);
}

TEST_CASE("configuration and point CSV ingestion") {
  std::istringstream cfg("# a, b\n0,1\n0,0\nrat:1/1, 0\nsqrt:2,0\n");
  const Configuration c = readConfigurationCsv(cfg, kDigits);
  CHECK(close(normalizeConfiguration(c).beta, parseReal("sqrt:2", kDigits), 1e-50));
  std::istringstream bad("0,1\n0,0\n1,0\n");
  CHECK_THROWS_AS(readConfigurationCsv(bad), ParseError);
  std::istringstream pts("rat:1/2\n\ngolden\n");
  CHECK(readPointsCsv(pts, kDigits).size() == 2);
}

TEST_CASE("condition classifier") {
  const ConditionReport golden = classifyCondition(parseReal("golden"), 40);
  CHECK_FALSE(golden.rational);
  CHECK(golden.quotientVerdict == "decay");
  CHECK(golden.rows.back().quotientRatio < 0.1);
  // ln q_k grows like k ln phi, so a_k / ln q_k = 1 / ln q_k.
  for (const auto& row : golden.rows) {
    CHECK(row.quotientRatio == doctest::Approx(1.0 / std::log(row.q.get_d())));
  }

  const ConditionReport geometric = classifyCondition(parseReal("cf:[0;1,2,4,8,16,...]"), 18);
  CHECK(geometric.quotientVerdict == "positive");
  double lowest = 1e300;
  for (const auto& row : geometric.rows) lowest = std::min(lowest, row.quotientRatio);
  CHECK(lowest > 0.5);
  CHECK(geometric.gammaVerdict == "witnessed");

  const ConditionReport rational = classifyCondition(parseReal("rat:5/7"), 10);
  CHECK(rational.rational);
  CHECK(rational.quotientVerdict == "rational");

  CHECK_THROWS_AS(classifyCondition(parseReal("golden", 20), 200), DepthExhaustedError);
  CHECK_THROWS_AS(classifyCondition(parseReal("golden"), 2), DomainError);
}

TEST_CASE("growth proxy") {
  const ContinuedFraction cf = expand(parseReal("golden"), 30);
  // k = 2: q_3 / (q_2 ln q_2) = 3 / (2 ln 2).
  CHECK(growthProxy(cf, 29) == doctest::Approx(3.0 / (2.0 * std::log(2.0))));
}

TEST_CASE("N_k certificates for the spiky ratio") {
  const Real alpha = parseReal("cf:[0;1,50,1,50,...]");
  const Real beta = parseReal("rat:1");
  const NkReport r = constructNk(alpha, beta, mpq_class(1, 2), 40, 1);
  CHECK(r.mCap == 3);
  REQUIRE_FALSE(r.certificates.empty());
  CHECK(r.misses.empty());

  const auto q = spikyDenominators(41);
  std::vector<std::size_t> expected;
  for (std::size_t n = 1; n + 1 < q.size(); ++n) {
    if (q[n] < 2) continue;
    if (q[n + 1].get_d() >= q[n].get_d() * std::log(q[n].get_d())) expected.push_back(n);
  }
  CHECK(r.selected == expected);

  for (const auto& c : r.certificates) {
    CHECK(c.Nk == c.m * c.qn);
    CHECK(c.m == 1);  // beta = 1 makes {N/beta} = 0
    CHECK(c.fracOverBeta.value() == 0);
    CHECK(c.qn == q[c.nIndex]);
    CHECK(c.distAlphaBeta.upper() <= mpq_class(c.m, c.qNext));
    CHECK(c.distAlphaBeta.lower() >= mpq_class(1, 2 * c.qNext));
  }
}

TEST_CASE("N_k with irrational beta respects the pigeonhole cap") {
  const NkReport r = constructNk(parseReal("sqrt:2"), parseReal("sqrt:3"), mpq_class(1, 3), 30,
                                 mpq_class(1, 10));
  CHECK(r.mCap == 4);
  for (const auto& c : r.certificates) {
    CHECK(c.Nk == c.m * c.qn);
    CHECK(c.m >= 1);
    CHECK(c.m <= r.mCap);
    CHECK(c.fracOverBeta.upper() <= mpq_class(1, 3));
  }
  CHECK(r.certificates.size() + r.misses.size() == r.selected.size());
}

TEST_CASE("golden ratio with c = 1 passes the quotient filter only at n = 2, 3") {
  // q = 1, 1, 2, 3, 5, 8, ...: 3 >= 2 ln 2 and 5 >= 3 ln 3, but 8 < 5 ln 5 and
  // q_{n+1} / (q_n ln q_n) ~ phi / ln q_n decreases from then on.
  const NkReport r = constructNk(parseReal("golden"), parseReal("rat:1"), mpq_class(1, 2), 40, 1);
  CHECK(r.selected == std::vector<std::size_t>{2, 3});
  CHECK(r.certificates.size() == 2);
}

TEST_CASE("N_k rejects a rational ratio and bad parameters") {
  CHECK_THROWS_AS(constructNk(parseReal("rat:3/7"), parseReal("rat:1"), mpq_class(1, 2), 5, 1),
                  TerminalInputError);
  CHECK_THROWS_AS(constructNk(parseReal("golden"), parseReal("rat:1"), mpq_class(1), 5, 1),
                  DomainError);
}

TEST_CASE("productLog basics") {
  const int digits = 30;
  const mpfr_prec_t bits = digitsToBits(digits);
  const TrigPoly P{Complex::fromRational(3, 0, bits), Complex::fromRational(1, 0, bits),
                   Complex::fromRational(1, 0, bits), parseReal("sqrt:2", digits),
                   parseReal("sqrt:3", digits)};
  const Real x = Real::fromRational(mpq_class(1, 7), bits);
  const ProductLog empty = productLog(P, x, 0);
  CHECK(empty.logMagnitude.value() == 0);
  CHECK(empty.clampEvents.empty());

  const ProductLog one = productLog(P, x, 1);
  const Real direct = log(abs(evalP(P, x)));
  CHECK(abs(one.logMagnitude - direct).upper() < mpq_class(1, 1000000000));

  const ProductLog big = productLog(P, x, 10000);
  CHECK(big.logMagnitude.lower() >= 0);
  CHECK(big.logMagnitude.upper() <= 10000 * std::log(5.0));
}

TEST_CASE("productLog telescopes and the orbit round-trips") {
  const int digits = 30;
  const mpfr_prec_t bits = digitsToBits(digits);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const TrigPoly P{Complex::fromRational(1 + static_cast<long>(rng() % 3), 0, bits),
                     Complex::fromRational(1, 1, bits), Complex::fromRational(1, 0, bits),
                     parseReal("sqrt:" + std::to_string(2 + i % 2), digits), Real(1, bits)};
    const Real x = Real::fromRational(mpq_class(static_cast<long>(rng() % 1000), 1000), bits);
    const std::size_t a = 1 + rng() % 50, b = 1 + rng() % 50;
    const Real whole = productLog(P, x, a + b).logMagnitude;
    const Real split = productLog(P, x, a).logMagnitude +
                       productLog(P, x.addInteger(static_cast<unsigned long>(a)), b).logMagnitude;
    CHECK((whole - split).containsZero());

    const long M = 1 + static_cast<long>(rng() % 60);
    const OrbitTrace t = orbit(P, x, M);
    CHECK(t.logAt(0).value() == 0);
    for (long n : {1L, M / 2 + 1, M}) {
      CHECK((t.logAt(n) - productLog(P, x, static_cast<std::size_t>(n)).logMagnitude).containsZero());
    }
    const OrbitTrace back = orbit(P, x.addInteger(M), M);
    CHECK((t.logAt(M) + back.logAt(-M)).containsZero());
  }
}

TEST_CASE("orbit of a zero-free polynomial grows in both directions") {
  const int digits = 30;
  const mpfr_prec_t bits = digitsToBits(digits);
  const TrigPoly P{Complex::fromRational(3, 0, bits), Complex::fromRational(1, 0, bits),
                   Complex::fromRational(1, 0, bits), parseReal("golden", digits), Real(1, bits)};
  const OrbitTrace t = orbit(P, Real::fromRational(mpq_class(1, 5), bits), 100);
  CHECK(t.logMagnitudes.size() == 201);
  for (long n = 1; n <= 100; ++n) {
    CHECK(certainlyGreater(t.logAt(n), t.logAt(n - 1)));
    CHECK(certainlyLess(t.logAt(-n), t.logAt(-n + 1)));
  }
  const OrbitTrace zero = orbit(P, Real::fromRational(mpq_class(1, 5), bits), 0);
  CHECK(zero.logMagnitudes.size() == 1);
  std::ostringstream csv;
  writeOrbitCsv(csv, zero);
  CHECK(csv.str().rfind("n,logMagnitude,phase\n0,", 0) == 0);
}

TEST_CASE("clamp floor: orbit aborts, productLog records") {
  // alpha, beta integers and x = 1/3: every factor is 1 + w + w^2 = 0.
  const int digits = 400;
  const mpfr_prec_t bits = digitsToBits(digits);
  const TrigPoly P{Complex::fromRational(1, 0, bits), Complex::fromRational(1, 0, bits),
                   Complex::fromRational(1, 0, bits), Real(1, bits), Real(2, bits)};
  const Real x = Real::fromRational(mpq_class(1, 3), bits);
  const ProductLog p = productLog(P, x, 3);
  CHECK(p.clampEvents == std::vector<long long>{0, 1, 2});
  try {
    (void)orbit(P, x, 2);
    FAIL("expected a clamp breach");
  } catch (const ClampBreachError& e) {
    CHECK(e.index() == 0);
  }
  const OrbitTrace t = orbit(P, x, 2, false);
  CHECK(t.clampEvents.size() == 4);
}

TEST_CASE("index identity") {
  const Real y = Real::fromRational(mpq_class(-52, 1) + mpq_class(3, 10), kBits);
  CHECK(indexIdentityHolds(y, 5));
  CHECK(indexIdentityHolds(y, 1));
}

TEST_CASE("product comparison for the spiky ratio with C = (1, 1, 1)") {
  const NkReport nk = constructNk(parseReal("cf:[0;1,50,1,50,...]"), parseReal("rat:1"),
                                  mpq_class(1, 2), 40, 1);
  REQUIRE_FALSE(nk.certificates.empty());
  const NkCertificate& cert = nk.certificates.front();
  const TrigPoly P{cr(1), cr(1), cr(1), parseReal("cf:[0;1,50,1,50,...]", kDigits), Real(1, kBits)};
  KeythOptions options;
  options.samples = 20;
  options.seed = 3;
  const KeythReport r = keythCompare(P, cert, mpq_class(1, 10), options);
  CHECK(r.floorPk == cert.Nk);
  CHECK(r.measure <= mpq_class(1, 10));
  CHECK(r.samples.size() == 20);
  CHECK(r.pass);
  CHECK(r.identity);
  // beta = 1: the perturbation is |e^{2 pi i N_k alpha} - 1| = 2 sin(pi ||N_k alpha||).
  const double d = cert.distAlphaBeta.toDouble();
  CHECK(r.perturbation.toDouble() == doctest::Approx(2 * std::sin(M_PI * d)));

  const mpq_class inside = (r.exceptional.intervals()[0].lo + r.exceptional.intervals()[0].hi) / 2;
  KeythOptions bad = options;
  bad.xs = {inside};
  CHECK_THROWS_AS(keythCompare(P, cert, mpq_class(1, 10), bad), SampleInExceptionalSetError);
}

TEST_CASE("product comparison for a zero-free polynomial") {
  const NkReport nk = constructNk(parseReal("cf:[0;1,50,1,50,...]"), parseReal("rat:1"),
                                  mpq_class(1, 2), 40, 1);
  REQUIRE_FALSE(nk.certificates.empty());
  const NkCertificate& cert = nk.certificates.front();
  const TrigPoly P{cr(3), cr(1), cr(1), parseReal("cf:[0;1,50,1,50,...]", kDigits), Real(1, kBits)};
  KeythOptions options;
  options.samples = 10;
  const KeythReport r = keythCompare(P, cert, mpq_class(1, 10), options);
  CHECK(r.pass);
  // min |p| >= 1, so the bound is at most perturbation * [P_k].
  const double uniform = r.perturbation.toDouble() * r.floorPk.get_d();
  for (const auto& s : r.samples) CHECK(s.logRatio.toDouble() <= uniform);
}
