#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfa/continued_fraction.hpp"
#include "tfa/diophantine.hpp"
#include "tfa/trig_poly.hpp"

namespace tfa {

// --- Configuration normalisation -------------------------------------------

struct PlanePoint {
  Real a;
  Real b;
};

struct Configuration {
  std::array<PlanePoint, 4> points;
};

// One affine step v -> M v + shift.
struct TransformStep {
  std::string name;  // translate, rotate, shear, scale
  std::array<Real, 4> matrix;  // row-major 2x2
  std::array<Real, 2> shift;
};

struct NormalizedConfiguration {
  Real alpha;
  Real beta;
  std::size_t offLine = 0;    // index of the point sent to (0, 1)
  std::size_t base = 0;       // index of the point sent to (0, 0)
  std::size_t alphaIndex = 0;
  std::size_t betaIndex = 0;
  std::vector<TransformStep> steps;
  std::array<PlanePoint, 4> image;  // every input point after all steps
};

// Four rows "a,b" in the real grammar; blank lines and '#' comments skipped.
Configuration readConfigurationCsv(std::istream& in, int digits = kDefaultDigits);
// One real per line.
std::vector<Real> readPointsCsv(std::istream& in, int digits = kDefaultDigits);

// Throws HypothesisError(Configuration) unless exactly three points are
// collinear (certified up to the enclosures) and the fourth is certainly off
// their line.
NormalizedConfiguration normalizeConfiguration(const Configuration& cfg);

// --- Condition classifier --------------------------------------------------

struct ConditionRow {
  std::size_t k = 0;
  mpz_class a;
  mpz_class q;
  double quotientRatio = 0;  // a_k / ln q_k
  double growthRatio = 0;    // q_{k+1} / (q_k ln q_k)
  double quotientMax = 0;    // running maxima
  double growthMax = 0;
};

struct GammaWitness {
  mpq_class gamma;
  bool found = false;
  std::size_t k = 0;  // first k with q_{k+1} >= q_k^gamma
};

struct ConditionReport {
  std::size_t depth = 0;
  bool rational = false;
  std::vector<ConditionRow> rows;  // k >= 1 with q_k >= 2
  double headQuotientMax = 0, tailQuotientMax = 0;
  double headGrowthMax = 0, tailGrowthMax = 0;
  std::string quotientVerdict;  // "positive", "decay" or "rational"
  std::string growthVerdict;
  std::vector<GammaWitness> gammas;
  std::string gammaVerdict;     // "witnessed" or "none"
  std::string note;
};

// Proxy verdicts compare the maximum over the second half of the rows with
// the maximum over the first half: "positive" when the tail keeps at least
// half of the head, "decay" otherwise.
ConditionReport classifyCondition(const Real& ratio, std::size_t depth);

// max_k q_{k+1} / (q_k ln q_k) over k < depth with q_k >= 2.
double growthProxy(const ContinuedFraction& cf, std::size_t depth);

// --- N_k construction ------------------------------------------------------

struct NkCertificate {
  std::size_t nIndex = 0;
  mpz_class m;
  mpz_class qn;
  mpz_class qNext;
  mpz_class Nk;
  Real distAlphaBeta;  // ||N_k alpha / beta||
  Real fracOverBeta;   // {N_k / beta}
  Real ratio;          // N_k ln N_k ||N_k alpha / beta||
};

struct NkMiss {
  std::size_t nIndex = 0;
  std::string reason;
};

struct NkReport {
  mpq_class s;
  mpq_class c;
  std::size_t depth = 0;
  mpz_class mCap;  // ceil(1/s) + 1
  std::vector<std::size_t> selected;
  std::vector<NkCertificate> certificates;
  std::vector<NkMiss> misses;
  double ratioMin = 0, ratioMax = 0;
};

// Indices n in [1, depth) with q_n >= 2 and q_{n+1} >= c q_n ln q_n; for each
// the smallest m <= ceil(1/s) + 1 with {m q_n / beta} <= s.
NkReport constructNk(const Real& alpha, const Real& beta, const mpq_class& s, std::size_t depth,
                     const mpq_class& c);

// --- Products and orbits ---------------------------------------------------

inline constexpr double kClampFloor = 1e-300;

struct ProductLog {
  Real logMagnitude;  // sum_{j<count} log|P(x+j)|
  Real phase;         // sum of arg P(x+j), in turns
  std::vector<long long> clampEvents;
};

// Factors below the clamp floor contribute log(floor) and are recorded.
ProductLog productLog(const TrigPoly& P, const Real& x, std::size_t count);

struct OrbitTrace {
  Real x;
  long M = 0;
  // Index n + M holds log|f(x+n)| - log|f(x)| for n in [-M, M].
  std::vector<Real> logMagnitudes;
  std::vector<Real> phases;
  std::vector<long long> clampEvents;

  const Real& logAt(long n) const { return logMagnitudes[static_cast<std::size_t>(n + M)]; }
  const Real& phaseAt(long n) const { return phases[static_cast<std::size_t>(n + M)]; }
};

// Forward by f(x+n) = f(x) prod_{j<n} P(x+j), backward by
// f(x-n) = f(x) / prod_{j=1..n} P(x-j). A factor below the clamp floor
// throws ClampBreachError unless abortOnClamp is false.
OrbitTrace orbit(const TrigPoly& P, const Real& x, long M, bool abortOnClamp = true);

void writeOrbitCsv(std::ostream& out, const OrbitTrace& trace, int digits = 30);

// --- Product comparison ----------------------------------------------------

struct KeythSample {
  mpq_class x;
  Real logRatio;     // log|prod P(y+n)| - log|prod P(x+n)|
  Real logBound;     // |C1| |e^{2 pi i N_k alpha/beta} - 1| sum 1/|P(x+n)|
  Real reciprocalSum;
  bool identity = false;
  bool pass = false;
};

struct KeythOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  std::vector<mpq_class> xs;  // explicit samples; drawn outside E when empty
  CaseChoice caseChoice = CaseChoice::Auto;
  unsigned threads = 0;
};

struct KeythReport {
  mpz_class Nk;
  Real Pk;           // N_k / |beta|
  mpz_class floorPk;
  Real perturbation; // |e^{2 pi i N_k alpha/beta} - 1|
  mpq_class gamma;   // [P_k] / q_n, used as both admissibility constants
  mpq_class delta;
  mpq_class measure;
  IntervalUnion exceptional;
  std::uint64_t seed = 0;
  std::vector<KeythSample> samples;
  double maxLogRatio = 0;
  double maxLogBound = 0;
  bool identity = true;
  bool pass = true;
};

// Compares the shifted product with the unshifted one at samples outside the
// exceptional set of the reciprocal sum over [P_k] terms. Throws
// SampleInExceptionalSetError when an explicit sample may lie in that set.
KeythReport keythCompare(const TrigPoly& P, const NkCertificate& cert, const mpq_class& delta,
                         const KeythOptions& options = {});

// Arguments y + n (n < K) and x' - n (1 <= n <= K, x' = y + K) as integer
// offsets from y: equal as multisets when the index identity holds.
bool indexIdentityHolds(const Real& y, const mpz_class& K);

}  // namespace tfa
