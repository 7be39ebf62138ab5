#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tfa/continued_fraction.hpp"
#include "tfa/trig_poly.hpp"

namespace tfa {

// Closed subintervals of [0, 1), kept sorted, disjoint and merged.
class IntervalUnion {
 public:
  struct Interval {
    mpq_class lo;
    mpq_class hi;
  };

  // Adds the arc [lo, hi] of the circle; hi - lo may exceed 1 (whole circle)
  // and the arc may wrap past 1.
  void addArc(mpq_class lo, mpq_class hi);
  // Adds [lo, hi] intersected with [0, 1), without wrapping.
  void addClipped(const mpq_class& lo, const mpq_class& hi);
  void add(const IntervalUnion& other);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  mpq_class measure() const;
  // x is reduced mod 1 first.
  bool contains(const mpq_class& x) const;
  // Whether any point of the enclosure of x (mod 1) may lie in the union.
  bool mayContain(const Real& x) const;
  IntervalUnion complement() const;
  // Maps u in [0, 1) onto the complement with uniform density.
  // Throws DomainError when the complement has measure 0.
  mpq_class complementPoint(const mpq_class& u) const;

 private:
  void insert(mpq_class lo, mpq_class hi);
  std::vector<Interval> intervals_;
};

// L(N) = max(ln N, 1): the log factor used in every fitted constant, so that
// N = 1, 2 do not divide by ln N ~ 0.
double logFactor(double n);

struct SumReport {
  Real sum;
  Real bound;
  double referenceTerm = 0;  // q ln q, N log N, ... used for constantFit
  double constantFit = 0;    // sum / referenceTerm
  std::vector<double> witnesses;  // per-term contributions, capped
  bool pass = false;
};

constexpr std::size_t kWitnessCap = 64;

// q_n of the continued fraction of alpha. Throws DepthExhaustedError or
// TerminalInputError when index n is not available.
mpz_class convergentDenominator(const Real& alpha, std::size_t n);

struct GapReport {
  mpz_class qn;
  Real minPairwise;   // min ||(k_i - k_j) alpha||, meaningful when pairs > 0
  mpq_class threshold;  // 1 / (2 q_n)
  std::size_t pairs = 0;
  long argminDifference = 0;
  bool vacuous = false;
  bool pass = false;
};

// Throws HypothesisError(Window) when k_m - k_1 >= q_n.
GapReport gapCheck(const std::vector<long>& ks, const Real& alpha, std::size_t n);
GapReport gapCheck(const std::vector<long>& ks, const Real& alpha, const mpz_class& qn);

// Explicit bound 2 (4q + 2q H_q) from the sign-class decomposition.
mpq_class reciprocalSumBound(const mpz_class& q);

// Sum_j 1 / ||k_j alpha - x|| against reciprocalSumBound(q_n). Throws
// HypothesisError(Window) or HypothesisError(Separation).
SumReport reciprocalSumLemma(const std::vector<long>& ks, const Real& alpha, const Real& x,
                             std::size_t n);
SumReport reciprocalSumLemma(const std::vector<long>& ks, const Real& alpha, const Real& x,
                             const mpz_class& qn);

struct ExceptionalSet {
  IntervalUnion set;
  IntervalUnion stage1;
  mpq_class delta;
  std::size_t n = 0;
  mpq_class radius;      // delta / (4N)
  mpq_class stage1Measure;
  mpq_class stage2Measure;  // added on top of stage 1
  mpq_class measure;
  double cap = 0;         // 4N / delta
  double threshold1 = 0;  // (16N / delta) ln(4N / delta)
  double threshold2 = 0;  // 32 N^2 / delta^2
  std::size_t cellsExamined = 0;
  std::size_t ambiguousLeaves = 0;
};

// Stage 1: balls of radius delta/(4N) (plus each point's own radius) around
// the points mod 1. Stage 2: a certified cell cover of
// {sum min(4N/delta, 1/d) > threshold1} and {sum min((4N/delta)^2, 1/d^2) >
// threshold2}. Throws BudgetInfeasibleError when |E| > delta.
ExceptionalSet buildExceptionalSet(const std::vector<Real>& points, const mpq_class& delta,
                                   unsigned threads = 0);

struct OutsideSumsReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Real maxSum1;         // max over samples of sum 1/||x - x_n||
  Real maxSum2;         // ... of sum 1/||x - x_n||^2
  double argmax1 = 0, argmax2 = 0;
  double maxTerm = 0;   // largest single 1/||x - x_n||
  double fitted1 = 0;   // maxSum1 / (N L(N))
  double fitted2 = 0;   // maxSum2 / N^2
  double design1 = 0;   // 16 ln(4N/delta) / (delta L(N))
  double design2 = 0;   // 32 / delta^2
  bool termPass = true; // every term <= 4N/delta
  bool pass1 = true;
  bool pass2 = true;
};

OutsideSumsReport sumBoundsOutside(const std::vector<Real>& points, const ExceptionalSet& E,
                                   std::size_t samples, std::uint64_t seed, unsigned threads = 0);

// Auto decides the case from the certified sign of alpha + t beta and raises
// UnresolvedCaseError when the enclosure straddles 0. ForceCase2 runs the
// Case 2 construction when the enclosure contains 0 (it cannot be certified
// for irrational alpha/beta with rational t).
enum class CaseChoice { Auto, ForceCase2 };

struct ZeroCaseAnalysis {
  int caseUsed = 0;      // 1 or 2
  bool forced = false;
  Real lambda;           // alpha + t beta
  mpq_class budget;      // delta share for this zero
  mpq_class rescaledDelta;
  std::size_t pointCount = 0;
  mpq_class measure;     // measure of this zero's preimage set
  Real designBound;      // bound on sum_n 1/A_n(x) outside E
  std::vector<long> nearSet;   // Case 2 only
  std::size_t nearCap = 0;
  Real farBound;         // Case 2 only
  Real nearBound;        // Case 2 only
};

struct ProductSumReport {
  mpz_class Qk;
  std::size_t n = 0;     // convergent index with gammaLo q_n <= Qk <= gammaHi q_n
  mpz_class qn;
  mpq_class gammaLo, gammaHi, delta;
  ZeroClass zeroClass = ZeroClass::None;
  double lowerConstant = 0;  // empirical C(C0, C1, C2) or certified min|p|
  std::vector<ZeroCaseAnalysis> perZero;
  IntervalUnion exceptional;
  mpq_class measure;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Real maxSum;           // max over samples of sum_{n<Qk} 1/|P(x+n)|
  double argmax = 0;
  Real bound;            // (1/C) sum_j designBound_j, or Qk / min|p|
  double fittedConstant = 0;  // maxSum / (Qk L(Qk))
  double boundConstant = 0;   // bound / (Qk L(Qk))
  std::vector<double> sampleSums;  // capped
  bool pass = false;
};

struct ProductSumOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  CaseChoice caseChoice = CaseChoice::Auto;
  int gridN = 256;
  unsigned threads = 0;
};

// Q_k admissibility against the convergents of alpha/beta; returns the
// largest admissible index. Throws HypothesisError(Admissibility).
std::size_t admissibleIndex(const ContinuedFraction& cf, const mpz_class& Qk,
                            const mpq_class& gammaLo, const mpq_class& gammaHi);

ProductSumReport productReciprocalSumAnalysis(const TrigPoly& P, const mpz_class& Qk,
                                              const mpq_class& gammaLo, const mpq_class& gammaHi,
                                              const mpq_class& delta,
                                              const ProductSumOptions& options = {});

// sum_{n<count} 1/|P(x+n)| as a certified enclosure.
Real reciprocalProductSum(const TrigPoly& P, const Real& x, const mpz_class& count);

}  // namespace tfa
