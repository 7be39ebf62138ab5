#pragma once

#include <cstddef>
#include <vector>

#include "tfa/real.hpp"

namespace tfa {

// Partial quotients a_0..a_D with convergents p_k/q_k, seeded by
// p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1.
struct ContinuedFraction {
  std::vector<mpz_class> quotients;
  std::vector<mpz_class> p;
  std::vector<mpz_class> q;
  // The input was rational and the expansion ran to completion.
  bool terminal = false;

  std::size_t size() const { return quotients.size(); }
  bool empty() const { return quotients.empty(); }
  // Largest certified index D (size() - 1).
  std::size_t validDepth() const { return quotients.empty() ? 0 : quotients.size() - 1; }

  void push(const mpz_class& a);
  static ContinuedFraction fromQuotients(const std::vector<mpz_class>& quotients, bool terminal);
};

// Expands as many quotients as the enclosure of x certifies, up to
// maxQuotients. Never throws for lack of precision.
ContinuedFraction expandAvailable(const Real& x, std::size_t maxQuotients);

// Expands `depth` quotients (a_0..a_{depth-1}). Rational inputs may stop
// early and are flagged terminal. Throws DepthExhaustedError when the input
// precision runs out first.
ContinuedFraction expand(const Real& x, std::size_t depth);

// p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1} for every k >= 1.
bool determinantIdentityHolds(const ContinuedFraction& cf);

struct AlternationReport {
  std::vector<int> signs;  // sign of p_k/q_k - x per index, 0 at an exact hit
  bool pass = true;
};
// Convergents alternate around x: sign(p_k/q_k - x) = (-1)^{k+1}.
AlternationReport convergentAlternation(const ContinuedFraction& cf, const Real& x);

struct BestApproxReport {
  std::size_t n = 0;
  mpz_class qn;
  mpz_class qNext;
  mpz_class minimizingK;  // 0 when the scan range is empty
  Real minDistance;
  Real distanceAtQn;
  std::size_t scanned = 0;
  bool vacuous = false;
  bool pass = false;
};

constexpr unsigned long kDefaultBruteForceCap = 1000000;

// Scans ||k x|| over 1 <= k < q_{n+1} and checks the minimum is attained at
// k = q_n.
BestApproxReport bestApproxBruteCheck(const Real& x, const ContinuedFraction& cf, std::size_t n,
                                      const mpz_class& cap = kDefaultBruteForceCap);
BestApproxReport bestApproxBruteCheck(const Real& x, std::size_t n,
                                      const mpz_class& cap = kDefaultBruteForceCap);

struct QualityReport {
  std::size_t n = 0;
  mpz_class qn;
  mpz_class qNext;
  Real distance;     // ||q_n x||
  mpq_class lower;   // 1 / (2 q_{n+1})
  mpq_class upper;   // 1 / q_{n+1}
  bool pass = false;
};

QualityReport qualityBounds(const Real& x, const ContinuedFraction& cf, std::size_t n);
QualityReport qualityBounds(const Real& x, std::size_t n);

}  // namespace tfa
