#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tfa/complex.hpp"

namespace tfa {

// P(x) = C0 + C1 e^{2 pi i alpha x} + C2 e^{2 pi i beta x}.
struct TrigPoly {
  Complex c0, c1, c2;
  Real alpha, beta;

  // Throws DomainError when a coefficient is certainly zero and
  // PrecisionError when its enclosure cannot rule zero out.
  void validate() const;
};

Complex evalP(const TrigPoly& P, const Real& x);
// p(x, y) = C0 + C1 e^{2 pi i x} + C2 e^{2 pi i y}.
Complex evalTorus(const Complex& c0, const Complex& c1, const Complex& c2, const Real& x,
                  const Real& y);

enum class ZeroClass { None, One, Two };
const char* zeroClassName(ZeroClass cls) noexcept;

struct TorusZero {
  Real gamma1;  // in [0, 1)
  Real gamma2;
  Real t;       // slope parameter Re(w2 / w1)
  double residual = 0;  // upper bound on |p(gamma1, gamma2)|
  bool tIsZero = false; // enclosure of t contains 0
};

struct TorusZeroData {
  ZeroClass cls = ZeroClass::None;
  // 4|C1|^2|C2|^2 - (|C0|^2 - |C1|^2 - |C2|^2)^2; its sign decides the count.
  Real discriminant;
  std::vector<TorusZero> zeros;  // sorted by (gamma1, gamma2)
  std::vector<std::string> warnings;
};

// Closed-form zeros of p on the torus. Throws PrecisionError when the
// discriminant enclosure straddles 0.
TorusZeroData findTorusZeros(const Complex& c0, const Complex& c1, const Complex& c2);

// t = Re(w2 / w1) with w1 = C1 e^{2 pi i gamma1}, w2 = C2 e^{2 pi i gamma2}.
Real slopeParameter(const Complex& c1, const Complex& c2, const Real& gamma1, const Real& gamma2);

struct LowerBoundReport {
  int gridN = 0;
  std::size_t zeroCount = 0;
  bool zeroFree = false;
  double constant = 0;  // observed infimum of R (of |p| when zero-free)
  double argminX = 0;
  double argminY = 0;
  double minAbsP = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;    // grid points sitting exactly on a zero
  std::size_t refinedCenters = 0;
};

constexpr std::size_t kRefineCenters = 16;

// Grid infimum of R(x,y) = |p| / min_j (||x - g1 + t<y - g2>|| + ||x - g1||^2 +
// ||y - g2||^2), with one 10x refinement round around the smallest values.
// Evaluated in double precision.
LowerBoundReport lowerBoundConstant(const Complex& c0, const Complex& c1, const Complex& c2,
                                    int gridN, const TorusZeroData& zeros, unsigned threads = 0);
LowerBoundReport lowerBoundConstant(const Complex& c0, const Complex& c1, const Complex& c2,
                                    int gridN, unsigned threads = 0);

}  // namespace tfa
