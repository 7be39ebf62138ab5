#pragma once

#include "tfa/real.hpp"

namespace tfa {

// The three reductions of a real modulo 1.
struct CircleValue {
  Real frac;            // {x} in [0, 1)
  Real dist;            // ||x|| in [0, 1/2]
  Real signedRep;       // <x> in [-1/2, 1/2)
  mpz_class integerPart;  // [x] = x - {x}
};

// Throws PrecisionError when the enclosure of x straddles an integer (frac is
// discontinuous there) or a half-integer (signed representative jumps).
CircleValue circleReduce(const Real& x);

// ||x||. Never fails: the distance is 1-Lipschitz, so a wide ball only widens
// the result.
Real circleDistance(const Real& x);

// {x}; throws PrecisionError when x straddles an integer.
Real fractionalPart(const Real& x);

// <x>; throws PrecisionError when x straddles a half-integer.
Real signedRepresentative(const Real& x);

}  // namespace tfa
