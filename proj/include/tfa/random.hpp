#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace tfa {

using Rng = std::mt19937_64;

// Uniform dyadic rational k / 2^53 in [0, 1); exact, so samples can be fed
// straight into certified arithmetic.
inline mpq_class dyadicUniform(Rng& rng) {
  const std::uint64_t k = rng() >> 11;
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
  mpq_class out(num);
  mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), 53);
  return out;
}

}  // namespace tfa
