#pragma once

// Input grammar for reals and complex numbers.
//
//   rat:<p>/<q>            exact rational (also rat:<p>)
//   dec:<literal>          exact decimal literal, e.g. dec:-1.25 or dec:3e-4
//   dec:<literal>...       truncated decimal: the true value is within one unit
//                          of the last digit
//   sqrt:<d>               square root of a non-square positive integer
//   golden                 (1 + sqrt 5) / 2
//   cf:[a0;a1,...,an]      finite continued fraction (exact rational)
//   cf:[a0;a1,...,an,...]  infinite continued fraction extending the listed
//                          tail: geometrically when the tail has at least three
//                          terms with a constant integer ratio >= 2, otherwise
//                          by periodic repetition of the whole tail
//   <p>/<q>, <int>, <dec>  bare exact rationals
//
// Any literal may carry a leading '-'. Complex literals are <re>+<im>i or
// <re>-<im>i with both parts in the real grammar; "i" alone means 1.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tfa/complex.hpp"
#include "tfa/real.hpp"

namespace tfa {

enum class TailMode { None, Periodic, Geometric };

// A continued fraction given by a finite prefix and an extension rule.
struct CfSpec {
  std::vector<mpz_class> listed;  // a0, a1, ..., an as written
  TailMode mode = TailMode::None;
  std::size_t tailStart = 1;      // first index of the repeating/geometric tail
  mpz_class ratio;                // geometric ratio when mode == Geometric

  bool infinite() const { return mode != TailMode::None; }
  // k-th partial quotient; k must be < listed.size() for finite specs.
  mpz_class quotient(std::size_t k) const;
};

CfSpec parseCfSpec(std::string_view text);

// Parses a real at the given working precision (decimal digits).
Real parseReal(std::string_view text, int digits = kDefaultDigits);
// Parses an exact rational (rat:, dec: without "...", bare forms).
mpq_class parseRational(std::string_view text);
Complex parseComplex(std::string_view text, int digits = kDefaultDigits);

}  // namespace tfa
