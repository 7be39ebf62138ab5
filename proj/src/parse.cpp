#include "tfa/parse.hpp"

#include <algorithm>
#include <cctype>

#include "tfa/errors.hpp"

namespace tfa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool startsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool endsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

mpz_class parseInteger(std::string_view s, std::string_view context) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError("malformed integer '" + std::string(s) + "' in " + std::string(context));
  }
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

struct DecimalLiteral {
  mpq_class value;
  int fractionDigits = 0;
  bool truncated = false;
};

DecimalLiteral parseDecimal(std::string_view s) {
  DecimalLiteral out;
  s = trim(s);
  if (endsWith(s, "...")) {
    out.truncated = true;
    s.remove_suffix(3);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  const auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    if (out.truncated) throw ParseError("truncated decimal literal cannot carry an exponent");
    const mpz_class e = parseInteger(s.substr(epos + 1), "decimal exponent");
    if (!e.fits_slong_p() || abs(e) > 100000) throw ParseError("decimal exponent out of range");
    exponent = e.get_si();
    s = s.substr(0, epos);
  }
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  auto allDigits = [](std::string_view v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  if ((whole.empty() && frac.empty()) || !allDigits(whole) || !allDigits(frac)) {
    throw ParseError("malformed decimal literal '" + std::string(s) + "'");
  }
  std::string digits = std::string(whole) + std::string(frac);
  if (digits.empty()) digits = "0";
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  out.value = mpq_class(num, den);
  if (exponent != 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent > 0) out.value *= scale;
    else out.value /= scale;
  }
  out.value.canonicalize();
  if (negative) out.value = -out.value;
  out.fractionDigits = static_cast<int>(frac.size()) - static_cast<int>(exponent);
  return out;
}

bool looksLikeBareRational(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' || c == '-' ||
           c == '+' || c == 'e' || c == 'E';
  });
}

mpq_class parseFraction(std::string_view s, std::string_view context) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return mpq_class(parseInteger(s, context));
  const mpz_class p = parseInteger(s.substr(0, slash), context);
  const mpz_class q = parseInteger(s.substr(slash + 1), context);
  if (sgn(q) == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

mpq_class parseBare(std::string_view s) {
  if (s.find('/') != std::string_view::npos) return parseFraction(s, "rational literal");
  return parseDecimal(s).value;
}

// Interval between consecutive convergents of an infinite continued
// fraction, tight enough for `bits` of precision.
Real cfEnclosure(const CfSpec& spec, mpfr_prec_t bits) {
  mpz_class pPrev(1), qPrev(0);
  mpz_class p = spec.quotient(0), q(1);
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), 2, static_cast<unsigned long>(bits + 8));
  for (std::size_t k = 1;; ++k) {
    const mpz_class a = spec.quotient(k);
    mpz_class pNext = a * p + pPrev;
    mpz_class qNext = a * q + qPrev;
    if (q * qNext > target) {
      return Real::fromInterval(mpq_class(p, q), mpq_class(pNext, qNext), bits);
    }
    pPrev = p;
    qPrev = q;
    p = pNext;
    q = qNext;
  }
}

Real finiteCfValue(const CfSpec& spec, mpfr_prec_t bits) {
  mpq_class value(spec.listed.back());
  for (std::size_t k = spec.listed.size() - 1; k-- > 0;) {
    value = mpq_class(spec.listed[k]) + 1 / value;
  }
  value.canonicalize();
  return Real::fromRational(value, bits);
}

}  // namespace

mpz_class CfSpec::quotient(std::size_t k) const {
  if (k < listed.size()) return listed[k];
  if (mode == TailMode::None) throw DomainError("quotient index past the end of a finite continued fraction");
  const std::size_t period = listed.size() - tailStart;
  if (mode == TailMode::Periodic) return listed[tailStart + (k - tailStart) % period];
  mpz_class a = listed.back();
  for (std::size_t i = listed.size(); i <= k; ++i) a *= ratio;
  return a;
}

CfSpec parseCfSpec(std::string_view text) {
  text = trim(text);
  if (startsWith(text, "cf:")) text.remove_prefix(3);
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError("continued fraction must look like cf:[a0;a1,...]");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  CfSpec spec;
  const auto semi = body.find(';');
  spec.listed.push_back(parseInteger(body.substr(0, semi), "continued fraction"));
  if (semi == std::string_view::npos) return spec;
  std::string_view rest = body.substr(semi + 1);
  bool ellipsis = false;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view token = trim(rest.substr(0, comma));
    if (token == "...") {
      if (comma != std::string_view::npos) throw ParseError("'...' must be the last entry");
      ellipsis = true;
    } else {
      mpz_class a = parseInteger(token, "continued fraction");
      if (a < 1) throw ParseError("partial quotients after the first must be >= 1");
      spec.listed.push_back(a);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (!ellipsis) return spec;
  if (spec.listed.size() < 2) throw ParseError("'...' needs at least one listed tail quotient");
  spec.tailStart = 1;
  spec.mode = TailMode::Periodic;
  const std::size_t tailLength = spec.listed.size() - 1;
  if (tailLength >= 3) {
    const mpz_class& first = spec.listed[1];
    if (spec.listed[2] % first == 0) {
      const mpz_class r = spec.listed[2] / first;
      bool geometric = r >= 2;
      for (std::size_t i = 2; geometric && i < spec.listed.size(); ++i) {
        geometric = spec.listed[i] == spec.listed[i - 1] * r;
      }
      if (geometric) {
        spec.mode = TailMode::Geometric;
        spec.ratio = r;
      }
    }
  }
  return spec;
}

Real parseReal(std::string_view text, int digits) {
  const std::string original(trim(text));
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty real literal");
  const mpfr_prec_t bits = digitsToBits(digits);

  if (s.front() == '-' && !looksLikeBareRational(s)) {
    Real r = -parseReal(s.substr(1), digits);
    Source src = r.source() ? *r.source() : Source{};
    src.text = original;
    return r.setSource(src);
  }

  if (startsWith(s, "rat:")) {
    Real r = Real::fromRational(parseFraction(s.substr(4), "rat literal"), bits);
    return r.setSource({SourceKind::Rational, original, digits});
  }
  if (startsWith(s, "dec:")) {
    const DecimalLiteral lit = parseDecimal(s.substr(4));
    if (!lit.truncated) {
      Real r = Real::fromRational(lit.value, bits);
      return r.setSource({SourceKind::Decimal, original, lit.fractionDigits});
    }
    if (lit.fractionDigits < digits) {
      throw PrecisionError("decimal literal '" + original + "' carries " +
                               std::to_string(lit.fractionDigits) + " digits but " +
                               std::to_string(digits) + " were requested",
                           lit.fractionDigits);
    }
    mpz_class unit;
    mpz_ui_pow_ui(unit.get_mpz_t(), 10, static_cast<unsigned long>(lit.fractionDigits));
    const mpq_class ulp(1, unit);
    Real r = Real::fromInterval(lit.value - ulp, lit.value + ulp, bits);
    return r.setSource({SourceKind::Decimal, original, lit.fractionDigits});
  }
  if (startsWith(s, "sqrt:")) {
    const mpz_class d = parseInteger(s.substr(5), "sqrt literal");
    if (sgn(d) <= 0) throw ParseError("sqrt literal needs a positive integer");
    if (mpz_perfect_square_p(d.get_mpz_t())) throw ParseError("sqrt literal needs a non-square integer");
    Real r = sqrt(Real::fromInteger(d, bits));
    return r.setSource({SourceKind::QuadraticSurd, original, digits});
  }
  if (s == "golden") {
    Real r = (Real(1, bits) + sqrt(Real(5, bits))) / Real(2, bits);
    return r.setSource({SourceKind::QuadraticSurd, original, digits});
  }
  if (startsWith(s, "cf:")) {
    const CfSpec spec = parseCfSpec(s);
    Real r = spec.infinite() ? cfEnclosure(spec, bits) : finiteCfValue(spec, bits);
    return r.setSource({SourceKind::SyntheticCF, original, digits});
  }
  if (looksLikeBareRational(s)) {
    Real r = Real::fromRational(parseBare(s), bits);
    return r.setSource({SourceKind::Rational, original, digits});
  }
  throw ParseError("unrecognised real literal '" + original + "'");
}

mpq_class parseRational(std::string_view text) {
  std::string_view s = trim(text);
  if (startsWith(s, "rat:")) return parseFraction(s.substr(4), "rat literal");
  if (startsWith(s, "dec:")) {
    const DecimalLiteral lit = parseDecimal(s.substr(4));
    if (lit.truncated) throw ParseError("a truncated decimal is not an exact rational");
    return lit.value;
  }
  if (startsWith(s, "cf:")) {
    const CfSpec spec = parseCfSpec(s);
    if (spec.infinite()) throw ParseError("an infinite continued fraction is not rational");
    return finiteCfValue(spec, 64).exactValue();
  }
  if (looksLikeBareRational(s)) return parseBare(s);
  throw ParseError("expected an exact rational, got '" + std::string(s) + "'");
}

Complex parseComplex(std::string_view text, int digits) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty complex literal");
  const mpfr_prec_t bits = digitsToBits(digits);
  if (s.back() != 'i') return {parseReal(s, digits), Real(0, bits)};
  s.remove_suffix(1);
  // Split at the last sign that starts the imaginary part.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] != '+' && s[i] != '-') continue;
    const char prev = s[i - 1];
    if (prev == ':' || prev == '[' || prev == ';' || prev == ',' || prev == 'e' || prev == 'E') continue;
    split = i;
    break;
  }
  std::string_view rePart = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
  std::string_view imPart = split == std::string_view::npos ? s : s.substr(split);
  bool negativeIm = false;
  if (!imPart.empty() && (imPart.front() == '+' || imPart.front() == '-')) {
    negativeIm = imPart.front() == '-';
    imPart.remove_prefix(1);
  }
  Real im = imPart.empty() ? Real(1, bits) : parseReal(imPart, digits);
  if (negativeIm) im = -im;
  Real re = rePart.empty() ? Real(0, bits) : parseReal(rePart, digits);
  return {std::move(re), std::move(im)};
}

}  // namespace tfa
