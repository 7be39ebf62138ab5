#include "tfa/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "tfa/errors.hpp"
#include "tfa/parallel.hpp"

namespace tfa {

namespace {

void requireNonzero(const Complex& c, const char* name) {
  const auto s = abs2(c).sign();
  if (!s) throw PrecisionError(std::string("cannot certify ") + name + " != 0");
  if (*s == 0) throw DomainError(std::string(name) + " must be nonzero");
}

// Representative of arg in [0, 1), chosen at the midpoint.
Real turnsInUnit(const Complex& z) {
  Real g = argTurns(z);
  if (mpfr_sgn(g.mid().get()) < 0) g = g.addInteger(1);
  return g;
}

double upperBound(const Real& x) {
  const double d = x.upper().get_d();
  return std::nextafter(d, std::numeric_limits<double>::infinity());
}

}  // namespace

void TrigPoly::validate() const {
  requireNonzero(c0, "C0");
  requireNonzero(c1, "C1");
  requireNonzero(c2, "C2");
}

Complex evalP(const TrigPoly& P, const Real& x) {
  return P.c0 + P.c1 * cis2pi(P.alpha * x) + P.c2 * cis2pi(P.beta * x);
}

Complex evalTorus(const Complex& c0, const Complex& c1, const Complex& c2, const Real& x,
                  const Real& y) {
  return c0 + c1 * cis2pi(x) + c2 * cis2pi(y);
}

const char* zeroClassName(ZeroClass cls) noexcept {
  switch (cls) {
    case ZeroClass::None: return "none";
    case ZeroClass::One: return "one";
    case ZeroClass::Two: return "two";
  }
  return "unknown";
}

Real slopeParameter(const Complex& c1, const Complex& c2, const Real& gamma1, const Real& gamma2) {
  const Complex w1 = c1 * cis2pi(gamma1);
  const Complex w2 = c2 * cis2pi(gamma2);
  const auto s = abs2(w1).sign();
  if (!s || *s == 0) throw DomainError("degenerate gradient: |w1| is not bounded away from 0");
  return (w2 / w1).re;
}

TorusZeroData findTorusZeros(const Complex& c0, const Complex& c1, const Complex& c2) {
  requireNonzero(c0, "C0");
  requireNonzero(c1, "C1");
  requireNonzero(c2, "C2");
  const Real a = abs2(c0);
  const Real b = abs2(c1);
  const Real c = abs2(c2);
  // C1 e^{2 pi i x} = w1 and C2 e^{2 pi i y} = w2 with w1 + w2 = -C0: the
  // triangle with sides |C0|, |C1|, |C2|.
  const Real diff = a - b - c;
  TorusZeroData out;
  out.discriminant = (b * c).mulInteger(4) - diff * diff;
  const auto sign = out.discriminant.sign();
  if (!sign) {
    throw PrecisionError("triangle classification is ambiguous at this precision");
  }
  if (*sign < 0) {
    out.cls = ZeroClass::None;
    return out;
  }
  out.cls = *sign == 0 ? ZeroClass::One : ZeroClass::Two;

  const Real A = a + b - c;
  const Real twoA = a.mulInteger(2);
  std::vector<Real> roots;
  if (*sign == 0) {
    roots.push_back(Real(0, out.discriminant.precision()));
  } else {
    const Real s = sqrt(out.discriminant);
    roots.push_back(s);
    roots.push_back(-s);
  }
  for (const Real& root : roots) {
    // w1 = -C0 (A + i root) / (2|C0|^2)
    const Complex w1 = -(c0 * Complex(A / twoA, root / twoA));
    const Complex w2 = -c0 - w1;
    TorusZero z;
    z.gamma1 = turnsInUnit(w1 / c1);
    z.gamma2 = turnsInUnit(w2 / c2);
    z.t = slopeParameter(c1, c2, z.gamma1, z.gamma2);
    z.tIsZero = z.t.containsZero();
    z.residual = upperBound(abs(evalTorus(c0, c1, c2, z.gamma1, z.gamma2)));
    out.zeros.push_back(std::move(z));
  }
  std::sort(out.zeros.begin(), out.zeros.end(), [](const TorusZero& l, const TorusZero& r) {
    const int c1 = mpfr_cmp(l.gamma1.mid().get(), r.gamma1.mid().get());
    if (c1 != 0) return c1 < 0;
    return mpfr_cmp(l.gamma2.mid().get(), r.gamma2.mid().get()) < 0;
  });
  for (const auto& z : out.zeros) {
    if (z.tIsZero) {
      out.warnings.push_back("slope parameter t encloses 0 (right-angle triangle of moduli)");
      break;
    }
  }
  return out;
}

namespace {

struct ZeroD {
  double g1, g2, t;
};

struct GridPoly {
  std::complex<double> c0, c1, c2;
  std::vector<ZeroD> zeros;

  double absP(double x, double y) const {
    const double tau = 2.0 * M_PI;
    return std::abs(c0 + c1 * std::polar(1.0, tau * x) + c2 * std::polar(1.0, tau * y));
  }

  // Returns a negative value when the point sits on a zero.
  double ratio(double x, double y, double* absOut) const {
    const double p = absP(x, y);
    if (absOut) *absOut = p;
    if (zeros.empty()) return p;
    double denom = std::numeric_limits<double>::infinity();
    for (const auto& z : zeros) {
      const double dx = x - z.g1;
      const double dy = y - z.g2;
      const double sy = dy - std::floor(dy + 0.5);
      const double lin = dx + z.t * sy;
      auto dist = [](double v) { return std::abs(v - std::nearbyint(v)); };
      const double ddx = dist(dx);
      const double ddy = dist(dy);
      denom = std::min(denom, dist(lin) + ddx * ddx + ddy * ddy);
    }
    if (denom == 0) return -1;
    return p / denom;
  }
};

std::complex<double> toStd(const Complex& z) { return {z.re.toDouble(), z.im.toDouble()}; }

}  // namespace

LowerBoundReport lowerBoundConstant(const Complex& c0, const Complex& c1, const Complex& c2,
                                    int gridN, const TorusZeroData& zeros, unsigned threads) {
  if (gridN < 64) throw DomainError("lower-bound grid needs gridN >= 64");
  GridPoly g{toStd(c0), toStd(c1), toStd(c2), {}};
  for (const auto& z : zeros.zeros) g.zeros.push_back({z.gamma1.toDouble(), z.gamma2.toDouble(), z.t.toDouble()});

  LowerBoundReport report;
  report.gridN = gridN;
  report.zeroCount = zeros.zeros.size();
  report.zeroFree = zeros.zeros.empty();

  const std::size_t n = static_cast<std::size_t>(gridN);
  std::vector<double> values(n * n);
  std::vector<double> absValues(n * n);
  parallelFor(n, threads, [&](std::size_t i) {
    const double x = static_cast<double>(i) / gridN;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = static_cast<double>(j) / gridN;
      values[i * n + j] = g.ratio(x, y, &absValues[i * n + j]);
    }
  });

  report.minAbsP = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order;
  order.reserve(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    report.minAbsP = std::min(report.minAbsP, absValues[k]);
    if (values[k] < 0) {
      ++report.skipped;
    } else {
      order.push_back(k);
    }
  }
  report.evaluated = order.size();
  if (order.empty()) throw InternalConsistencyError("lower-bound grid has no evaluable point");
  const std::size_t centers = std::min(kRefineCenters, order.size());
  std::partial_sort(order.begin(), order.begin() + centers, order.end(),
                    [&](std::size_t l, std::size_t r) {
                      return values[l] < values[r] || (values[l] == values[r] && l < r);
                    });
  report.constant = values[order[0]];
  report.argminX = static_cast<double>(order[0] / n) / gridN;
  report.argminY = static_cast<double>(order[0] % n) / gridN;

  // Refinement: a 21x21 subgrid of step h/10 over each neighbouring cell block.
  struct Best {
    double value, x, y, absP;
    std::size_t evaluated, skipped;
  };
  std::vector<Best> best(centers);
  const double h = 1.0 / gridN;
  parallelFor(centers, threads, [&](std::size_t c) {
    const double cx = static_cast<double>(order[c] / n) / gridN;
    const double cy = static_cast<double>(order[c] % n) / gridN;
    Best b{std::numeric_limits<double>::infinity(), cx, cy, std::numeric_limits<double>::infinity(), 0, 0};
    for (int a = -10; a <= 10; ++a) {
      for (int e = -10; e <= 10; ++e) {
        const double x = cx + a * h / 10;
        const double y = cy + e * h / 10;
        double p = 0;
        const double r = g.ratio(x, y, &p);
        b.absP = std::min(b.absP, p);
        if (r < 0) {
          ++b.skipped;
          continue;
        }
        ++b.evaluated;
        if (r < b.value) {
          b.value = r;
          b.x = x;
          b.y = y;
        }
      }
    }
    best[c] = b;
  });
  for (const auto& b : best) {
    report.evaluated += b.evaluated;
    report.skipped += b.skipped;
    report.minAbsP = std::min(report.minAbsP, b.absP);
    if (b.value < report.constant) {
      report.constant = b.value;
      report.argminX = b.x - std::floor(b.x);
      report.argminY = b.y - std::floor(b.y);
    }
  }
  report.refinedCenters = centers;
  return report;
}

LowerBoundReport lowerBoundConstant(const Complex& c0, const Complex& c1, const Complex& c2,
                                    int gridN, unsigned threads) {
  return lowerBoundConstant(c0, c1, c2, gridN, findTorusZeros(c0, c1, c2), threads);
}

}  // namespace tfa
