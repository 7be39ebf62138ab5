#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "tfa/circle.hpp"
#include "tfa/continued_fraction.hpp"
#include "tfa/diophantine.hpp"
#include "tfa/hrt.hpp"
#include "tfa/parse.hpp"
#include "tfa/trig_poly.hpp"

namespace tfa {

using nlohmann::json;

namespace {

// --- Serialisation ----------------------------------------------------------

// {value, radius}: the radius also covers the rounding of the decimal string.
json realJson(const Real& r) {
  if (r.isExact() && r.exactValue().get_den() == 1) {
    return {{"value", r.exactValue().get_num().get_str()}, {"radius", "0"}};
  }
  const int digits = std::max(5, bitsToDigits(r.precision()) - 2);
  BigFloat err(64), mag(64);
  mpfr_set_ui(err.get(), 10, MPFR_RNDU);
  mpfr_pow_si(err.get(), err.get(), 1 - digits, MPFR_RNDU);
  mpfr_abs(mag.get(), r.mid().get(), MPFR_RNDU);
  mpfr_mul(err.get(), err.get(), mag.get(), MPFR_RNDU);
  mpfr_add(err.get(), err.get(), r.rad().get(), MPFR_RNDU);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.6RUe", err.get());
  std::string radius(buf);
  mpfr_free_str(buf);
  return {{"value", r.toDecimal(digits)}, {"radius", radius}};
}

std::string str(const mpz_class& z) { return z.get_str(); }
std::string str(const mpq_class& q) { return q.get_str(); }

template <class T>
std::string csvJoin(const std::vector<T>& cells) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
  return out.str();
}

std::string dec(const Real& r) { return realJson(r)["value"].get<std::string>(); }

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// --- Argument access --------------------------------------------------------

struct Ctx {
  const Args& args;
  int digits;
  unsigned threads = 0;
  json result = json::object();
  json checks = json::object();
  std::vector<std::string> order;  // verdict order
  std::string csv;
  json seed;  // null unless the command samples
  std::vector<std::string> warnings;

  bool has(const std::string& key) const { return args.count(key) != 0; }

  const std::string& need(const std::string& key) const {
    const auto it = args.find(key);
    if (it == args.end()) throw UsageError("missing --" + key);
    return it->second;
  }

  long long integer(const std::string& key, long long fallback, bool required = false) const {
    if (!has(key)) {
      if (required) need(key);
      return fallback;
    }
    const std::string& s = need(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--" + key + " expects an integer, got '" + s + "'");
    }
    if (used != s.size()) throw UsageError("--" + key + " expects an integer, got '" + s + "'");
    return v;
  }

  std::size_t count(const std::string& key, long long fallback, bool required = false) const {
    const long long v = integer(key, fallback, required);
    if (v < 0) throw UsageError("--" + key + " must be non-negative");
    return static_cast<std::size_t>(v);
  }

  mpq_class rational(const std::string& key, const mpq_class& fallback, bool required = false) const {
    if (!has(key)) {
      if (required) need(key);
      return fallback;
    }
    return parseRational(need(key));
  }

  Real real(const std::string& key) const { return parseReal(need(key), digits); }
  Complex complex(const std::string& key) const { return parseComplex(need(key), digits); }
  mpfr_prec_t bits() const { return digitsToBits(digits); }

  TrigPoly poly() const {
    TrigPoly P{complex("c0"), complex("c1"), complex("c2"), real("alpha"), real("beta")};
    P.validate();
    return P;
  }

  std::vector<long> ks() const {
    std::vector<long> out;
    std::stringstream in(need("ks"));
    std::string cell;
    while (std::getline(in, cell, ',')) {
      try {
        out.push_back(std::stol(cell));
      } catch (const std::exception&) {
        throw UsageError("--ks expects a comma-separated integer list");
      }
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i] <= out[i - 1]) throw UsageError("--ks must be strictly increasing");
    }
    return out;
  }

  // --points <csv file>, or --value v --count N for the multiples k v, k = 1..N.
  std::vector<Real> points() const {
    if (has("points")) {
      std::ifstream in(need("points"));
      if (!in) throw UsageError("cannot open points file '" + need("points") + "'");
      return readPointsCsv(in, digits);
    }
    if (has("value")) {
      const Real v = real("value");
      const std::size_t n = count("count", 0, true);
      std::vector<Real> out;
      for (std::size_t k = 1; k <= n; ++k) out.push_back(v.mulInteger(static_cast<unsigned long>(k)));
      return out;
    }
    throw UsageError("give --points <file> or --value with --count");
  }

  CaseChoice caseChoice() const {
    if (!has("case") || need("case") == "auto") return CaseChoice::Auto;
    if (need("case") == "force2") return CaseChoice::ForceCase2;
    throw UsageError("--case expects auto or force2");
  }

  std::uint64_t useSeed() {
    const long long s = integer("seed", 1);
    if (s < 0) throw UsageError("--seed must be non-negative");
    seed = s;
    return static_cast<std::uint64_t>(s);
  }

  void verdict(const std::string& name, bool pass, json detail = json::object()) {
    detail["pass"] = pass;
    checks[name] = std::move(detail);
    order.push_back(name);
  }
};

// --- Payload builders -------------------------------------------------------

json cfJson(const ContinuedFraction& cf) {
  json q = json::array(), p = json::array(), a = json::array();
  for (std::size_t k = 0; k < cf.size(); ++k) {
    a.push_back(str(cf.quotients[k]));
    p.push_back(str(cf.p[k]));
    q.push_back(str(cf.q[k]));
  }
  return {{"quotients", a}, {"p", p}, {"q", q}, {"terminal", cf.terminal},
          {"validDepth", cf.validDepth()}};
}

json zerosJson(const TorusZeroData& d) {
  json zs = json::array();
  for (const auto& z : d.zeros) {
    zs.push_back({{"gamma1", realJson(z.gamma1)}, {"gamma2", realJson(z.gamma2)},
                  {"t", realJson(z.t)}, {"residual", z.residual}, {"tIsZero", z.tIsZero}});
  }
  return {{"class", zeroClassName(d.cls)}, {"discriminant", realJson(d.discriminant)},
          {"zeros", zs}, {"warnings", d.warnings}};
}

bool residualsOk(const TorusZeroData& d) {
  for (const auto& z : d.zeros) {
    if (!(z.residual < 1e-30)) return false;
  }
  return true;
}

json sumJson(const SumReport& r) {
  return {{"sum", realJson(r.sum)}, {"bound", realJson(r.bound)},
          {"referenceTerm", r.referenceTerm}, {"constantFit", r.constantFit},
          {"witnesses", r.witnesses}};
}

json intervalsJson(const IntervalUnion& u) {
  json out = json::array();
  for (const auto& iv : u.intervals()) out.push_back({str(iv.lo), str(iv.hi)});
  return out;
}

json exceptionalJson(const ExceptionalSet& E) {
  return {{"n", E.n},
          {"delta", str(E.delta)},
          {"ballRadius", str(E.radius)},
          {"measure", str(E.measure)},
          {"measureApprox", E.measure.get_d()},
          {"stage1Measure", str(E.stage1Measure)},
          {"stage2Measure", str(E.stage2Measure)},
          {"cap", E.cap},
          {"threshold1", E.threshold1},
          {"threshold2", E.threshold2},
          {"intervalCount", E.set.intervals().size()},
          {"cellsExamined", E.cellsExamined},
          {"ambiguousLeaves", E.ambiguousLeaves}};
}

std::string intervalsCsv(const IntervalUnion& u) {
  std::string out = "lo,hi\n";
  for (const auto& iv : u.intervals()) out += csvJoin(std::vector<double>{iv.lo.get_d(), iv.hi.get_d()});
  return out;
}

json conditionJson(const ConditionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k}, {"a", str(row.a)}, {"q", str(row.q)},
                    {"quotientRatio", row.quotientRatio}, {"growthRatio", row.growthRatio},
                    {"quotientMax", row.quotientMax}, {"growthMax", row.growthMax}});
  }
  json gammas = json::array();
  for (const auto& g : r.gammas) {
    gammas.push_back({{"gamma", str(g.gamma)}, {"found", g.found}, {"k", g.k}});
  }
  return {{"depth", r.depth},
          {"rational", r.rational},
          {"rows", rows},
          {"headQuotientMax", r.headQuotientMax},
          {"tailQuotientMax", r.tailQuotientMax},
          {"headGrowthMax", r.headGrowthMax},
          {"tailGrowthMax", r.tailGrowthMax},
          {"quotientVerdict", r.quotientVerdict},
          {"growthVerdict", r.growthVerdict},
          {"gammas", gammas},
          {"gammaVerdict", r.gammaVerdict},
          {"note", r.note}};
}

std::string conditionCsv(const ConditionReport& r) {
  std::string out = "k,a,q,quotientRatio,growthRatio,quotientMax,growthMax\n";
  for (const auto& row : r.rows) {
    out += csvJoin(std::vector<std::string>{std::to_string(row.k), str(row.a), str(row.q),
                                            fmt(row.quotientRatio), fmt(row.growthRatio),
                                            fmt(row.quotientMax), fmt(row.growthMax)});
  }
  return out;
}

json certificateJson(const NkCertificate& c) {
  return {{"nIndex", c.nIndex},
          {"m", str(c.m)},
          {"qn", str(c.qn)},
          {"qNext", str(c.qNext)},
          {"Nk", str(c.Nk)},
          {"distAlphaBeta", realJson(c.distAlphaBeta)},
          {"fracOverBeta", realJson(c.fracOverBeta)},
          {"ratio", realJson(c.ratio)}};
}

struct NkChecks {
  bool propertyI = true, propertyIII = true, mCap = true;
};

NkChecks nkChecks(const NkReport& r) {
  NkChecks out;
  for (const auto& c : r.certificates) {
    out.propertyI = out.propertyI && c.Nk == c.m * c.qn;
    out.propertyIII = out.propertyIII && c.fracOverBeta.upper() <= r.s;
    out.mCap = out.mCap && c.m >= 1 && c.m <= r.mCap;
  }
  return out;
}

json nkJson(const NkReport& r) {
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(certificateJson(c));
  json misses = json::array();
  for (const auto& m : r.misses) misses.push_back({{"nIndex", m.nIndex}, {"reason", m.reason}});
  return {{"s", str(r.s)},       {"c", str(r.c)},         {"depth", r.depth},
          {"mCap", str(r.mCap)}, {"selected", r.selected}, {"certificates", certs},
          {"misses", misses},    {"ratioMin", r.ratioMin}, {"ratioMax", r.ratioMax}};
}

std::string nkCsv(const NkReport& r) {
  std::string out = "nIndex,m,qn,qNext,Nk,distAlphaBeta,fracOverBeta,ratio\n";
  for (const auto& c : r.certificates) {
    out += csvJoin(std::vector<std::string>{std::to_string(c.nIndex), str(c.m), str(c.qn),
                                            str(c.qNext), str(c.Nk), dec(c.distAlphaBeta),
                                            dec(c.fracOverBeta), dec(c.ratio)});
  }
  return out;
}

json productSumJson(const ProductSumReport& r) {
  json zeros = json::array();
  for (const auto& z : r.perZero) {
    zeros.push_back({{"case", z.caseUsed},
                     {"forced", z.forced},
                     {"lambda", realJson(z.lambda)},
                     {"budget", str(z.budget)},
                     {"rescaledDelta", str(z.rescaledDelta)},
                     {"pointCount", z.pointCount},
                     {"measure", str(z.measure)},
                     {"designBound", realJson(z.designBound)},
                     {"nearSet", z.nearSet},
                     {"nearCap", z.nearCap},
                     {"farBound", realJson(z.farBound)},
                     {"nearBound", realJson(z.nearBound)}});
  }
  return {{"Qk", str(r.Qk)},
          {"n", r.n},
          {"qn", str(r.qn)},
          {"gammaLo", str(r.gammaLo)},
          {"gammaHi", str(r.gammaHi)},
          {"delta", str(r.delta)},
          {"zeroClass", zeroClassName(r.zeroClass)},
          {"lowerConstant", r.lowerConstant},
          {"perZero", zeros},
          {"measure", str(r.measure)},
          {"measureApprox", r.measure.get_d()},
          {"exceptionalIntervals", r.exceptional.intervals().size()},
          {"samples", r.samples},
          {"maxSum", realJson(r.maxSum)},
          {"argmax", r.argmax},
          {"bound", realJson(r.bound)},
          {"fittedConstant", r.fittedConstant},
          {"boundConstant", r.boundConstant},
          {"sampleSums", r.sampleSums}};
}

json keythJson(const KeythReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"x", str(s.x)},
                       {"logRatio", realJson(s.logRatio)},
                       {"logBound", realJson(s.logBound)},
                       {"reciprocalSum", realJson(s.reciprocalSum)},
                       {"identity", s.identity},
                       {"withinBound", s.pass}});
  }
  return {{"Nk", str(r.Nk)},
          {"Pk", realJson(r.Pk)},
          {"floorPk", str(r.floorPk)},
          {"perturbation", realJson(r.perturbation)},
          {"gamma", str(r.gamma)},
          {"delta", str(r.delta)},
          {"measure", str(r.measure)},
          {"exceptionalIntervals", r.exceptional.intervals().size()},
          {"samples", samples},
          {"maxLogRatio", r.maxLogRatio},
          {"maxLogBound", r.maxLogBound}};
}

std::string keythCsv(const KeythReport& r) {
  std::string out = "x,logRatio,logBound,reciprocalSum,identity,withinBound\n";
  for (const auto& s : r.samples) {
    out += csvJoin(std::vector<std::string>{fmt(s.x.get_d()), dec(s.logRatio), dec(s.logBound),
                                            dec(s.reciprocalSum), s.identity ? "1" : "0",
                                            s.pass ? "1" : "0"});
  }
  return out;
}

KeythOptions keythOptions(Ctx& ctx) {
  KeythOptions o;
  o.samples = ctx.count("samples", 50);
  o.seed = ctx.useSeed();
  o.caseChoice = ctx.caseChoice();
  o.threads = ctx.threads;
  return o;
}

NkReport nkFromArgs(const Ctx& ctx) {
  return constructNk(ctx.real("alpha"), ctx.real("beta"), ctx.rational("s", mpq_class(1, 2)),
                     ctx.count("depth", 40), ctx.rational("c", 1));
}

// --- Commands ---------------------------------------------------------------

void cmdCf(Ctx& ctx) {
  const Real x = ctx.real("value");
  const ContinuedFraction cf = expand(x, ctx.count("depth", 10));
  ctx.result = cfJson(cf);
  ctx.verdict("determinant", determinantIdentityHolds(cf));
  ctx.verdict("alternation", convergentAlternation(cf, x).pass);
  ctx.csv = "k,a,p,q\n";
  for (std::size_t k = 0; k < cf.size(); ++k) {
    ctx.csv += csvJoin(std::vector<std::string>{std::to_string(k), str(cf.quotients[k]),
                                                str(cf.p[k]), str(cf.q[k])});
  }
}

void cmdBestApprox(Ctx& ctx) {
  const Real x = ctx.real("value");
  const mpz_class cap(static_cast<unsigned long>(ctx.count("cap", kDefaultBruteForceCap)));
  const BestApproxReport r = bestApproxBruteCheck(x, ctx.count("n", 0, true), cap);
  ctx.result = {{"n", r.n},
                {"qn", str(r.qn)},
                {"qNext", str(r.qNext)},
                {"minimizingK", str(r.minimizingK)},
                {"minDistance", realJson(r.minDistance)},
                {"distanceAtQn", realJson(r.distanceAtQn)},
                {"scanned", r.scanned},
                {"vacuous", r.vacuous}};
  ctx.verdict("bestApproximation", r.pass);
}

void cmdQuality(Ctx& ctx) {
  const Real x = ctx.real("value");
  std::vector<std::size_t> ns;
  if (ctx.has("n")) {
    ns.push_back(ctx.count("n", 0));
  } else {
    const std::size_t depth = ctx.count("depth", 20);
    for (std::size_t n = 1; n < depth; ++n) ns.push_back(n);
  }
  std::size_t top = 0;
  for (std::size_t n : ns) top = std::max(top, n);
  const ContinuedFraction cf = expand(x, top + 2);
  json rows = json::array();
  bool all = true;
  ctx.csv = "n,qn,qNext,distance,lower,upper,pass\n";
  for (std::size_t n : ns) {
    const QualityReport r = qualityBounds(x, cf, n);
    all = all && r.pass;
    rows.push_back({{"n", r.n},
                    {"qn", str(r.qn)},
                    {"qNext", str(r.qNext)},
                    {"distance", realJson(r.distance)},
                    {"lower", str(r.lower)},
                    {"upper", str(r.upper)},
                    {"inside", r.pass}});
    ctx.csv += csvJoin(std::vector<std::string>{std::to_string(r.n), str(r.qn), str(r.qNext),
                                                dec(r.distance), str(r.lower), str(r.upper),
                                                r.pass ? "1" : "0"});
  }
  ctx.result = {{"rows", rows}};
  ctx.verdict("sandwich", all);
}

void cmdZeros(Ctx& ctx) {
  const TorusZeroData d = findTorusZeros(ctx.complex("c0"), ctx.complex("c1"), ctx.complex("c2"));
  ctx.result = zerosJson(d);
  ctx.warnings.insert(ctx.warnings.end(), d.warnings.begin(), d.warnings.end());
  ctx.verdict("residuals", residualsOk(d));
  ctx.csv = "gamma1,gamma2,t,residual\n";
  for (const auto& z : d.zeros) {
    ctx.csv += csvJoin(std::vector<std::string>{dec(z.gamma1), dec(z.gamma2), dec(z.t), fmt(z.residual)});
  }
}

void cmdLowerBound(Ctx& ctx) {
  const LowerBoundReport r =
      lowerBoundConstant(ctx.complex("c0"), ctx.complex("c1"), ctx.complex("c2"),
                         static_cast<int>(ctx.integer("grid", 256)), ctx.threads);
  ctx.result = {{"gridN", r.gridN},         {"zeroCount", r.zeroCount}, {"zeroFree", r.zeroFree},
                {"constant", r.constant},   {"argminX", r.argminX},     {"argminY", r.argminY},
                {"minAbsP", r.minAbsP},     {"evaluated", r.evaluated}, {"skipped", r.skipped},
                {"refinedCenters", r.refinedCenters}};
  ctx.verdict("positive", r.constant > 1e-6, {{"threshold", 1e-6}});
}

void cmdGap(Ctx& ctx) {
  const GapReport r = gapCheck(ctx.ks(), ctx.real("value"), ctx.count("n", 0, true));
  ctx.result = {{"qn", str(r.qn)},
                {"minPairwise", r.pairs ? realJson(r.minPairwise) : json(nullptr)},
                {"threshold", str(r.threshold)},
                {"pairs", r.pairs},
                {"argminDifference", r.argminDifference},
                {"vacuous", r.vacuous}};
  ctx.verdict("gap", r.pass);
}

void cmdLemma3(Ctx& ctx) {
  const SumReport r =
      reciprocalSumLemma(ctx.ks(), ctx.real("value"), ctx.real("x"), ctx.count("n", 0, true));
  ctx.result = sumJson(r);
  ctx.verdict("bound", r.pass);
}

void cmdExcset(Ctx& ctx) {
  const ExceptionalSet E =
      buildExceptionalSet(ctx.points(), ctx.rational("delta", mpq_class(1, 10)), ctx.threads);
  ctx.result = exceptionalJson(E);
  ctx.result["intervals"] = intervalsJson(E.set);
  ctx.verdict("measure", E.measure <= E.delta);
  ctx.csv = intervalsCsv(E.set);
}

void cmdOutsideSums(Ctx& ctx) {
  const std::vector<Real> pts = ctx.points();
  const ExceptionalSet E = buildExceptionalSet(pts, ctx.rational("delta", mpq_class(1, 10)), ctx.threads);
  const std::size_t samples = ctx.count("samples", 1000);
  const OutsideSumsReport r = sumBoundsOutside(pts, E, samples, ctx.useSeed(), ctx.threads);
  ctx.result = {{"exceptionalSet", exceptionalJson(E)},
                {"n", r.n},
                {"samples", r.samples},
                {"maxSum1", realJson(r.maxSum1)},
                {"maxSum2", realJson(r.maxSum2)},
                {"argmax1", r.argmax1},
                {"argmax2", r.argmax2},
                {"maxTerm", r.maxTerm},
                {"fitted1", r.fitted1},
                {"fitted2", r.fitted2},
                {"design1", r.design1},
                {"design2", r.design2}};
  ctx.verdict("measure", E.measure <= E.delta);
  ctx.verdict("termBound", r.termPass);
  ctx.verdict("linearSum", r.pass1);
  ctx.verdict("squareSum", r.pass2);
}

ProductSumReport runProductSum(Ctx& ctx, const TrigPoly& P, const mpz_class& Qk,
                               const mpq_class& lo, const mpq_class& hi) {
  ProductSumOptions o;
  o.samples = ctx.count("samples", 100);
  o.seed = ctx.useSeed();
  o.caseChoice = ctx.caseChoice();
  o.gridN = static_cast<int>(ctx.integer("grid", 256));
  o.threads = ctx.threads;
  return productReciprocalSumAnalysis(P, Qk, lo, hi, ctx.rational("delta", mpq_class(1, 10)), o);
}

void cmdProdsum(Ctx& ctx) {
  const TrigPoly P = ctx.poly();
  const mpz_class Qk(ctx.need("qk"));
  const ProductSumReport r =
      runProductSum(ctx, P, Qk, ctx.rational("gamma-lo", 1), ctx.rational("gamma-hi", 2));
  ctx.result = productSumJson(r);
  ctx.verdict("bound", r.pass);
  ctx.csv = "sample,sum\n";
  for (std::size_t i = 0; i < r.sampleSums.size(); ++i) {
    ctx.csv += csvJoin(std::vector<std::string>{std::to_string(i), fmt(r.sampleSums[i])});
  }
}

Real ratioArg(const Ctx& ctx) {
  if (ctx.has("value")) return ctx.real("value");
  return ctx.real("alpha") / ctx.real("beta");
}

void cmdClassify(Ctx& ctx) {
  const ConditionReport r = classifyCondition(ratioArg(ctx), ctx.count("depth", 40));
  ctx.result = conditionJson(r);
  ctx.csv = conditionCsv(r);
}

void cmdNk(Ctx& ctx) {
  const NkReport r = nkFromArgs(ctx);
  ctx.result = nkJson(r);
  const NkChecks c = nkChecks(r);
  ctx.verdict("certificates", !r.certificates.empty());
  ctx.verdict("propertyI", c.propertyI);
  ctx.verdict("propertyIII", c.propertyIII);
  ctx.verdict("multiplierCap", c.mCap);
  ctx.csv = nkCsv(r);
}

void cmdProduct(Ctx& ctx) {
  const TrigPoly P = ctx.poly();
  const ProductLog r = productLog(P, ctx.real("x"), ctx.count("count", 0, true));
  ctx.result = {{"logMagnitude", realJson(r.logMagnitude)},
                {"phase", realJson(r.phase)},
                {"clampEvents", r.clampEvents}};
}

void cmdOrbit(Ctx& ctx) {
  const TrigPoly P = ctx.poly();
  const OrbitTrace t = orbit(P, ctx.real("x"), static_cast<long>(ctx.count("radius", 0, true)));
  json rows = json::array();
  for (long n = -t.M; n <= t.M; ++n) {
    rows.push_back({{"n", n}, {"logMagnitude", realJson(t.logAt(n))}, {"phase", realJson(t.phaseAt(n))}});
  }
  ctx.result = {{"M", t.M}, {"trace", rows}, {"clampEvents", t.clampEvents}};
  std::ostringstream csv;
  writeOrbitCsv(csv, t, std::max(5, ctx.digits - 2));
  ctx.csv = csv.str();
}

const NkCertificate& pickCertificate(const Ctx& ctx, const NkReport& nk) {
  const std::size_t index = ctx.count("index", 0);
  if (index >= nk.certificates.size()) {
    throw DomainError("no certificate at index " + std::to_string(index) + " (" +
                      std::to_string(nk.certificates.size()) + " emitted)");
  }
  return nk.certificates[index];
}

void cmdKeyth(Ctx& ctx) {
  const TrigPoly P = ctx.poly();
  const NkReport nk = nkFromArgs(ctx);
  const NkCertificate& cert = pickCertificate(ctx, nk);
  const KeythReport r = keythCompare(P, cert, ctx.rational("delta", mpq_class(1, 10)), keythOptions(ctx));
  ctx.result = keythJson(r);
  ctx.result["certificate"] = certificateJson(cert);
  ctx.verdict("ratioBound", r.pass);
  ctx.verdict("indexIdentity", r.identity);
  ctx.csv = keythCsv(r);
}

void cmdNormalize(Ctx& ctx) {
  std::ifstream in(ctx.need("config"));
  if (!in) throw UsageError("cannot open configuration file '" + ctx.need("config") + "'");
  const NormalizedConfiguration n = normalizeConfiguration(readConfigurationCsv(in, ctx.digits));
  json steps = json::array();
  for (const auto& s : n.steps) {
    json m = json::array(), shift = json::array();
    for (const auto& v : s.matrix) m.push_back(realJson(v));
    for (const auto& v : s.shift) shift.push_back(realJson(v));
    steps.push_back({{"name", s.name}, {"matrix", m}, {"shift", shift}});
  }
  json image = json::array();
  for (const auto& p : n.image) image.push_back({realJson(p.a), realJson(p.b)});
  ctx.result = {{"alpha", realJson(n.alpha)}, {"beta", realJson(n.beta)},
                {"offLine", n.offLine},       {"base", n.base},
                {"alphaIndex", n.alphaIndex}, {"betaIndex", n.betaIndex},
                {"steps", steps},             {"image", image}};
}

void cmdReport(Ctx& ctx) {
  const TrigPoly P = ctx.poly();
  const ConditionReport cond = classifyCondition(P.alpha / P.beta, ctx.count("depth", 40));
  ctx.result["classify"] = conditionJson(cond);

  const TorusZeroData zeros = findTorusZeros(P.c0, P.c1, P.c2);
  ctx.result["zeros"] = zerosJson(zeros);
  ctx.verdict("zeros.residuals", residualsOk(zeros));

  const NkReport nk = nkFromArgs(ctx);
  ctx.result["nk"] = nkJson(nk);
  const NkChecks c = nkChecks(nk);
  ctx.verdict("nk.certificates", !nk.certificates.empty());
  ctx.verdict("nk.propertyI", c.propertyI);
  ctx.verdict("nk.propertyIII", c.propertyIII);
  if (nk.certificates.empty()) {
    ctx.warnings.push_back("no N_k certificate: prodsum and keyth skipped");
    return;
  }
  const NkCertificate& cert = pickCertificate(ctx, nk);
  const auto K = (Real::fromInteger(cert.Nk, ctx.bits()) / abs(P.beta)).floor();
  if (!K) throw PrecisionError("[P_k] is not certified at this precision");
  mpq_class gamma(*K, cert.qn);
  gamma.canonicalize();
  const ProductSumReport ps = runProductSum(ctx, P, *K, gamma, gamma);
  ctx.result["prodsum"] = productSumJson(ps);
  ctx.verdict("prodsum.bound", ps.pass);

  const KeythReport kr = keythCompare(P, cert, ctx.rational("delta", mpq_class(1, 10)), keythOptions(ctx));
  ctx.result["keyth"] = keythJson(kr);
  ctx.verdict("keyth.ratioBound", kr.pass);
  ctx.verdict("keyth.indexIdentity", kr.identity);
}

using Handler = std::function<void(Ctx&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"cf", cmdCf},
      {"best-approx", cmdBestApprox},
      {"quality", cmdQuality},
      {"zeros", cmdZeros},
      {"lower-bound", cmdLowerBound},
      {"gap", cmdGap},
      {"lemma3", cmdLemma3},
      {"excset", cmdExcset},
      {"outside-sums", cmdOutsideSums},
      {"prodsum", cmdProdsum},
      {"classify", cmdClassify},
      {"nk", cmdNk},
      {"product", cmdProduct},
      {"orbit", cmdOrbit},
      {"keyth", cmdKeyth},
      {"normalize", cmdNormalize},
      {"report", cmdReport},
  };
  return table;
}

int initialDigits(const Args& args, bool* explicitDigits) {
  *explicitDigits = false;
  std::string text;
  if (const auto it = args.find("digits"); it != args.end()) {
    *explicitDigits = true;
    text = it->second;
  } else if (const char* env = std::getenv("TFA_DIGITS"); env && *env) {
    text = env;
  } else {
    return kDefaultDigits;
  }
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(text, &used);
    if (used != text.size()) d = 0;
  } catch (const std::exception&) {
    d = 0;
  }
  if (d < 10 || d > 100000) throw UsageError("digits must be an integer in [10, 100000]");
  return d;
}

CommandOutput attempt(const std::string& command, const Handler& handler, const Args& args,
                      int digits) {
  Ctx ctx{args, digits, 0, json::object(), json::object(), {}, {}, nullptr, {}};
  if (args.count("threads")) {
    const long long t = ctx.integer("threads", 0);
    if (t < 0) throw UsageError("--threads must be non-negative");
    ctx.threads = static_cast<unsigned>(t);
  }
  handler(ctx);

  CommandOutput out;
  out.digits = digits;
  json inputs = json::object();
  for (const auto& [k, v] : args) {
    if (k != "threads" && k != "out" && k != "format") inputs[k] = v;
  }
  json verdicts = json::array();
  for (const auto& name : ctx.order) {
    const bool pass = ctx.checks[name]["pass"].get<bool>();
    out.allPass = out.allPass && pass;
    verdicts.push_back({{"name", name}, {"pass", pass}});
  }
  json result = std::move(ctx.result);
  result["checks"] = std::move(ctx.checks);
  out.envelope = {{"schemaVersion", kSchemaVersion},
                  {"command", command},
                  {"inputs", inputs},
                  {"precision", digits},
                  {"seed", ctx.seed},
                  {"result", std::move(result)},
                  {"verdicts", verdicts},
                  {"allPass", out.allPass},
                  {"warnings", ctx.warnings}};
  out.csv = std::move(ctx.csv);
  return out;
}

}  // namespace

const std::vector<std::string>& commandNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

CommandOutput runCommand(const std::string& command, const Args& args) {
  try {
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw UsageError("unknown command '" + command + "'");
    bool explicitDigits = false;
    int digits = initialDigits(args, &explicitDigits);
    std::vector<std::string> retries;
    for (;;) {
      try {
        CommandOutput out = attempt(command, it->second, args, digits);
        for (const auto& r : retries) out.envelope["warnings"].push_back(r);
        return out;
      } catch (const Error& e) {
        const bool precision =
            e.code() == ErrorCode::Precision || e.code() == ErrorCode::DepthExhausted;
        if (!precision) throw;
        if (explicitDigits || digits * 2 > kMaxAutoDigits) {
          throw CommandFailure(e.code(),
                               std::string(e.what()) + " (at " + std::to_string(digits) +
                                   " digits; retry with --digits " + std::to_string(digits * 2) + ")",
                               digits * 2);
        }
        retries.push_back("precision retry: " + std::string(e.what()) + "; rerun at " +
                          std::to_string(digits * 2) + " digits");
        digits *= 2;
      }
    }
  } catch (const CommandFailure&) {
    throw;
  } catch (const Error& e) {
    throw CommandFailure(e.code(), e.what());
  } catch (const json::exception& e) {
    throw CommandFailure(ErrorCode::InternalConsistency, std::string("report assembly: ") + e.what());
  } catch (const std::exception& e) {
    throw CommandFailure(ErrorCode::InternalConsistency, e.what());
  }
}

// --- Validation ---------------------------------------------------------------

namespace {

std::string checkReals(const json& node, const std::string& path) {
  if (node.is_object()) {
    if (node.contains("radius")) {
      if (!node.contains("value") || !node["value"].is_string() || !node["radius"].is_string()) {
        return path + ": certified number needs string value and radius";
      }
      return {};
    }
    for (const auto& [k, v] : node.items()) {
      const std::string err = checkReals(v, path + "/" + k);
      if (!err.empty()) return err;
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      const std::string err = checkReals(node[i], path + "/" + std::to_string(i));
      if (!err.empty()) return err;
    }
  }
  return {};
}

}  // namespace

std::string validateEnvelope(const json& env) {
  if (!env.is_object()) return "envelope is not an object";
  for (const char* key : {"schemaVersion", "command", "inputs", "precision", "seed", "result",
                          "verdicts", "allPass", "warnings"}) {
    if (!env.contains(key)) return std::string("missing field ") + key;
  }
  if (env["schemaVersion"] != kSchemaVersion) return "unsupported schemaVersion";
  if (!env["command"].is_string()) return "command must be a string";
  const std::string command = env["command"];
  if (std::find(commandNames().begin(), commandNames().end(), command) == commandNames().end()) {
    return "unknown command " + command;
  }
  if (!env["inputs"].is_object()) return "inputs must be an object";
  for (const auto& [k, v] : env["inputs"].items()) {
    if (!v.is_string()) return "input " + k + " must be a string";
  }
  if (!env["precision"].is_number_integer() || env["precision"].get<long long>() <= 0) {
    return "precision must be a positive integer";
  }
  if (!env["seed"].is_null() && !env["seed"].is_number_integer()) return "seed must be null or an integer";
  if (!env["allPass"].is_boolean()) return "allPass must be a boolean";
  if (!env["warnings"].is_array()) return "warnings must be an array";
  if (!env["result"].is_object()) return "result must be an object";
  const json& result = env["result"];
  if (!result.contains("checks") || !result["checks"].is_object()) return "result.checks missing";
  if (!env["verdicts"].is_array()) return "verdicts must be an array";

  bool all = true;
  std::size_t seen = 0;
  for (const auto& v : env["verdicts"]) {
    if (!v.is_object() || !v.contains("name") || !v.contains("pass") || !v["name"].is_string() ||
        !v["pass"].is_boolean()) {
      return "malformed verdict entry";
    }
    const std::string name = v["name"];
    if (!result["checks"].contains(name)) return "verdict " + name + " has no payload check";
    const json& check = result["checks"][name];
    if (!check.contains("pass") || check["pass"] != v["pass"]) {
      return "verdict " + name + " disagrees with its payload";
    }
    all = all && v["pass"].get<bool>();
    ++seen;
  }
  if (seen != result["checks"].size()) return "a payload check is missing from the verdict list";
  if (env["allPass"].get<bool>() != all) return "allPass disagrees with the verdicts";
  return checkReals(result, "/result");
}

}  // namespace tfa
