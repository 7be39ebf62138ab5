#include "tfa/tfa.h"

#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "tfa/continued_fraction.hpp"
#include "tfa/parse.hpp"
#include "tfa/trig_poly.hpp"

struct tfa_report {
  std::string json;
  std::string csv;
  bool allPass = true;
  int digits = 0;
  std::vector<std::string> verdictNames;
  std::vector<int> verdictPass;
};

struct tfa_real {
  tfa::Real value;
  std::string valueText;
  std::string radiusText;
};

struct tfa_cf {
  tfa::ContinuedFraction cf;
  std::vector<std::string> a, p, q;
};

struct tfa_zeros {
  tfa::TorusZeroData data;
};

namespace {

thread_local std::string lastError;
thread_local int lastSuggested = 0;

tfa_status fail(tfa_status status, const std::string& message, int suggested = 0) {
  lastError = message;
  lastSuggested = suggested;
  return status;
}

tfa_status ok() {
  lastError.clear();
  lastSuggested = 0;
  return TFA_OK;
}

tfa_status statusOf(tfa::ErrorCode code) { return static_cast<tfa_status>(static_cast<int>(code)); }

// Runs body, translating exceptions into status codes.
template <class Body>
tfa_status guarded(Body&& body) {
  try {
    body();
    return ok();
  } catch (const tfa::CommandFailure& e) {
    return fail(statusOf(e.code), e.what(), e.suggestedDigits);
  } catch (const tfa::PrecisionError& e) {
    return fail(TFA_ERR_PRECISION, e.what(), e.suggestedDigits());
  } catch (const tfa::Error& e) {
    return fail(statusOf(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(TFA_ERR_INTERNAL, e.what());
  }
}

const char* at(const std::vector<std::string>& v, std::size_t k) {
  return k < v.size() ? v[k].c_str() : "";
}

}  // namespace

extern "C" {

const char* tfa_version(void) { return "1.0.0"; }

const char* tfa_status_name(tfa_status status) {
  if (status == TFA_OK) return "OK";
  if (status == TFA_ERR_NULL_ARGUMENT) return "NullArgument";
  return tfa::errorCodeName(static_cast<tfa::ErrorCode>(static_cast<int>(status)));
}

const char* tfa_last_error(void) { return lastError.c_str(); }
int tfa_last_error_suggested_digits(void) { return lastSuggested; }

size_t tfa_command_count(void) { return tfa::commandNames().size(); }

const char* tfa_command_name(size_t index) { return at(tfa::commandNames(), index); }

tfa_status tfa_run(const char* command, const char* const* keys, const char* const* values,
                   size_t count, tfa_report** out) {
  if (!command || !out || (count && (!keys || !values))) {
    return fail(TFA_ERR_NULL_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    tfa::Args args;
    for (size_t i = 0; i < count; ++i) {
      if (!keys[i] || !values[i]) throw tfa::UsageError("null key or value");
      args[keys[i]] = values[i];
    }
    tfa::CommandOutput result = tfa::runCommand(command, args);
    auto report = std::make_unique<tfa_report>();
    report->json = result.envelope.dump(2);
    report->csv = std::move(result.csv);
    report->allPass = result.allPass;
    report->digits = result.digits;
    for (const auto& v : result.envelope["verdicts"]) {
      report->verdictNames.push_back(v["name"].get<std::string>());
      report->verdictPass.push_back(v["pass"].get<bool>() ? 1 : 0);
    }
    *out = report.release();
  });
}

void tfa_report_free(tfa_report* report) { delete report; }
const char* tfa_report_json(const tfa_report* r) { return r ? r->json.c_str() : ""; }
const char* tfa_report_csv(const tfa_report* r) { return r ? r->csv.c_str() : ""; }
int tfa_report_all_pass(const tfa_report* r) { return r && r->allPass ? 1 : 0; }
int tfa_report_digits(const tfa_report* r) { return r ? r->digits : 0; }
size_t tfa_report_verdict_count(const tfa_report* r) { return r ? r->verdictNames.size() : 0; }

const char* tfa_report_verdict_name(const tfa_report* r, size_t index) {
  return r ? at(r->verdictNames, index) : "";
}

int tfa_report_verdict_pass(const tfa_report* r, size_t index) {
  return r && index < r->verdictPass.size() ? r->verdictPass[index] : 0;
}

tfa_status tfa_validate_report_json(const char* json) {
  if (!json) return fail(TFA_ERR_NULL_ARGUMENT, "null argument");
  const auto parsed = nlohmann::json::parse(json, nullptr, false);
  if (parsed.is_discarded()) return fail(TFA_ERR_PARSE, "report is not valid JSON");
  const std::string err = tfa::validateEnvelope(parsed);
  if (!err.empty()) return fail(TFA_ERR_DOMAIN, err);
  return ok();
}

tfa_status tfa_real_parse(const char* text, int digits, tfa_real** out) {
  if (!text || !out) return fail(TFA_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new tfa_real{tfa::parseReal(text, digits > 0 ? digits : tfa::kDefaultDigits), {}, {}};
  });
}

void tfa_real_free(tfa_real* x) { delete x; }

const char* tfa_real_value(tfa_real* x, int digits) {
  if (!x) return "";
  x->valueText = x->value.toDecimal(digits > 0 ? digits : 30);
  return x->valueText.c_str();
}

const char* tfa_real_radius(tfa_real* x) {
  if (!x) return "";
  x->radiusText = x->value.radiusString();
  return x->radiusText.c_str();
}

double tfa_real_to_double(const tfa_real* x) { return x ? x->value.toDouble() : 0.0; }

tfa_status tfa_cf_expand(const tfa_real* x, size_t depth, tfa_cf** out) {
  if (!x || !out) return fail(TFA_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<tfa_cf>();
    h->cf = tfa::expand(x->value, depth);
    for (size_t k = 0; k < h->cf.size(); ++k) {
      h->a.push_back(h->cf.quotients[k].get_str());
      h->p.push_back(h->cf.p[k].get_str());
      h->q.push_back(h->cf.q[k].get_str());
    }
    *out = h.release();
  });
}

void tfa_cf_free(tfa_cf* cf) { delete cf; }
size_t tfa_cf_size(const tfa_cf* cf) { return cf ? cf->cf.size() : 0; }
int tfa_cf_terminal(const tfa_cf* cf) { return cf && cf->cf.terminal ? 1 : 0; }
const char* tfa_cf_quotient(const tfa_cf* cf, size_t k) { return cf ? at(cf->a, k) : ""; }
const char* tfa_cf_numerator(const tfa_cf* cf, size_t k) { return cf ? at(cf->p, k) : ""; }
const char* tfa_cf_denominator(const tfa_cf* cf, size_t k) { return cf ? at(cf->q, k) : ""; }

tfa_status tfa_zeros_find(const char* c0, const char* c1, const char* c2, int digits,
                          tfa_zeros** out) {
  if (!c0 || !c1 || !c2 || !out) return fail(TFA_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const int d = digits > 0 ? digits : tfa::kDefaultDigits;
    *out = new tfa_zeros{tfa::findTorusZeros(tfa::parseComplex(c0, d), tfa::parseComplex(c1, d),
                                             tfa::parseComplex(c2, d))};
  });
}

void tfa_zeros_free(tfa_zeros* zeros) { delete zeros; }
size_t tfa_zeros_count(const tfa_zeros* z) { return z ? z->data.zeros.size() : 0; }

double tfa_zeros_gamma1(const tfa_zeros* z, size_t i) {
  return z && i < z->data.zeros.size() ? z->data.zeros[i].gamma1.toDouble() : 0.0;
}
double tfa_zeros_gamma2(const tfa_zeros* z, size_t i) {
  return z && i < z->data.zeros.size() ? z->data.zeros[i].gamma2.toDouble() : 0.0;
}
double tfa_zeros_t(const tfa_zeros* z, size_t i) {
  return z && i < z->data.zeros.size() ? z->data.zeros[i].t.toDouble() : 0.0;
}
double tfa_zeros_residual(const tfa_zeros* z, size_t i) {
  return z && i < z->data.zeros.size() ? z->data.zeros[i].residual : 0.0;
}

}  // extern "C"
