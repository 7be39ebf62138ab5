#ifndef TFA_TFA_H
#define TFA_TFA_H

/* C interface to the toolkit. Every call returns a tfa_status; on failure the
 * message of the calling thread's last error is available through
 * tfa_last_error(). Objects are opaque handles released by their _free
 * function. Strings returned by accessors stay valid until the owning handle
 * is freed. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TFA_API __declspec(dllexport)
#else
#define TFA_API __attribute__((visibility("default")))
#endif

typedef enum tfa_status {
  TFA_OK = 0,
  TFA_ERR_PARSE = 1,
  TFA_ERR_PRECISION = 2,
  TFA_ERR_DEPTH_EXHAUSTED = 3,
  TFA_ERR_HYPOTHESIS = 4,
  TFA_ERR_DOMAIN = 5,
  TFA_ERR_CAP_EXCEEDED = 6,
  TFA_ERR_TERMINAL_INPUT = 7,
  TFA_ERR_UNRESOLVED_CASE = 8,
  TFA_ERR_BUDGET_INFEASIBLE = 9,
  TFA_ERR_SAMPLE_IN_EXCEPTIONAL_SET = 10,
  TFA_ERR_CLAMP_BREACH = 11,
  TFA_ERR_INTERNAL = 12,
  TFA_ERR_USAGE = 13,
  TFA_ERR_NULL_ARGUMENT = 14
} tfa_status;

typedef struct tfa_report tfa_report;
typedef struct tfa_real tfa_real;
typedef struct tfa_cf tfa_cf;
typedef struct tfa_zeros tfa_zeros;

TFA_API const char* tfa_version(void);
TFA_API const char* tfa_status_name(tfa_status status);
/* Message of the last failed call on this thread ("" after a success). */
TFA_API const char* tfa_last_error(void);
/* Suggested working digits after a precision failure, else 0. */
TFA_API int tfa_last_error_suggested_digits(void);

/* Subcommand names, 0 <= index < tfa_command_count(). */
TFA_API size_t tfa_command_count(void);
TFA_API const char* tfa_command_name(size_t index);

/* Runs a subcommand with `count` key/value arguments (keys without "--"). */
TFA_API tfa_status tfa_run(const char* command, const char* const* keys,
                           const char* const* values, size_t count, tfa_report** out);
TFA_API void tfa_report_free(tfa_report* report);
TFA_API const char* tfa_report_json(const tfa_report* report);
/* Empty string when the command has no tabular form. */
TFA_API const char* tfa_report_csv(const tfa_report* report);
TFA_API int tfa_report_all_pass(const tfa_report* report);
TFA_API int tfa_report_digits(const tfa_report* report);
TFA_API size_t tfa_report_verdict_count(const tfa_report* report);
TFA_API const char* tfa_report_verdict_name(const tfa_report* report, size_t index);
TFA_API int tfa_report_verdict_pass(const tfa_report* report, size_t index);

/* Schema check of a serialised report. TFA_OK when valid; otherwise the
 * violation is in tfa_last_error(). */
TFA_API tfa_status tfa_validate_report_json(const char* json);

/* Reals in the input grammar. */
TFA_API tfa_status tfa_real_parse(const char* text, int digits, tfa_real** out);
TFA_API void tfa_real_free(tfa_real* x);
/* Decimal midpoint with `digits` significant digits. */
TFA_API const char* tfa_real_value(tfa_real* x, int digits);
TFA_API const char* tfa_real_radius(tfa_real* x);
TFA_API double tfa_real_to_double(const tfa_real* x);

/* Continued fractions: `depth` quotients a_0 .. a_{depth-1}. */
TFA_API tfa_status tfa_cf_expand(const tfa_real* x, size_t depth, tfa_cf** out);
TFA_API void tfa_cf_free(tfa_cf* cf);
TFA_API size_t tfa_cf_size(const tfa_cf* cf);
TFA_API int tfa_cf_terminal(const tfa_cf* cf);
TFA_API const char* tfa_cf_quotient(const tfa_cf* cf, size_t k);
TFA_API const char* tfa_cf_numerator(const tfa_cf* cf, size_t k);
TFA_API const char* tfa_cf_denominator(const tfa_cf* cf, size_t k);

/* Torus zeros of C0 + C1 e^{2 pi i x} + C2 e^{2 pi i y}, complex grammar. */
TFA_API tfa_status tfa_zeros_find(const char* c0, const char* c1, const char* c2, int digits,
                                  tfa_zeros** out);
TFA_API void tfa_zeros_free(tfa_zeros* zeros);
TFA_API size_t tfa_zeros_count(const tfa_zeros* zeros);
TFA_API double tfa_zeros_gamma1(const tfa_zeros* zeros, size_t index);
TFA_API double tfa_zeros_gamma2(const tfa_zeros* zeros, size_t index);
TFA_API double tfa_zeros_t(const tfa_zeros* zeros, size_t index);
TFA_API double tfa_zeros_residual(const tfa_zeros* zeros, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* TFA_TFA_H */
