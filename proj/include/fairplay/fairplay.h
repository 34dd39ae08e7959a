/*
 * fairplay C API.
 *
 * Opaque handles are created by fp_*_create / returned by fp_* producers and
 * released with the matching fp_*_destroy. Every fallible call returns an
 * fp_status; on failure fp_last_error() holds a message for the calling
 * thread until its next failing call.
 */
#ifndef FAIRPLAY_FAIRPLAY_H
#define FAIRPLAY_FAIRPLAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FAIRPLAY_BUILDING)
#    define FAIRPLAY_API __declspec(dllexport)
#  else
#    define FAIRPLAY_API __declspec(dllimport)
#  endif
#else
#  define FAIRPLAY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fp_status {
  FP_OK = 0,
  FP_ERR_INVALID_ARGUMENT = 1,
  FP_ERR_PRICE_OUT_OF_BOUNDS = 2,
  FP_ERR_BRACKET_EXHAUSTED = 3,
  FP_ERR_NONPOSITIVE_PRICE = 4,
  FP_ERR_DOMAIN = 5,
  FP_ERR_DEGENERATE_LOSS = 6,
  FP_ERR_EMPTY_DOMAIN = 7,
  FP_ERR_EXPIRED_CONTRACT = 8,
  FP_ERR_NO_LOSS_EVENTS = 9,
  FP_ERR_INTERNAL = 100
} fp_status;

typedef struct fp_market fp_market;
typedef struct fp_contract fp_contract;
typedef struct fp_smile fp_smile;
typedef struct fp_validation fp_validation;

typedef struct fp_numeric_config {
  double vol_lower;
  double vol_upper;
  double root_tol;
  double minimizer_grid;
  double minimizer_tol;
} fp_numeric_config;

typedef struct fp_mc_config {
  uint64_t paths;
  uint64_t seed;
  uint64_t chunk_size;
  unsigned threads; /* 0 = hardware concurrency; never changes results */
} fp_mc_config;

/* Standardized-normal cut points; lower is -inf when the writer cannot lose
 * out of the money. */
typedef struct fp_thresholds {
  double at_strike;
  double lower;
  double upper;
  double holder;
} fp_thresholds;

typedef struct fp_risk_report {
  double hedge;
  double fair_price;
  double loss_prob;
  double partial_call;
  double partial_stock;
  double writer_risk;
  double holder_risk;
  fp_thresholds thresholds;
} fp_risk_report;

typedef struct fp_quote {
  double x_star;
  double price;
  fp_risk_report report;
} fp_quote;

/* status != FP_OK marks a strike that could not be resolved; the numeric
 * fields are then NaN and fp_smile_error() has the message. */
typedef struct fp_smile_point {
  double strike;
  double price;
  double x_star;
  double implied_vol;
  double writer_risk;
  double holder_risk;
  double loss_prob;
  fp_status status;
} fp_smile_point;

/* Strings are owned by the fp_validation handle. */
typedef struct fp_check {
  const char* name;
  int passed;
  double value;
  double reference;
  double tolerance;
  const char* detail;
} fp_check;

FAIRPLAY_API const char* fp_version(void);
FAIRPLAY_API const char* fp_status_name(fp_status status);
FAIRPLAY_API const char* fp_last_error(void);

FAIRPLAY_API fp_numeric_config fp_numeric_config_default(void);
FAIRPLAY_API fp_mc_config fp_mc_config_default(void);

/* Requires s0 > 0, sigma > 0 and mu > r. */
FAIRPLAY_API fp_status fp_market_create(double s0, double mu, double sigma, double r,
                                        fp_market** out);
FAIRPLAY_API void fp_market_destroy(fp_market* market);
FAIRPLAY_API fp_status fp_contract_create(double strike, double expiry, fp_contract** out);
FAIRPLAY_API void fp_contract_destroy(fp_contract* contract);

FAIRPLAY_API double fp_std_normal_cdf(double z);
FAIRPLAY_API fp_status fp_d_plus_minus(const fp_market* market, const fp_contract* contract,
                                       double growth, double* d_plus, double* d_minus);
FAIRPLAY_API fp_status fp_bs_call_price(const fp_market* market, const fp_contract* contract,
                                        double* out);
FAIRPLAY_API fp_status fp_expected_call_payoff_physical(const fp_market* market,
                                                        const fp_contract* contract,
                                                        double* out);
FAIRPLAY_API fp_status fp_expected_put_payoff_physical(const fp_market* market,
                                                       const fp_contract* contract,
                                                       double* out);
/* cfg may be NULL for defaults. */
FAIRPLAY_API fp_status fp_implied_vol(const fp_market* market, const fp_contract* contract,
                                      double observed_price, const fp_numeric_config* cfg,
                                      double* out);

FAIRPLAY_API fp_status fp_fair_price(const fp_market* market, const fp_contract* contract,
                                     double x, double* out);
FAIRPLAY_API fp_status fp_expected_profits(const fp_market* market,
                                           const fp_contract* contract, double x,
                                           double price, double* holder, double* writer);
FAIRPLAY_API fp_status fp_risk_thresholds(const fp_market* market,
                                          const fp_contract* contract, double x,
                                          double price, fp_thresholds* out);
FAIRPLAY_API fp_status fp_writer_risk(const fp_market* market, const fp_contract* contract,
                                      double x, fp_risk_report* out);
FAIRPLAY_API fp_status fp_holder_risk(const fp_market* market, const fp_contract* contract,
                                      double x, double* out);
FAIRPLAY_API fp_status fp_minimize_writer_risk(const fp_market* market,
                                               const fp_contract* contract,
                                               const fp_numeric_config* cfg, fp_quote* out);
FAIRPLAY_API fp_status fp_revalue_at_time(const fp_market* market,
                                          const fp_contract* contract, double t,
                                          double spot_at_t, const fp_numeric_config* cfg,
                                          fp_quote* out);

/* Per-strike failures do not fail the call; inspect each point's status. */
FAIRPLAY_API fp_status fp_volatility_smile(const fp_market* market, const double* strikes,
                                           size_t count, double expiry,
                                           const fp_numeric_config* cfg, fp_smile** out);
FAIRPLAY_API size_t fp_smile_size(const fp_smile* smile);
FAIRPLAY_API fp_status fp_smile_point_at(const fp_smile* smile, size_t index,
                                         fp_smile_point* out);
/* Empty string for resolved points and out-of-range indices. */
FAIRPLAY_API const char* fp_smile_error(const fp_smile* smile, size_t index);
FAIRPLAY_API void fp_smile_destroy(fp_smile* smile);

/* Runs the closed-form vs oracle and property checks. mc may be NULL. */
FAIRPLAY_API fp_status fp_validate(const fp_market* market, const double* strikes,
                                   size_t count, double expiry, const fp_mc_config* mc,
                                   size_t draws, fp_validation** out);
FAIRPLAY_API size_t fp_validation_size(const fp_validation* validation);
FAIRPLAY_API int fp_validation_passed(const fp_validation* validation);
FAIRPLAY_API fp_status fp_validation_check(const fp_validation* validation, size_t index,
                                           fp_check* out);
FAIRPLAY_API void fp_validation_destroy(fp_validation* validation);

#ifdef __cplusplus
}
#endif

#endif /* FAIRPLAY_FAIRPLAY_H */
