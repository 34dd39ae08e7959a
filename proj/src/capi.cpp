#include "fairplay/fairplay.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fairplay/core_math.hpp"
#include "fairplay/equilibrium.hpp"
#include "fairplay/error.hpp"
#include "fairplay/validation.hpp"

struct fp_market {
    fairplay::MarketParams value;
};

struct fp_contract {
    fairplay::OptionContract value;
};

struct fp_smile {
    std::vector<fairplay::SmileResult> results;
    std::vector<std::string> messages;
};

struct fp_validation {
    fairplay::validation::Report report;
};

namespace {

thread_local std::string last_error;

fp_status fail(fp_status status, const char* message) {
    last_error = message;
    return status;
}

fp_status status_of(fairplay::ErrorCode code) { return static_cast<fp_status>(code); }

// Runs body and converts exceptions to status codes.
template <class F>
fp_status guarded(F&& body) noexcept {
    try {
        body();
        return FP_OK;
    } catch (const fairplay::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FP_ERR_INTERNAL, "unknown failure");
    }
}

void require_non_null(const void* p, const char* what) {
    if (p == nullptr) {
        throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                              std::string(what) + " must not be null");
    }
}

fairplay::NumericConfig numeric_from(const fp_numeric_config* cfg) {
    fairplay::NumericConfig out;
    if (cfg != nullptr) {
        out.vol_lower = cfg->vol_lower;
        out.vol_upper = cfg->vol_upper;
        out.root_tol = cfg->root_tol;
        out.minimizer_grid = cfg->minimizer_grid;
        out.minimizer_tol = cfg->minimizer_tol;
    }
    out.validate();
    return out;
}

fp_thresholds thresholds_to_c(const fairplay::RiskThresholds& th) {
    return {th.at_strike, th.lower, th.upper, th.holder};
}

fp_risk_report report_to_c(const fairplay::RiskReport& r) {
    return {r.hedge,         r.fair_price,  r.loss_prob,   r.partial_call,
            r.partial_stock, r.writer_risk, r.holder_risk, thresholds_to_c(r.thresholds)};
}

fp_quote quote_to_c(const fairplay::EquilibriumQuote& q) {
    return {q.x_star, q.price, report_to_c(q.report)};
}

}  // namespace

extern "C" {

const char* fp_version(void) { return "0.1.0"; }

const char* fp_status_name(fp_status status) {
    switch (status) {
    case FP_OK: return "Ok";
    case FP_ERR_INTERNAL: return "Internal";
    default: break;
    }
    const auto code = static_cast<int>(status);
    if (code >= 1 && code <= 9) {
        return fairplay::to_string(static_cast<fairplay::ErrorCode>(code)).data();
    }
    return "Unknown";
}

const char* fp_last_error(void) { return last_error.c_str(); }

fp_numeric_config fp_numeric_config_default(void) {
    const fairplay::NumericConfig d;
    return {d.vol_lower, d.vol_upper, d.root_tol, d.minimizer_grid, d.minimizer_tol};
}

fp_mc_config fp_mc_config_default(void) {
    const fairplay::oracle::McConfig d;
    return {d.paths, d.seed, d.chunk_size, d.threads};
}

fp_status fp_market_create(double s0, double mu, double sigma, double r, fp_market** out) {
    return guarded([&] {
        require_non_null(out, "out");
        *out = new fp_market{fairplay::MarketParams(s0, mu, sigma, r)};
    });
}

void fp_market_destroy(fp_market* market) { delete market; }

fp_status fp_contract_create(double strike, double expiry, fp_contract** out) {
    return guarded([&] {
        require_non_null(out, "out");
        *out = new fp_contract{fairplay::OptionContract(strike, expiry)};
    });
}

void fp_contract_destroy(fp_contract* contract) { delete contract; }

double fp_std_normal_cdf(double z) { return fairplay::std_normal_cdf(z); }

fp_status fp_d_plus_minus(const fp_market* market, const fp_contract* contract,
                          double growth, double* d_plus, double* d_minus) {
    return guarded([&] {
        require_non_null(market, "market");
        require_non_null(contract, "contract");
        require_non_null(d_plus, "d_plus");
        require_non_null(d_minus, "d_minus");
        const auto d = fairplay::d_plus_minus(market->value, contract->value, growth);
        *d_plus = d.plus;
        *d_minus = d.minus;
    });
}

#define FP_SCALAR_CALL(expr)                          \
    return guarded([&] {                              \
        require_non_null(market, "market");           \
        require_non_null(contract, "contract");       \
        require_non_null(out, "out");                 \
        *out = (expr);                                \
    })

fp_status fp_bs_call_price(const fp_market* market, const fp_contract* contract, double* out) {
    FP_SCALAR_CALL(fairplay::bs_call_price(market->value, contract->value));
}

fp_status fp_expected_call_payoff_physical(const fp_market* market,
                                           const fp_contract* contract, double* out) {
    FP_SCALAR_CALL(fairplay::expected_call_payoff_physical(market->value, contract->value));
}

fp_status fp_expected_put_payoff_physical(const fp_market* market, const fp_contract* contract,
                                          double* out) {
    FP_SCALAR_CALL(fairplay::expected_put_payoff_physical(market->value, contract->value));
}

fp_status fp_implied_vol(const fp_market* market, const fp_contract* contract,
                         double observed_price, const fp_numeric_config* cfg, double* out) {
    FP_SCALAR_CALL(fairplay::implied_vol(market->value, contract->value, observed_price,
                                         numeric_from(cfg)));
}

fp_status fp_fair_price(const fp_market* market, const fp_contract* contract, double x,
                        double* out) {
    FP_SCALAR_CALL(
        fairplay::fair_price(market->value, contract->value, fairplay::HedgeFraction(x)));
}

fp_status fp_holder_risk(const fp_market* market, const fp_contract* contract, double x,
                         double* out) {
    FP_SCALAR_CALL(
        fairplay::holder_risk(market->value, contract->value, fairplay::HedgeFraction(x)));
}

fp_status fp_expected_profits(const fp_market* market, const fp_contract* contract, double x,
                              double price, double* holder, double* writer) {
    return guarded([&] {
        require_non_null(market, "market");
        require_non_null(contract, "contract");
        require_non_null(holder, "holder");
        require_non_null(writer, "writer");
        const auto p = fairplay::expected_profits(market->value, contract->value,
                                                  fairplay::HedgeFraction(x), price);
        *holder = p.holder;
        *writer = p.writer;
    });
}

fp_status fp_risk_thresholds(const fp_market* market, const fp_contract* contract, double x,
                             double price, fp_thresholds* out) {
    FP_SCALAR_CALL(thresholds_to_c(fairplay::risk_thresholds(
        market->value, contract->value, fairplay::HedgeFraction(x), price)));
}

fp_status fp_writer_risk(const fp_market* market, const fp_contract* contract, double x,
                         fp_risk_report* out) {
    FP_SCALAR_CALL(report_to_c(
        fairplay::writer_risk(market->value, contract->value, fairplay::HedgeFraction(x))));
}

fp_status fp_minimize_writer_risk(const fp_market* market, const fp_contract* contract,
                                  const fp_numeric_config* cfg, fp_quote* out) {
    FP_SCALAR_CALL(quote_to_c(
        fairplay::minimize_writer_risk(market->value, contract->value, numeric_from(cfg))));
}

fp_status fp_revalue_at_time(const fp_market* market, const fp_contract* contract, double t,
                             double spot_at_t, const fp_numeric_config* cfg, fp_quote* out) {
    FP_SCALAR_CALL(quote_to_c(fairplay::revalue_at_time(market->value, contract->value, t,
                                                        spot_at_t, numeric_from(cfg))));
}

#undef FP_SCALAR_CALL

fp_status fp_volatility_smile(const fp_market* market, const double* strikes, size_t count,
                              double expiry, const fp_numeric_config* cfg, fp_smile** out) {
    return guarded([&] {
        require_non_null(market, "market");
        require_non_null(out, "out");
        if (count == 0) {
            throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                                  "at least one strike is required");
        }
        require_non_null(strikes, "strikes");
        if (!(expiry > 0.0)) {
            throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                                  "expiry (T) must be positive");
        }
        auto smile = std::make_unique<fp_smile>();
        smile->results = fairplay::volatility_smile(
            market->value, std::span<const double>(strikes, count), expiry, numeric_from(cfg));
        for (const auto& r : smile->results) {
            smile->messages.emplace_back(r.error ? r.error->what() : "");
        }
        *out = smile.release();
    });
}

size_t fp_smile_size(const fp_smile* smile) { return smile ? smile->results.size() : 0; }

fp_status fp_smile_point_at(const fp_smile* smile, size_t index, fp_smile_point* out) {
    return guarded([&] {
        require_non_null(smile, "smile");
        require_non_null(out, "out");
        if (index >= smile->results.size()) {
            throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                                  "smile index out of range");
        }
        const auto& r = smile->results[index];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (r.point) {
            const auto& p = *r.point;
            *out = {p.strike,      p.equilibrium_price, p.x_star,    p.implied_volatility,
                    p.writer_risk, p.holder_risk,       p.loss_prob, FP_OK};
        } else {
            *out = {r.strike, nan, nan, nan, nan, nan, nan, status_of(r.error->code())};
        }
    });
}

const char* fp_smile_error(const fp_smile* smile, size_t index) {
    if (smile == nullptr || index >= smile->messages.size()) return "";
    return smile->messages[index].c_str();
}

void fp_smile_destroy(fp_smile* smile) { delete smile; }

fp_status fp_validate(const fp_market* market, const double* strikes, size_t count,
                      double expiry, const fp_mc_config* mc, size_t draws,
                      fp_validation** out) {
    return guarded([&] {
        require_non_null(market, "market");
        require_non_null(out, "out");
        if (count == 0) {
            throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                                  "at least one strike is required");
        }
        require_non_null(strikes, "strikes");
        fairplay::validation::SuiteConfig cfg;
        cfg.draws = draws;
        if (mc != nullptr) {
            cfg.mc.paths = mc->paths;
            cfg.mc.seed = mc->seed;
            cfg.mc.chunk_size = mc->chunk_size;
            cfg.mc.threads = mc->threads;
            cfg.draw_seed = mc->seed;
        }
        cfg.mc.validate();
        auto v = std::make_unique<fp_validation>();
        v->report = fairplay::validation::run_suite(
            market->value, std::span<const double>(strikes, count), expiry, cfg);
        *out = v.release();
    });
}

size_t fp_validation_size(const fp_validation* validation) {
    return validation ? validation->report.checks.size() : 0;
}

int fp_validation_passed(const fp_validation* validation) {
    return validation && validation->report.passed() ? 1 : 0;
}

fp_status fp_validation_check(const fp_validation* validation, size_t index, fp_check* out) {
    return guarded([&] {
        require_non_null(validation, "validation");
        require_non_null(out, "out");
        if (index >= validation->report.checks.size()) {
            throw fairplay::Error(fairplay::ErrorCode::InvalidArgument,
                                  "check index out of range");
        }
        const auto& c = validation->report.checks[index];
        *out = {c.name.c_str(), c.passed ? 1 : 0, c.value, c.reference, c.tolerance,
                c.detail.c_str()};
    });
}

void fp_validation_destroy(fp_validation* validation) { delete validation; }

}  // extern "C"
