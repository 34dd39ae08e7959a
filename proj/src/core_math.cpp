#include "fairplay/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fairplay/error.hpp"

namespace fairplay {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PriceOutOfBounds: return "PriceOutOfBounds";
    case ErrorCode::BracketExhausted: return "BracketExhausted";
    case ErrorCode::NonpositivePrice: return "NonpositivePrice";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateLoss: return "DegenerateLoss";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::ExpiredContract: return "ExpiredContract";
    case ErrorCode::NoLossEvents: return "NoLossEvents";
    }
    return "Unknown";
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument, what);
    }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

MarketParams::MarketParams(double spot, double drift, double volatility, double risk_free)
    : MarketParams(relaxed(spot, drift, volatility, risk_free)) {
    require(drift > risk_free, "drift (mu) must exceed the risk-free rate (r)");
}

MarketParams MarketParams::relaxed(double spot, double drift, double volatility,
                                   double risk_free) {
    require(positive(spot), "spot (s0) must be a finite positive number");
    require(positive(volatility), "volatility (sigma) must be a finite positive number");
    require(std::isfinite(drift), "drift (mu) must be finite");
    require(std::isfinite(risk_free), "risk-free rate (r) must be finite");
    return MarketParams(Unchecked{}, spot, drift, volatility, risk_free);
}

MarketParams MarketParams::with_spot(double spot) const {
    require(positive(spot), "spot must be a finite positive number");
    return MarketParams(Unchecked{}, spot, drift_, volatility_, risk_free_);
}

OptionContract::OptionContract(double strike, double expiry)
    : strike_(strike), expiry_(expiry) {
    require(positive(strike), "strike (K) must be a finite positive number");
    require(positive(expiry), "expiry (T) must be a finite positive number");
}

void NumericConfig::validate() const {
    require(positive(vol_lower), "vol bracket lower bound must be positive");
    require(std::isfinite(vol_upper) && vol_upper > vol_lower,
            "vol bracket upper bound must exceed the lower bound");
    require(positive(root_tol), "root_tol must be positive");
    require(positive(minimizer_grid) && minimizer_grid < 1.0,
            "minimizer_grid must be in (0, 1)");
    require(positive(minimizer_tol), "minimizer_tol must be positive");
}

double std_normal_cdf(double z) noexcept {
    // erfc keeps full relative accuracy in the lower tail.
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

DPair d_plus_minus(const MarketParams& params, const OptionContract& contract,
                   double growth) noexcept {
    const double t = contract.expiry();
    const double vol_sqrt_t = params.volatility() * std::sqrt(t);
    const double base = std::log(params.spot() / contract.strike()) + growth * t;
    const double half_var = 0.5 * params.volatility() * params.volatility() * t;
    return {(base + half_var) / vol_sqrt_t, (base - half_var) / vol_sqrt_t};
}

double bs_call_price(const MarketParams& params, const OptionContract& contract,
                     double volatility) noexcept {
    const auto p = MarketParams::relaxed(params.spot(), params.drift(), volatility,
                                         params.risk_free());
    const auto d = d_plus_minus(p, contract, p.risk_free());
    const double discount = std::exp(-p.risk_free() * contract.expiry());
    return p.spot() * std_normal_cdf(d.plus) -
           discount * contract.strike() * std_normal_cdf(d.minus);
}

double bs_call_price(const MarketParams& params, const OptionContract& contract) noexcept {
    return bs_call_price(params, contract, params.volatility());
}

double expected_call_payoff_physical(const MarketParams& params,
                                     const OptionContract& contract) noexcept {
    const auto d = d_plus_minus(params, contract, params.drift());
    const double forward = params.spot() * std::exp(params.drift() * contract.expiry());
    return forward * std_normal_cdf(d.plus) - contract.strike() * std_normal_cdf(d.minus);
}

double expected_put_payoff_physical(const MarketParams& params,
                                    const OptionContract& contract) noexcept {
    const auto d = d_plus_minus(params, contract, params.drift());
    const double forward = params.spot() * std::exp(params.drift() * contract.expiry());
    return contract.strike() * std_normal_cdf(-d.minus) - forward * std_normal_cdf(-d.plus);
}

double implied_vol(const MarketParams& params, const OptionContract& contract,
                   double observed_price, const NumericConfig& cfg) {
    cfg.validate();
    const double discounted_strike =
        contract.strike() * std::exp(-params.risk_free() * contract.expiry());
    const double lower_bound = std::max(params.spot() - discounted_strike, 0.0);
    if (!(observed_price > lower_bound && observed_price < params.spot())) {
        throw Error(ErrorCode::PriceOutOfBounds,
                    "price " + std::to_string(observed_price) +
                        " outside the no-arbitrage interval (" +
                        std::to_string(lower_bound) + ", " +
                        std::to_string(params.spot()) + "); no implied volatility exists");
    }

    auto excess = [&](double vol) {
        return bs_call_price(params, contract, vol) - observed_price;
    };

    double lo = cfg.vol_lower;
    double hi = cfg.vol_upper;
    const double f_lo = excess(lo);
    const double f_hi = excess(hi);
    if (std::abs(f_lo) <= cfg.root_tol) return lo;
    if (std::abs(f_hi) <= cfg.root_tol) return hi;
    if (f_lo > 0.0 || f_hi < 0.0) {
        throw Error(ErrorCode::BracketExhausted,
                    "implied volatility lies outside the bracket [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double f = excess(mid);
        if (std::abs(f) <= cfg.root_tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
        (f < 0.0 ? lo : hi) = mid;
    }
    return mid;
}

}  // namespace fairplay
