#pragma once

#include <utility>

namespace fairplay {

/// Market environment under the physical measure. Stock follows
/// dS = mu S dt + sigma S dW with continuously compounded annual rates.
class MarketParams {
public:
    /// Throws Error(InvalidArgument) unless spot > 0, volatility > 0 and
    /// drift > risk_free.
    MarketParams(double spot, double drift, double volatility, double risk_free);

    /// Skips the drift > risk_free requirement. Only meant for checks of
    /// measure identities (e.g. drift == risk_free).
    static MarketParams relaxed(double spot, double drift, double volatility,
                                double risk_free);

    double spot() const noexcept { return spot_; }
    double drift() const noexcept { return drift_; }
    double volatility() const noexcept { return volatility_; }
    double risk_free() const noexcept { return risk_free_; }

    MarketParams with_spot(double spot) const;

private:
    struct Unchecked {};
    MarketParams(Unchecked, double spot, double drift, double volatility,
                 double risk_free) noexcept
        : spot_(spot), drift_(drift), volatility_(volatility), risk_free_(risk_free) {}

    double spot_;
    double drift_;
    double volatility_;
    double risk_free_;
};

/// European call: strike K and expiry T in years.
class OptionContract {
public:
    OptionContract(double strike, double expiry);

    double strike() const noexcept { return strike_; }
    double expiry() const noexcept { return expiry_; }

private:
    double strike_;
    double expiry_;
};

struct NumericConfig {
    double vol_lower = 1e-4;
    double vol_upper = 5.0;
    double root_tol = 1e-10;
    double minimizer_grid = 1e-3;
    double minimizer_tol = 1e-6;

    /// Throws Error(InvalidArgument) when a field is out of range.
    void validate() const;
};

struct DPair {
    double plus;
    double minus;
};

/// Standard normal CDF on the extended reals.
double std_normal_cdf(double z) noexcept;

/// d_{+/-} = (ln(S0/K) + g T +/- sigma^2 T / 2) / (sigma sqrt(T)) for growth rate g.
DPair d_plus_minus(const MarketParams& params, const OptionContract& contract,
                   double growth) noexcept;

/// Black-Scholes call under the risk-neutral measure (drift replaced by r).
double bs_call_price(const MarketParams& params, const OptionContract& contract) noexcept;

/// Same, with an explicit volatility in place of params.volatility().
double bs_call_price(const MarketParams& params, const OptionContract& contract,
                     double volatility) noexcept;

/// E_P[(S(T) - K)^+] with the stock drifting at mu. Undiscounted.
double expected_call_payoff_physical(const MarketParams& params,
                                     const OptionContract& contract) noexcept;

/// E_P[(K - S(T))^+], undiscounted.
double expected_put_payoff_physical(const MarketParams& params,
                                    const OptionContract& contract) noexcept;

/// Volatility at which bs_call_price reproduces observed_price, by bisection
/// over [cfg.vol_lower, cfg.vol_upper].
///
/// Throws PriceOutOfBounds when observed_price is outside the open
/// no-arbitrage interval ((S0 - K e^{-rT})^+, S0) and BracketExhausted when
/// the root is not inside the configured bracket.
double implied_vol(const MarketParams& params, const OptionContract& contract,
                   double observed_price, const NumericConfig& cfg = {});

}  // namespace fairplay
