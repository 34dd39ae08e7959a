#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairplay/core_math.hpp"
#include "fairplay/error.hpp"

namespace fairplay {

/// Shares held statically per written call; 0 <= x < 1.
class HedgeFraction {
public:
    explicit HedgeFraction(double x);

    double value() const noexcept { return x_; }

private:
    double x_;
};

/// Upper end of the minimizer's search interval. The Case-2 cut point d2
/// diverges as x -> 1.
inline constexpr double kMaxHedgeFraction = 1.0 - 1e-6;

/// Standardized-normal cut points for Z in S(T) = S0 exp((mu - sigma^2/2) T + sigma sqrt(T) Z).
///
///  - at_strike: {Z > at_strike} is {S(T) > K}.
///  - lower: writer loses on {Z <= lower} (out of the money, hedge lost value).
///    -inf when that region is empty.
///  - upper: writer loses on {Z > upper} (in the money, hedge insufficient).
///  - holder: holder loses on {Z < holder}.
struct RiskThresholds {
    double at_strike;
    double lower;
    double upper;
    double holder;
};

struct ExpectedProfits {
    double holder;
    double writer;
};

struct PartialExpectations {
    double call;   ///< E_P[C(T) 1{L_W > 0}]
    double stock;  ///< E_P[S(T) 1{L_W > 0}]
};

struct RiskReport {
    double hedge;
    double fair_price;
    double loss_prob;
    double partial_call;
    double partial_stock;
    double writer_risk;
    double holder_risk;
    RiskThresholds thresholds;
};

struct EquilibriumQuote {
    double x_star;
    double price;
    RiskReport report;
};

struct SmilePoint {
    double strike;
    double equilibrium_price;
    double x_star;
    double implied_volatility;
    double writer_risk;
    double holder_risk;
    double loss_prob;
};

/// One entry per requested strike; exactly one of point/error is set.
struct SmileResult {
    double strike;
    std::optional<SmilePoint> point;
    std::optional<Error> error;
};

/// Fair-play premium C_x: equates expected holder and writer profits.
/// Affine and strictly decreasing in x. Throws NonpositivePrice if C_x <= 0.
double fair_price(const MarketParams& params, const OptionContract& contract,
                  HedgeFraction x);

/// Hedge fraction at which the fair-play premium reaches zero (may exceed 1).
double zero_price_hedge(const MarketParams& params, const OptionContract& contract) noexcept;

/// Expected terminal profits of both parties for premium `price` and hedge x.
/// The holder's value does not depend on x.
ExpectedProfits expected_profits(const MarketParams& params, const OptionContract& contract,
                                 HedgeFraction x, double price) noexcept;

/// Throws DomainError when price <= 0, when the Case-2 log argument
/// K + (C - x S0) e^{rT} is nonpositive, or when the cut points are not
/// ordered lower < at_strike < upper and at_strike < holder.
RiskThresholds risk_thresholds(const MarketParams& params, const OptionContract& contract,
                               HedgeFraction x, double price);

PartialExpectations writer_partial_expectations(const MarketParams& params,
                                                const OptionContract& contract,
                                                const RiskThresholds& thresholds) noexcept;

/// Writer's expected loss conditional on a loss, at the fair-play premium.
/// Also fills in the holder's risk. Throws NonpositivePrice, DomainError or
/// DegenerateLoss (loss probability underflows to zero).
RiskReport writer_risk(const MarketParams& params, const OptionContract& contract,
                       HedgeFraction x);

/// Holder's expected loss conditional on a loss, L_H = C_x e^{rT} - C(T).
double holder_risk(const MarketParams& params, const OptionContract& contract,
                   HedgeFraction x);

/// Minimizes writer_risk over the valid hedge interval [0, x_max) where
/// fair_price > 0. Coarse grid scan (ties go to the smaller x) followed by
/// golden-section refinement around the best grid point.
/// Throws EmptyDomain when fair_price(0) <= 0.
EquilibriumQuote minimize_writer_risk(const MarketParams& params,
                                      const OptionContract& contract,
                                      const NumericConfig& cfg = {});

/// Equilibrium price and implied volatility per strike, in input order.
/// Per-strike failures are recorded in SmileResult::error.
std::vector<SmileResult> volatility_smile(const MarketParams& params,
                                          std::span<const double> strikes, double expiry,
                                          const NumericConfig& cfg = {});

/// Quote at rebalancing time t with remaining maturity T - t and current spot.
/// Throws ExpiredContract when t >= T.
EquilibriumQuote revalue_at_time(const MarketParams& params, const OptionContract& contract,
                                 double t, double spot_at_t, const NumericConfig& cfg = {});

}  // namespace fairplay
