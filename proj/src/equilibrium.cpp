#include "fairplay/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace fairplay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P(a < Z < b), evaluated on the side of the distribution where it does not
// cancel.
double normal_mass(double a, double b) noexcept {
    if (!(b > a)) return 0.0;
    if (a > 0.0) return std_normal_cdf(-a) - std_normal_cdf(-b);
    return std_normal_cdf(b) - std_normal_cdf(a);
}

struct Scales {
    double vol_sqrt_t;
    double shift;         // -mu T + sigma^2 T / 2
    double forward;       // S0 e^{mu T}
    double growth_rf;     // e^{rT}
    double growth_drift;  // e^{mu T}
};

Scales scales_of(const MarketParams& params, const OptionContract& contract) noexcept {
    const double t = contract.expiry();
    const double sigma = params.volatility();
    const double growth_drift = std::exp(params.drift() * t);
    return {sigma * std::sqrt(t), -params.drift() * t + 0.5 * sigma * sigma * t,
            params.spot() * growth_drift, std::exp(params.risk_free() * t), growth_drift};
}

// Standardized cut point for the event {S(T) < level * S0}.
double cut_point(double ratio, const Scales& s) noexcept {
    return (std::log(ratio) + s.shift) / s.vol_sqrt_t;
}

double holder_risk_at(const MarketParams& params, const OptionContract& contract,
                      double price, const RiskThresholds& th) {
    const auto s = scales_of(params, contract);
    const double loss_prob = std_normal_cdf(th.holder);
    if (!(loss_prob > 0.0)) {
        throw Error(ErrorCode::DegenerateLoss, "holder loss probability underflows to zero");
    }
    const double in_the_money =
        s.forward * normal_mass(th.at_strike - s.vol_sqrt_t, th.holder - s.vol_sqrt_t) -
        contract.strike() * normal_mass(th.at_strike, th.holder);
    return price * s.growth_rf - in_the_money / loss_prob;
}

}  // namespace

HedgeFraction::HedgeFraction(double x) : x_(x) {
    if (!(x >= 0.0 && x < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "hedge fraction must lie in [0, 1), got " + std::to_string(x));
    }
}

double fair_price(const MarketParams& params, const OptionContract& contract,
                  HedgeFraction x) {
    const auto s = scales_of(params, contract);
    const double expected_payoff = expected_call_payoff_physical(params, contract);
    const double excess_growth = params.spot() * (s.growth_drift - s.growth_rf);
    const double price = (expected_payoff - 0.5 * x.value() * excess_growth) / s.growth_rf;
    if (!(price > 0.0)) {
        throw Error(ErrorCode::NonpositivePrice,
                    "fair-play premium is nonpositive at x = " + std::to_string(x.value()));
    }
    return price;
}

double zero_price_hedge(const MarketParams& params, const OptionContract& contract) noexcept {
    const auto s = scales_of(params, contract);
    const double expected_payoff = expected_call_payoff_physical(params, contract);
    return 2.0 * expected_payoff / (params.spot() * (s.growth_drift - s.growth_rf));
}

ExpectedProfits expected_profits(const MarketParams& params, const OptionContract& contract,
                                 HedgeFraction x, double price) noexcept {
    const auto s = scales_of(params, contract);
    const double expected_payoff = expected_call_payoff_physical(params, contract);
    const double compounded = price * s.growth_rf;
    return {expected_payoff - compounded,
            x.value() * params.spot() * (s.growth_drift - s.growth_rf) + compounded -
                expected_payoff};
}

RiskThresholds risk_thresholds(const MarketParams& params, const OptionContract& contract,
                               HedgeFraction x, double price) {
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw Error(ErrorCode::DomainError, "risk thresholds need a positive finite price");
    }
    const auto s = scales_of(params, contract);
    const double s0 = params.spot();
    const double k = contract.strike();
    const double h = x.value();

    RiskThresholds th{};
    th.at_strike = cut_point(k / s0, s);

    // Out of the money the writer loses when x S(T) < (x S0 - C) e^{rT}.
    const double hedge_shortfall = (h * s0 - price) * s.growth_rf;
    th.lower = hedge_shortfall > 0.0 ? cut_point(hedge_shortfall / (s0 * h), s) : -kInf;

    // In the money the writer loses when (1 - x) S(T) > K + (C - x S0) e^{rT}.
    const double itm_level = k + (price - h * s0) * s.growth_rf;
    if (!(itm_level > 0.0)) {
        throw Error(ErrorCode::DomainError,
                    "K + (C - x S0) e^{rT} is nonpositive; inputs are outside the "
                    "regime where the loss thresholds are ordered");
    }
    th.upper = cut_point(itm_level / (s0 * (1.0 - h)), s);
    // Holder loses when S(T) < K + C e^{rT}; offset from at_strike without cancellation.
    th.holder = th.at_strike + std::log1p(price * s.growth_rf / k) / s.vol_sqrt_t;

    if (!(th.lower < th.at_strike && th.at_strike < th.upper && th.at_strike < th.holder)) {
        throw Error(ErrorCode::DomainError,
                    "loss thresholds are not ordered (lower < at_strike < upper, "
                    "at_strike < holder) for this price and hedge");
    }
    return th;
}

PartialExpectations writer_partial_expectations(const MarketParams& params,
                                                const OptionContract& contract,
                                                const RiskThresholds& th) noexcept {
    const auto s = scales_of(params, contract);
    const double upper_stock_tail = std_normal_cdf(-(th.upper - s.vol_sqrt_t));
    const double upper_tail = std_normal_cdf(-th.upper);
    const double lower_stock_tail = std_normal_cdf(th.lower - s.vol_sqrt_t);
    return {s.forward * upper_stock_tail - contract.strike() * upper_tail,
            s.forward * (lower_stock_tail + upper_stock_tail)};
}

RiskReport writer_risk(const MarketParams& params, const OptionContract& contract,
                       HedgeFraction x) {
    const double price = fair_price(params, contract, x);
    const auto th = risk_thresholds(params, contract, x, price);
    const double loss_prob = std_normal_cdf(th.lower) + std_normal_cdf(-th.upper);
    if (!(loss_prob > 0.0)) {
        throw Error(ErrorCode::DegenerateLoss,
                    "writer loss probability underflows to zero at x = " +
                        std::to_string(x.value()));
    }
    const auto partial = writer_partial_expectations(params, contract, th);
    const double growth_rf = std::exp(params.risk_free() * contract.expiry());
    const double h = x.value();

    RiskReport report{};
    report.hedge = h;
    report.fair_price = price;
    report.loss_prob = loss_prob;
    report.partial_call = partial.call;
    report.partial_stock = partial.stock;
    report.writer_risk = (partial.call - h * partial.stock) / loss_prob +
                         (h * params.spot() - price) * growth_rf;
    report.holder_risk = holder_risk_at(params, contract, price, th);
    report.thresholds = th;
    return report;
}

double holder_risk(const MarketParams& params, const OptionContract& contract,
                   HedgeFraction x) {
    const double price = fair_price(params, contract, x);
    const auto th = risk_thresholds(params, contract, x, price);
    return holder_risk_at(params, contract, price, th);
}

namespace {

double risk_or_inf(const MarketParams& params, const OptionContract& contract, double x) {
    try {
        return writer_risk(params, contract, HedgeFraction(x)).writer_risk;
    } catch (const Error&) {
        return kInf;
    }
}

// Golden-section search for a minimum of f on [a, b].
template <class F>
double golden_section(F&& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

EquilibriumQuote minimize_writer_risk(const MarketParams& params,
                                      const OptionContract& contract,
                                      const NumericConfig& cfg) {
    cfg.validate();
    try {
        fair_price(params, contract, HedgeFraction(0.0));
    } catch (const Error&) {
        throw Error(ErrorCode::EmptyDomain,
                    "no quotable price: the fair-play premium is nonpositive for every "
                    "hedge fraction (strike " +
                        std::to_string(contract.strike()) + ", expiry " +
                        std::to_string(contract.expiry()) + ")");
    }

    const double x_zero = zero_price_hedge(params, contract);
    const double hi = x_zero <= kMaxHedgeFraction ? x_zero * (1.0 - 1e-9) : kMaxHedgeFraction;

    std::vector<double> grid;
    const auto steps = static_cast<std::size_t>(std::floor(hi / cfg.minimizer_grid));
    grid.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double x = static_cast<double>(i) * cfg.minimizer_grid;
        if (x > hi) break;
        grid.push_back(x);
    }
    if (grid.back() < hi) grid.push_back(hi);

    std::size_t best = 0;
    double best_risk = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double risk = risk_or_inf(params, contract, grid[i]);
        if (risk < best_risk) {
            best_risk = risk;
            best = i;
        }
    }
    if (!std::isfinite(best_risk)) {
        throw Error(ErrorCode::DegenerateLoss,
                    "writer risk is undefined at every scanned hedge fraction");
    }

    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    double x_star = grid[best];
    if (b > a) {
        auto objective = [&](double x) { return risk_or_inf(params, contract, x); };
        const double refined = golden_section(objective, a, b, cfg.minimizer_tol);
        if (objective(refined) <= best_risk) x_star = refined;
    }

    EquilibriumQuote quote{};
    quote.report = writer_risk(params, contract, HedgeFraction(x_star));
    quote.x_star = x_star;
    quote.price = quote.report.fair_price;
    return quote;
}

std::vector<SmileResult> volatility_smile(const MarketParams& params,
                                          std::span<const double> strikes, double expiry,
                                          const NumericConfig& cfg) {
    std::vector<SmileResult> results(strikes.size());

    auto solve = [&](std::size_t i) {
        SmileResult& out = results[i];
        out.strike = strikes[i];
        try {
            const OptionContract contract(strikes[i], expiry);
            const auto quote = minimize_writer_risk(params, contract, cfg);
            const double vol = implied_vol(params, contract, quote.price, cfg);
            out.point = SmilePoint{strikes[i],
                                   quote.price,
                                   quote.x_star,
                                   vol,
                                   quote.report.writer_risk,
                                   quote.report.holder_risk,
                                   quote.report.loss_prob};
        } catch (const Error& e) {
            out.error = e;
        }
    };

    const std::size_t workers = std::min<std::size_t>(
        strikes.size(), std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < strikes.size(); ++i) solve(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < strikes.size(); i = next++) solve(i);
            });
        }
    }
    return results;
}

EquilibriumQuote revalue_at_time(const MarketParams& params, const OptionContract& contract,
                                 double t, double spot_at_t, const NumericConfig& cfg) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidArgument, "rebalancing time must be a finite value >= 0");
    }
    if (t >= contract.expiry()) {
        throw Error(ErrorCode::ExpiredContract,
                    "rebalancing time " + std::to_string(t) + " is not before expiry " +
                        std::to_string(contract.expiry()));
    }
    return minimize_writer_risk(params.with_spot(spot_at_t),
                                OptionContract(contract.strike(), contract.expiry() - t), cfg);
}

}  // namespace fairplay
