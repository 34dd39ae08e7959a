#include "fairplay/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace fairplay::validation {

namespace {

double relative_error(double value, double reference) {
    const double scale = std::abs(reference);
    return scale > 0.0 ? std::abs(value - reference) / scale : std::abs(value - reference);
}

std::string describe(const Draw& d) {
    std::ostringstream os;
    os.precision(17);
    os << "S0=" << d.params.spot() << " mu=" << d.params.drift()
       << " sigma=" << d.params.volatility() << " r=" << d.params.risk_free()
       << " K=" << d.contract.strike() << " T=" << d.contract.expiry() << " x=" << d.x;
    return os.str();
}

double valid_hedge_limit(const MarketParams& params, const OptionContract& contract) {
    const double x_zero = zero_price_hedge(params, contract);
    return std::min(kMaxHedgeFraction, x_zero * (1.0 - 1e-9));
}

}  // namespace

std::vector<Draw> random_draws(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(engine); };

    std::vector<Draw> draws;
    draws.reserve(count);
    while (draws.size() < count) {
        const double s0 = uniform(50.0, 200.0);
        const double k = uniform(0.5 * s0, 1.5 * s0);
        const double sigma = uniform(0.05, 0.6);
        const double r = uniform(0.0, 0.08);
        // (r, r + 0.15]
        const double mu = r + 0.15 * (1.0 - unit(engine));
        const double t = uniform(0.1, 3.0);
        const MarketParams params(s0, mu, sigma, r);
        const OptionContract contract(k, t);
        // Premiums below a millionth of the strike vanish in K + C e^{rT}.
        const double premium = expected_call_payoff_physical(params, contract) *
                               std::exp(-r * t);
        if (!(premium > 1e-6 * k)) continue;
        const double limit = valid_hedge_limit(params, contract);
        double x = 0.0;
        while (!(x > 0.0)) x = limit * unit(engine);
        draws.push_back({params, contract, x});
    }
    return draws;
}

double lower_threshold_ratio(const MarketParams& params, const OptionContract& contract,
                             double x) {
    const double price = fair_price(params, contract, HedgeFraction(x));
    const double growth_rf = std::exp(params.risk_free() * contract.expiry());
    return (x * params.spot() - price) * growth_rf / (params.spot() * x);
}

double upper_threshold_ratio(const MarketParams& params, const OptionContract& contract,
                             double x) {
    const double price = fair_price(params, contract, HedgeFraction(x));
    const double growth_rf = std::exp(params.risk_free() * contract.expiry());
    return (contract.strike() + (price - x * params.spot()) * growth_rf) /
           (params.spot() * (1.0 - x));
}

Tally lemma_ordering(std::span<const Draw> draws) {
    Tally tally;
    for (const auto& d : draws) {
        ++tally.checked;
        bool ok = false;
        try {
            const HedgeFraction x(d.x);
            const double price = fair_price(d.params, d.contract, x);
            const auto th = risk_thresholds(d.params, d.contract, x, price);
            const bool lower_ok = !std::isfinite(th.lower) || th.lower < th.at_strike;
            ok = lower_ok && th.at_strike < th.upper && th.at_strike < th.holder;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            if (tally.violations == 0) tally.first_failure = describe(d);
            ++tally.violations;
        }
    }
    return tally;
}

Tally threshold_monotonicity(std::span<const Draw> draws, std::size_t grid_points,
                             double slack) {
    Tally tally;
    for (const auto& d : draws) {
        const double limit = valid_hedge_limit(d.params, d.contract);
        double prev_lower = -HUGE_VAL;
        double prev_upper = -HUGE_VAL;
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double x = limit * static_cast<double>(i + 1) /
                             static_cast<double>(grid_points + 1);
            ++tally.checked;
            const double lower = lower_threshold_ratio(d.params, d.contract, x);
            const double upper = upper_threshold_ratio(d.params, d.contract, x);
            if (lower < prev_lower - slack || upper < prev_upper - slack) {
                if (tally.violations == 0) tally.first_failure = describe(d);
                ++tally.violations;
            }
            prev_lower = lower;
            prev_upper = upper;
        }
    }
    return tally;
}

RelativeErrors quadrature_agreement(std::span<const Draw> draws,
                                    const oracle::QuadConfig& quad) {
    RelativeErrors worst;
    for (const auto& d : draws) {
        try {
            const auto report = writer_risk(d.params, d.contract, HedgeFraction(d.x));
            const auto w = oracle::quad_writer_loss(d.params, d.contract, d.x,
                                                    report.fair_price, quad);
            const auto h =
                oracle::quad_holder_loss(d.params, d.contract, report.fair_price, quad);
            worst.writer_risk = std::max(worst.writer_risk,
                                         relative_error(report.writer_risk, w.conditional_loss));
            worst.loss_prob =
                std::max(worst.loss_prob, relative_error(report.loss_prob, w.loss_prob));
            worst.holder_risk = std::max(worst.holder_risk,
                                         relative_error(report.holder_risk, h.conditional_loss));
        } catch (const Error& e) {
            if (worst.failures == 0) worst.first_failure = describe(d) + ": " + e.what();
            ++worst.failures;
        }
    }
    return worst;
}

bool Report::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

class SuiteBuilder {
public:
    explicit SuiteBuilder(Report& report) : report_(report) {}

    void relative(std::string name, double value, double reference, double tol) {
        const double err = relative_error(value, reference);
        report_.checks.push_back({std::move(name), err <= tol, value, reference, tol,
                                  "relative error " + fmt(err)});
    }

    void absolute(std::string name, double value, double reference, double tol) {
        const double err = std::abs(value - reference);
        report_.checks.push_back({std::move(name), err <= tol, value, reference, tol,
                                  "absolute error " + fmt(err)});
    }

    void within_se(std::string name, const oracle::McEstimate& est, double reference,
                   double sigmas) {
        const double band = sigmas * est.std_error;
        const double err = std::abs(est.mean - reference);
        report_.checks.push_back({std::move(name), err <= band, est.mean, reference, band,
                                  "|mc - closed| = " + fmt(err) + ", " + fmt(sigmas) +
                                      " SE band with n_effective = " +
                                      std::to_string(est.n_effective)});
    }

    void flag(std::string name, bool ok, std::string detail) {
        report_.checks.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                                  std::move(detail)});
    }

    void fail(std::string name, const std::exception& e) { flag(std::move(name), false, e.what()); }

    static std::string fmt(double v) {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    }

private:
    Report& report_;
};

void instance_checks(SuiteBuilder& suite, const MarketParams& params,
                     const OptionContract& contract, std::span<const double> terminal,
                     const SuiteConfig& cfg) {
    const std::string tag = "[K=" + SuiteBuilder::fmt(contract.strike()) + "]";
    const double mu = params.drift();
    const double r = params.risk_free();
    const double t = contract.expiry();
    const double growth_rf = std::exp(r * t);

    const double call_p = expected_call_payoff_physical(params, contract);
    const double put_p = expected_put_payoff_physical(params, contract);
    const double bs = bs_call_price(params, contract);

    suite.relative("expected_call_vs_quadrature" + tag, call_p,
                   oracle::quad_call_payoff(params, contract, mu, cfg.quad), 1e-8);
    suite.relative("expected_put_vs_quadrature" + tag, put_p,
                   oracle::quad_put_payoff(params, contract, mu, cfg.quad), 1e-8);
    suite.relative("bs_call_vs_quadrature" + tag, bs,
                   oracle::quad_call_payoff(params, contract, r, cfg.quad) / growth_rf, 1e-8);
    suite.relative("put_call_parity" + tag, call_p - put_p,
                   params.spot() * std::exp(mu * t) - contract.strike(), 1e-10);
    suite.flag("physical_call_exceeds_risk_neutral" + tag, call_p > growth_rf * bs,
               "E_P[C(T)] = " + SuiteBuilder::fmt(call_p) +
                   ", e^{rT} C_BS = " + SuiteBuilder::fmt(growth_rf * bs));

    std::vector<double> payoffs(terminal.size());
    std::transform(terminal.begin(), terminal.end(), payoffs.begin(),
                   [&](double s) { return std::max(s - contract.strike(), 0.0); });
    suite.within_se("expected_call_vs_mc" + tag, oracle::mc_mean(payoffs), call_p,
                    cfg.mc_sigmas);

    const double limit = valid_hedge_limit(params, contract);
    double max_gap = 0.0;
    for (double x : {0.0, 0.25, 0.5, 0.7212, 0.99}) {
        if (!(x < limit)) continue;
        const HedgeFraction h(x);
        const auto profits = expected_profits(params, contract, h, fair_price(params, contract, h));
        max_gap = std::max(max_gap, std::abs(profits.holder - profits.writer));
    }
    suite.absolute("fair_play_identity" + tag, max_gap, 0.0, 1e-10);

    if (limit > 0.0) {
        const double a = 0.0, b = 0.5 * limit, c = limit;
        const double pa = fair_price(params, contract, HedgeFraction(a));
        const double pb = fair_price(params, contract, HedgeFraction(b));
        const double pc = fair_price(params, contract, HedgeFraction(c));
        suite.absolute("fair_price_affine" + tag, pa - 2.0 * pb + pc, 0.0, 1e-10);
    }

    EquilibriumQuote quote{};
    try {
        quote = minimize_writer_risk(params, contract, cfg.numeric);
    } catch (const Error& e) {
        suite.fail("equilibrium_quote" + tag, e);
        return;
    }
    const auto& rep = quote.report;

    std::size_t beaten = 0;
    for (double x = 0.0; x < limit; x += cfg.numeric.minimizer_grid) {
        try {
            if (writer_risk(params, contract, HedgeFraction(x)).writer_risk < rep.writer_risk) {
                ++beaten;
            }
        } catch (const Error&) {
        }
    }
    suite.flag("quote_is_grid_minimum" + tag, beaten == 0,
               "x_star = " + SuiteBuilder::fmt(quote.x_star) + ", grid points below: " +
                   std::to_string(beaten));
    suite.flag("conditional_losses_positive" + tag,
               rep.writer_risk > 0.0 && rep.holder_risk > 0.0,
               "writer " + SuiteBuilder::fmt(rep.writer_risk) + ", holder " +
                   SuiteBuilder::fmt(rep.holder_risk));

    const double vst = params.volatility() * std::sqrt(t);
    const double upper = rep.thresholds.upper;
    const std::array<double, 1> cut{upper};
    suite.relative(
        "stock_tail_integral_identity" + tag,
        oracle::quad_expectation(
            [&](double z) { return z > upper ? std::exp(vst * z - 0.5 * vst * vst) : 0.0; },
            cfg.quad, cut),
        std_normal_cdf(-(upper - vst)), 1e-10);

    const auto qw = oracle::quad_writer_loss(params, contract, quote.x_star, quote.price, cfg.quad);
    const auto qh = oracle::quad_holder_loss(params, contract, quote.price, cfg.quad);
    suite.relative("writer_risk_vs_quadrature" + tag, rep.writer_risk, qw.conditional_loss, 1e-8);
    suite.relative("loss_prob_vs_quadrature" + tag, rep.loss_prob, qw.loss_prob, 1e-8);
    suite.relative("partial_call_vs_quadrature" + tag, rep.partial_call, qw.partial_call, 1e-8);
    suite.relative("partial_stock_vs_quadrature" + tag, rep.partial_stock, qw.partial_stock,
                   1e-8);
    suite.relative("holder_risk_vs_quadrature" + tag, rep.holder_risk, qh.conditional_loss, 1e-8);

    try {
        const auto mw = oracle::mc_writer_loss(params, contract, quote.x_star, quote.price, terminal);
        const auto mh = oracle::mc_holder_loss(params, contract, quote.price, terminal);
        suite.within_se("writer_risk_vs_mc" + tag, mw.conditional_loss, rep.writer_risk,
                        cfg.mc_sigmas);
        suite.within_se("loss_prob_vs_mc" + tag, mw.loss_prob, rep.loss_prob, cfg.mc_sigmas);
        suite.within_se("holder_risk_vs_mc" + tag, mh.conditional_loss, rep.holder_risk,
                        cfg.mc_sigmas);
    } catch (const Error& e) {
        suite.fail("mc_conditional_losses" + tag, e);
    }
}

}  // namespace

Report run_suite(const MarketParams& params, std::span<const double> strikes, double expiry,
                 const SuiteConfig& cfg) {
    Report report;
    SuiteBuilder suite(report);

    suite.absolute("quadrature_normalization",
                   oracle::quad_expectation([](double) { return 1.0; }, cfg.quad), 1.0, 1e-12);
    const double vst = params.volatility() * std::sqrt(expiry);
    suite.relative(
        "lognormal_martingale",
        oracle::quad_expectation([&](double z) { return std::exp(vst * z - 0.5 * vst * vst); },
                                 cfg.quad),
        1.0, 1e-10);

    const auto terminal = oracle::simulate_terminal(params, expiry, cfg.mc);
    for (double k : strikes) {
        try {
            instance_checks(suite, params, OptionContract(k, expiry), terminal, cfg);
        } catch (const Error& e) {
            suite.fail("instance[K=" + SuiteBuilder::fmt(k) + "]", e);
        }
    }

    double worst_round_trip = 0.0;
    const OptionContract atm(params.spot(), expiry);
    for (double sigma : {0.05, 0.1, 0.2, 0.4, 1.0}) {
        const double price = bs_call_price(params, atm, sigma);
        worst_round_trip =
            std::max(worst_round_trip, std::abs(implied_vol(params, atm, price, cfg.numeric) - sigma));
    }
    suite.absolute("implied_vol_round_trip", worst_round_trip, 0.0, 1e-6);

    const auto draws = random_draws(cfg.draw_seed, cfg.draws);
    std::size_t prop_violations = 0;
    for (const auto& d : draws) {
        const double growth_rf = std::exp(d.params.risk_free() * d.contract.expiry());
        if (!(expected_call_payoff_physical(d.params, d.contract) >
              growth_rf * bs_call_price(d.params, d.contract))) {
            ++prop_violations;
        }
    }
    suite.flag("draws_physical_call_exceeds_risk_neutral", prop_violations == 0,
               std::to_string(prop_violations) + " violations over " +
                   std::to_string(draws.size()) + " draws");

    const auto lemma = lemma_ordering(draws);
    suite.flag("draws_lemma_ordering", lemma.violations == 0,
               std::to_string(lemma.violations) + " violations over " +
                   std::to_string(lemma.checked) + " draws" +
                   (lemma.violations ? "; first: " + lemma.first_failure : ""));
    const auto mono = threshold_monotonicity(draws, 100, 1e-12);
    suite.flag("draws_threshold_monotonicity", mono.violations == 0,
               std::to_string(mono.violations) + " violations over " +
                   std::to_string(mono.checked) + " grid points" +
                   (mono.violations ? "; first: " + mono.first_failure : ""));

    const auto agreement = quadrature_agreement(draws, cfg.quad);
    suite.absolute("draws_writer_risk_vs_quadrature", agreement.writer_risk, 0.0, 1e-8);
    suite.absolute("draws_holder_risk_vs_quadrature", agreement.holder_risk, 0.0, 1e-8);
    suite.absolute("draws_loss_prob_vs_quadrature", agreement.loss_prob, 0.0, 1e-8);
    suite.flag("draws_closed_forms_defined", agreement.failures == 0,
               std::to_string(agreement.failures) + " failures" +
                   (agreement.failures ? "; first: " + agreement.first_failure : ""));
    return report;
}

}  // namespace fairplay::validation
