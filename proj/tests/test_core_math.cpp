#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairplay/core_math.hpp"
#include "fairplay/error.hpp"
#include "fairplay/oracle.hpp"

using namespace fairplay;

namespace {

const MarketParams kMarket(100.0, 0.10, 0.20, 0.05);
const OptionContract kAtm(100.0, 1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected fairplay::Error";
    return ErrorCode::InvalidArgument;
}

struct Draw {
    MarketParams params;
    OptionContract contract;
};

std::vector<Draw> draws(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Draw> out;
    for (int i = 0; i < n; ++i) {
        const double s0 = 50.0 + 150.0 * u(rng);
        const double r = 0.08 * u(rng);
        const double mu = r + 0.001 + 0.149 * u(rng);
        out.push_back({MarketParams(s0, mu, 0.05 + 0.55 * u(rng), r),
                       OptionContract(s0 * (0.5 + u(rng)), 0.1 + 2.9 * u(rng))});
    }
    return out;
}

}  // namespace

// Reference values from a 40-digit evaluation of the normal CDF.
TEST(StdNormalCdf, MatchesHighPrecisionValues) {
    const std::pair<double, double> cases[] = {
        {0.35, 0.63683065117561907122},
        {-1.5, 0.066807201268858066004},
        {2.5, 0.99379033467422386483},
        {-6.0, 9.8658764503769814070e-10},
        {-8.25, 7.9197263146424773410e-17},
        {5.0, 0.99999971334842812081},
        {-20.0, 2.7536241186062336951e-89},
    };
    for (const auto& [z, expected] : cases) {
        EXPECT_NEAR(std_normal_cdf(z), expected, 1e-12) << "z = " << z;
        EXPECT_NEAR(std_normal_cdf(z) / expected, 1.0, 1e-13) << "z = " << z;
    }
    EXPECT_NEAR(std_normal_cdf(0.35), 0.636831, 5e-7);
}

TEST(StdNormalCdf, SymmetryAndLimits) {
    EXPECT_EQ(std_normal_cdf(0.0), 0.5);
    EXPECT_EQ(std_normal_cdf(kInf), 1.0);
    EXPECT_EQ(std_normal_cdf(-kInf), 0.0);
    for (double z = 0.0; z < 8.0; z += 0.37) {
        EXPECT_NEAR(std_normal_cdf(z) + std_normal_cdf(-z), 1.0, 1e-15);
    }
}

TEST(StdNormalCdf, Monotone) {
    double prev = 0.0;
    for (double z = -40.0; z <= 40.0; z += 0.01) {
        const double v = std_normal_cdf(z);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(DPlusMinus, ExampleValues) {
    const auto risk_neutral = d_plus_minus(kMarket, kAtm, 0.05);
    EXPECT_NEAR(risk_neutral.plus, 0.35, 1e-14);
    EXPECT_NEAR(risk_neutral.minus, 0.15, 1e-14);
    const auto physical = d_plus_minus(kMarket, kAtm, 0.10);
    EXPECT_NEAR(physical.plus, 0.60, 1e-14);
    EXPECT_NEAR(physical.minus, 0.40, 1e-14);
    EXPECT_NEAR(d_plus_minus(kMarket, kAtm, -0.02).plus, 0.0, 1e-15);
}

TEST(DPlusMinus, SpreadIsVolRootT) {
    for (const auto& d : draws(11, 200)) {
        const auto pm = d_plus_minus(d.params, d.contract, d.params.drift());
        EXPECT_NEAR(pm.plus - pm.minus,
                    d.params.volatility() * std::sqrt(d.contract.expiry()), 1e-12);
    }
}

TEST(BsCallPrice, ReferenceValue) {
    EXPECT_NEAR(bs_call_price(kMarket, kAtm), 10.45, 0.005);
    EXPECT_NEAR(bs_call_price(kMarket, kAtm), 10.450583572185566782, 1e-11);
}

TEST(BsCallPrice, ZeroStrikeIsTheStock) {
    EXPECT_NEAR(bs_call_price(kMarket, OptionContract(1e-9, 1.0)), 100.0, 1e-8);
}

TEST(BsCallPrice, MatchesRiskNeutralQuadrature) {
    const OptionContract otm(120.0, 1.0);
    const double oracle =
        oracle::quad_call_payoff(kMarket, otm, kMarket.risk_free()) * std::exp(-0.05);
    EXPECT_NEAR(bs_call_price(kMarket, otm) / oracle, 1.0, 1e-8);
    EXPECT_NEAR(bs_call_price(kMarket, otm), 3.2474774165608136954, 1e-10);
}

TEST(BsCallPrice, NoArbitrageBoundsAndMonotonicity) {
    for (const auto& d : draws(12, 200)) {
        const double price = bs_call_price(d.params, d.contract);
        const double lower = std::max(
            d.params.spot() -
                d.contract.strike() * std::exp(-d.params.risk_free() * d.contract.expiry()),
            0.0);
        // Deep in the money the time value can sit below the resolution of the
        // intrinsic value, so only the non-strict bound survives rounding.
        EXPECT_GE(price, lower);
        EXPECT_LT(price, d.params.spot());
    }
    double prev = 0.0;
    for (double vol = 0.02; vol <= 2.0; vol += 0.02) {
        const double p = bs_call_price(kMarket, kAtm, vol);
        EXPECT_GT(p, prev);
        prev = p;
    }
    prev = kInf;
    for (double k = 20.0; k <= 300.0; k += 5.0) {
        const double p = bs_call_price(kMarket, OptionContract(k, 1.0));
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(ExpectedCallPayoff, ReferenceValue) {
    // 40-digit quadrature of E_P[(S(T) - K)^+].
    EXPECT_NEAR(expected_call_payoff_physical(kMarket, kAtm), 14.665260653636594783, 1e-11);
    const double holder = expected_call_payoff_physical(kMarket, kAtm) -
                          bs_call_price(kMarket, kAtm) * std::exp(0.05);
    EXPECT_NEAR(holder, 3.6789, 1e-4);
}

TEST(ExpectedCallPayoff, ZeroStrikeIsLognormalMean) {
    EXPECT_NEAR(expected_call_payoff_physical(kMarket, OptionContract(1e-9, 1.0)),
                100.0 * std::exp(0.10), 1e-8);
    EXPECT_NEAR(100.0 * std::exp(0.10), 110.517, 5e-4);
}

TEST(ExpectedCallPayoff, EqualDriftGivesCompoundedBlackScholes) {
    const auto flat = MarketParams::relaxed(100.0, 0.05, 0.2, 0.05);
    EXPECT_NEAR(expected_call_payoff_physical(flat, kAtm),
                std::exp(0.05) * bs_call_price(flat, kAtm), 1e-12);
}

TEST(ExpectedCallPayoff, ExceedsCompoundedBlackScholesWhenDriftExceedsRate) {
    for (const auto& d : draws(13, 200)) {
        EXPECT_GT(expected_call_payoff_physical(d.params, d.contract),
                  std::exp(d.params.risk_free() * d.contract.expiry()) *
                      bs_call_price(d.params, d.contract));
    }
}

TEST(ExpectedPutPayoff, ReferenceValues) {
    EXPECT_NEAR(expected_put_payoff_physical(kMarket, kAtm), 4.1481688460718323007, 1e-11);
    EXPECT_NEAR(expected_put_payoff_physical(kMarket, OptionContract(1e-9, 1.0)), 0.0, 1e-12);
    EXPECT_NEAR(expected_put_payoff_physical(kMarket, OptionContract(1000.0, 1.0)),
                889.48290819243523752, 1e-9);
}

TEST(ExpectedPutPayoff, ParityOnDraws) {
    for (const auto& d : draws(14, 500)) {
        const double lhs = expected_call_payoff_physical(d.params, d.contract) -
                           expected_put_payoff_physical(d.params, d.contract);
        const double rhs =
            d.params.spot() * std::exp(d.params.drift() * d.contract.expiry()) -
            d.contract.strike();
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(rhs), 1.0));
    }
}

TEST(Expectations, MatchQuadratureOnDraws) {
    for (const auto& d : draws(15, 200)) {
        const double mu = d.params.drift();
        const double r = d.params.risk_free();
        const double t = d.contract.expiry();
        const double call_q = oracle::quad_call_payoff(d.params, d.contract, mu);
        const double put_q = oracle::quad_put_payoff(d.params, d.contract, mu);
        const double bs_q = oracle::quad_call_payoff(d.params, d.contract, r) * std::exp(-r * t);
        EXPECT_NEAR(expected_call_payoff_physical(d.params, d.contract) / call_q, 1.0, 1e-8);
        EXPECT_NEAR(bs_call_price(d.params, d.contract) / bs_q, 1.0, 1e-8);
        if (put_q > 1e-300) {
            EXPECT_NEAR(expected_put_payoff_physical(d.params, d.contract) / put_q, 1.0, 1e-8);
        }
    }
}

TEST(ImpliedVol, RecoversReferencePrices) {
    EXPECT_NEAR(implied_vol(kMarket, kAtm, 10.45), 0.20, 1e-3);
    EXPECT_NEAR(implied_vol(kMarket, kAtm, 12.10), 0.2438, 5e-4);
}

TEST(ImpliedVol, RoundTrip) {
    for (double vol : {0.05, 0.1, 0.2, 0.4, 1.0}) {
        for (double k : {80.0, 100.0, 125.0}) {
            const OptionContract c(k, 1.0);
            const double price = bs_call_price(kMarket, c, vol);
            // Vol is only identifiable to about root_tol / vega.
            const double vega =
                (bs_call_price(kMarket, c, vol + 1e-4) - bs_call_price(kMarket, c, vol - 1e-4)) /
                2e-4;
            const double tol = std::max(1e-6, 10 * NumericConfig{}.root_tol / vega);
            EXPECT_NEAR(implied_vol(kMarket, c, price), vol, tol) << "K=" << k;
            const double back = bs_call_price(kMarket, c, implied_vol(kMarket, c, price));
            EXPECT_NEAR(back, price, 1e-10);
        }
    }
}

TEST(ImpliedVol, RejectsPricesOutsideNoArbitrageBounds) {
    EXPECT_EQ(code_of([] { implied_vol(kMarket, kAtm, 100.0); }), ErrorCode::PriceOutOfBounds);
    EXPECT_EQ(code_of([] { implied_vol(kMarket, kAtm, 4.8); }), ErrorCode::PriceOutOfBounds);
    EXPECT_EQ(code_of([] { implied_vol(kMarket, kAtm, -1.0); }), ErrorCode::PriceOutOfBounds);
}

TEST(ImpliedVol, ReportsExhaustedBracket) {
    NumericConfig narrow;
    narrow.vol_lower = 0.25;
    narrow.vol_upper = 0.5;
    EXPECT_EQ(code_of([&] { implied_vol(kMarket, kAtm, 10.45, narrow); }),
              ErrorCode::BracketExhausted);
}

TEST(Types, RejectInvalidConstruction) {
    EXPECT_EQ(code_of([] { MarketParams(0.0, 0.1, 0.2, 0.05); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { MarketParams(100.0, 0.1, 0.0, 0.05); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { MarketParams(100.0, 0.05, 0.2, 0.05); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { MarketParams(100.0, 0.03, 0.2, 0.05); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { OptionContract(0.0, 1.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { OptionContract(100.0, 0.0); }), ErrorCode::InvalidArgument);
    NumericConfig bad;
    bad.root_tol = 0.0;
    EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::InvalidArgument);
}
