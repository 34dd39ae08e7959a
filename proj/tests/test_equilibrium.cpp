#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fairplay/equilibrium.hpp"
#include "fairplay/oracle.hpp"

using namespace fairplay;

namespace {

const MarketParams kMarket(100.0, 0.10, 0.20, 0.05);
const OptionContract kAtm(100.0, 1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPaperHedge = 0.7212;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected fairplay::Error";
    return ErrorCode::InvalidArgument;
}

double delta_hedge() {
    return std_normal_cdf(d_plus_minus(kMarket, kAtm, kMarket.risk_free()).plus);
}

}  // namespace

TEST(FairPrice, ReferenceValues) {
    // 40-digit quadrature of e^{-rT}(E_P[C(T)] - x S0 (e^{mu T} - e^{rT}) / 2).
    EXPECT_NEAR(fair_price(kMarket, kAtm, HedgeFraction(0.0)), 13.950027451711703016, 1e-10);
    EXPECT_NEAR(fair_price(kMarket, kAtm, HedgeFraction(0.5)), 12.668250042311102023, 1e-10);
    EXPECT_NEAR(fair_price(kMarket, kAtm, HedgeFraction(kPaperHedge)), 12.10, 0.01);
}

TEST(FairPrice, AffineAndDecreasing) {
    const double slope = -0.5 * 100.0 * (std::exp(0.10) - std::exp(0.05)) * std::exp(-0.05);
    for (double x = 0.0; x + 0.2 < 1.0; x += 0.05) {
        const double a = fair_price(kMarket, kAtm, HedgeFraction(x));
        const double b = fair_price(kMarket, kAtm, HedgeFraction(x + 0.1));
        const double c = fair_price(kMarket, kAtm, HedgeFraction(x + 0.2));
        EXPECT_LE(std::abs(a - 2.0 * b + c), 1e-10);
        EXPECT_NEAR((b - a) / 0.1, slope, 1e-9);
        EXPECT_LT(b, a);
    }
}

TEST(FairPrice, NonpositiveBeyondZeroPriceHedge) {
    const OptionContract far(160.0, 0.25);
    const double x_zero = zero_price_hedge(kMarket, far);
    ASSERT_LT(x_zero, 0.9);
    EXPECT_EQ(code_of([&] { fair_price(kMarket, far, HedgeFraction(0.9)); }),
              ErrorCode::NonpositivePrice);
    EXPECT_GT(fair_price(kMarket, far, HedgeFraction(0.5 * x_zero)), 0.0);
}

TEST(HedgeFractionType, RejectsOutsideUnitInterval) {
    EXPECT_EQ(code_of([] { HedgeFraction(-0.1); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { HedgeFraction(1.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { HedgeFraction(std::nan("")); }), ErrorCode::InvalidArgument);
}

TEST(ExpectedProfits, DeltaHedgeAtBlackScholesPrice) {
    const double x = delta_hedge();
    EXPECT_NEAR(x, 0.6368, 1e-4);
    const auto p = expected_profits(kMarket, kAtm, HedgeFraction(x), bs_call_price(kMarket, kAtm));
    EXPECT_NEAR(p.writer, -0.25, 0.01);
    // E_P[C(T)] from quadrature minus the compounded Black-Scholes premium.
    EXPECT_NEAR(p.holder, 14.665260653636594783 - 10.450583572185566782 * std::exp(0.05), 1e-9);
    EXPECT_NEAR(p.holder, 3.68, 0.005);
}

TEST(ExpectedProfits, StructureInHedgeFraction) {
    const double excess = 100.0 * (std::exp(0.10) - std::exp(0.05));
    const double price = 11.0;
    const auto base = expected_profits(kMarket, kAtm, HedgeFraction(0.0), price);
    for (double x = 0.1; x < 1.0; x += 0.1) {
        const auto p = expected_profits(kMarket, kAtm, HedgeFraction(x), price);
        EXPECT_DOUBLE_EQ(p.holder, base.holder);
        EXPECT_NEAR(p.writer - base.writer, x * excess, 1e-10);
        EXPECT_NEAR(p.holder + p.writer, x * excess, 1e-10);
    }
}

TEST(ExpectedProfits, FairPlayIdentity) {
    for (double x = 0.0; x < 1.0; x += 0.01) {
        const HedgeFraction h(x);
        const auto p = expected_profits(kMarket, kAtm, h, fair_price(kMarket, kAtm, h));
        EXPECT_NEAR(p.holder, p.writer, 1e-10) << "x = " << x;
    }
}

TEST(RiskThresholds, UnhedgedWriterCannotLoseOutOfTheMoney) {
    const HedgeFraction h(0.0);
    const auto th = risk_thresholds(kMarket, kAtm, h, fair_price(kMarket, kAtm, h));
    EXPECT_EQ(th.lower, -kInf);
    EXPECT_LT(th.at_strike, th.upper);
    EXPECT_LT(th.at_strike, th.holder);
}

TEST(RiskThresholds, OrderedAtReferenceHedge) {
    const auto th = risk_thresholds(kMarket, kAtm, HedgeFraction(kPaperHedge), 12.10);
    EXPECT_TRUE(std::isfinite(th.lower));
    EXPECT_LT(th.lower, th.at_strike);
    EXPECT_LT(th.at_strike, th.upper);
    EXPECT_LT(th.at_strike, th.holder);
    EXPECT_NEAR(th.at_strike, (std::log(1.0) - 0.10 + 0.02) / 0.2, 1e-14);
}

TEST(RiskThresholds, LossProbabilityMatchesMonteCarlo) {
    const HedgeFraction h(kPaperHedge);
    const double price = fair_price(kMarket, kAtm, h);
    const auto th = risk_thresholds(kMarket, kAtm, h, price);
    const double prob = std_normal_cdf(th.lower) + 1.0 - std_normal_cdf(th.upper);
    const auto terminal = oracle::simulate_terminal(kMarket, 1.0, {});
    const auto mc = oracle::mc_writer_loss(kMarket, kAtm, kPaperHedge, price, terminal);
    EXPECT_LE(std::abs(mc.loss_prob.mean - prob), 3.0 * mc.loss_prob.std_error);
}

TEST(RiskThresholds, DomainErrors) {
    EXPECT_EQ(code_of([] { risk_thresholds(kMarket, kAtm, HedgeFraction(0.5), 0.0); }),
              ErrorCode::DomainError);
    // K + (C - x S0) e^{rT} < 0.
    EXPECT_EQ(code_of([] {
                  risk_thresholds(kMarket, OptionContract(50.0, 1.0), HedgeFraction(0.9), 1.0);
              }),
              ErrorCode::DomainError);
}

TEST(WriterPartialExpectations, DegenerateThresholds) {
    const RiskThresholds nothing{0.4, -kInf, kInf, 1.0};
    const auto none = writer_partial_expectations(kMarket, kAtm, nothing);
    EXPECT_EQ(none.call, 0.0);
    EXPECT_EQ(none.stock, 0.0);

    const double d = (std::log(1.0) - 0.10 + 0.02) / 0.2;
    const RiskThresholds whole_itm{d, -kInf, d, 1.0};
    EXPECT_NEAR(writer_partial_expectations(kMarket, kAtm, whole_itm).call,
                expected_call_payoff_physical(kMarket, kAtm), 1e-12);
}

TEST(WriterPartialExpectations, MatchQuadratureAtReferenceHedge) {
    const HedgeFraction h(kPaperHedge);
    const double price = fair_price(kMarket, kAtm, h);
    const auto th = risk_thresholds(kMarket, kAtm, h, price);
    const auto closed = writer_partial_expectations(kMarket, kAtm, th);
    const auto quad = oracle::quad_writer_loss(kMarket, kAtm, kPaperHedge, price);
    EXPECT_NEAR(closed.call / quad.partial_call, 1.0, 1e-8);
    EXPECT_NEAR(closed.stock / quad.partial_stock, 1.0, 1e-8);
    EXPECT_GE(closed.call, 0.0);
    EXPECT_LE(closed.call, expected_call_payoff_physical(kMarket, kAtm));
    EXPECT_LE(closed.stock, 100.0 * std::exp(0.10));
}

TEST(WriterRisk, MatchesQuadrature) {
    for (double x : {0.0, 0.2, 0.5, kPaperHedge, 0.9, 0.99}) {
        const auto rep = writer_risk(kMarket, kAtm, HedgeFraction(x));
        const auto quad = oracle::quad_writer_loss(kMarket, kAtm, x, rep.fair_price);
        EXPECT_NEAR(rep.writer_risk / quad.conditional_loss, 1.0, 1e-8) << "x = " << x;
        EXPECT_NEAR(rep.loss_prob / quad.loss_prob, 1.0, 1e-8) << "x = " << x;
        EXPECT_GT(rep.writer_risk, 0.0);
        EXPECT_GT(rep.loss_prob, 0.0);
        EXPECT_LT(rep.loss_prob, 1.0);
    }
}

TEST(WriterRisk, MatchesMonteCarlo) {
    const auto rep = writer_risk(kMarket, kAtm, HedgeFraction(kPaperHedge));
    const auto terminal = oracle::simulate_terminal(kMarket, 1.0, {});
    const auto mc =
        oracle::mc_writer_loss(kMarket, kAtm, kPaperHedge, rep.fair_price, terminal);
    EXPECT_LE(std::abs(mc.conditional_loss.mean - rep.writer_risk),
              3.5 * mc.conditional_loss.std_error);
}

TEST(WriterRisk, PropagatesNonpositivePrice) {
    EXPECT_EQ(code_of([] { writer_risk(kMarket, OptionContract(160.0, 0.25), HedgeFraction(0.9)); }),
              ErrorCode::NonpositivePrice);
}

TEST(HolderRisk, MatchesQuadrature) {
    for (double x : {0.0, 0.3, kPaperHedge, 0.95}) {
        const HedgeFraction h(x);
        const double price = fair_price(kMarket, kAtm, h);
        const double closed = holder_risk(kMarket, kAtm, h);
        const auto quad = oracle::quad_holder_loss(kMarket, kAtm, price);
        EXPECT_NEAR(closed / quad.conditional_loss, 1.0, 1e-8) << "x = " << x;
        EXPECT_GT(closed, 0.0);
        EXPECT_LT(closed, price * std::exp(0.05));
    }
}

TEST(HolderRisk, TinyStrike) {
    const OptionContract tiny(1e-6, 1.0);
    const HedgeFraction h(0.3);
    const double price = fair_price(kMarket, tiny, h);
    const auto quad = oracle::quad_holder_loss(kMarket, tiny, price);
    EXPECT_NEAR(holder_risk(kMarket, tiny, h) / quad.conditional_loss, 1.0, 1e-8);
}

TEST(MinimizeWriterRisk, ReferenceQuote) {
    const auto q = minimize_writer_risk(kMarket, kAtm);
    EXPECT_NEAR(q.x_star, 0.7212, 5e-4);
    EXPECT_NEAR(q.price, 12.10, 0.01);
    EXPECT_DOUBLE_EQ(q.price, fair_price(kMarket, kAtm, HedgeFraction(q.x_star)));
    EXPECT_DOUBLE_EQ(q.report.fair_price, q.price);
}

TEST(MinimizeWriterRisk, InTheMoneyStrike) {
    EXPECT_NEAR(minimize_writer_risk(kMarket, OptionContract(90.0, 1.0)).price, 18.89, 0.02);
}

TEST(MinimizeWriterRisk, BeatsEveryGridPoint) {
    const auto q = minimize_writer_risk(kMarket, kAtm);
    for (double x = 0.0; x < kMaxHedgeFraction; x += 1e-3) {
        EXPECT_LE(q.report.writer_risk, writer_risk(kMarket, kAtm, HedgeFraction(x)).writer_risk);
    }
    // Refinement lands on a local minimum to within the tolerance.
    const double left = writer_risk(kMarket, kAtm, HedgeFraction(q.x_star - 1e-4)).writer_risk;
    const double right = writer_risk(kMarket, kAtm, HedgeFraction(q.x_star + 1e-4)).writer_risk;
    EXPECT_LE(q.report.writer_risk, left);
    EXPECT_LE(q.report.writer_risk, right);
}

TEST(MinimizeWriterRisk, RespectsValidDomain) {
    const OptionContract far(160.0, 0.25);
    const auto q = minimize_writer_risk(kMarket, far);
    EXPECT_LT(q.x_star, zero_price_hedge(kMarket, far));
    EXPECT_GT(q.price, 0.0);
}

TEST(MinimizeWriterRisk, EmptyDomain) {
    EXPECT_EQ(code_of([] { minimize_writer_risk(kMarket, OptionContract(1e6, 0.01)); }),
              ErrorCode::EmptyDomain);
}

TEST(VolatilitySmile, ReferenceTable) {
    const std::vector<double> strikes{90, 95, 100, 105, 110, 115};
    const double prices[] = {18.89, 15.28, 12.10, 9.38, 7.12, 5.30};
    const double vols[] = {0.2743, 0.2567, 0.2438, 0.2342, 0.2272, 0.2220};
    const auto smile = volatility_smile(kMarket, strikes, 1.0);
    ASSERT_EQ(smile.size(), strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        ASSERT_TRUE(smile[i].point) << smile[i].error->what();
        EXPECT_NEAR(smile[i].point->equilibrium_price, prices[i], 0.02);
        EXPECT_NEAR(smile[i].point->implied_volatility, vols[i], 5e-4);
        if (i > 0) {
            EXPECT_LT(smile[i].point->implied_volatility, smile[i - 1].point->implied_volatility);
        }
        EXPECT_NEAR(bs_call_price(kMarket, OptionContract(strikes[i], 1.0),
                                  smile[i].point->implied_volatility),
                    smile[i].point->equilibrium_price, 1e-9);
    }
}

TEST(VolatilitySmile, SingleStrikeIsComposition) {
    const std::vector<double> one{100.0};
    const auto smile = volatility_smile(kMarket, one, 1.0);
    const auto q = minimize_writer_risk(kMarket, kAtm);
    ASSERT_TRUE(smile[0].point);
    EXPECT_EQ(smile[0].point->x_star, q.x_star);
    EXPECT_EQ(smile[0].point->equilibrium_price, q.price);
    EXPECT_EQ(smile[0].point->implied_volatility, implied_vol(kMarket, kAtm, q.price));
}

TEST(VolatilitySmile, KeepsInputOrderAndReportsFailuresPerPoint) {
    const std::vector<double> strikes{110, 1e6, 90, -5, 100};
    const auto smile = volatility_smile(kMarket, strikes, 1.0);
    ASSERT_EQ(smile.size(), strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) EXPECT_EQ(smile[i].strike, strikes[i]);
    EXPECT_TRUE(smile[0].point);
    ASSERT_TRUE(smile[1].error);
    EXPECT_EQ(smile[1].error->code(), ErrorCode::EmptyDomain);
    EXPECT_TRUE(smile[2].point);
    ASSERT_TRUE(smile[3].error);
    EXPECT_EQ(smile[3].error->code(), ErrorCode::InvalidArgument);
    ASSERT_TRUE(smile[4].point);
    EXPECT_EQ(smile[4].point->x_star, minimize_writer_risk(kMarket, kAtm).x_star);
}

TEST(RevalueAtTime, IdentityAtInception) {
    const auto a = revalue_at_time(kMarket, kAtm, 0.0, 100.0);
    const auto b = minimize_writer_risk(kMarket, kAtm);
    EXPECT_EQ(a.x_star, b.x_star);
    EXPECT_EQ(a.price, b.price);
    EXPECT_EQ(a.report.writer_risk, b.report.writer_risk);
}

TEST(RevalueAtTime, ShortensMaturity) {
    const auto a = revalue_at_time(kMarket, kAtm, 0.5, 100.0);
    const auto b = minimize_writer_risk(kMarket, OptionContract(100.0, 0.5));
    EXPECT_EQ(a.x_star, b.x_star);
    EXPECT_EQ(a.price, b.price);
}

TEST(RevalueAtTime, ShiftedSpotMatchesOracles) {
    const auto q = revalue_at_time(kMarket, kAtm, 0.5, 110.0);
    const auto shifted = kMarket.with_spot(110.0);
    const OptionContract rest(100.0, 0.5);
    const auto quad = oracle::quad_writer_loss(shifted, rest, q.x_star, q.price);
    EXPECT_NEAR(q.report.writer_risk / quad.conditional_loss, 1.0, 1e-8);
    EXPECT_NEAR(q.report.loss_prob / quad.loss_prob, 1.0, 1e-8);
    const double fair_q = std::exp(-0.05 * 0.5) *
                          (oracle::quad_call_payoff(shifted, rest, 0.10) -
                           0.5 * q.x_star * 110.0 * (std::exp(0.05) - std::exp(0.025)));
    EXPECT_NEAR(q.price / fair_q, 1.0, 1e-8);
}

TEST(RevalueAtTime, Errors) {
    EXPECT_EQ(code_of([] { revalue_at_time(kMarket, kAtm, 1.0, 100.0); }),
              ErrorCode::ExpiredContract);
    EXPECT_EQ(code_of([] { revalue_at_time(kMarket, kAtm, 2.0, 100.0); }),
              ErrorCode::ExpiredContract);
    EXPECT_EQ(code_of([] { revalue_at_time(kMarket, kAtm, 0.5, 0.0); }),
              ErrorCode::InvalidArgument);
}
