#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairplay/core_math.hpp"
#include "fairplay/equilibrium.hpp"
#include "fairplay/oracle.hpp"

namespace fairplay::validation {

/// One random parameter set with a hedge fraction inside its valid domain.
struct Draw {
    MarketParams params;
    OptionContract contract;
    double x;
};

/// S0 in [50, 200], K in [0.5 S0, 1.5 S0], sigma in [0.05, 0.6], r in [0, 0.08],
/// mu in (r, r + 0.15], T in [0.1, 3], x uniform on (0, min(x_max, 1)).
/// Parameter sets whose x = 0 premium is below 1e-6 K are redrawn.
std::vector<Draw> random_draws(std::uint64_t seed, std::size_t count);

/// (x S0 - C_x) e^{rT} / (S0 x): the lower cut point's log argument.
double lower_threshold_ratio(const MarketParams& params, const OptionContract& contract,
                             double x);
/// (K + (C_x - x S0) e^{rT}) / (S0 (1 - x)): the upper cut point's log argument.
double upper_threshold_ratio(const MarketParams& params, const OptionContract& contract,
                             double x);

struct Tally {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::string first_failure;
};

/// lower < at_strike < upper (finite lower) and at_strike < holder, at C_x.
Tally lemma_ordering(std::span<const Draw> draws);

/// Both threshold ratios nondecreasing (within `slack`) on a grid of
/// `grid_points` hedge fractions across each draw's valid domain.
Tally threshold_monotonicity(std::span<const Draw> draws, std::size_t grid_points,
                             double slack);

struct RelativeErrors {
    double writer_risk = 0.0;
    double holder_risk = 0.0;
    double loss_prob = 0.0;
    std::size_t failures = 0;  ///< draws where the closed form threw
    std::string first_failure;
};

/// Worst relative error of the closed forms against quadrature over the draws.
RelativeErrors quadrature_agreement(std::span<const Draw> draws,
                                    const oracle::QuadConfig& quad = {});

struct Check {
    std::string name;
    bool passed;
    double value;
    double reference;
    double tolerance;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    bool passed() const noexcept;
};

struct SuiteConfig {
    std::size_t draws = 1000;
    std::uint64_t draw_seed = 7;
    double mc_sigmas = 3.5;
    oracle::McConfig mc{};
    oracle::QuadConfig quad{};
    NumericConfig numeric{};
};

/// Closed-form vs oracle and invariant checks for each strike plus the
/// random-draw property suite.
Report run_suite(const MarketParams& params, std::span<const double> strikes, double expiry,
                 const SuiteConfig& cfg = {});

}  // namespace fairplay::validation
