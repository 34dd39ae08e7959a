#pragma once

// Independent verification engines: exact-lognormal Monte Carlo under the
// physical measure and composite Gauss-Legendre quadrature against the
// standard normal density. Nothing here calls the closed forms in
// core_math/equilibrium beyond the input types.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fairplay/core_math.hpp"

namespace fairplay::oracle {

struct McConfig {
    std::uint64_t paths = 1'000'000;
    std::uint64_t seed = 20240517;
    std::uint64_t chunk_size = 1u << 16;
    /// Worker threads; 0 picks hardware_concurrency. Does not affect results.
    unsigned threads = 0;

    void validate() const;
};

struct McEstimate {
    double mean;
    double std_error;
    std::size_t n_effective;
};

struct QuadConfig {
    double z_lower = -10.0;
    double z_upper = 10.0;
    std::size_t panels = 2000;

    void validate() const;
};

/// S(T) = S0 exp((mu - sigma^2/2) T + sigma sqrt(T) Z), one draw per path.
/// Chunk c uses its own engine seeded from (seed, c), so the sample is
/// bit-identical for a fixed (paths, seed, chunk_size) whatever the thread count.
std::vector<double> simulate_terminal(const MarketParams& params, double expiry,
                                      const McConfig& cfg);

/// Sample mean with standard error over all entries.
McEstimate mc_mean(std::span<const double> values);

/// Mean over the strictly positive entries. Throws Error(NoLossEvents) if none.
McEstimate mc_conditional_loss(std::span<const double> losses);

/// E[f(Z)], Z ~ N(0,1). Breakpoints inside the integration range become panel
/// boundaries; the range is widened to cover breakpoints out to |z| = 40.
double quad_expectation(const std::function<double(double)>& integrand,
                        const QuadConfig& cfg = {}, std::span<const double> breakpoints = {});

/// Roots of a piecewise-monotone f on [lo, hi], located by a sign-change scan
/// over `cells` cells (plus `extra_nodes`) and bisection.
std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t cells, std::span<const double> extra_nodes = {});

/// Terminal price for standard normal draw z under growth rate g.
double terminal_price(const MarketParams& params, double expiry, double growth, double z);

/// E[(S(T) - K)^+] and E[(K - S(T))^+] under growth rate g, undiscounted.
double quad_call_payoff(const MarketParams& params, const OptionContract& contract,
                        double growth, const QuadConfig& cfg = {});
double quad_put_payoff(const MarketParams& params, const OptionContract& contract,
                       double growth, const QuadConfig& cfg = {});

/// Writer loss C(T) - x (S(T) - S0 e^{rT}) - C e^{rT}.
double writer_loss(const MarketParams& params, const OptionContract& contract, double x,
                   double price, double terminal);

/// Holder loss C e^{rT} - C(T).
double holder_loss(const MarketParams& params, const OptionContract& contract, double price,
                   double terminal);

struct LossMoments {
    double loss_prob;
    double conditional_loss;
    double partial_call;   ///< E[C(T) 1{L > 0}]
    double partial_stock;  ///< E[S(T) 1{L > 0}]
};

LossMoments quad_writer_loss(const MarketParams& params, const OptionContract& contract,
                             double x, double price, const QuadConfig& cfg = {});
LossMoments quad_holder_loss(const MarketParams& params, const OptionContract& contract,
                             double price, const QuadConfig& cfg = {});

struct McLossEstimates {
    McEstimate loss_prob;
    McEstimate conditional_loss;
};

McLossEstimates mc_writer_loss(const MarketParams& params, const OptionContract& contract,
                               double x, double price, std::span<const double> terminal);
McLossEstimates mc_holder_loss(const MarketParams& params, const OptionContract& contract,
                               double price, std::span<const double> terminal);

}  // namespace fairplay::oracle
