#include "fairplay/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "fairplay/error.hpp"

namespace fairplay::oracle {

namespace {

constexpr std::size_t kGaussOrder = 10;
constexpr double kBreakpointReach = 40.0;

struct GaussRule {
    std::array<double, kGaussOrder> nodes{};
    std::array<double, kGaussOrder> weights{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_rule() {
    GaussRule rule;
    constexpr std::size_t n = kGaussOrder;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
            }
            dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_rule();
    return rule;
}

double normal_density(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double integrate_panel(const std::function<double(double)>& f, double a, double b) {
    const auto& rule = gauss_rule();
    const double half = 0.5 * (b - a);
    const double centre = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGaussOrder; ++i) {
        const double z = centre + half * rule.nodes[i];
        sum += rule.weights[i] * f(z) * normal_density(z);
    }
    return half * sum;
}

McEstimate estimate(std::span<const double> values, bool positive_only) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (positive_only && !(v > 0.0)) continue;
        sum += v;
        ++n;
    }
    if (n == 0) return {0.0, 0.0, 0};
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (double v : values) {
        if (positive_only && !(v > 0.0)) continue;
        sq += (v - mean) * (v - mean);
    }
    const double nd = static_cast<double>(n);
    const double sd = n > 1 ? std::sqrt(sq / (nd - 1.0)) : 0.0;
    return {mean, sd / std::sqrt(nd), n};
}

double call_payoff(double terminal, double strike) { return std::max(terminal - strike, 0.0); }

// Standardized z at which S(T) crosses `level` under growth g.
double crossing(const MarketParams& params, double expiry, double growth, double level) {
    const double vst = params.volatility() * std::sqrt(expiry);
    const double sigma = params.volatility();
    return (std::log(level / params.spot()) - (growth - 0.5 * sigma * sigma) * expiry) / vst;
}

}  // namespace

void McConfig::validate() const {
    if (paths < 1) throw Error(ErrorCode::InvalidArgument, "paths must be >= 1");
    if (chunk_size < 1) throw Error(ErrorCode::InvalidArgument, "chunk_size must be >= 1");
}

void QuadConfig::validate() const {
    if (!(z_upper > z_lower) || !std::isfinite(z_lower) || !std::isfinite(z_upper)) {
        throw Error(ErrorCode::InvalidArgument, "quadrature bounds must be finite and ordered");
    }
    if (panels < 1) throw Error(ErrorCode::InvalidArgument, "panels must be >= 1");
}

std::vector<double> simulate_terminal(const MarketParams& params, double expiry,
                                      const McConfig& cfg) {
    cfg.validate();
    if (!(expiry > 0.0)) throw Error(ErrorCode::InvalidArgument, "expiry must be positive");

    std::vector<double> out(cfg.paths);
    const double sigma = params.volatility();
    const double drift_term = (params.drift() - 0.5 * sigma * sigma) * expiry;
    const double vst = sigma * std::sqrt(expiry);
    const double s0 = params.spot();
    const std::uint64_t chunks = (cfg.paths + cfg.chunk_size - 1) / cfg.chunk_size;

    auto fill_chunk = [&](std::uint64_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                          static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 engine(seq);
        std::normal_distribution<double> normal;
        const std::uint64_t begin = c * cfg.chunk_size;
        const std::uint64_t end = std::min(begin + cfg.chunk_size, cfg.paths);
        for (std::uint64_t i = begin; i < end; ++i) {
            out[i] = s0 * std::exp(drift_term + vst * normal(engine));
        }
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, chunks));
    if (workers == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) fill_chunk(c);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t c = next++; c < chunks; c = next++) fill_chunk(c);
            });
        }
    }
    return out;
}

McEstimate mc_mean(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample");
    return estimate(values, false);
}

McEstimate mc_conditional_loss(std::span<const double> losses) {
    if (losses.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample");
    auto est = estimate(losses, true);
    if (est.n_effective == 0) {
        throw Error(ErrorCode::NoLossEvents, "no strictly positive loss in the sample");
    }
    return est;
}

double quad_expectation(const std::function<double(double)>& integrand, const QuadConfig& cfg,
                        std::span<const double> breakpoints) {
    cfg.validate();
    const double width = (cfg.z_upper - cfg.z_lower) / static_cast<double>(cfg.panels);
    double lo = cfg.z_lower;
    double hi = cfg.z_upper;
    std::vector<double> cuts;
    for (double b : breakpoints) {
        if (!std::isfinite(b) || std::abs(b) > kBreakpointReach) continue;
        lo = std::min(lo, b - (cfg.z_upper - cfg.z_lower) / 2.0);
        hi = std::max(hi, b + (cfg.z_upper - cfg.z_lower) / 2.0);
        cuts.push_back(b);
    }
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    std::vector<double> edges;
    edges.reserve(panels + cuts.size() + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        edges.push_back(i == panels ? hi : lo + static_cast<double>(i) * width);
    }
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        total += integrate_panel(integrand, edges[i], edges[i + 1]);
    }
    return total;
}

std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t cells, std::span<const double> extra_nodes) {
    std::vector<double> nodes;
    nodes.reserve(cells + 1 + extra_nodes.size());
    for (std::size_t i = 0; i <= cells; ++i) {
        nodes.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells));
    }
    for (double e : extra_nodes) {
        if (e > lo && e < hi) nodes.push_back(e);
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i];
        double b = nodes[i + 1];
        const double fa = f(a);
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
        const bool rising = fa < 0.0;
        for (int iter = 0; iter < 200 && b - a > 0.0; ++iter) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            ((f(m) < 0.0) == rising ? a : b) = m;
        }
        roots.push_back(0.5 * (a + b));
    }
    if (!nodes.empty() && f(nodes.back()) == 0.0) roots.push_back(nodes.back());
    return roots;
}

double terminal_price(const MarketParams& params, double expiry, double growth, double z) {
    const double sigma = params.volatility();
    return params.spot() *
           std::exp((growth - 0.5 * sigma * sigma) * expiry + sigma * std::sqrt(expiry) * z);
}

double quad_call_payoff(const MarketParams& params, const OptionContract& contract,
                        double growth, const QuadConfig& cfg) {
    const double t = contract.expiry();
    const double k = contract.strike();
    const double kink = crossing(params, t, growth, k);
    const std::array<double, 1> bp{kink};
    return quad_expectation(
        [&](double z) { return call_payoff(terminal_price(params, t, growth, z), k); }, cfg,
        bp);
}

double quad_put_payoff(const MarketParams& params, const OptionContract& contract,
                       double growth, const QuadConfig& cfg) {
    const double t = contract.expiry();
    const double k = contract.strike();
    const double kink = crossing(params, t, growth, k);
    const std::array<double, 1> bp{kink};
    return quad_expectation(
        [&](double z) { return std::max(k - terminal_price(params, t, growth, z), 0.0); }, cfg,
        bp);
}

double writer_loss(const MarketParams& params, const OptionContract& contract, double x,
                   double price, double terminal) {
    const double growth_rf = std::exp(params.risk_free() * contract.expiry());
    return call_payoff(terminal, contract.strike()) -
           x * (terminal - params.spot() * growth_rf) - price * growth_rf;
}

double holder_loss(const MarketParams& params, const OptionContract& contract, double price,
                   double terminal) {
    const double growth_rf = std::exp(params.risk_free() * contract.expiry());
    return price * growth_rf - call_payoff(terminal, contract.strike());
}

namespace {

template <class Loss>
LossMoments quad_loss_moments(const MarketParams& params, const OptionContract& contract,
                              Loss&& loss, const QuadConfig& cfg) {
    const double t = contract.expiry();
    const double mu = params.drift();
    const double k = contract.strike();
    auto loss_at = [&](double z) { return loss(terminal_price(params, t, mu, z)); };

    const double kink = crossing(params, t, mu, k);
    const std::array<double, 1> kinks{kink};
    std::vector<double> bp =
        sign_changes(loss_at, -kBreakpointReach, kBreakpointReach, 16000, kinks);
    bp.push_back(kink);

    auto on_loss = [&](double z, double value) { return loss_at(z) > 0.0 ? value : 0.0; };
    const double prob = quad_expectation([&](double z) { return on_loss(z, 1.0); }, cfg, bp);
    const double loss_mass =
        quad_expectation([&](double z) { return on_loss(z, loss_at(z)); }, cfg, bp);
    const double call_mass = quad_expectation(
        [&](double z) { return on_loss(z, call_payoff(terminal_price(params, t, mu, z), k)); },
        cfg, bp);
    const double stock_mass = quad_expectation(
        [&](double z) { return on_loss(z, terminal_price(params, t, mu, z)); }, cfg, bp);
    return {prob, loss_mass / prob, call_mass, stock_mass};
}

McLossEstimates mc_loss(std::vector<double> losses) {
    std::vector<double> indicator(losses.size());
    std::transform(losses.begin(), losses.end(), indicator.begin(),
                   [](double l) { return l > 0.0 ? 1.0 : 0.0; });
    return {mc_mean(indicator), mc_conditional_loss(losses)};
}

}  // namespace

LossMoments quad_writer_loss(const MarketParams& params, const OptionContract& contract,
                             double x, double price, const QuadConfig& cfg) {
    return quad_loss_moments(
        params, contract,
        [&](double s) { return writer_loss(params, contract, x, price, s); }, cfg);
}

LossMoments quad_holder_loss(const MarketParams& params, const OptionContract& contract,
                             double price, const QuadConfig& cfg) {
    return quad_loss_moments(
        params, contract, [&](double s) { return holder_loss(params, contract, price, s); },
        cfg);
}

McLossEstimates mc_writer_loss(const MarketParams& params, const OptionContract& contract,
                               double x, double price, std::span<const double> terminal) {
    std::vector<double> losses(terminal.size());
    std::transform(terminal.begin(), terminal.end(), losses.begin(),
                   [&](double s) { return writer_loss(params, contract, x, price, s); });
    return mc_loss(std::move(losses));
}

McLossEstimates mc_holder_loss(const MarketParams& params, const OptionContract& contract,
                               double price, std::span<const double> terminal) {
    std::vector<double> losses(terminal.size());
    std::transform(terminal.begin(), terminal.end(), losses.begin(),
                   [&](double s) { return holder_loss(params, contract, price, s); });
    return mc_loss(std::move(losses));
}

}  // namespace fairplay::oracle
