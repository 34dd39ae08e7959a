#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

using fairplay::cli::ConfigError;

nlohmann::json read_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair-play equilibrium pricing of non-traded European calls"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::optional<double> s0, mu, sigma, r, t, x, grid_step, rebalance_time, spot_at;
    std::optional<std::uint64_t> paths, seed, draws;
    std::vector<double> strike_list, strikes, x_grid;
    std::optional<std::string> format, out;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--s0", s0, "Spot price");
    app.add_option("--mu", mu, "Stock drift (annual, continuous)");
    app.add_option("--sigma", sigma, "Volatility (annual)");
    app.add_option("--r", r, "Risk-free rate (annual, continuous)");
    app.add_option("--t", t, "Expiry in years");
    app.add_option("--strike", strike_list, "Strike (repeatable)");
    app.add_option("--strikes", strikes, "Comma-separated strikes")->delimiter(',');
    app.add_option("--x", x, "Hedge fraction for price (default: Black-Scholes delta)");
    app.add_option("--x-grid", x_grid, "Comma-separated hedge fractions for risk-curve")
        ->delimiter(',');
    app.add_option("--grid-step", grid_step, "Hedge-fraction step for risk-curve");
    app.add_option("--rebalance-time", rebalance_time,
                   "Re-value the quote at this time (quote only)");
    app.add_option("--spot-at", spot_at, "Spot at the rebalancing time (quote only)");
    app.add_option("--paths", paths, "Monte Carlo paths (validate)");
    app.add_option("--seed", seed, "Monte Carlo seed (validate)");
    app.add_option("--draws", draws, "Random parameter draws (validate)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out, "Write the report to this path");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"price", "Black-Scholes price and expected profits at a hedge fraction"},
        {"quote", "Risk-minimizing hedge fraction and fair-play price"},
        {"risk-curve", "Writer/holder risk over a grid of hedge fractions"},
        {"smile", "Equilibrium prices and implied volatilities across strikes"},
        {"validate", "Closed forms against Monte Carlo and quadrature oracles"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fairplay::cli::kExitConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    fairplay::cli::RunConfig cfg;
    try {
        nlohmann::json doc =
            config_path ? read_config_json(*config_path) : nlohmann::json::object();
        if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
        auto set = [&doc](const char* key, const auto& value) {
            if (value) doc[key] = *value;
        };
        set("s0", s0);
        set("mu", mu);
        set("sigma", sigma);
        set("r", r);
        set("t", t);
        set("x", x);
        set("grid_step", grid_step);
        set("rebalance_time", rebalance_time);
        set("spot_at", spot_at);
        set("paths", paths);
        set("seed", seed);
        set("draws", draws);
        set("format", format);
        set("out", out);
        strike_list.insert(strike_list.end(), strikes.begin(), strikes.end());
        if (!strike_list.empty()) doc["strikes"] = strike_list;
        if (!x_grid.empty()) doc["x_grid"] = x_grid;
        cfg = fairplay::cli::parse_config(doc);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fairplay::cli::kExitConfigError;
    }
    return fairplay::cli::run_command(command, cfg, std::cout, std::cerr);
}
