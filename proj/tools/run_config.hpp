#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace fairplay::cli {

enum class OutputFormat { Csv, Json };

/// Raised for malformed or out-of-range configuration; names the field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    double s0 = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double r = 0.0;
    double t = 0.0;
    std::vector<double> strikes;
    std::optional<double> x;
    std::uint64_t paths = 1'000'000;
    std::uint64_t seed = 20240517;
    double grid_step = 0.01;
    std::vector<double> x_grid;
    std::optional<double> rebalance_time;
    std::optional<double> spot_at;
    std::uint64_t draws = 1000;
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> out;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Hedge fractions for risk-curve: x_grid if given, else 0, step, 2 step, ...
    /// up to the largest admissible fraction.
    std::vector<double> risk_curve_grid() const;

    bool operator==(const RunConfig&) const = default;
};

/// Largest hedge fraction accepted anywhere on the command line.
inline constexpr double kMaxHedge = 1.0 - 1e-6;

/// Flat JSON object with keys s0, mu, sigma, r, t, strikes, x, paths, seed,
/// grid_step, x_grid, rebalance_time, spot_at, draws, format, out. Market and
/// contract keys are required; the rest default. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

std::string to_string(OutputFormat format);
OutputFormat parse_format(const std::string& text);

}  // namespace fairplay::cli
