#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fairplay::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "s0",   "mu",   "sigma",     "r",      "t",              "strikes", "x",
    "paths", "seed", "grid_step", "x_grid", "rebalance_time", "spot_at", "draws",
    "format", "out"};

double number_field(const nlohmann::json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

std::uint64_t count_field(const nlohmann::json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(key, "expected a nonnegative integer");
}

std::vector<double> number_list(const nlohmann::json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw ConfigError(key, "expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) throw ConfigError(key, "expected only numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

void require_positive(double v, const std::string& field) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(field, "must be a positive number");
}

nlohmann::json number_json(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError("format", "expected csv or json, got '" + text + "'");
}

void RunConfig::validate() const {
    require_positive(s0, "s0");
    require_positive(sigma, "sigma");
    if (!std::isfinite(mu)) throw ConfigError("mu", "must be finite");
    if (!std::isfinite(r)) throw ConfigError("r", "must be finite");
    if (!(mu > r)) throw ConfigError("mu", "drift mu must exceed the risk-free rate r");
    require_positive(t, "t");
    if (strikes.empty()) throw ConfigError("strikes", "at least one strike is required");
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        require_positive(strikes[i], "strikes[" + std::to_string(i) + "]");
    }
    if (x && !(*x >= 0.0 && *x <= kMaxHedge)) {
        throw ConfigError("x", "hedge fraction must lie in [0, 1 - 1e-6]");
    }
    if (paths < 1) throw ConfigError("paths", "must be at least 1");
    if (draws < 1) throw ConfigError("draws", "must be at least 1");
    if (!(grid_step > 0.0 && grid_step < 1.0)) {
        throw ConfigError("grid_step", "must lie in (0, 1)");
    }
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] >= 0.0 && x_grid[i] <= kMaxHedge)) {
            throw ConfigError("x_grid[" + std::to_string(i) + "]",
                              "hedge fraction must lie in [0, 1 - 1e-6]");
        }
    }
    if (rebalance_time && !(std::isfinite(*rebalance_time) && *rebalance_time >= 0.0)) {
        throw ConfigError("rebalance_time", "must be a finite value >= 0");
    }
    if (spot_at) require_positive(*spot_at, "spot_at");
}

std::vector<double> RunConfig::risk_curve_grid() const {
    if (!x_grid.empty()) return x_grid;
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double x = static_cast<double>(i) * grid_step;
        if (x > kMaxHedge) break;
        grid.push_back(x);
    }
    return grid;
}

RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown configuration key");
    }
    for (const char* key : {"s0", "mu", "sigma", "r", "t", "strikes"}) {
        if (!doc.contains(key)) throw ConfigError(key, "missing required field");
    }

    RunConfig cfg;
    cfg.s0 = number_field(doc, "s0");
    cfg.mu = number_field(doc, "mu");
    cfg.sigma = number_field(doc, "sigma");
    cfg.r = number_field(doc, "r");
    cfg.t = number_field(doc, "t");
    cfg.strikes = number_list(doc, "strikes");
    if (doc.contains("x") && !doc.at("x").is_null()) cfg.x = number_field(doc, "x");
    if (doc.contains("paths")) cfg.paths = count_field(doc, "paths");
    if (doc.contains("seed")) cfg.seed = count_field(doc, "seed");
    if (doc.contains("grid_step")) cfg.grid_step = number_field(doc, "grid_step");
    if (doc.contains("x_grid")) cfg.x_grid = number_list(doc, "x_grid");
    if (doc.contains("rebalance_time") && !doc.at("rebalance_time").is_null()) {
        cfg.rebalance_time = number_field(doc, "rebalance_time");
    }
    if (doc.contains("spot_at") && !doc.at("spot_at").is_null()) {
        cfg.spot_at = number_field(doc, "spot_at");
    }
    if (doc.contains("draws")) cfg.draws = count_field(doc, "draws");
    if (doc.contains("format")) {
        if (!doc.at("format").is_string()) throw ConfigError("format", "expected a string");
        cfg.format = parse_format(doc.at("format").get<std::string>());
    }
    if (doc.contains("out") && !doc.at("out").is_null()) {
        if (!doc.at("out").is_string()) throw ConfigError("out", "expected a string path");
        cfg.out = doc.at("out").get<std::string>();
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json doc;
    doc["s0"] = number_json(cfg.s0);
    doc["mu"] = number_json(cfg.mu);
    doc["sigma"] = number_json(cfg.sigma);
    doc["r"] = number_json(cfg.r);
    doc["t"] = number_json(cfg.t);
    doc["strikes"] = cfg.strikes;
    if (cfg.x) doc["x"] = *cfg.x;
    doc["paths"] = cfg.paths;
    doc["seed"] = cfg.seed;
    doc["grid_step"] = cfg.grid_step;
    if (!cfg.x_grid.empty()) doc["x_grid"] = cfg.x_grid;
    if (cfg.rebalance_time) doc["rebalance_time"] = *cfg.rebalance_time;
    if (cfg.spot_at) doc["spot_at"] = *cfg.spot_at;
    doc["draws"] = cfg.draws;
    doc["format"] = to_string(cfg.format);
    if (cfg.out) doc["out"] = *cfg.out;
    return doc;
}

}  // namespace fairplay::cli
