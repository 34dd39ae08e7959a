#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>
#include <vector>

#include "fairplay/fairplay.h"

namespace fairplay::cli {

namespace {

// Raised when a C API call fails outside of per-row handling.
struct ApiFailure {
    fp_status status;
    std::string message;
};

void check(fp_status status) {
    if (status != FP_OK) throw ApiFailure{status, fp_last_error()};
}

struct MarketDeleter {
    void operator()(fp_market* m) const { fp_market_destroy(m); }
};
struct ContractDeleter {
    void operator()(fp_contract* c) const { fp_contract_destroy(c); }
};
struct SmileDeleter {
    void operator()(fp_smile* s) const { fp_smile_destroy(s); }
};
struct ValidationDeleter {
    void operator()(fp_validation* v) const { fp_validation_destroy(v); }
};
using Market = std::unique_ptr<fp_market, MarketDeleter>;
using Contract = std::unique_ptr<fp_contract, ContractDeleter>;
using Smile = std::unique_ptr<fp_smile, SmileDeleter>;
using Validation = std::unique_ptr<fp_validation, ValidationDeleter>;

Market make_market(const RunConfig& cfg, double spot) {
    fp_market* m = nullptr;
    check(fp_market_create(spot, cfg.mu, cfg.sigma, cfg.r, &m));
    return Market(m);
}

Contract make_contract(double strike, double expiry) {
    fp_contract* c = nullptr;
    check(fp_contract_create(strike, expiry, &c));
    return Contract(c);
}

using Cell = std::variant<std::monostate, double, std::string>;

struct RowError {
    std::string code;
    std::string message;
};

struct Row {
    std::vector<Cell> cells;
    std::optional<RowError> error;
};

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<Row> rows;
    // CSV: true writes the error code into a trailing "error" column; false
    // puts "ERROR:<code>" in the second column of the failed row.
    bool error_column = false;
};

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return csv_number(*d);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return "";
}

nlohmann::json json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return json_number(*d);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

void render_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    if (t.error_column) os << ",error";
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) os << ',';
            if (row.error && !t.error_column && i == 1) {
                os << "ERROR:" << row.error->code;
            } else {
                os << csv_cell(row.cells[i]);
            }
        }
        if (t.error_column) os << ',' << (row.error ? row.error->code : "");
        os << '\n';
    }
}

void render_json(const Table& t, std::ostream& os) {
    nlohmann::json doc;
    doc["command"] = t.command;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (!std::holds_alternative<std::monostate>(row.cells[i])) {
                obj[t.columns[i]] = json_cell(row.cells[i]);
            }
        }
        if (row.error) obj["error"] = {{"code", row.error->code}, {"message", row.error->message}};
        doc["rows"].push_back(std::move(obj));
    }
    os << doc.dump(2) << '\n';
}

void render(const Table& t, OutputFormat format, std::ostream& os) {
    if (format == OutputFormat::Csv) {
        render_csv(t, os);
    } else {
        render_json(t, os);
    }
}

std::vector<Cell> threshold_cells(const fp_thresholds& th) {
    return {th.at_strike, th.lower, th.upper, th.holder};
}

Table cmd_price(const RunConfig& cfg) {
    Table t{"price",
            {"strike", "x", "hedge", "bs_price", "expected_call_payoff",
             "holder_expected_profit", "writer_expected_profit"},
            {},
            false};
    const auto market = make_market(cfg, cfg.s0);
    for (double strike : cfg.strikes) {
        const auto contract = make_contract(strike, cfg.t);
        double x = 0.0;
        std::string hedge = "user";
        if (cfg.x) {
            x = *cfg.x;
        } else {
            double d_plus = 0.0, d_minus = 0.0;
            check(fp_d_plus_minus(market.get(), contract.get(), cfg.r, &d_plus, &d_minus));
            x = fp_std_normal_cdf(d_plus);
            hedge = "delta";
        }
        double bs = 0.0, expected = 0.0, holder = 0.0, writer = 0.0;
        check(fp_bs_call_price(market.get(), contract.get(), &bs));
        check(fp_expected_call_payoff_physical(market.get(), contract.get(), &expected));
        check(fp_expected_profits(market.get(), contract.get(), x, bs, &holder, &writer));
        t.rows.push_back({{strike, x, hedge, bs, expected, holder, writer}, std::nullopt});
    }
    return t;
}

Table cmd_quote(const RunConfig& cfg) {
    if (cfg.strikes.size() != 1) {
        throw ConfigError("strikes", "quote takes exactly one strike");
    }
    const double spot = cfg.spot_at.value_or(cfg.s0);
    const double t_rebal = cfg.rebalance_time.value_or(0.0);
    const auto market = make_market(cfg, cfg.s0);
    const auto contract = make_contract(cfg.strikes.front(), cfg.t);
    fp_quote q{};
    if (cfg.rebalance_time || cfg.spot_at) {
        check(fp_revalue_at_time(market.get(), contract.get(), t_rebal, spot, nullptr, &q));
    } else {
        check(fp_minimize_writer_risk(market.get(), contract.get(), nullptr, &q));
    }
    Table t{"quote",
            {"strike", "expiry", "spot", "x_star", "price", "writer_risk", "holder_risk",
             "loss_prob", "d", "d1", "d2", "d_prime"},
            {},
            false};
    std::vector<Cell> cells{cfg.strikes.front(), cfg.t - t_rebal, spot, q.x_star,
                            q.price, q.report.writer_risk, q.report.holder_risk,
                            q.report.loss_prob};
    for (auto& c : threshold_cells(q.report.thresholds)) cells.push_back(std::move(c));
    t.rows.push_back({std::move(cells), std::nullopt});
    return t;
}

Table cmd_risk_curve(const RunConfig& cfg) {
    if (cfg.strikes.size() != 1) {
        throw ConfigError("strikes", "risk-curve takes exactly one strike");
    }
    const auto market = make_market(cfg, cfg.s0);
    const auto contract = make_contract(cfg.strikes.front(), cfg.t);
    Table t{"risk-curve",
            {"x", "price", "writer_risk", "holder_risk", "loss_prob", "d", "d1", "d2",
             "d_prime"},
            {},
            true};
    for (double x : cfg.risk_curve_grid()) {
        fp_risk_report rep{};
        const fp_status st = fp_writer_risk(market.get(), contract.get(), x, &rep);
        Row row;
        if (st == FP_OK) {
            row.cells = {x, rep.fair_price, rep.writer_risk, rep.holder_risk, rep.loss_prob};
            for (auto& c : threshold_cells(rep.thresholds)) row.cells.push_back(std::move(c));
        } else {
            row.cells.assign(t.columns.size(), std::monostate{});
            row.cells[0] = x;
            row.error = RowError{fp_status_name(st), fp_last_error()};
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_smile(const RunConfig& cfg) {
    const auto market = make_market(cfg, cfg.s0);
    fp_smile* raw = nullptr;
    check(fp_volatility_smile(market.get(), cfg.strikes.data(), cfg.strikes.size(), cfg.t,
                              nullptr, &raw));
    const Smile smile(raw);
    Table t{"smile",
            {"strike", "price", "x_star", "writer_risk", "holder_risk", "loss_prob",
             "implied_vol"},
            {},
            false};
    for (std::size_t i = 0; i < fp_smile_size(smile.get()); ++i) {
        fp_smile_point p{};
        check(fp_smile_point_at(smile.get(), i, &p));
        Row row;
        if (p.status == FP_OK) {
            row.cells = {p.strike,      p.price,     p.x_star,     p.writer_risk,
                         p.holder_risk, p.loss_prob, p.implied_vol};
        } else {
            row.cells.assign(t.columns.size(), std::monostate{});
            row.cells[0] = p.strike;
            row.error = RowError{fp_status_name(p.status), fp_smile_error(smile.get(), i)};
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_validate(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const auto market = make_market(cfg, cfg.s0);
    fp_mc_config mc = fp_mc_config_default();
    mc.paths = cfg.paths;
    mc.seed = cfg.seed;
    fp_validation* raw = nullptr;
    check(fp_validate(market.get(), cfg.strikes.data(), cfg.strikes.size(), cfg.t, &mc,
                      cfg.draws, &raw));
    const Validation v(raw);

    const std::size_t n = fp_validation_size(v.get());
    std::size_t passed = 0;
    Table table{"validate", {"check", "passed", "value", "reference", "tolerance", "detail"},
                {}, false};
    nlohmann::json checks = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        fp_check c{};
        check(fp_validation_check(v.get(), i, &c));
        passed += c.passed ? 1 : 0;
        err << (c.passed ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
        checks.push_back({{"name", c.name},
                          {"passed", c.passed != 0},
                          {"value", json_number(c.value)},
                          {"reference", json_number(c.reference)},
                          {"tolerance", json_number(c.tolerance)},
                          {"detail", c.detail}});
        std::string detail = c.detail;
        for (auto& ch : detail) {
            if (ch == ',') ch = ';';
        }
        table.rows.push_back({{std::string(c.name), std::string(c.passed ? "true" : "false"),
                               c.value, c.reference, c.tolerance, detail},
                              std::nullopt});
    }
    const bool ok = fp_validation_passed(v.get()) != 0;
    err << passed << "/" << n << " checks passed with " << cfg.paths << " Monte Carlo paths\n";

    if (cfg.format == OutputFormat::Csv) {
        render_csv(table, os);
    } else {
        nlohmann::json doc;
        doc["command"] = "validate";
        doc["passed"] = ok;
        doc["paths"] = cfg.paths;
        doc["seed"] = cfg.seed;
        doc["draws"] = cfg.draws;
        doc["checks"] = std::move(checks);
        os << doc.dump(2) << '\n';
    }
    return ok ? kExitOk : kExitValidationFailed;
}

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& os,
             std::ostream& err) {
    if (command == "validate") return cmd_validate(cfg, os, err);
    Table table;
    if (command == "price") {
        table = cmd_price(cfg);
    } else if (command == "quote") {
        table = cmd_quote(cfg);
    } else if (command == "risk-curve") {
        table = cmd_risk_curve(cfg);
    } else if (command == "smile") {
        table = cmd_smile(cfg);
    } else {
        throw ConfigError("command", "unknown command '" + command + "'");
    }
    render(table, cfg.format, os);
    return kExitOk;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
    try {
        cfg.validate();
        std::ostringstream buffer;
        const int code = dispatch(command, cfg, buffer, err);
        if (cfg.out) {
            std::ofstream file(*cfg.out, std::ios::binary);
            if (!file) throw ConfigError("out", "cannot open '" + *cfg.out + "' for writing");
            file << buffer.str();
        } else {
            out << buffer.str();
        }
        return code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ApiFailure& e) {
        err << "error: " << fp_status_name(e.status) << ": " << e.message << '\n';
        return e.status == FP_ERR_INVALID_ARGUMENT ? kExitConfigError : kExitDomainError;
    }
}

}  // namespace fairplay::cli
