#include "longbond/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <variant>
#include <vector>

#include <json.hpp>

#include "longbond/montecarlo.hpp"

namespace longbond::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Report table: fixed column order, csv at 12 significant digits, json with
// round-tripping doubles. Emitting a non-finite number is a defect.

struct Cell {
    std::variant<std::monostate, double, std::string, bool> value;

    Cell() = default;
    Cell(double v) : value(v) {}
    Cell(const char* v) : value(std::string(v)) {}
    Cell(std::string v) : value(std::move(v)) {}
    Cell(bool v) : value(v) {}
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells) {
        if (cells.size() != columns.size())
            throw Error("internal: row width mismatch");
        rows.push_back(std::move(cells));
    }
};

std::string format_csv_number(double v) {
    if (!std::isfinite(v)) throw Error("non-finite value in report");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            const Cell& cell = row[c];
            if (std::holds_alternative<double>(cell.value))
                out << format_csv_number(std::get<double>(cell.value));
            else if (std::holds_alternative<std::string>(cell.value))
                out << std::get<std::string>(cell.value);
            else if (std::holds_alternative<bool>(cell.value))
                out << (std::get<bool>(cell.value) ? "true" : "false");
        }
        out << "\n";
    }
}

void write_json(const Table& table, const RunConfig& config, const std::string& command,
                std::uint64_t seed, std::ostream& out) {
    json doc;
    doc["meta"]["command"] = command;
    doc["meta"]["config"] = json::parse(config.describe_json());
    doc["meta"]["seed"] = seed;
    doc["meta"]["version"] = kVersion;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Cell& cell = row[c];
            if (std::holds_alternative<double>(cell.value)) {
                const double v = std::get<double>(cell.value);
                if (!std::isfinite(v)) throw Error("non-finite value in report");
                obj[table.columns[c]] = v;
            } else if (std::holds_alternative<std::string>(cell.value)) {
                obj[table.columns[c]] = std::get<std::string>(cell.value);
            } else if (std::holds_alternative<bool>(cell.value)) {
                obj[table.columns[c]] = std::get<bool>(cell.value);
            }
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << "\n";
}

void emit(const Table& table, const RunConfig& config, const std::string& command,
          std::uint64_t seed, std::ostream& out) {
    if (config.format == OutputFormat::Csv)
        write_csv(table, out);
    else
        write_json(table, config, command, seed, out);
}

std::string regime_name(UiRegime regime) {
    switch (regime) {
        case UiRegime::UniformlyIntegrable: return "uniformly_integrable";
        case UiRegime::NotUiBoundary: return "not_ui_boundary";
        case UiRegime::NotUiUnbounded: return "not_ui_unbounded";
    }
    return "?";
}

Cell witness_cell(const UiVerdict& verdict) {
    if (!verdict.witness_p) return Cell();
    if (std::isinf(*verdict.witness_p)) return Cell("inf");
    return Cell(*verdict.witness_p);
}

// ---------------------------------------------------------------------------
// Scenario file: header "t,r", numeric rows.

std::vector<std::pair<double, double>> load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("longbond.scenario", "cannot open '" + path + "'");

    const auto trim = [](std::string s) {
        const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!s.empty() && is_space(s.back())) s.pop_back();
        std::size_t i = 0;
        while (i < s.size() && is_space(s[i])) ++i;
        return s.substr(i);
    };
    const auto parse_field = [&](const std::string& text, int line, const char* name) {
        double v = 0.0;
        const char* begin = text.data();
        const char* end = begin + text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            throw ConfigError("scenario line " + std::to_string(line),
                              std::string("non-numeric ") + name + " field '" + text + "'");
        return v;
    };

    std::string line;
    int line_no = 0;
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (line_no == 1) {
            if (text != "t,r")
                throw ConfigError("scenario line 1", "expected header 't,r', got '" + text + "'");
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
            throw ConfigError("scenario line " + std::to_string(line_no),
                              "expected exactly two comma-separated fields");
        const double t = parse_field(trim(text.substr(0, comma)), line_no, "t");
        const double r = parse_field(trim(text.substr(comma + 1)), line_no, "r");
        if (t < 0.0)
            throw ConfigError("scenario line " + std::to_string(line_no),
                              "time must be nonnegative");
        rows.emplace_back(t, r);
    }
    if (rows.empty()) throw ConfigError("longbond.scenario", "no data rows");
    return rows;
}

// ---------------------------------------------------------------------------
// Validate workflow: oracle pairings emitted as one row per check.

struct CheckRecorder {
    Table& table;
    double tolerance_scale;
    bool all_passed = true;

    // Monte Carlo estimate against a target within se_multiple standard errors.
    void mc(const std::string& name, const McEstimate& estimate, double target,
            double se_multiple) {
        const double tol = se_multiple * estimate.std_error * tolerance_scale;
        const bool ok = std::fabs(estimate.mean - target) <= tol;
        all_passed &= ok;
        table.add_row({name, estimate.mean, target, estimate.std_error, tol, ok});
    }

    // Deterministic measurement that must stay at or below a threshold.
    void bound(const std::string& name, double measured, double threshold) {
        const bool ok = measured <= threshold;
        all_passed &= ok;
        table.add_row({name, measured, threshold, Cell(), threshold, ok});
    }

    // Deterministic measurement that must exceed a threshold.
    void above(const std::string& name, double measured, double threshold) {
        const bool ok = measured > threshold;
        all_passed &= ok;
        table.add_row({name, measured, threshold, Cell(), threshold, ok});
    }
};

SimulationConfig make_sim_config(const ValidateBlock& v, double horizon, Scheme scheme,
                                 std::uint64_t seed_offset) {
    SimulationConfig cfg;
    cfg.n_paths = v.n_paths;
    cfg.n_steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                                std::llround(v.n_steps * std::max(1.0, horizon) / 5.0)));
    cfg.horizon = horizon;
    cfg.seed = v.seed + seed_offset;
    cfg.scheme = scheme;
    return cfg;
}

void run_validation_checks(const RunConfig& config, CheckRecorder& rec) {
    const ModelParams& params = config.params;
    const LevyVasicekModel model = config.build_model();
    const LevyExponentModel& driver = model.driver();
    const bool classical = config.family == ModelFamily::Classical;
    const Scheme scheme =
        driver.kind() == DriverKind::Brownian ? Scheme::ExactGaussian : Scheme::ExactJumpTimes;
    const QuadratureConfig& quad = config.quadrature;
    const ValidateBlock& v = config.validate;

    const auto closed_log_price = [&](double T) {
        return classical ? vasicek::log_bond_price(params, 0.0, params.r0, T)
                         : model.log_bond_price(0.0, params.r0, T, quad);
    };

    // Bond prices: simulated E[pi_T] against the analytic/quadrature price.
    for (double T : {1.0, 5.0}) {
        const auto estimate =
            estimate_bond_price(model, T, make_sim_config(v, T, scheme, 1));
        rec.mc("bond_price_mc_vs_analytic_T=" + format_csv_number(T), estimate,
               std::exp(closed_log_price(T)), 3.0);
    }

    // Short-rate law at t = 5: mean for any driver, variance through psi''(0).
    {
        const SimulationConfig sim = make_sim_config(v, 5.0, scheme, 2);
        PathSimulator simulator(model, sim);
        const std::int64_t j = simulator.grid_index(5.0);
        double sum = 0.0, sum_sq = 0.0;
        simulator.for_each_path([&](const SamplePath& path) {
            sum += path.r[j];
            sum_sq += path.r[j] * path.r[j];
        });
        const double n = static_cast<double>(sim.n_paths);
        const double mean = sum / n;
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        const ShortRateMoments closed = vasicek::short_rate_moments(params, 5.0);
        const double var_scale = driver.psi_double_prime(0.0);
        McEstimate mean_est{mean, std::sqrt(var / n), sim.n_paths};
        rec.mc("short_rate_mean_t=5", mean_est, closed.mean, 4.0);
        // SE of the sample variance ~ var * sqrt(2/n) under near-Gaussian laws.
        McEstimate var_est{var, var * std::sqrt(2.0 / n), sim.n_paths};
        rec.mc("short_rate_variance_t=5", var_est, var_scale * closed.variance, 4.0);
    }

    // Martingale normalization of pi_t L_t.
    for (double t : {1.0, 5.0}) {
        const auto estimate =
            estimate_martingale_deviation(model, t, make_sim_config(v, t, scheme, 3));
        rec.mc("martingale_mean_minus_one_t=" + format_csv_number(t), estimate, 0.0, 4.0);
    }

    if (classical) {
        const auto estimate =
            estimate_tail(model, 5.0, 1.0, make_sim_config(v, 5.0, scheme, 4));
        rec.mc("tail_expectation_mc_vs_closed_t=5_delta=1", estimate,
               vasicek::tail_expectation(params, 5.0, 1.0), 3.0);

        SimulationConfig put_cfg;
        put_cfg.n_paths = v.n_paths;
        put_cfg.seed = v.seed + 5;
        const auto estimate_put = estimate_digital_put(0.0, 1.0, 1.0, 1.0, put_cfg);
        rec.mc("digital_put_mc_vs_closed", estimate_put,
               vasicek::digital_put_gbm(0.0, 1.0, 1.0, 1.0), 3.0);
    }

    // Driver law: (1/t) log E[e^{alpha xi_t}] against psi(alpha) at t = 1.
    for (double alpha : {-1.0, -0.25, 0.25, 1.0}) {
        if (!driver.domain().contains_interior(alpha)) continue;
        const SimulationConfig sim = make_sim_config(v, 1.0, scheme, 6);
        PathSimulator simulator(model, sim);
        const std::int64_t j = simulator.grid_index(1.0);
        double sum = 0.0, sum_sq = 0.0;
        simulator.for_each_path([&](const SamplePath& path) {
            const double x = std::exp(alpha * path.xi[j]);
            sum += x;
            sum_sq += x * x;
        });
        const double n = static_cast<double>(sim.n_paths);
        const double mean = sum / n;
        const double se = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
        // Delta method: se(log mean) = se(mean)/mean.
        McEstimate log_est{std::log(mean), se / mean, sim.n_paths};
        rec.mc("exponent_law_alpha=" + format_csv_number(alpha), log_est, driver.psi(alpha), 4.0);
    }

    // Exponent shape on the validation grid.
    {
        const auto grid = validation_grid(driver.domain());
        double min_psi = std::numeric_limits<double>::infinity();
        double min_gap = std::numeric_limits<double>::infinity();
        double max_fd1 = 0.0, max_fd2 = 0.0;
        const double h = 1e-6;
        for (double a : grid) {
            min_psi = std::min(min_psi, driver.psi(a));
            min_gap = std::min(min_gap, superlinearity_gap(driver, a));
            const double fd1 = (driver.psi(a + h) - driver.psi(a - h)) / (2.0 * h);
            const double fd2 = (driver.psi_prime(a + h) - driver.psi_prime(a - h)) / (2.0 * h);
            max_fd1 = std::max(max_fd1, std::fabs(fd1 - driver.psi_prime(a)) /
                                            std::max(1e-12, std::fabs(driver.psi_prime(a))));
            max_fd2 = std::max(max_fd2, std::fabs(fd2 - driver.psi_double_prime(a)) /
                                            std::max(1e-12, std::fabs(driver.psi_double_prime(a))));
        }
        rec.above("exponent_positive_on_grid", min_psi, 0.0);
        rec.above("superlinearity_gap_positive_on_grid", min_gap, 0.0);
        rec.bound("psi_prime_vs_finite_difference_rel", max_fd1, 1e-5);
        rec.bound("psi_double_prime_vs_finite_difference_rel", max_fd2, 1e-5);
    }

    // Discount consistency: log E[pi_t] equals the log bond price.
    {
        double worst = 0.0;
        for (double t : {1.0, 2.0, 5.0, 10.0}) {
            const double lp = classical ? vasicek::lp_log_moment(params, 1.0, t)
                                        : model.lp_log_moment(1.0, t, quad);
            worst = std::max(worst, std::fabs(lp - closed_log_price(t)));
        }
        rec.bound("lp_discount_consistency_max_abs", worst, classical ? 1e-12 : 1e-9);
    }

    // Yield convergence toward the long rate.
    {
        const double r_inf = classical ? vasicek::long_rate(params) : model.long_rate();
        double previous = std::numeric_limits<double>::infinity();
        bool decreasing = true;
        double final_gap = 0.0;
        for (double T : {1e2, 1e3, 1e4}) {
            const double gap = std::fabs(-closed_log_price(T) / T - r_inf);
            decreasing &= gap < previous;
            previous = gap;
            final_gap = gap;
        }
        rec.bound("long_rate_gap_at_T=1e4", final_gap, 1e-4);
        rec.above("long_rate_gap_decreasing", decreasing ? 1.0 : 0.0, 0.5);
    }

    // Brownian-driver levy models must reduce to the classical closed forms.
    if (!classical && driver.kind() == DriverKind::Brownian &&
        driver.brownian_scale() == 1.0) {
        double worst = 0.0;
        for (double T : {1.0, 5.0, 10.0}) {
            const double levy = model.log_bond_price(0.0, params.r0, T, quad);
            const double cls = vasicek::log_bond_price(params, 0.0, params.r0, T);
            worst = std::max(worst, std::fabs(levy - cls) / std::max(1e-12, std::fabs(cls)));
        }
        rec.bound("brownian_reduction_log_price_rel", worst, 1e-8);
    }
}

} // namespace

// ---------------------------------------------------------------------------

int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (config.curve_maturities.empty())
        throw ConfigError("curve.maturities", "curve command requires a maturity grid");
    const bool classical = config.family == ModelFamily::Classical;
    const LevyVasicekModel model = config.build_model();

    Table table;
    table.columns = {"kind", "T", "price", "yield"};
    for (double T : config.curve_maturities) {
        const BondQuote quote =
            classical ? vasicek::bond_price(config.params, 0.0, config.params.r0, T)
                      : model.bond_price(0.0, config.params.r0, T, config.quadrature);
        table.add_row({"bond", T, quote.price, quote.yield});
    }
    const double r_inf = classical ? vasicek::long_rate(config.params) : model.long_rate();
    table.add_row({"long_rate", Cell(), Cell(), r_inf});
    emit(table, config, "curve", config.simulate.seed, out);
    return kExitOk;
}

int cmd_regime(const RunConfig& config, std::ostream& out, std::ostream&) {
    const bool classical = config.family == ModelFamily::Classical;
    const LevyVasicekModel model = config.build_model();
    const UiVerdict verdict = classical
                                  ? vasicek::ui_classify(config.params, config.zero_tolerance)
                                  : model.ui_classify(config.zero_tolerance);
    const double gap = classical ? vasicek::ross_recovery_gap(config.params)
                                 : model.ross_recovery_gap();
    const bool recovery = std::fabs(gap) <= config.zero_tolerance;

    Table table;
    table.columns = {"long_rate",     "regime",
                     "witness_p",     "ross_recovery_gap",
                     "ross_recovery", "long_bond_volatility",
                     "long_bond_excess_return"};
    std::vector<Cell> row{verdict.long_rate,
                          regime_name(verdict.regime),
                          witness_cell(verdict),
                          gap,
                          recovery ? "Ross recovery holds" : "Ross recovery fails",
                          config.params.sigma / config.params.k,
                          Cell()};
    if (!classical) row[6] = Cell(model.long_bond_excess_return());
    table.add_row(std::move(row));
    emit(table, config, "regime", config.simulate.seed, out);
    return kExitOk;
}

int cmd_longbond(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (!config.scenario_path)
        throw ConfigError("longbond.scenario", "longbond command requires a scenario file");
    const bool classical = config.family == ModelFamily::Classical;
    const LevyVasicekModel model = config.build_model();
    const auto scenario = load_scenario(*config.scenario_path);

    Table table;
    table.columns = {"t", "r", "L"};
    for (const auto& [t, r] : scenario) {
        const double value = classical ? vasicek::long_bond_return(config.params, t, r)
                                       : model.long_bond_return(t, r);
        table.add_row({t, r, value});
    }
    emit(table, config, "longbond", config.simulate.seed, out);
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (config.simulate.maturities.empty())
        throw ConfigError("simulate.maturities", "simulate command requires a maturity grid");
    const bool classical = config.family == ModelFamily::Classical;
    const LevyVasicekModel model = config.build_model();

    Table table;
    table.columns = {"kind", "t", "estimate", "std_error", "analytic", "abs_error"};
    for (double T : config.simulate.maturities) {
        SimulationConfig sim;
        sim.n_paths = config.simulate.n_paths;
        sim.n_steps = config.simulate.n_steps;
        sim.horizon = T > 0.0 ? T : 1.0;
        sim.seed = config.simulate.seed;
        sim.scheme = config.simulate.scheme;
        const McEstimate estimate = estimate_bond_price(model, T, sim);
        const double analytic =
            classical ? vasicek::bond_price(config.params, 0.0, config.params.r0, T).price
                      : model.bond_price(0.0, config.params.r0, T, config.quadrature).price;
        table.add_row({"bond_price", T, estimate.mean, estimate.std_error, analytic,
                       std::fabs(estimate.mean - analytic)});
    }
    for (double t : config.simulate.martingale_times) {
        SimulationConfig sim;
        sim.n_paths = config.simulate.n_paths;
        sim.n_steps = config.simulate.n_steps;
        sim.horizon = t > 0.0 ? t : 1.0;
        sim.seed = config.simulate.seed;
        sim.scheme = config.simulate.scheme;
        const McEstimate estimate = estimate_martingale_deviation(model, t, sim);
        table.add_row({"martingale_deviation", t, estimate.mean, estimate.std_error, 0.0,
                       std::fabs(estimate.mean)});
    }
    emit(table, config, "simulate", config.simulate.seed, out);
    return kExitOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream&) {
    Table table;
    table.columns = {"check", "estimate", "target", "std_error", "tolerance", "pass"};
    CheckRecorder recorder{table, config.validate.tolerance_scale};
    run_validation_checks(config, recorder);
    emit(table, config, "validate", config.validate.seed, out);
    return recorder.all_passed ? kExitOk : kExitValidationFailed;
}

int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides, std::ostream& out, std::ostream& err) {
    try {
        RunConfig config = load_config(config_path);
        if (overrides.format) config.format = *overrides.format;
        if (overrides.output_path) config.output_path = *overrides.output_path;
        if (overrides.seed) {
            config.simulate.seed = *overrides.seed;
            config.validate.seed = *overrides.seed;
        }

        std::ostringstream buffer;
        int code;
        if (command == "curve")
            code = cmd_curve(config, buffer, err);
        else if (command == "regime")
            code = cmd_regime(config, buffer, err);
        else if (command == "longbond")
            code = cmd_longbond(config, buffer, err);
        else if (command == "simulate")
            code = cmd_simulate(config, buffer, err);
        else if (command == "validate")
            code = cmd_validate(config, buffer, err);
        else {
            err << "unknown command '" << command << "'\n";
            return kExitConfigError;
        }

        if (config.output_path) {
            std::ofstream file(*config.output_path, std::ios::binary);
            if (!file) {
                err << "cannot open output file '" << *config.output_path << "'\n";
                return kExitConfigError;
            }
            file << buffer.str();
        } else {
            out << buffer.str();
        }
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        err << "numeric error in '" << command << "': " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        err << "error in '" << command << "': " << e.what() << "\n";
        return kExitNumericError;
    }
}

} // namespace longbond::cli
