#include "longbond/cli/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace longbond::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError(field, message);
}

double require_number(const json& node, const std::string& field) {
    if (!node.contains(field) || !node[field].is_number())
        fail(field, "missing or non-numeric");
    return node[field].get<double>();
}

double number_or(const json& node, const std::string& field, double fallback) {
    if (!node.contains(field)) return fallback;
    if (!node[field].is_number()) fail(field, "must be numeric");
    return node[field].get<double>();
}

std::int64_t integer_or(const json& node, const std::string& field, std::int64_t fallback) {
    if (!node.contains(field)) return fallback;
    if (!node[field].is_number_integer()) fail(field, "must be an integer");
    return node[field].get<std::int64_t>();
}

std::vector<double> grid(const json& node, const std::string& field, bool require_positive) {
    if (!node.contains(field) || !node[field].is_array() || node[field].empty())
        fail(field, "must be a non-empty array");
    std::vector<double> values;
    for (const auto& v : node[field]) {
        if (!v.is_number()) fail(field, "entries must be numeric");
        values.push_back(v.get<double>());
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (require_positive && !(values[i] >= 0.0)) fail(field, "entries must be nonnegative");
        if (i > 0 && !(values[i] > values[i - 1])) fail(field, "must be strictly increasing");
    }
    return values;
}

Scheme parse_scheme(const std::string& name) {
    if (name == "exact_gaussian") return Scheme::ExactGaussian;
    if (name == "euler_levy") return Scheme::EulerLevy;
    if (name == "exact_jump_times") return Scheme::ExactJumpTimes;
    fail("simulate.scheme", "unknown scheme '" + name + "'");
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ExactGaussian: return "exact_gaussian";
        case Scheme::EulerLevy: return "euler_levy";
        case Scheme::ExactJumpTimes: return "exact_jump_times";
    }
    return "?";
}

DriverSpec parse_driver(const json& node) {
    DriverSpec spec;
    if (!node.contains("kind") || !node["kind"].is_string())
        fail("model.driver.kind", "missing or non-string");
    const std::string kind = node["kind"].get<std::string>();
    if (kind == "brownian") {
        spec.kind = DriverKind::Brownian;
        spec.scale = number_or(node, "scale", 1.0);
    } else if (kind == "compensated_poisson") {
        spec.kind = DriverKind::CompensatedPoisson;
        spec.mu = require_number(node, "mu");
    } else if (kind == "compound_poisson_normal") {
        spec.kind = DriverKind::CompoundPoissonNormalJumps;
        spec.mu = require_number(node, "mu");
        spec.jump_mean = require_number(node, "jump_mean");
        spec.jump_stdev = require_number(node, "jump_stdev");
    } else {
        fail("model.driver.kind", "unknown driver '" + kind + "'");
    }
    return spec;
}

} // namespace

LevyExponentModel DriverSpec::build() const {
    switch (kind) {
        case DriverKind::Brownian:
            return LevyExponentModel::brownian(scale);
        case DriverKind::CompensatedPoisson:
            return LevyExponentModel::compensated_poisson(mu);
        case DriverKind::CompoundPoissonNormalJumps:
            return LevyExponentModel::compound_poisson_normal_jumps(mu, jump_mean, jump_stdev);
        case DriverKind::Custom:
            break;
    }
    throw ConfigError("model.driver", "custom drivers are not configurable from files");
}

LevyVasicekModel RunConfig::build_model() const {
    const LevyExponentModel exponent =
        family == ModelFamily::Classical ? LevyExponentModel::brownian(1.0) : driver.build();
    return LevyVasicekModel(params, exponent, p_max);
}

std::string RunConfig::describe_json() const {
    json j;
    j["model"]["family"] = family == ModelFamily::Classical ? "classical" : "levy";
    j["model"]["k"] = params.k;
    j["model"]["theta"] = params.theta;
    j["model"]["sigma"] = params.sigma;
    j["model"]["lambda"] = params.lambda;
    j["model"]["r0"] = params.r0;
    j["model"]["zero_tolerance"] = zero_tolerance;
    if (family == ModelFamily::Levy) {
        j["model"]["p_max"] = p_max;
        switch (driver.kind) {
            case DriverKind::Brownian:
                j["model"]["driver"] = {{"kind", "brownian"}, {"scale", driver.scale}};
                break;
            case DriverKind::CompensatedPoisson:
                j["model"]["driver"] = {{"kind", "compensated_poisson"}, {"mu", driver.mu}};
                break;
            case DriverKind::CompoundPoissonNormalJumps:
                j["model"]["driver"] = {{"kind", "compound_poisson_normal"},
                                        {"mu", driver.mu},
                                        {"jump_mean", driver.jump_mean},
                                        {"jump_stdev", driver.jump_stdev}};
                break;
            case DriverKind::Custom:
                break;
        }
        j["quadrature"] = {{"rel_tol", quadrature.rel_tol},
                           {"abs_tol", quadrature.abs_tol},
                           {"max_subdivisions", quadrature.max_subdivisions}};
    }
    if (!curve_maturities.empty()) j["curve"]["maturities"] = curve_maturities;
    if (scenario_path) j["longbond"]["scenario"] = *scenario_path;
    j["simulate"] = {{"n_paths", simulate.n_paths},
                     {"n_steps", simulate.n_steps},
                     {"horizon", simulate.horizon},
                     {"seed", simulate.seed},
                     {"scheme", scheme_name(simulate.scheme)}};
    if (!simulate.maturities.empty()) j["simulate"]["maturities"] = simulate.maturities;
    j["validate"] = {{"n_paths", validate.n_paths},
                     {"n_steps", validate.n_steps},
                     {"seed", validate.seed},
                     {"tolerance_scale", validate.tolerance_scale}};
    return j.dump();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be an object");

    RunConfig cfg;
    if (!root.contains("model") || !root["model"].is_object())
        fail("model", "missing model block");
    const json& model = root["model"];

    const std::string family =
        model.contains("family") && model["family"].is_string()
            ? model["family"].get<std::string>()
            : std::string("classical");
    if (family == "classical") {
        cfg.family = ModelFamily::Classical;
    } else if (family == "levy") {
        cfg.family = ModelFamily::Levy;
    } else {
        fail("model.family", "must be 'classical' or 'levy'");
    }

    cfg.params.k = require_number(model, "k");
    cfg.params.theta = require_number(model, "theta");
    cfg.params.sigma = require_number(model, "sigma");
    cfg.params.lambda = require_number(model, "lambda");
    cfg.params.r0 = require_number(model, "r0");
    try {
        longbond::validate(cfg.params);
    } catch (const ConfigError& e) {
        fail("model." + e.field(), "invalid value");
    }

    cfg.zero_tolerance = number_or(model, "zero_tolerance", 1e-12);
    cfg.p_max = number_or(model, "p_max", 4.0);

    if (cfg.family == ModelFamily::Levy) {
        if (!model.contains("driver") || !model["driver"].is_object())
            fail("model.driver", "levy models require a driver block");
        cfg.driver = parse_driver(model["driver"]);
    } else if (model.contains("driver")) {
        fail("model.driver", "classical models take no driver block");
    }

    if (root.contains("quadrature")) {
        const json& q = root["quadrature"];
        cfg.quadrature.rel_tol = number_or(q, "rel_tol", cfg.quadrature.rel_tol);
        cfg.quadrature.abs_tol = number_or(q, "abs_tol", cfg.quadrature.abs_tol);
        cfg.quadrature.max_subdivisions = static_cast<int>(
            integer_or(q, "max_subdivisions", cfg.quadrature.max_subdivisions));
        if (!(cfg.quadrature.rel_tol > 0.0)) fail("quadrature.rel_tol", "must be positive");
        if (!(cfg.quadrature.abs_tol > 0.0)) fail("quadrature.abs_tol", "must be positive");
        if (cfg.quadrature.max_subdivisions < 1)
            fail("quadrature.max_subdivisions", "must be at least 1");
    }

    if (root.contains("curve"))
        cfg.curve_maturities = grid(root["curve"], "maturities", true);

    if (root.contains("longbond")) {
        const json& lb = root["longbond"];
        if (!lb.contains("scenario") || !lb["scenario"].is_string())
            fail("longbond.scenario", "missing scenario file path");
        cfg.scenario_path = lb["scenario"].get<std::string>();
    }

    if (root.contains("simulate")) {
        const json& s = root["simulate"];
        cfg.simulate.n_paths = integer_or(s, "n_paths", cfg.simulate.n_paths);
        cfg.simulate.n_steps = integer_or(s, "n_steps", cfg.simulate.n_steps);
        cfg.simulate.horizon = number_or(s, "horizon", cfg.simulate.horizon);
        if (s.contains("seed")) {
            if (!s["seed"].is_number_integer()) fail("simulate.seed", "must be an integer");
            cfg.simulate.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("scheme")) {
            if (!s["scheme"].is_string()) fail("simulate.scheme", "must be a string");
            cfg.simulate.scheme = parse_scheme(s["scheme"].get<std::string>());
            cfg.simulate.scheme_given = true;
        }
        if (s.contains("maturities"))
            cfg.simulate.maturities = grid(s, "maturities", true);
        if (s.contains("martingale_times"))
            cfg.simulate.martingale_times = grid(s, "martingale_times", true);
        if (cfg.simulate.n_paths < 1) fail("simulate.n_paths", "must be at least 1");
        if (cfg.simulate.n_steps < 1) fail("simulate.n_steps", "must be at least 1");
        if (!(cfg.simulate.horizon > 0.0)) fail("simulate.horizon", "must be positive");
    }

    if (root.contains("validate")) {
        const json& v = root["validate"];
        cfg.validate.n_paths = integer_or(v, "n_paths", cfg.validate.n_paths);
        cfg.validate.n_steps = integer_or(v, "n_steps", cfg.validate.n_steps);
        if (v.contains("seed")) {
            if (!v["seed"].is_number_integer()) fail("validate.seed", "must be an integer");
            cfg.validate.seed = v["seed"].get<std::uint64_t>();
        }
        cfg.validate.tolerance_scale =
            number_or(v, "tolerance_scale", cfg.validate.tolerance_scale);
        if (cfg.validate.n_paths < 1) fail("validate.n_paths", "must be at least 1");
        if (cfg.validate.n_steps < 1) fail("validate.n_steps", "must be at least 1");
        if (!(cfg.validate.tolerance_scale >= 0.0))
            fail("validate.tolerance_scale", "must be nonnegative");
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        if (o.contains("format")) {
            if (!o["format"].is_string()) fail("output.format", "must be a string");
            const std::string f = o["format"].get<std::string>();
            if (f == "csv")
                cfg.format = OutputFormat::Csv;
            else if (f == "json")
                cfg.format = OutputFormat::Json;
            else
                fail("output.format", "must be 'csv' or 'json'");
        }
        if (o.contains("path")) {
            if (!o["path"].is_string()) fail("output.path", "must be a string");
            cfg.output_path = o["path"].get<std::string>();
        }
    }

    // Default simulation scheme: exact transition for Brownian drivers,
    // event-driven exact sampling for jump drivers.
    if (!cfg.simulate.scheme_given) {
        cfg.simulate.scheme = cfg.family == ModelFamily::Classical ||
                                      cfg.driver.kind == DriverKind::Brownian
                                  ? Scheme::ExactGaussian
                                  : Scheme::ExactJumpTimes;
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

} // namespace longbond::cli
