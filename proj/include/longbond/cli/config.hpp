#pragma once

#include <optional>
#include <string>
#include <vector>

#include "longbond/levy_vasicek.hpp"
#include "longbond/montecarlo.hpp"

namespace longbond::cli {

enum class ModelFamily { Classical, Levy };
enum class OutputFormat { Csv, Json };

struct DriverSpec {
    DriverKind kind = DriverKind::Brownian;
    double scale = 1.0;      // brownian
    double mu = 1.0;         // jump rate
    double jump_mean = 0.0;  // compound poisson
    double jump_stdev = 1.0; // compound poisson

    LevyExponentModel build() const;
};

struct SimulateBlock {
    std::int64_t n_paths = 100000;
    std::int64_t n_steps = 200;
    double horizon = 5.0;
    std::uint64_t seed = 12345;
    Scheme scheme = Scheme::ExactGaussian;
    bool scheme_given = false;
    std::vector<double> maturities;
    std::vector<double> martingale_times;
};

struct ValidateBlock {
    std::int64_t n_paths = 100000;
    std::int64_t n_steps = 200;
    std::uint64_t seed = 12345;
    double tolerance_scale = 1.0;
};

/// Fully resolved run configuration: the model block plus the
/// command-specific blocks that were present in the file.
struct RunConfig {
    ModelFamily family = ModelFamily::Classical;
    ModelParams params{};
    DriverSpec driver;
    double zero_tolerance = 1e-12;
    double p_max = 4.0;
    QuadratureConfig quadrature;

    std::vector<double> curve_maturities;
    std::optional<std::string> scenario_path;
    SimulateBlock simulate;
    ValidateBlock validate;

    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> output_path;

    /// The model as simulated / priced through the exponent machinery.
    /// Classical configs get a unit-scale Brownian driver.
    LevyVasicekModel build_model() const;

    /// Serialized resolved configuration for the json `meta` block.
    std::string describe_json() const;
};

/// Parses the JSON config file. Throws ConfigError naming the offending
/// field (or carrying the parser's line diagnostic) on any violation.
RunConfig load_config(const std::string& path);

/// Parses config text directly; `origin` labels diagnostics.
RunConfig parse_config(const std::string& text, const std::string& origin);

} // namespace longbond::cli
