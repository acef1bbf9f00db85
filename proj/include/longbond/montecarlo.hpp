#pragma once

#include <cstdint>
#include <vector>

#include "longbond/levy_vasicek.hpp"

namespace longbond {

enum class Scheme {
    ExactGaussian,  // joint exact OU transition; Brownian drivers only
    EulerLevy,      // left-point Euler with exact driver increments
    ExactJumpTimes, // event-driven exact sampling; finite-activity jump drivers only
};

struct SimulationConfig {
    std::int64_t n_paths = 1;
    std::int64_t n_steps = 1;
    double horizon = 1.0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::ExactGaussian;
};

/// One discretized realization of the driver, short rate, and the kernel /
/// long-bond accounting, on the grid t_j = j * horizon / n_steps.
/// log_M[j] = log_pi[j] + log_L[j] by construction.
struct SamplePath {
    std::vector<double> times;
    std::vector<double> xi;
    std::vector<double> r;
    std::vector<double> log_pi;
    std::vector<double> log_L;
    std::vector<double> log_M;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// Deterministic path generator over a model/config pair. Paths are indexed;
/// path i is a pure function of (cfg.seed, i). Exact schemes use the
/// pathwise identity \int_0^t r_s ds = theta t + (r0 - r_t)/k - (sigma/k) xi_t
/// for the integrated rate, so log_pi carries no time-discretization bias;
/// EulerLevy falls back to trapezoidal accumulation.
class PathSimulator {
public:
    PathSimulator(LevyVasicekModel model, SimulationConfig cfg);

    const SimulationConfig& config() const noexcept { return cfg_; }
    const LevyVasicekModel& model() const noexcept { return model_; }

    /// Fills `out` with path `index`. Buffers are reused across calls.
    void generate(std::int64_t index, SamplePath& out) const;

    SamplePath path(std::int64_t index) const {
        SamplePath p;
        generate(index, p);
        return p;
    }

    /// Visits paths 0..n_paths-1 in index order (deterministic reduction order).
    template <typename Visitor>
    void for_each_path(Visitor&& visit) const {
        SamplePath buffer;
        for (std::int64_t i = 0; i < cfg_.n_paths; ++i) {
            generate(i, buffer);
            visit(buffer);
        }
    }

    /// Grid index whose time equals `t`; throws if `t` is off the grid.
    std::int64_t grid_index(double t) const;

private:
    LevyVasicekModel model_;
    SimulationConfig cfg_;
    double dt_;
    double long_rate_;
    double psi_neg_lambda_;
};

/// Sample mean of pi_T over simulated kernel paths: the E[pi_T] oracle for
/// time-0 bond prices. Requires cfg.horizon >= T with T on the grid.
McEstimate estimate_bond_price(const LevyVasicekModel& model, double T,
                               const SimulationConfig& cfg);

/// Sample mean of pi_t 1{pi_t > delta}.
McEstimate estimate_tail(const LevyVasicekModel& model, double t, double delta,
                         const SimulationConfig& cfg);

/// Sample mean of pi_t L_t - 1; zero in expectation for any parameter set.
McEstimate estimate_martingale_deviation(const LevyVasicekModel& model, double t,
                                         const SimulationConfig& cfg);

/// Sample mean of pi_T 1{n_T < kappa} in the constant-rate GBM kernel model;
/// oracle for digital_put_gbm. Only n_paths and seed are read from cfg.
McEstimate estimate_digital_put(double r, double lambda, double kappa, double T,
                                const SimulationConfig& cfg);

} // namespace longbond
