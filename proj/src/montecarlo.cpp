#include "longbond/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "longbond/rng.hpp"

namespace longbond {

namespace {

constexpr double kLogPiLimit = 700.0; // exp overflow guard

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }

    McEstimate estimate() const {
        McEstimate e;
        e.n = n;
        if (n == 0) return e;
        e.mean = sum / static_cast<double>(n);
        if (n > 1) {
            const double var =
                std::max(0.0, (sum_sq - static_cast<double>(n) * e.mean * e.mean) /
                                  static_cast<double>(n - 1));
            e.std_error = std::sqrt(var / static_cast<double>(n));
        }
        return e;
    }
};

} // namespace

PathSimulator::PathSimulator(LevyVasicekModel model, SimulationConfig cfg)
    : model_(std::move(model)), cfg_(cfg) {
    if (cfg_.n_paths < 1) throw ConfigError("simulate.n_paths", "must be at least 1");
    if (cfg_.n_steps < 1) throw ConfigError("simulate.n_steps", "must be at least 1");
    if (!(cfg_.horizon > 0.0)) throw ConfigError("simulate.horizon", "must be positive");
    dt_ = cfg_.horizon / static_cast<double>(cfg_.n_steps);

    const auto& driver = model_.driver();
    switch (cfg_.scheme) {
        case Scheme::ExactGaussian:
            if (driver.kind() != DriverKind::Brownian)
                throw SchemeMismatch("ExactGaussian requires a Brownian driver, got " +
                                     driver.describe());
            break;
        case Scheme::ExactJumpTimes:
            if (!driver.finite_activity_jumps())
                throw SchemeMismatch("ExactJumpTimes requires a finite-activity jump driver, got " +
                                     driver.describe());
            break;
        case Scheme::EulerLevy:
            if (driver.kind() == DriverKind::Custom)
                throw SchemeMismatch("custom drivers expose no sampling law");
            break;
    }

    long_rate_ = model_.long_rate();
    psi_neg_lambda_ = driver.psi(-model_.params().lambda);
}

std::int64_t PathSimulator::grid_index(double t) const {
    const std::int64_t j = static_cast<std::int64_t>(std::llround(t / dt_));
    if (j < 0 || j > cfg_.n_steps || std::fabs(j * dt_ - t) > 1e-9 * std::max(1.0, t))
        throw ConfigError("t", "time is not on the simulation grid");
    return j;
}

void PathSimulator::generate(std::int64_t index, SamplePath& out) const {
    const ModelParams& p = model_.params();
    const std::size_t n = static_cast<std::size_t>(cfg_.n_steps) + 1;
    for (auto* v : {&out.times, &out.xi, &out.r, &out.log_pi, &out.log_L, &out.log_M})
        v->assign(n, 0.0);

    out.r[0] = p.r0;
    for (std::size_t j = 0; j < n; ++j) out.times[j] = static_cast<double>(j) * dt_;

    PathRng rng(cfg_.seed, static_cast<std::uint64_t>(index));
    const double k = p.k;
    const double bond_vol = p.sigma / k;

    // Trapezoidal integrated rate; only used by the Euler scheme.
    double trapezoid_integral = 0.0;

    switch (cfg_.scheme) {
        case Scheme::ExactGaussian: {
            // Joint draw of the driver increment and the OU convolution
            // integral; both Gaussian with
            //   Var[d_xi] = c^2 dt, Var[I] = c^2 (1 - e^{-2k dt}) / (2k),
            //   Cov[d_xi, I] = c^2 (1 - e^{-k dt}) / k.
            const double c = model_.driver().brownian_scale();
            const double decay = std::exp(-k * dt_);
            const double sd_xi = c * std::sqrt(dt_);
            const double var_ou = c * c * (1.0 - decay * decay) / (2.0 * k);
            const double cov = c * c * (-std::expm1(-k * dt_)) / k;
            const double beta = cov / sd_xi;
            const double resid = std::sqrt(std::max(0.0, var_ou - beta * beta));
            for (std::int64_t j = 1; j <= cfg_.n_steps; ++j) {
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                out.xi[j] = out.xi[j - 1] + sd_xi * z1;
                const double ou_int = beta * z1 + resid * z2;
                out.r[j] = p.theta + (out.r[j - 1] - p.theta) * decay - p.sigma * ou_int;
            }
            break;
        }
        case Scheme::EulerLevy: {
            const auto& driver = model_.driver();
            for (std::int64_t j = 1; j <= cfg_.n_steps; ++j) {
                double d_xi = 0.0;
                switch (driver.kind()) {
                    case DriverKind::Brownian:
                        d_xi = driver.brownian_scale() * std::sqrt(dt_) * rng.normal();
                        break;
                    case DriverKind::CompensatedPoisson: {
                        const double mu = driver.jump_rate();
                        d_xi = static_cast<double>(rng.poisson(mu * dt_)) - mu * dt_;
                        break;
                    }
                    case DriverKind::CompoundPoissonNormalJumps: {
                        const double mu = driver.jump_rate();
                        const long jumps = rng.poisson(mu * dt_);
                        double sum = 0.0;
                        for (long i = 0; i < jumps; ++i)
                            sum += driver.jump_mean() + driver.jump_stdev() * rng.normal();
                        d_xi = sum - mu * driver.jump_mean() * dt_;
                        break;
                    }
                    case DriverKind::Custom:
                        break; // rejected in the constructor
                }
                const double r_prev = out.r[j - 1];
                out.r[j] = r_prev + k * (p.theta - r_prev) * dt_ - p.sigma * d_xi;
                out.xi[j] = out.xi[j - 1] + d_xi;
                trapezoid_integral += 0.5 * (r_prev + out.r[j]) * dt_;
                out.log_pi[j] = -trapezoid_integral - p.lambda * out.xi[j] -
                                psi_neg_lambda_ * out.times[j];
            }
            break;
        }
        case Scheme::ExactJumpTimes: {
            const auto& driver = model_.driver();
            const double mu = driver.jump_rate();
            const double mean_jump = driver.jump_mean();
            // Between jumps the compensator drifts xi at -mu*mean_jump, so the
            // rate relaxes toward theta + sigma*mu*mean_jump/k along the exact ODE flow.
            const double drift = mu * mean_jump;
            const double theta_eff = p.theta + p.sigma * drift / k;
            double t_now = 0.0, xi_now = 0.0, r_now = p.r0;
            double jumps_sum = 0.0; // running sum of raw jump sizes
            double next_jump = rng.exponential(mu);
            const auto advance_to = [&](double t_target) {
                const double gap = t_target - t_now;
                r_now = theta_eff + (r_now - theta_eff) * std::exp(-k * gap);
                t_now = t_target;
                xi_now = jumps_sum - drift * t_now;
            };
            for (std::int64_t j = 1; j <= cfg_.n_steps; ++j) {
                const double t_grid = out.times[j];
                while (next_jump < t_grid) {
                    advance_to(next_jump);
                    const double size =
                        driver.kind() == DriverKind::CompensatedPoisson
                            ? 1.0
                            : mean_jump + driver.jump_stdev() * rng.normal();
                    jumps_sum += size;
                    xi_now += size;
                    r_now -= p.sigma * size;
                    next_jump += rng.exponential(mu);
                }
                advance_to(t_grid);
                out.xi[j] = xi_now;
                out.r[j] = r_now;
            }
            break;
        }
    }

    const bool exact_scheme = cfg_.scheme != Scheme::EulerLevy;
    for (std::int64_t j = 0; j <= cfg_.n_steps; ++j) {
        const double t = out.times[j];
        if (exact_scheme && j > 0) {
            const double integrated_rate =
                p.theta * t + (p.r0 - out.r[j]) / k - bond_vol * out.xi[j];
            out.log_pi[j] =
                -integrated_rate - p.lambda * out.xi[j] - psi_neg_lambda_ * t;
        }
        out.log_L[j] = long_rate_ * t + (p.r0 - out.r[j]) / k;
        out.log_M[j] = out.log_pi[j] + out.log_L[j];
        if (!std::isfinite(out.r[j]) || !std::isfinite(out.log_pi[j]) ||
            std::fabs(out.log_pi[j]) > kLogPiLimit)
            throw NumericalBlowup("simulated kernel left the representable range",
                                  static_cast<long>(j));
    }
}

McEstimate estimate_bond_price(const LevyVasicekModel& model, double T,
                               const SimulationConfig& cfg) {
    if (T < 0.0) throw OrderingError("maturity must be nonnegative");
    if (T == 0.0) return {1.0, 0.0, cfg.n_paths};
    if (T > cfg.horizon + 1e-12) throw ConfigError("T", "maturity beyond simulation horizon");
    PathSimulator sim(model, cfg);
    const std::int64_t j = sim.grid_index(T);
    Accumulator acc;
    sim.for_each_path([&](const SamplePath& path) { acc.add(std::exp(path.log_pi[j])); });
    return acc.estimate();
}

McEstimate estimate_tail(const LevyVasicekModel& model, double t, double delta,
                         const SimulationConfig& cfg) {
    if (!(delta > 0.0)) throw ConfigError("delta", "threshold must be positive");
    if (t > cfg.horizon + 1e-12) throw ConfigError("t", "time beyond simulation horizon");
    PathSimulator sim(model, cfg);
    const std::int64_t j = sim.grid_index(t);
    const double log_delta = std::log(delta);
    Accumulator acc;
    sim.for_each_path([&](const SamplePath& path) {
        acc.add(path.log_pi[j] > log_delta ? std::exp(path.log_pi[j]) : 0.0);
    });
    return acc.estimate();
}

McEstimate estimate_martingale_deviation(const LevyVasicekModel& model, double t,
                                         const SimulationConfig& cfg) {
    if (t == 0.0) return {0.0, 0.0, cfg.n_paths};
    if (t > cfg.horizon + 1e-12) throw ConfigError("t", "time beyond simulation horizon");
    PathSimulator sim(model, cfg);
    const std::int64_t j = sim.grid_index(t);
    Accumulator acc;
    sim.for_each_path([&](const SamplePath& path) { acc.add(std::expm1(path.log_M[j])); });
    return acc.estimate();
}

McEstimate estimate_digital_put(double r, double lambda, double kappa, double T,
                                const SimulationConfig& cfg) {
    if (!(lambda > 0.0)) throw ConfigError("lambda", "risk aversion must be positive");
    if (!(kappa > 0.0)) throw ConfigError("kappa", "strike must be positive");
    if (!(T > 0.0)) throw ConfigError("T", "maturity must be positive");
    if (cfg.n_paths < 1) throw ConfigError("simulate.n_paths", "must be at least 1");
    const double log_kappa = std::log(kappa);
    const double sqrt_T = std::sqrt(T);
    Accumulator acc;
    for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
        const double w = sqrt_T * rng.normal();
        const double log_pi = -r * T - lambda * w - 0.5 * lambda * lambda * T;
        acc.add(-log_pi < log_kappa ? std::exp(log_pi) : 0.0); // n_T = 1/pi_T
    }
    return acc.estimate();
}

} // namespace longbond
