#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "longbond/errors.hpp"

namespace longbond {

/// Open interval A on which the driver admits exponential moments.
/// Must contain the origin strictly; endpoints may be infinite.
struct ExponentDomain {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = +std::numeric_limits<double>::infinity();

    bool contains_interior(double alpha) const noexcept {
        return alpha > lower && alpha < upper;
    }
};

enum class DriverKind {
    Brownian,
    CompensatedPoisson,
    CompoundPoissonNormalJumps,
    Custom,
};

/// A compensated Levy driver described through its exponent psi and the
/// first two derivatives. Built-ins carry closed forms; Custom takes
/// caller-supplied callables (all three required, no numerical fallback).
///
/// Contract for every model: psi(0) = 0, psi'(0) = 0, psi strictly convex
/// and strictly positive away from the origin on the interior of `domain`.
class LevyExponentModel {
public:
    /// Scaled Brownian motion xi_t = c W_t: psi(a) = c^2 a^2 / 2.
    static LevyExponentModel brownian(double scale);

    /// Compensated Poisson xi_t = N_t - mu t: psi(a) = mu (e^a - 1 - a).
    static LevyExponentModel compensated_poisson(double rate);

    /// Compound Poisson with N(jump_mean, jump_stdev^2) jumps, drift-compensated:
    /// psi(a) = mu (e^{m a + s^2 a^2 / 2} - 1 - m a), so psi'(0) = 0 analytically.
    static LevyExponentModel compound_poisson_normal_jumps(double rate,
                                                           double jump_mean,
                                                           double jump_stdev);

    static LevyExponentModel custom(std::function<double(double)> psi,
                                    std::function<double(double)> psi_prime,
                                    std::function<double(double)> psi_double_prime,
                                    ExponentDomain domain);

    DriverKind kind() const noexcept { return kind_; }
    const ExponentDomain& domain() const noexcept { return domain_; }

    double psi(double alpha) const;
    double psi_prime(double alpha) const;
    double psi_double_prime(double alpha) const;

    // Parameters of the built-in kinds (simulation needs them).
    double brownian_scale() const noexcept { return scale_; }
    double jump_rate() const noexcept { return rate_; }
    double jump_mean() const noexcept { return jump_mean_; }
    double jump_stdev() const noexcept { return jump_stdev_; }

    /// True for drivers with finitely many jumps per unit time (Poisson family).
    bool finite_activity_jumps() const noexcept {
        return kind_ == DriverKind::CompensatedPoisson ||
               kind_ == DriverKind::CompoundPoissonNormalJumps;
    }

    std::string describe() const;

private:
    LevyExponentModel() = default;

    void require_interior(double alpha) const;

    DriverKind kind_ = DriverKind::Custom;
    ExponentDomain domain_;
    std::function<double(double)> psi_, dpsi_, d2psi_;
    double scale_ = 0.0;
    double rate_ = 0.0;
    double jump_mean_ = 0.0;
    double jump_stdev_ = 0.0;
};

/// psi(sigma) + psi(-lambda) - psi(sigma - lambda); risk premium of a
/// geometric asset with exposure sigma under risk aversion lambda.
/// Strictly positive for lambda, sigma > 0.
double excess_rate_of_return(const LevyExponentModel& model, double lambda, double sigma);

/// alpha psi'(alpha) - psi(alpha); positive away from the origin for any
/// strictly convex exponent vanishing at zero.
double superlinearity_gap(const LevyExponentModel& model, double alpha);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const noexcept {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Samples the exponent on a log-spaced grid (64 points per sign, clipped to
/// 90% of the distance to any finite endpoint) and checks the compensated-
/// driver contract: psi(0) = 0, psi'(0) = 0, convexity, positivity.
/// Collects failures into the report; never throws for a bad model.
ValidationReport validate_model(const LevyExponentModel& model);

/// The validation grid described above, exposed for reuse in tests
/// and the CLI validate workflow. Points are interior and exclude zero.
std::vector<double> validation_grid(const ExponentDomain& domain, int points_per_sign = 64);

} // namespace longbond
