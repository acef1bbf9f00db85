#include "longbond/levy_exponent.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace longbond {

namespace {

std::string format_point(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

LevyExponentModel LevyExponentModel::brownian(double scale) {
    if (!(scale > 0.0))
        throw ConfigError("driver.scale", "Brownian scale must be positive");
    LevyExponentModel m;
    m.kind_ = DriverKind::Brownian;
    m.scale_ = scale;
    const double c2 = scale * scale;
    m.psi_ = [c2](double a) { return 0.5 * c2 * a * a; };
    m.dpsi_ = [c2](double a) { return c2 * a; };
    m.d2psi_ = [c2](double) { return c2; };
    return m;
}

LevyExponentModel LevyExponentModel::compensated_poisson(double rate) {
    if (!(rate > 0.0))
        throw ConfigError("driver.mu", "jump rate must be positive");
    LevyExponentModel m;
    m.kind_ = DriverKind::CompensatedPoisson;
    m.rate_ = rate;
    m.jump_mean_ = 1.0;
    m.jump_stdev_ = 0.0;
    // expm1 keeps psi accurate near the origin where e^a - 1 - a cancels.
    m.psi_ = [rate](double a) { return rate * (std::expm1(a) - a); };
    m.dpsi_ = [rate](double a) { return rate * std::expm1(a); };
    m.d2psi_ = [rate](double a) { return rate * std::exp(a); };
    return m;
}

LevyExponentModel LevyExponentModel::compound_poisson_normal_jumps(double rate,
                                                                   double jump_mean,
                                                                   double jump_stdev) {
    if (!(rate > 0.0))
        throw ConfigError("driver.mu", "jump rate must be positive");
    if (!(jump_stdev > 0.0))
        throw ConfigError("driver.jump_stdev", "jump stdev must be positive");
    LevyExponentModel m;
    m.kind_ = DriverKind::CompoundPoissonNormalJumps;
    m.rate_ = rate;
    m.jump_mean_ = jump_mean;
    m.jump_stdev_ = jump_stdev;
    const double mu = rate, mean = jump_mean, s2 = jump_stdev * jump_stdev;
    // g(a) = m a + s^2 a^2 / 2 is the jump-size cumulant; the -m a term is the
    // compensator drift, so psi(a) = mu (e^g - 1 - m a) = mu (expm1(g) - g + s^2 a^2 / 2).
    m.psi_ = [mu, mean, s2](double a) {
        const double g = mean * a + 0.5 * s2 * a * a;
        return mu * ((std::expm1(g) - g) + 0.5 * s2 * a * a);
    };
    m.dpsi_ = [mu, mean, s2](double a) {
        const double g = mean * a + 0.5 * s2 * a * a;
        return mu * (mean * std::expm1(g) + s2 * a * std::exp(g));
    };
    m.d2psi_ = [mu, mean, s2](double a) {
        const double b = mean + s2 * a;
        return mu * (s2 + b * b) * std::exp(mean * a + 0.5 * s2 * a * a);
    };
    return m;
}

LevyExponentModel LevyExponentModel::custom(std::function<double(double)> psi,
                                            std::function<double(double)> psi_prime,
                                            std::function<double(double)> psi_double_prime,
                                            ExponentDomain domain) {
    if (!psi || !psi_prime || !psi_double_prime)
        throw ConfigError("driver", "custom model requires psi, psi', and psi''");
    if (!(domain.lower < 0.0 && 0.0 < domain.upper))
        throw ConfigError("driver.domain", "domain must contain the origin strictly");
    LevyExponentModel m;
    m.kind_ = DriverKind::Custom;
    m.domain_ = domain;
    m.psi_ = std::move(psi);
    m.dpsi_ = std::move(psi_prime);
    m.d2psi_ = std::move(psi_double_prime);
    return m;
}

void LevyExponentModel::require_interior(double alpha) const {
    if (!std::isfinite(alpha) || !domain_.contains_interior(alpha))
        throw DomainError("exponent argument " + format_point(alpha) +
                          " outside open domain (" + format_point(domain_.lower) + ", " +
                          format_point(domain_.upper) + ")");
}

double LevyExponentModel::psi(double alpha) const {
    require_interior(alpha);
    return psi_(alpha);
}

double LevyExponentModel::psi_prime(double alpha) const {
    require_interior(alpha);
    return dpsi_(alpha);
}

double LevyExponentModel::psi_double_prime(double alpha) const {
    require_interior(alpha);
    return d2psi_(alpha);
}

std::string LevyExponentModel::describe() const {
    char buf[128];
    switch (kind_) {
        case DriverKind::Brownian:
            std::snprintf(buf, sizeof(buf), "brownian(c=%g)", scale_);
            return buf;
        case DriverKind::CompensatedPoisson:
            std::snprintf(buf, sizeof(buf), "compensated_poisson(mu=%g)", rate_);
            return buf;
        case DriverKind::CompoundPoissonNormalJumps:
            std::snprintf(buf, sizeof(buf), "compound_poisson_normal(mu=%g, m=%g, s=%g)",
                          rate_, jump_mean_, jump_stdev_);
            return buf;
        case DriverKind::Custom:
            return "custom";
    }
    return "unknown";
}

double excess_rate_of_return(const LevyExponentModel& model, double lambda, double sigma) {
    return model.psi(sigma) + model.psi(-lambda) - model.psi(sigma - lambda);
}

double superlinearity_gap(const LevyExponentModel& model, double alpha) {
    return alpha * model.psi_prime(alpha) - model.psi(alpha);
}

std::vector<double> validation_grid(const ExponentDomain& domain, int points_per_sign) {
    // Log-spaced magnitudes per sign, clipped to 90% of the distance to a
    // finite endpoint; infinite endpoints get a fixed cap.
    constexpr double kInfiniteCap = 8.0;
    constexpr double kSpanDecades = 6.0;

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * points_per_sign));
    const auto add_side = [&](double endpoint, double sign) {
        const double hi = std::isfinite(endpoint) ? 0.9 * std::fabs(endpoint) : kInfiniteCap;
        if (!(hi > 0.0)) return;
        const double log_hi = std::log10(hi);
        const double log_lo = log_hi - kSpanDecades;
        for (int i = 0; i < points_per_sign; ++i) {
            const double f = points_per_sign == 1
                                 ? 1.0
                                 : static_cast<double>(i) / (points_per_sign - 1);
            grid.push_back(sign * std::pow(10.0, log_lo + f * (log_hi - log_lo)));
        }
    };
    add_side(domain.lower, -1.0);
    add_side(domain.upper, +1.0);
    return grid;
}

ValidationReport validate_model(const LevyExponentModel& model) {
    ValidationReport report;
    const auto add = [&report](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const auto guarded = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            add(name, false, std::string("evaluation failed: ") + e.what());
        }
    };

    guarded("psi(0) = 0", [&] {
        const double v = model.psi(0.0);
        add("psi(0) = 0", std::fabs(v) <= 1e-12, "psi(0) = " + format_point(v));
    });
    guarded("psi'(0) = 0", [&] {
        const double v = model.psi_prime(0.0);
        add("psi'(0) = 0", std::fabs(v) <= 1e-8, "psi'(0) = " + format_point(v));
    });

    guarded("grid checks", [&] {
        const auto grid = validation_grid(model.domain());
        bool convex = true, positive = true;
        double worst_d2 = std::numeric_limits<double>::infinity();
        double worst_psi = std::numeric_limits<double>::infinity();
        double worst_d2_at = 0.0, worst_psi_at = 0.0;
        for (double a : grid) {
            const double d2 = model.psi_double_prime(a);
            if (d2 < worst_d2) { worst_d2 = d2; worst_d2_at = a; }
            if (!(d2 > 0.0)) convex = false;
            const double v = model.psi(a);
            if (v < worst_psi) { worst_psi = v; worst_psi_at = a; }
            if (!(v > 0.0)) positive = false;
        }
        add("psi'' > 0 on grid", convex,
            "min psi'' = " + format_point(worst_d2) + " at alpha = " + format_point(worst_d2_at));
        add("psi > 0 on grid away from origin", positive,
            "min psi = " + format_point(worst_psi) + " at alpha = " + format_point(worst_psi_at));
    });

    return report;
}

} // namespace longbond
