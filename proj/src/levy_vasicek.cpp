#include "longbond/levy_vasicek.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace longbond {

LevyVasicekModel::LevyVasicekModel(ModelParams params, LevyExponentModel driver, double p_max)
    : params_(params), driver_(std::move(driver)), p_max_(p_max) {
    validate(params_);
    if (!(p_max_ >= 1.0)) throw ConfigError("p_max", "must be at least 1");
    alpha_limit_ = params_.sigma / params_.k - params_.lambda;
    // alpha_ut ranges over [-lambda, sigma/k - lambda); both ends and their
    // p_max multiples must admit exponential moments.
    require_in_domain(-params_.lambda, "-lambda");
    require_in_domain(alpha_limit_, "sigma/k - lambda");
    require_in_domain(-p_max_ * params_.lambda, "p_max * (-lambda)");
    require_in_domain(p_max_ * alpha_limit_, "p_max * (sigma/k - lambda)");
}

void LevyVasicekModel::require_in_domain(double point, const char* what) const {
    if (point != 0.0 && !driver_.domain().contains_interior(point)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s = %.17g outside the driver moment domain",
                      what, point);
        throw DomainError(buf);
    }
}

double LevyVasicekModel::alpha(double s, double t) const {
    if (s > t) throw OrderingError("alpha requires s <= t");
    if (s < 0.0) throw OrderingError("alpha requires s >= 0");
    const double bond_vol = params_.sigma / params_.k;
    return bond_vol - params_.lambda - bond_vol * std::exp(params_.k * (s - t));
}

QuadratureResult LevyVasicekModel::exp_profile_integral(const std::function<double(double)>& f,
                                                        double a, double b, double tau,
                                                        const QuadratureConfig& cfg) const {
    QuadratureResult out;
    if (tau == 0.0) return out;
    if (tau < 0.0) throw OrderingError("integration length must be nonnegative");
    const double fa = f(a);
    if (b == 0.0) {
        out.value = fa * tau;
        return out;
    }
    // \int_0^tau f(a - b e^{-k w}) dw = f(a) tau
    //   + (1/k) \int_{e^{-k tau}}^{1} (f(a - b v) - f(a)) / v dv.
    // The difference quotient extends continuously to v = 0 (value -b f'(a)),
    // so the substituted integrand is well behaved even for huge tau.
    const double k = params_.k;
    const double v0 = std::exp(-k * tau);
    QuadratureResult correction = integrate_adaptive(
        [&](double v) { return (f(a - b * v) - fa) / (k * v); }, v0, 1.0, cfg);
    out.value = fa * tau + correction.value;
    out.error_estimate = correction.error_estimate;
    out.subdivisions = correction.subdivisions;
    return out;
}

QuadratureResult LevyVasicekModel::psi_integral_with_error(double t, double T,
                                                           const QuadratureConfig& cfg) const {
    if (T < t) throw InvalidHorizon("maturity precedes valuation time");
    if (t < 0.0) throw OrderingError("valuation time must be nonnegative");
    const double bond_vol = params_.sigma / params_.k;
    return exp_profile_integral([this](double x) { return driver_.psi(x); },
                                alpha_limit_, bond_vol, T - t, cfg);
}

double LevyVasicekModel::psi_integral(double t, double T, const QuadratureConfig& cfg) const {
    return psi_integral_with_error(t, T, cfg).value;
}

double LevyVasicekModel::log_bond_price(double t, double r_t, double T,
                                        const QuadratureConfig& cfg) const {
    if (T < t) throw InvalidHorizon("maturity precedes valuation time");
    if (!std::isfinite(r_t)) throw ConfigError("r_t", "short rate must be finite");
    const double k = params_.k;
    const double load = -std::expm1(k * (t - T)) / k; // (1 - e^{k(t-T)})/k
    return -(params_.theta + driver_.psi(-params_.lambda)) * (T - t) +
           psi_integral(t, T, cfg) + load * (params_.theta - r_t);
}

BondQuote LevyVasicekModel::bond_price(double t, double r_t, double T,
                                       const QuadratureConfig& cfg) const {
    const double log_p = log_bond_price(t, r_t, T, cfg);
    BondQuote q;
    q.t = t;
    q.T = T;
    q.price = std::exp(log_p);
    q.yield = T > t ? -log_p / (T - t) : r_t;
    return q;
}

double LevyVasicekModel::long_rate() const {
    return params_.theta + driver_.psi(-params_.lambda) - driver_.psi(alpha_limit_);
}

double LevyVasicekModel::lp_log_moment(double p, double t, const QuadratureConfig& cfg) const {
    if (!(p >= 1.0)) throw ConfigError("p", "moment order must be at least 1");
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    require_in_domain(-p * params_.lambda, "p * (-lambda)");
    require_in_domain(p * alpha_limit_, "p * (sigma/k - lambda)");
    const double k = params_.k;
    const double bond_vol = params_.sigma / k;
    const double scaled_integral =
        exp_profile_integral([this](double x) { return driver_.psi(x); },
                             p * alpha_limit_, p * bond_vol, t, cfg)
            .value;
    return -p * long_rate() * t -
           (p / k) * (params_.r0 - params_.theta) * (-std::expm1(-k * t)) +
           scaled_integral - p * driver_.psi(alpha_limit_) * t;
}

double LevyVasicekModel::lp_witness_predicate(double p) const {
    require_in_domain(p * alpha_limit_, "p * (sigma/k - lambda)");
    return -p * long_rate() + driver_.psi(p * alpha_limit_) -
           p * driver_.psi(alpha_limit_);
}

UiVerdict LevyVasicekModel::ui_classify(double zero_tolerance) const {
    if (!(zero_tolerance >= 0.0)) throw ConfigError("zero_tolerance", "must be nonnegative");
    UiVerdict verdict;
    verdict.long_rate = long_rate();
    verdict.zero_tolerance = zero_tolerance;
    if (verdict.long_rate < -zero_tolerance) {
        verdict.regime = UiRegime::NotUiUnbounded;
        return verdict;
    }
    if (!(verdict.long_rate > zero_tolerance)) {
        verdict.regime = UiRegime::NotUiBoundary;
        return verdict;
    }
    verdict.regime = UiRegime::UniformlyIntegrable;

    if (alpha_limit_ == 0.0) {
        // g(p) = -p R_inf < 0 for every p; any exponent works.
        verdict.witness_p = std::numeric_limits<double>::infinity();
        return verdict;
    }

    // Largest p the domain admits for the witness argument p (sigma/k - lambda).
    double p_hi = p_max_;
    const auto& dom = driver_.domain();
    const double bound = alpha_limit_ > 0.0 ? dom.upper : dom.lower;
    if (std::isfinite(bound))
        p_hi = std::min(p_hi, 0.999 * bound / alpha_limit_);

    const double p_lo_min = 1.0 + 1e-6;
    if (!(p_hi > p_lo_min)) {
        if (!(p_hi > 1.0 + 1e-3))
            throw WitnessNotFound("driver domain excludes every p in (1, 1.001]");
        p_hi = 1.0 + 1e-3;
    }

    // g(1) = -R_inf < 0, so a feasible p exists next to 1 by continuity.
    double lo = p_lo_min;
    if (!(lp_witness_predicate(lo) < 0.0))
        throw WitnessNotFound("no feasible witness exponent adjacent to 1");
    double hi = p_hi;
    if (lp_witness_predicate(hi) < 0.0) {
        verdict.witness_p = hi;
        return verdict;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (lp_witness_predicate(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    verdict.witness_p = lo;
    return verdict;
}

MeasureChangeStats LevyVasicekModel::measure_change_stats(double t, double delta,
                                                          const QuadratureConfig& cfg) const {
    if (!(t > 0.0)) throw OrderingError("time must be positive");
    if (!(delta > 0.0)) throw ConfigError("delta", "threshold must be positive");
    const double k = params_.k;
    const double bond_vol = params_.sigma / k;

    MeasureChangeStats stats;
    stats.t = t;
    stats.mean_star =
        exp_profile_integral(
            [this](double x) { return driver_.psi_prime(x) * x; },
            alpha_limit_, bond_vol, t, cfg)
            .value;
    stats.variance_star =
        exp_profile_integral(
            [this](double x) { return driver_.psi_double_prime(x) * x * x; },
            alpha_limit_, bond_vol, t, cfg)
            .value;
    stats.barrier = std::log(delta) + long_rate() * t +
                    (params_.r0 - params_.theta) * (-std::expm1(-k * t)) / k +
                    driver_.psi(alpha_limit_) * t;
    stats.drift_constant =
        alpha_limit_ * driver_.psi_prime(alpha_limit_) - driver_.psi(alpha_limit_);
    return stats;
}

double LevyVasicekModel::long_bond_return(double t, double r_t) const {
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    return std::exp(long_rate() * t + (params_.r0 - r_t) / params_.k);
}

double LevyVasicekModel::ross_recovery_gap() const {
    return params_.lambda - params_.sigma / params_.k;
}

double LevyVasicekModel::long_bond_volatility() const {
    return params_.sigma / params_.k;
}

double LevyVasicekModel::long_bond_excess_return() const {
    return excess_rate_of_return(driver_, params_.lambda, params_.sigma / params_.k);
}

} // namespace longbond
