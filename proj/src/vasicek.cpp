#include "longbond/vasicek.hpp"

#include <cmath>
#include <limits>

namespace longbond {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

void validate(const ModelParams& params) {
    const auto check_finite = [](double v, const char* field) {
        if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    };
    check_finite(params.k, "k");
    check_finite(params.theta, "theta");
    check_finite(params.sigma, "sigma");
    check_finite(params.lambda, "lambda");
    check_finite(params.r0, "r0");
    if (!(params.k > 0.0)) throw ConfigError("k", "mean-reversion rate must be positive");
    if (!(params.sigma > 0.0)) throw ConfigError("sigma", "volatility must be positive");
    if (!(params.lambda > 0.0)) throw ConfigError("lambda", "risk aversion must be positive");
}

namespace vasicek {

ShortRateMoments short_rate_moments(const ModelParams& params, double t) {
    validate(params);
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    const double decay = std::exp(-params.k * t);
    ShortRateMoments m;
    m.mean = params.theta + (params.r0 - params.theta) * decay;
    m.variance = params.sigma * params.sigma * (1.0 - decay * decay) / (2.0 * params.k);
    return m;
}

double long_rate(const ModelParams& params) {
    validate(params);
    const double k = params.k;
    return params.theta + params.lambda * params.sigma / k -
           params.sigma * params.sigma / (2.0 * k * k);
}

double log_bond_price(const ModelParams& params, double t, double r_t, double T) {
    validate(params);
    if (T < t) throw InvalidHorizon("maturity precedes valuation time");
    if (!std::isfinite(r_t)) throw ConfigError("r_t", "short rate must be finite");
    const double k = params.k;
    const double r_inf = long_rate(params);
    const double load = (1.0 - std::exp(k * (t - T))) / k; // (1 - e^{k(t-T)})/k
    const double convexity = params.sigma * params.sigma / (4.0 * k) * load * load;
    return -r_inf * (T - t) + load * (r_inf - r_t) - convexity;
}

BondQuote bond_price(const ModelParams& params, double t, double r_t, double T) {
    const double log_p = log_bond_price(params, t, r_t, T);
    BondQuote q;
    q.t = t;
    q.T = T;
    q.price = std::exp(log_p);
    q.yield = T > t ? -log_p / (T - t) : r_t; // yield limit at T = t is the short rate
    return q;
}

double lp_linear_coefficient(const ModelParams& params, double p) {
    const double vol_gap = params.sigma / params.k - params.lambda;
    return -p * (params.theta + 0.5 * params.lambda * params.lambda -
                 p * 0.5 * vol_gap * vol_gap);
}

double lp_log_moment(const ModelParams& params, double p, double t) {
    validate(params);
    if (!(p >= 1.0)) throw ConfigError("p", "moment order must be at least 1");
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    const double k = params.k;
    const double bond_vol = params.sigma / k;
    const double vol_gap = bond_vol - params.lambda;
    const double em = -std::expm1(-k * t);   // 1 - e^{-kt}
    const double em2 = -std::expm1(-2.0 * k * t);
    return lp_linear_coefficient(params, p) * t +
           (p / k) * (params.theta - params.r0 - p * bond_vol * vol_gap) * em +
           p * p * params.sigma * params.sigma / (4.0 * k * k * k) * em2;
}

UiVerdict ui_classify(const ModelParams& params, double zero_tolerance) {
    validate(params);
    if (!(zero_tolerance >= 0.0)) throw ConfigError("zero_tolerance", "must be nonnegative");
    UiVerdict verdict;
    verdict.long_rate = long_rate(params);
    verdict.zero_tolerance = zero_tolerance;
    if (verdict.long_rate > zero_tolerance) {
        verdict.regime = UiRegime::UniformlyIntegrable;
        const double vol_gap = params.sigma / params.k - params.lambda;
        if (vol_gap == 0.0) {
            // Any p > 1 passes: the t-coefficient is -p (theta + lambda^2/2) < 0.
            verdict.witness_p = std::numeric_limits<double>::infinity();
        } else {
            const double p = (params.theta + 0.5 * params.lambda * params.lambda) /
                             (0.5 * vol_gap * vol_gap);
            if (!(p > 1.0))
                throw Error("Lp witness inconsistent with positive long rate");
            if (lp_linear_coefficient(params, p) > 1e-12)
                throw Error("Lp witness fails to null the linear coefficient");
            verdict.witness_p = p;
        }
    } else if (verdict.long_rate < -zero_tolerance) {
        verdict.regime = UiRegime::NotUiUnbounded;
    } else {
        verdict.regime = UiRegime::NotUiBoundary;
    }
    return verdict;
}

double a_t_squared(const ModelParams& params, double t) {
    validate(params);
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    const double k = params.k;
    const double b = params.sigma / k;
    const double a = b - params.lambda;
    const double em = -std::expm1(-k * t);
    const double em2 = -std::expm1(-2.0 * k * t);
    return a * a * t - 2.0 * a * b / k * em + b * b / (2.0 * k) * em2;
}

double tail_expectation(const ModelParams& params, double t, double delta) {
    validate(params);
    if (!(delta > 0.0)) throw ConfigError("delta", "threshold must be positive");
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    if (t == 0.0) return delta < 1.0 ? 1.0 : 0.0; // pi_0 = 1 deterministically
    const double log_p0t = log_bond_price(params, 0.0, params.r0, t);
    const double a2 = a_t_squared(params, t);
    const double a_t = std::sqrt(a2);
    const double z = (log_p0t + 0.5 * a2 - std::log(delta)) / a_t;
    return std::exp(log_p0t) * normal_cdf(z);
}

double digital_put_gbm(double r, double lambda, double kappa, double T) {
    if (!(lambda > 0.0)) throw ConfigError("lambda", "risk aversion must be positive");
    if (!(kappa > 0.0)) throw ConfigError("kappa", "strike must be positive");
    if (!(T > 0.0)) throw ConfigError("T", "maturity must be positive");
    const double z = (std::log(kappa) - r * T + 0.5 * lambda * lambda * T) /
                     (lambda * std::sqrt(T));
    return std::exp(-r * T) * normal_cdf(z);
}

double long_bond_return(const ModelParams& params, double t, double r_t) {
    validate(params);
    if (t < 0.0) throw OrderingError("time must be nonnegative");
    return std::exp(long_rate(params) * t + (params.r0 - r_t) / params.k);
}

double ross_recovery_gap(const ModelParams& params) {
    validate(params);
    return params.lambda - params.sigma / params.k;
}

double long_bond_volatility(const ModelParams& params) {
    validate(params);
    return params.sigma / params.k;
}

double l1_blowup_time(const ModelParams& params, double gamma) {
    validate(params);
    if (!(gamma > 0.0)) throw ConfigError("gamma", "level must be positive");
    const double r_inf = long_rate(params);
    if (!(r_inf < 0.0))
        throw Error("L1 blow-up time requires a negative long rate");
    const double k = params.k;
    const double floor_term =
        r_inf - params.r0 <= 0.0 ? (r_inf - params.r0) / k : 0.0;
    const double convexity = params.sigma * params.sigma / (4.0 * k * k * k);
    return (floor_term - convexity - std::log(gamma)) / r_inf;
}

} // namespace vasicek
} // namespace longbond
