#pragma once

#include <optional>

#include "longbond/errors.hpp"

namespace longbond {

/// Parameters shared by both model families.
///
/// k: mean-reversion rate (1/time), theta: mean-reversion level (1/time),
/// sigma: short-rate volatility, lambda: risk aversion, r0: initial short
/// rate (1/time). In the classical (Brownian) convention sigma has units
/// time^(-3/2) and lambda time^(-1/2); with a dimensionless driver both are
/// 1/time.
struct ModelParams {
    double k;
    double theta;
    double sigma;
    double lambda;
    double r0;
};

/// Throws ConfigError naming the offending field when an invariant
/// (k > 0, sigma > 0, lambda > 0, all finite) is violated.
void validate(const ModelParams& params);

enum class UiRegime {
    UniformlyIntegrable,
    NotUiBoundary,
    NotUiUnbounded,
};

/// Classification of the pricing-kernel family by the sign of the long rate.
/// witness_p is present only in the UI regime; it is +infinity when
/// lambda = sigma/k exactly (any p > 1 passes the Lp test in that case).
struct UiVerdict {
    UiRegime regime;
    double long_rate;
    std::optional<double> witness_p;
    double zero_tolerance;
};

struct BondQuote {
    double t;
    double T;
    double price;
    double yield; // continuously compounded; equals the short rate at T = t
};

struct ShortRateMoments {
    double mean;
    double variance;
};

// Closed forms of the classical (Brownian-driven) model. All functions are
// pure; heavy expressions are assembled in log space and exponentiated once.
namespace vasicek {

/// Mean and variance of r_t: theta + (r0 - theta) e^{-kt} and
/// sigma^2 (1 - e^{-2kt}) / (2k).
ShortRateMoments short_rate_moments(const ModelParams& params, double t);

/// Asymptotic bond yield R_inf = theta + lambda sigma / k - sigma^2 / (2 k^2).
double long_rate(const ModelParams& params);

/// log P_tT given the short rate r_t. Throws InvalidHorizon for T < t.
double log_bond_price(const ModelParams& params, double t, double r_t, double T);

BondQuote bond_price(const ModelParams& params, double t, double r_t, double T);

/// log E[pi_t^p] for p >= 1; the linear-in-t coefficient is
/// -p (theta + lambda^2/2 - p (sigma/k - lambda)^2 / 2).
double lp_log_moment(const ModelParams& params, double p, double t);

/// Coefficient of t in lp_log_moment; nonpositive at the witness exponent.
double lp_linear_coefficient(const ModelParams& params, double p);

UiVerdict ui_classify(const ModelParams& params, double zero_tolerance = 1e-12);

/// A_t^2 = \int_0^t alpha_st^2 ds for alpha_st = sigma/k - lambda - (sigma/k) e^{k(s-t)}.
///
/// With a = sigma/k - lambda and b = sigma/k the integrand expands to
/// a^2 - 2ab e^{k(s-t)} + b^2 e^{2k(s-t)}, and term-by-term integration gives
///   A_t^2 = a^2 t - (2ab/k)(1 - e^{-kt}) + (b^2/(2k))(1 - e^{-2kt}).
double a_t_squared(const ModelParams& params, double t);

/// E[pi_t 1{pi_t > delta}] = P_0t N((log P_0t + A_t^2/2 - log delta)/A_t).
/// At t = 0 the kernel is deterministic: returns 1 if delta < 1 else 0.
double tail_expectation(const ModelParams& params, double t, double delta);

/// Price of a digital put on the natural numeraire in the constant-rate GBM
/// kernel model: e^{-rT} N[(log(e^{-rT} kappa) + lambda^2 T / 2)/(lambda sqrt(T))].
double digital_put_gbm(double r, double lambda, double kappa, double T);

/// Return on a unit long-bond investment: L_t = exp[R_inf t + (r0 - r_t)/k].
double long_bond_return(const ModelParams& params, double t, double r_t);

/// lambda - sigma/k; zero means the terminal measure equals the physical
/// measure (Ross recovery).
double ross_recovery_gap(const ModelParams& params);

/// Volatility of the long-bond return process, sigma/k.
double long_bond_volatility(const ModelParams& params);

/// Smallest time beyond which P_0t > gamma when the long rate is negative
/// (the L1 blow-up threshold). Requires long_rate < 0 and gamma > 0.
double l1_blowup_time(const ModelParams& params, double gamma);

} // namespace vasicek

/// Standard normal distribution function.
double normal_cdf(double x);

} // namespace longbond
