#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "longbond/levy_vasicek.hpp"
#include "longbond/montecarlo.hpp"
#include "longbond/vasicek.hpp"

using namespace longbond;

namespace {

const ModelParams kClassical{0.2, 0.03, 0.01, 0.5, 0.05};
const ModelParams kLevyParams{0.2, 0.03, 0.05, 0.5, 0.05};

LevyVasicekModel poisson_model(double mu = 1.0) {
    return LevyVasicekModel(kLevyParams, LevyExponentModel::compensated_poisson(mu));
}

LevyVasicekModel brownian_model(const ModelParams& params) {
    return LevyVasicekModel(params, LevyExponentModel::brownian(1.0));
}

// Brownian quadratic-in-exponentials antiderivative of psi(alpha_uT)
// = alpha^2/2; same algebra as the classical A_t^2 computation.
double brownian_psi_integral(const ModelParams& p, double t, double T) {
    const double b = p.sigma / p.k;
    const double a = b - p.lambda;
    const double tau = T - t;
    const double em = -std::expm1(-p.k * tau);
    const double em2 = -std::expm1(-2.0 * p.k * tau);
    return 0.5 * (a * a * tau - 2.0 * a * b / p.k * em + b * b / (2.0 * p.k) * em2);
}

} // namespace

TEST_CASE("alpha profile") {
    const auto model = poisson_model();
    CHECK(model.alpha(5.0, 5.0) == doctest::Approx(-kLevyParams.lambda).epsilon(1e-15));
    CHECK(model.alpha(0.0, 1e3 / kLevyParams.k) ==
          doctest::Approx(model.alpha_limit()).epsilon(1e-12));
    CHECK(model.alpha(1.0, 5.0) ==
          doctest::Approx(0.25 - 0.5 - 0.25 * std::exp(-0.8)).epsilon(1e-14));
    CHECK_THROWS_AS(model.alpha(5.0, 1.0), OrderingError);
}

TEST_CASE("domain constraints are checked eagerly at construction") {
    // alpha range [-lambda, sigma/k - lambda] and its p_max multiples must be
    // interior; a tightly bounded custom exponent rejects lambda = 0.5, p_max = 4.
    const auto narrow = LevyExponentModel::custom(
        [](double a) { return 0.5 * a * a; }, [](double a) { return a; },
        [](double) { return 1.0; }, ExponentDomain{-1.5, 1.5});
    CHECK_THROWS_AS(LevyVasicekModel(kLevyParams, narrow, 4.0), DomainError);
    CHECK_NOTHROW(LevyVasicekModel(kLevyParams, narrow, 2.0));
}

TEST_CASE("psi integral via substitution quadrature") {
    const auto model = poisson_model();
    CHECK(model.psi_integral(3.0, 3.0) == 0.0);

    SUBCASE("constant profile in the vanishing-volatility limit") {
        const ModelParams tiny{0.2, 0.03, 1e-12, 0.5, 0.05};
        const LevyVasicekModel flat(tiny, LevyExponentModel::compensated_poisson(1.0));
        const double expected = flat.driver().psi(-0.5) * 10.0;
        CHECK(flat.psi_integral(0.0, 10.0) == doctest::Approx(expected).epsilon(1e-8));
    }

    SUBCASE("brownian driver reproduces the closed-form integral") {
        const ModelParams p{0.2, 0.03, 0.05, 0.5, 0.05};
        const auto bm = brownian_model(p);
        for (const auto [t, T] : {std::pair{0.0, 10.0}, {2.0, 7.0}, {0.0, 200.0}}) {
            const double closed = brownian_psi_integral(p, t, T);
            CHECK(std::fabs(bm.psi_integral(t, T) - closed) <= 1e-9 * std::max(1.0, closed));
        }
    }

    SUBCASE("halving the tolerance moves the value less than the error estimate") {
        QuadratureConfig base;
        const auto coarse = model.psi_integral_with_error(0.0, 50.0, base);
        QuadratureConfig fine = base;
        fine.rel_tol *= 0.5;
        const auto refined = model.psi_integral_with_error(0.0, 50.0, fine);
        CHECK(std::fabs(coarse.value - refined.value) <= coarse.error_estimate + 1e-15);
    }

    SUBCASE("starved subdivision budget raises ConvergenceError") {
        // A wide alpha range bends the substituted integrand enough that the
        // default tolerance needs three panels.
        const LevyVasicekModel wide({0.2, 0.0, 5.0, 26.0, 0.0},
                                    LevyExponentModel::compensated_poisson(1.0), 1.0);
        QuadratureConfig starved;
        starved.max_subdivisions = 2;
        CHECK_THROWS_AS(wide.psi_integral(0.0, 10.0, starved), ConvergenceError);
        CHECK_NOTHROW(wide.psi_integral(0.0, 10.0));
    }
}

TEST_CASE("integral stays within the mean-value envelope of its asymptote") {
    const auto model = poisson_model();
    const auto& driver = model.driver();
    const double a = model.alpha_limit();
    const double b = kLevyParams.sigma / kLevyParams.k;
    const double envelope =
        b / kLevyParams.k *
        (std::fabs(driver.psi_prime(a)) + std::fabs(driver.psi_prime(-kLevyParams.lambda)));
    for (double t : {0.5, 1.0, 5.0, 20.0, 100.0, 1000.0}) {
        const double gap = std::fabs(model.psi_integral(0.0, t) - driver.psi(a) * t);
        CHECK(gap <= envelope);
    }
}

TEST_CASE("bond price") {
    const auto model = poisson_model();
    CHECK(model.bond_price(4.0, 0.03, 4.0).price == 1.0);
    CHECK_THROWS_AS(model.bond_price(2.0, 0.03, 1.0), InvalidHorizon);

    SUBCASE("matches the simulated kernel expectation") {
        const auto estimate =
            estimate_bond_price(model, 10.0, {300'000, 20, 10.0, 42, Scheme::ExactJumpTimes});
        const double quadrature_price = model.bond_price(0.0, kLevyParams.r0, 10.0).price;
        CHECK(std::fabs(estimate.mean - quadrature_price) <= 3.0 * estimate.std_error);
    }
}

TEST_CASE("brownian reduction reproduces every classical quantity") {
    const auto bm = brownian_model(kClassical);

    CHECK(std::fabs(bm.long_rate() - vasicek::long_rate(kClassical)) <=
          1e-12 * std::fabs(vasicek::long_rate(kClassical)));

    for (double T : {1.0, 5.0, 10.0, 50.0}) {
        const double levy = bm.log_bond_price(0.0, kClassical.r0, T);
        const double classical = vasicek::log_bond_price(kClassical, 0.0, kClassical.r0, T);
        CHECK(std::fabs(levy - classical) <= 1e-8 * std::max(1.0, std::fabs(classical)));
    }
    for (double p : {1.0, 1.5, 2.0}) {
        for (double t : {1.0, 10.0}) {
            const double levy = bm.lp_log_moment(p, t);
            const double classical = vasicek::lp_log_moment(kClassical, p, t);
            CHECK(std::fabs(levy - classical) <= 1e-8 * std::max(1.0, std::fabs(classical)));
        }
    }
    CHECK(bm.long_bond_return(5.0, 0.04) ==
          doctest::Approx(vasicek::long_bond_return(kClassical, 5.0, 0.04)).epsilon(1e-12));
    CHECK(bm.long_bond_excess_return() ==
          doctest::Approx(kClassical.lambda * kClassical.sigma / kClassical.k).epsilon(1e-12));
}

TEST_CASE("long rate") {
    const auto model = poisson_model();
    const auto& psi = model.driver();
    CHECK(model.long_rate() ==
          doctest::Approx(0.03 + psi.psi(-0.5) - psi.psi(-0.25)).epsilon(1e-15));

    const ModelParams tiny{0.2, 0.03, 1e-16, 0.5, 0.05};
    const LevyVasicekModel flat(tiny, LevyExponentModel::compensated_poisson(1.0));
    CHECK(flat.long_rate() == doctest::Approx(0.03).epsilon(1e-13));

    // lambda = sigma/k: the asymptote argument vanishes and psi(0) = 0.
    const ModelParams recovery{0.2, 0.03, 0.05, 0.25, 0.05};
    const LevyVasicekModel rec(recovery, LevyExponentModel::compensated_poisson(1.0));
    CHECK(rec.long_rate() == doctest::Approx(0.03 + rec.driver().psi(-0.25)).epsilon(1e-15));

    // Finite-maturity yields approach it monotonically.
    double previous = std::numeric_limits<double>::infinity();
    for (double T : {1e2, 1e3, 1e4}) {
        const double gap =
            std::fabs(-model.log_bond_price(0.0, kLevyParams.r0, T) / T - model.long_rate());
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous <= 1e-4);
}

TEST_CASE("lp log moment") {
    const auto model = poisson_model();
    CHECK(model.lp_log_moment(1.5, 0.0) == 0.0);
    for (double t : {1.0, 5.0, 25.0}) {
        CHECK(std::fabs(model.lp_log_moment(1.0, t) -
                        model.log_bond_price(0.0, kLevyParams.r0, t)) <= 1e-10);
    }

    SUBCASE("simulated fractional moment") {
        PathSimulator sim(model, {1'000'000, 10, 5.0, 102, Scheme::ExactJumpTimes});
        const auto j = sim.grid_index(5.0);
        double sum = 0.0, sum_sq = 0.0;
        sim.for_each_path([&](const SamplePath& path) {
            const double x = std::exp(1.5 * path.log_pi[j]);
            sum += x;
            sum_sq += x * x;
        });
        const double n = 1e6;
        const double mean = sum / n;
        const double se = std::sqrt(((sum_sq - n * mean * mean) / (n - 1.0)) / n);
        CHECK(std::fabs(mean - std::exp(model.lp_log_moment(1.5, 5.0))) <= 3.0 * se);
    }

    SUBCASE("p beyond the eager bound is rejected lazily") {
        const auto narrow = LevyExponentModel::custom(
            [](double a) { return 0.5 * a * a; }, [](double a) { return a; },
            [](double) { return 1.0; }, ExponentDomain{-1.2, 1.2});
        const LevyVasicekModel bounded(kLevyParams, narrow, 2.0);
        CHECK_NOTHROW(bounded.lp_log_moment(2.0, 1.0));
        CHECK_THROWS_AS(bounded.lp_log_moment(2.5, 1.0), DomainError);
    }
}

TEST_CASE("ui classification with witness search") {
    SUBCASE("positive long rate finds a feasible witness") {
        const auto model = poisson_model();
        const auto verdict = model.ui_classify();
        CHECK(verdict.regime == UiRegime::UniformlyIntegrable);
        REQUIRE(verdict.witness_p.has_value());
        CHECK(*verdict.witness_p > 1.0);
        CHECK(model.lp_witness_predicate(*verdict.witness_p) < 0.0);
    }
    SUBCASE("theta at the exact compensation point is the boundary") {
        const auto psi = LevyExponentModel::compensated_poisson(1.0);
        const double theta = psi.psi(0.05 / 0.2 - 0.5) - psi.psi(-0.5);
        const LevyVasicekModel model({0.2, theta, 0.05, 0.5, 0.05}, psi);
        CHECK(model.ui_classify().regime == UiRegime::NotUiBoundary);
    }
    SUBCASE("strongly negative theta is unbounded") {
        const LevyVasicekModel model({0.2, -1.0, 0.05, 0.5, 0.05},
                                     LevyExponentModel::compensated_poisson(1.0));
        CHECK(model.ui_classify().regime == UiRegime::NotUiUnbounded);
    }
    SUBCASE("lambda = sigma/k admits every exponent") {
        const LevyVasicekModel model({0.2, 0.03, 0.05, 0.25, 0.05},
                                     LevyExponentModel::compensated_poisson(1.0));
        const auto verdict = model.ui_classify();
        CHECK(verdict.regime == UiRegime::UniformlyIntegrable);
        REQUIRE(verdict.witness_p.has_value());
        CHECK(std::isinf(*verdict.witness_p));
    }
    SUBCASE("domain squeezed onto p <= 1.001 reports WitnessNotFound") {
        // alpha_limit = 0.2; the custom domain caps the witness exponent at
        // ~1.0001, leaving no usable bracket above 1.
        const auto narrow = LevyExponentModel::custom(
            [](double a) { return 0.5 * a * a; }, [](double a) { return a; },
            [](double) { return 1.0; }, ExponentDomain{-1.0, 0.20002});
        const LevyVasicekModel model({0.2, 0.1, 0.05, 0.05, 0.05}, narrow, 1.00005);
        CHECK(model.long_rate() > 0.0);
        CHECK_THROWS_AS(model.ui_classify(), WitnessNotFound);
    }
}

TEST_CASE("witness-p moment stays bounded along the time grid") {
    const auto model = poisson_model();
    const auto verdict = model.ui_classify();
    const double p = *verdict.witness_p;
    const auto& driver = model.driver();
    const double a = model.alpha_limit();
    const double b = kLevyParams.sigma / kLevyParams.k;
    // Bounded terms: the (r0 - theta) loading plus the mean-value envelope of
    // the p-scaled integral around its asymptote.
    const double bound =
        (p / kLevyParams.k) * std::fabs(kLevyParams.r0 - kLevyParams.theta) +
        p * b / kLevyParams.k *
            (std::fabs(driver.psi_prime(p * a)) +
             std::fabs(driver.psi_prime(-p * kLevyParams.lambda))) +
        1e-8;
    for (double t : {0.0, 1.0, 5.0, 20.0, 100.0, 1000.0, 10000.0}) {
        CHECK(model.lp_log_moment(p, t) <= bound);
    }
}

TEST_CASE("measure change statistics") {
    const auto model = poisson_model();

    SUBCASE("integrals agree with direct time-domain quadrature") {
        const double t = 20.0;
        const auto stats = model.measure_change_stats(t, 1.0);
        QuadratureConfig tight;
        tight.abs_tol = 1e-13;
        const auto& driver = model.driver();
        const auto mean_oracle = integrate_adaptive(
            [&](double s) {
                const double a = model.alpha(s, t);
                return driver.psi_prime(a) * a;
            },
            0.0, t, tight);
        const auto var_oracle = integrate_adaptive(
            [&](double s) {
                const double a = model.alpha(s, t);
                return driver.psi_double_prime(a) * a * a;
            },
            0.0, t, tight);
        CHECK(stats.mean_star == doctest::Approx(mean_oracle.value).epsilon(1e-9));
        CHECK(stats.variance_star == doctest::Approx(var_oracle.value).epsilon(1e-9));
        CHECK(stats.variance_star >= 0.0);
    }

    SUBCASE("drift constant vanishes exactly at the recovery point") {
        const LevyVasicekModel recovery({0.2, 0.03, 0.05, 0.25, 0.05},
                                        LevyExponentModel::compensated_poisson(1.0));
        CHECK(recovery.measure_change_stats(5.0, 1.0).drift_constant == 0.0);
        CHECK(model.measure_change_stats(5.0, 1.0).drift_constant > 0.0);
    }

    SUBCASE("boundary-regime drift statistic approaches the constant") {
        // theta pinned so the long rate vanishes; mu = 1 keeps the constant
        // small, so delta = 1 (log delta = 0) is the clean finite-t probe.
        const auto psi = LevyExponentModel::compensated_poisson(1.0);
        const double theta = psi.psi(-0.25) - psi.psi(-0.5);
        const LevyVasicekModel boundary({0.2, theta, 0.05, 0.5, 0.05}, psi);
        REQUIRE(std::fabs(boundary.long_rate()) <= 1e-15);
        const auto stats = boundary.measure_change_stats(50.0, 1.0);
        const double statistic = (stats.mean_star - stats.barrier) / 50.0;
        CHECK(std::fabs(statistic - stats.drift_constant) <= 0.05 * stats.drift_constant);
    }
}

TEST_CASE("chebyshev regime: linear drift growth and linearly bounded variance") {
    // Larger jump rate lifts the drift constant enough that the log(omega t)/t
    // correction is negligible from t = 50 on.
    const double mu = 10.0;
    const auto psi = LevyExponentModel::compensated_poisson(mu);
    const double alpha_limit = 0.05 / 0.2 - 2.0;
    const double theta = psi.psi(alpha_limit) - psi.psi(-2.0);
    const LevyVasicekModel boundary({0.2, theta, 0.05, 2.0, 0.05}, psi, 1.5);
    REQUIRE(std::fabs(boundary.long_rate()) <= 1e-14);

    const double omega = 1.0;
    const double var_ceiling =
        1.05 * std::max(psi.psi_double_prime(alpha_limit) * alpha_limit * alpha_limit,
                        psi.psi_double_prime(-2.0) * 4.0);
    for (double t : {50.0, 100.0, 200.0}) {
        const auto stats = boundary.measure_change_stats(t, omega * t);
        const double statistic = (stats.mean_star - stats.barrier) / t;
        CHECK(std::fabs(statistic - stats.drift_constant) <= 0.05 * stats.drift_constant);
        CHECK(stats.variance_star / t <= var_ceiling);
        CHECK(stats.variance_star / t >= 0.0);
    }
}

TEST_CASE("long bond return") {
    const auto model = poisson_model();
    CHECK(model.long_bond_return(0.0, kLevyParams.r0) == 1.0);

    const double t = 5.0, r_t = 0.04, T = 1e4;
    const double ratio = std::exp(model.log_bond_price(t, r_t, T) -
                                  model.log_bond_price(0.0, kLevyParams.r0, T));
    CHECK(std::fabs(ratio - model.long_bond_return(t, r_t)) /
              model.long_bond_return(t, r_t) <=
          1e-4);
}

TEST_CASE("ross recovery gap and excess return") {
    const auto model = poisson_model();
    CHECK(model.ross_recovery_gap() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(model.long_bond_volatility() == doctest::Approx(0.25).epsilon(1e-15));

    const auto& psi = model.driver();
    CHECK(model.long_bond_excess_return() ==
          doctest::Approx(psi.psi(0.25) + psi.psi(-0.5) - psi.psi(-0.25)).epsilon(1e-14));

    const ModelParams tiny{0.2, 0.03, 1e-16, 0.5, 0.05};
    const LevyVasicekModel flat(tiny, LevyExponentModel::compensated_poisson(1.0));
    CHECK(std::fabs(flat.long_bond_excess_return()) <= 1e-12);
}
