#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "longbond/quadrature.hpp"

using namespace longbond;

TEST_CASE("polynomials integrate to machine precision in one panel") {
    const auto quartic = [](double x) { return x * x * x * x; };
    const auto result = integrate_adaptive(quartic, 0.0, 1.0);
    CHECK(result.value == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(result.subdivisions == 1);
}

TEST_CASE("smooth transcendental integrands meet the requested tolerance") {
    const auto result =
        integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846);
    CHECK(std::fabs(result.value - 2.0) <= 1e-12);
    CHECK(std::fabs(result.value - 2.0) <= result.error_estimate + 1e-14);

    const auto gaussian = integrate_adaptive(
        [](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(gaussian.value == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-12));
}

TEST_CASE("boundary layers force subdivision but still converge") {
    // \int_0^1 1/sqrt(x + a) dx = 2 (sqrt(1 + a) - sqrt(a))
    const double a = 1e-6;
    const auto result =
        integrate_adaptive([a](double x) { return 1.0 / std::sqrt(x + a); }, 0.0, 1.0);
    const double exact = 2.0 * (std::sqrt(1.0 + a) - std::sqrt(a));
    CHECK(result.value == doctest::Approx(exact).epsilon(1e-9));
    CHECK(result.subdivisions > 4);
}

TEST_CASE("reversed interval flips the sign") {
    const auto forward = integrate_adaptive([](double x) { return x * x; }, 0.0, 2.0);
    const auto backward = integrate_adaptive([](double x) { return x * x; }, 2.0, 0.0);
    CHECK(forward.value == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(backward.value == doctest::Approx(-forward.value).epsilon(1e-15));
}

TEST_CASE("degenerate interval integrates to zero") {
    const auto result = integrate_adaptive([](double x) { return std::exp(x); }, 1.5, 1.5);
    CHECK(result.value == 0.0);
}

TEST_CASE("exhausted subdivision budget raises ConvergenceError") {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 2;
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-12); }, 0.0, 1.0, cfg),
        ConvergenceError);
}

TEST_CASE("invalid tolerances are rejected") {
    QuadratureConfig cfg;
    cfg.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, cfg), ConfigError);
}
