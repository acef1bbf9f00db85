#pragma once

#include <functional>

#include "longbond/errors.hpp"

namespace longbond {

/// Tolerances for the adaptive integrator. Accuracy target is
/// max(abs_tol, rel_tol * |integral|) on the accumulated error estimate.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [lo, hi]. Always bisects the
/// interval with the largest error estimate, so results are deterministic.
/// Throws ConvergenceError when the subdivision budget is exhausted before
/// the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureConfig& cfg = {});

} // namespace longbond
