#include "longbond/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <vector>

namespace longbond {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double lo, hi;
    double value;
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(center);
    double result_kronrod = kWgk[7] * fc;
    double result_gauss = kWg[3] * fc;

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        result_kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
    }

    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = result_kronrod * half;
    p.error = std::fabs((result_kronrod - result_gauss) * half);
    return p;
}

struct PanelWorse {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.lo < b.lo; // tie-break keeps the ordering deterministic
    }
};

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw ConfigError("quadrature", "tolerances must be positive");
    if (cfg.max_subdivisions < 1)
        throw ConfigError("quadrature.max_subdivisions", "must be at least 1");

    QuadratureResult out;
    if (lo == hi) return out;

    const double sign = lo < hi ? 1.0 : -1.0;
    if (sign < 0.0) std::swap(lo, hi);

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    queue.push(evaluate_panel(f, lo, hi));
    double total_value = queue.top().value;
    double total_error = queue.top().error;
    int subdivisions = 1;

    const auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total_value)); };

    while (total_error > target()) {
        if (subdivisions >= cfg.max_subdivisions) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "quadrature error %.3e above tolerance %.3e after %d subdivisions",
                          total_error, target(), subdivisions);
            throw ConvergenceError(buf);
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = evaluate_panel(f, worst.lo, mid);
        const Panel right = evaluate_panel(f, mid, worst.hi);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }

    out.value = sign * total_value;
    out.error_estimate = total_error;
    out.subdivisions = subdivisions;
    return out;
}

} // namespace longbond
