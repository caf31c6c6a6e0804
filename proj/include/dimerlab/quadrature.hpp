#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dimerlab {

// Adaptive Gauss-Kronrod (G7/K15) quadrature on a real interval.
// Bisects until the per-panel Kronrod-Gauss discrepancy meets the
// absolute tolerance share; complex-valued integrands are handled by
// treating the discrepancy in modulus.

namespace gk {

// K15 nodes (positive half) and weights; G7 weights on the odd entries.
inline constexpr double nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double wk[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
inline constexpr double wg[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

} // namespace gk

template <typename F, typename R = std::invoke_result_t<F, double>>
R gauss_kronrod_panel(F&& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    R fc = f(c);
    R kron = gk::wk[0] * fc;
    R gauss = gk::wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        R fp = f(c + h * gk::nodes[i]);
        R fm = f(c - h * gk::nodes[i]);
        kron += gk::wk[i] * (fp + fm);
        if (i % 2 == 0) gauss += gk::wg[i / 2] * (fp + fm);
    }
    kron *= h;
    gauss *= h;
    err = std::abs(kron - gauss);
    return kron;
}

template <typename F, typename R = std::invoke_result_t<F, double>>
R integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 60) {
    struct Panel { double a, b, err; R val; int depth; };
    double err0;
    R v0 = gauss_kronrod_panel(f, a, b, err0);
    if (err0 <= abs_tol) return v0;

    std::vector<Panel> stack;
    stack.push_back({a, b, err0, v0, 0});
    R total{};
    double budget = abs_tol;
    // Each converged panel consumes tolerance proportional to its width.
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double share = budget * (p.b - p.a) / (b - a);
        if (p.err <= share || p.depth >= max_depth) {
            total += p.val;
            continue;
        }
        double m = 0.5 * (p.a + p.b);
        double e1, e2;
        R v1 = gauss_kronrod_panel(f, p.a, m, e1);
        R v2 = gauss_kronrod_panel(f, m, p.b, e2);
        stack.push_back({p.a, m, e1, v1, p.depth + 1});
        stack.push_back({m, p.b, e2, v2, p.depth + 1});
    }
    return total;
}

} // namespace dimerlab
