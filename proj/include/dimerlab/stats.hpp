#pragma once

#include <cmath>
#include <stdexcept>

namespace dimerlab {

// Regularized incomplete gamma functions (series + continued fraction),
// good to ~1e-12 relative; enough for chi-square thresholds.
namespace detail {

inline double gamma_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf(double a, double x) {
    // Lentz's algorithm for the continued fraction of Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

// P(a,x): lower regularized incomplete gamma.
inline double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p domain");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return detail::gamma_series(a, x);
    return 1.0 - detail::gamma_cf(a, x);
}

// Survival function of the chi-square distribution with k dof.
inline double chi_square_sf(double stat, int dof) {
    if (stat <= 0) return 1.0;
    return 1.0 - gamma_p(0.5 * dof, 0.5 * stat);
}

} // namespace dimerlab
