#pragma once

#include "dimerlab/lattice.hpp"

#include <complex>
#include <utility>

namespace dimerlab {

// A bulk slope (p_a, p_b, p_c) on the simplex, its angles theta = pi*p,
// triangle sides a = sin(theta_a) etc. (circumdiameter 1), and the
// unimodular z = -e^{-i theta_c}, w = -e^{i theta_b} with a + b z + c w = 0.
struct SlopeParams {
    double pa, pb, pc;
    double theta_a, theta_b, theta_c;
    double a, b, c;
    std::complex<double> z, w;
    bool facet = false; // some p hits 0 or 1: usable for sigma only
};

SlopeParams slope_from_p(double pa, double pb, double pc);

// Displacement indices (m,n) with black = white + e1 + m*x_hat + n*y_hat,
// computed from the label pair.
std::pair<int, int> kernel_offset(Coord white, Coord black);

// Exact ergodic-Gibbs-measure kernel K^{-1}_abc(b,w) at displacement (m,n):
// the double contour integral is reduced by residues in the first variable
// and integrated adaptively in the second.
double bulk_kernel(const SlopeParams& slope, int m, int n, double abs_tol = 1e-10);

// Leading asymptotics of the same kernel.
double bulk_kernel_asymptotic(const SlopeParams& slope, int m, int n);

// Gauge form K^{-1}_nu(b,w) = a (a/b)^m (b/c)^n K^{-1}_abc(b,w) for labeled
// vertices, together with the gauge functions F.
double gauge_kernel(const SlopeParams& slope, Coord white, Coord black, double abs_tol = 1e-10);
std::complex<double> gauge_F_white(const SlopeParams& slope, Coord w);
std::complex<double> gauge_F_black(const SlopeParams& slope, Coord b);

// Lobachevsky function L(x) = -int_0^x log|2 sin t| dt, pi-periodic.
double lobachevsky(double x);

// sigma(p) = -(1/pi) (L(pi p_a) + L(pi p_b) + L(pi p_c)).
double surface_tension(double pa, double pb, double pc);

} // namespace dimerlab
