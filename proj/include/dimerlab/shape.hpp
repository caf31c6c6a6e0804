#pragma once

#include "dimerlab/lattice.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace dimerlab {

// Limit-shape analytics in (x_hat, y_hat) coordinates.  The boxed plane
// partition (BPP) lives on the side-1 hexagon whose liquid region is the
// inscribed disk x^2 - x y + y^2 < 3/4.

using PhiFunction = std::function<std::complex<double>(double, double)>;

// Complex slope of the BPP limit shape; branch chosen so Im(phi) > 0.
std::complex<double> phi_bpp(double x, double y);

// Beltrami coefficient xi = (Phi - e^{i pi/3}) / (Phi - e^{-i pi/3}).
std::complex<double> beltrami_of_phi(std::complex<double> phi);

// Upper-half-plane-valued field sampled on an axis-aligned grid.
struct ComplexSlopeField {
    double x0 = 0, y0 = 0, h = 0;
    int nx = 0, ny = 0;
    std::vector<std::complex<double>> phi; // row-major [j*nx + i]; NaN outside the domain

    std::complex<double> at(int i, int j) const { return phi[size_t(j) * nx + i]; }
    bool valid(int i, int j) const;
    double x_of(int i) const { return x0 + i * h; }
    double y_of(int j) const { return y0 + j * h; }
};

// Sample a callable on a centered grid; outside points become NaN.
ComplexSlopeField sample_field(const PhiFunction& fn, double extent, int grid);
ComplexSlopeField sample_bpp_field(double extent, int grid);

// max |Phi_x + Phi Phi_y| over interior grid points (central differences).
double burgers_residual(const ComplexSlopeField& field);

// Beltrami coefficient of a field, same grid layout.
ComplexSlopeField beltrami(const ComplexSlopeField& field);

// Path integral of dH = log(Phi-1) dx - log(1/Phi - 1) dy along the segment
// from `from` to `to` ((x,y) packed as complex), trapezoid rule with `steps`
// panels and continuous branch tracking.
std::complex<double> complex_height_increment(const PhiFunction& fn, std::complex<double> from,
                                              std::complex<double> to, int steps);

// Same along a closed polygon.
std::complex<double> complex_height_loop(const PhiFunction& fn,
                                         const std::vector<std::complex<double>>& corners,
                                         int steps_per_edge);

// The standard conformal coordinate z = i (y - omega x), omega = e^{i pi/3};
// |z|^2 = x^2 - xy + y^2.
std::complex<double> standard_coordinate(double x, double y);
std::pair<double, double> standard_coordinate_inverse(std::complex<double> z);

// Diffeomorphism from the inscribed disk (radius sqrt(3)/2) to the unit disk
// and its inverse.
std::complex<double> phi_disk_map_bpp(double x, double y);
std::pair<double, double> phi_inverse_bpp(std::complex<double> zeta);

// Local lozenge densities (p_a, p_b, p_c) recovered from the complex slope.
std::array<double, 3> bpp_height_slope_consistency(double x, double y);
std::array<double, 3> slope_fractions_of_phi(std::complex<double> phi);

} // namespace dimerlab
