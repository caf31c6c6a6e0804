#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include "dimerlab/gibbs.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/quadrature.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using dimerlab::Region;
using dimerlab::Matching;

// Brute-force enumeration of all perfect matchings (small regions only).
inline std::vector<Matching> enumerate_matchings(const Region& region, size_t cap = 2000000) {
    std::vector<Matching> out;
    if (region.white_count() != region.black_count()) return out;
    const int n = region.white_count();
    std::vector<int> edge_of_white(n, -1);
    std::vector<uint8_t> black_used(region.black_count(), 0);
    std::function<void(int)> rec = [&](int wi) {
        if (out.size() >= cap) throw std::runtime_error("enumeration cap exceeded");
        if (wi == n) {
            out.emplace_back(region, edge_of_white);
            return;
        }
        for (int ei : region.white_edges(wi)) {
            int bi = region.edge_black_index(ei);
            if (black_used[bi]) continue;
            black_used[bi] = 1;
            edge_of_white[wi] = ei;
            rec(wi + 1);
            edge_of_white[wi] = -1;
            black_used[bi] = 0;
        }
    };
    rec(0);
    return out;
}

// Direct 2D torus quadrature of the bulk kernel: midpoint grid over the
// torus with two-stage refinement of the cells near the integrand's two
// simple zeros of the denominator (the singularity splitting).
inline double torus_kernel_quadrature(const dimerlab::SlopeParams& s, int m, int n,
                                      int grid = 1024) {
    const double pi = 3.14159265358979323846;
    const double step = 2 * pi / grid;
    auto value = [&](double phi, double psi) {
        std::complex<double> z1 = std::polar(1.0, phi);
        std::complex<double> w1 = std::polar(1.0, psi);
        std::complex<double> num = std::polar(1.0, (-m + n) * phi - n * psi);
        return (num / (s.a + s.b * z1 + s.c * w1)).real();
    };
    // zeros of a + b z + c w on the torus: (z,w) = (z0,w0) and its conjugate
    const double phi0 = std::arg(s.z), psi0 = std::arg(s.w);
    auto near_pole = [&](double phi, double psi, double radius) {
        auto wrapped = [&](double d) {
            d = std::fmod(std::abs(d), 2 * pi);
            return std::min(d, 2 * pi - d);
        };
        return (wrapped(phi - phi0) < radius && wrapped(psi - psi0) < radius) ||
               (wrapped(phi + phi0) < radius && wrapped(psi + psi0) < radius);
    };
    const double refine_radius = 16 * step;
    double total = 0.0;
    for (int i = 0; i < grid; ++i) {
        double phi = (i + 0.5) * step;
        for (int j = 0; j < grid; ++j) {
            double psi = (j + 0.5) * step;
            if (near_pole(phi, psi, refine_radius)) continue;
            total += value(phi, psi);
        }
    }
    total *= step * step;
    // refined pass over the excluded cells (1/r is integrable; fine midpoint
    // converges once the pole sits inside well-resolved cells)
    const int sub = 160;
    const double fine = step / sub;
    for (int i = 0; i < grid; ++i) {
        double phi = (i + 0.5) * step;
        for (int j = 0; j < grid; ++j) {
            double psi = (j + 0.5) * step;
            if (!near_pole(phi, psi, refine_radius)) continue;
            double cell = 0.0;
            for (int ii = 0; ii < sub; ++ii)
                for (int jj = 0; jj < sub; ++jj)
                    cell += value(phi - step / 2 + (ii + 0.5) * fine,
                                  psi - step / 2 + (jj + 0.5) * fine);
            total += cell * fine * fine;
        }
    }
    return total / (4.0 * pi * pi);
}

// Lobachevsky via its Fourier series L(x) = (1/2) sum sin(2kx)/k^2.
inline double lobachevsky_series(double x, int terms = 200000) {
    double sum = 0.0;
    for (int k = terms; k >= 1; --k) sum += std::sin(2.0 * k * x) / (double(k) * k);
    return 0.5 * sum;
}

// Composite Simpson on -log(2 sin t), split geometrically toward both
// endpoints; an integrator independent of the adaptive Gauss-Kronrod path.
inline double lobachevsky_simpson(double x) {
    const double pi = 3.14159265358979323846;
    double y = std::fmod(x, pi);
    if (y < 0) y += pi;
    double sign = 1.0;
    if (y > pi / 2) {
        y = pi - y;
        sign = -1.0;
    }
    if (y < 1e-300) return 0.0;
    auto f = [](double t) { return -std::log(2.0 * std::sin(t)); };
    // geometric splits toward 0
    double total = 0.0;
    double hi = y;
    for (int level = 0; level < 60; ++level) {
        double lo = hi / 2;
        // Simpson with 64 panels on [lo, hi]
        int N = 64;
        double h = (hi - lo) / N;
        double acc = f(lo) + f(hi);
        for (int i = 1; i < N; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        total += acc * h / 3.0;
        hi = lo;
        if (hi < 1e-14) break;
    }
    // remaining [0, hi]: integrand ~ -log(2t), integral ~ t(1 - log 2t)
    total += hi * (1.0 - std::log(2.0 * hi));
    return sign * total;
}

} // namespace oracles
