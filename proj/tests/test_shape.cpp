#include "dimerlab/shape.hpp"

#include "dimerlab/rng.hpp"

#include <doctest.h>

using namespace dimerlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kOmega{0.5, std::sqrt(3.0) / 2.0};

// random point strictly inside the inscribed circle
std::pair<double, double> random_interior(StreamRng& rng, double rmax = 0.85) {
    for (;;) {
        double x = 1.8 * rng.uniform() - 0.9;
        double y = 1.8 * rng.uniform() - 0.9;
        double r2 = x * x - x * y + y * y;
        if (r2 < 0.75 * rmax * rmax) return {x, y};
    }
}
} // namespace

TEST_CASE("phi at the center and the quadratic identity") {
    CHECK(std::abs(phi_bpp(0, 0) - kOmega) < 1e-12);

    StreamRng rng(31, 0);
    for (int t = 0; t < 1000; ++t) {
        auto [x, y] = random_interior(rng);
        std::complex<double> phi = phi_bpp(x, y);
        CHECK(phi.imag() > 0);
        std::complex<double> lhs = (-phi * x + y) * (-phi * x + y);
        std::complex<double> rhs = 1.0 - phi + phi * phi;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK_THROWS_AS(phi_bpp(0.9, 0.0), Error);
}

TEST_CASE("burgers residual") {
    // constant fields solve the equation exactly
    ComplexSlopeField constant =
        sample_field([](double, double) { return kOmega; }, 0.3, 33);
    CHECK(burgers_residual(constant) == doctest::Approx(0.0).epsilon(1e-14));

    // BPP field: residual decays at second order (h = 5e-3, 2.5e-3, 1.25e-3)
    double extent = 0.45;
    double r1 = burgers_residual(sample_bpp_field(extent, 181));
    double r2 = burgers_residual(sample_bpp_field(extent, 361));
    double r4 = burgers_residual(sample_bpp_field(extent, 721));
    CHECK(r1 > r2);
    CHECK(r2 > r4);
    double order12 = std::log2(r1 / r2);
    double order24 = std::log2(r2 / r4);
    CHECK(order12 >= 1.8);
    CHECK(order24 >= 1.8);

    // non-vacuousness: a linear-in-x perturbation leaves a visible residual
    ComplexSlopeField skew =
        sample_field([](double x, double) { return kOmega + 0.2 * x; }, 0.3, 33);
    CHECK(burgers_residual(skew) > 0.01);
}

TEST_CASE("beltrami coefficient") {
    CHECK(std::abs(beltrami_of_phi(kOmega)) < 1e-14);

    // rotational invariance of |xi| for the BPP at fixed r
    StreamRng rng(77, 1);
    for (double r : {0.2, 0.5, 0.7}) {
        double base = -1;
        for (int k = 0; k < 24; ++k) {
            double theta = 2 * kPi * k / 24.0;
            std::complex<double> u = std::polar(r, theta);
            auto [x, y] = standard_coordinate_inverse(u);
            double a = std::abs(beltrami_of_phi(phi_bpp(x, y)));
            if (base < 0)
                base = a;
            else
                CHECK(a == doctest::Approx(base).epsilon(1e-10));
        }
    }

    // |xi| < 1 everywhere sampled
    for (int t = 0; t < 300; ++t) {
        auto [x, y] = random_interior(rng);
        CHECK(std::abs(beltrami_of_phi(phi_bpp(x, y))) < 1.0);
    }
}

TEST_CASE("complex height increments") {
    PhiFunction bpp = [](double x, double y) { return phi_bpp(x, y); };

    // closed loop: integral -> 0 at second order in the step (asymmetric
    // corners, so trapezoid errors cannot cancel by symmetry)
    std::vector<std::complex<double>> quad{{-0.1, -0.22}, {0.3, -0.05}, {0.24, 0.3}, {-0.17, 0.2}};
    double c1 = std::abs(complex_height_loop(bpp, quad, 32));
    double c2 = std::abs(complex_height_loop(bpp, quad, 64));
    double c4 = std::abs(complex_height_loop(bpp, quad, 128));
    CHECK(std::log2(c1 / c2) >= 1.7);
    CHECK(std::log2(c2 / c4) >= 1.7);

    // Im dH = (pi - theta_c) dx + (pi - theta_a) dy at sampled points
    StreamRng rng(13, 2);
    for (int t = 0; t < 50; ++t) {
        auto [x, y] = random_interior(rng, 0.6);
        auto p = bpp_height_slope_consistency(x, y);
        double step = 1e-4;
        std::complex<double> along_x =
            complex_height_increment(bpp, {x - step / 2, y}, {x + step / 2, y}, 4);
        std::complex<double> along_y =
            complex_height_increment(bpp, {x, y - step / 2}, {x, y + step / 2}, 4);
        CHECK(along_x.imag() / step == doctest::Approx(kPi - kPi * p[2]).epsilon(1e-6));
        CHECK(along_y.imag() / step == doctest::Approx(kPi - kPi * p[0]).epsilon(1e-6));
        // (3/pi) Im dH = 2 (dx + dy) - d h_bar with d h_bar = (3p_c-1)dx + (3p_a-1)dy
        double imdH = along_x.imag() + along_y.imag();
        double dhbar = (3 * p[2] - 1) + (3 * p[0] - 1);
        CHECK(3.0 / kPi * imdH / step == doctest::Approx(2.0 * 2.0 - dhbar).epsilon(1e-6));
    }
}

TEST_CASE("disk maps") {
    auto [x0, y0] = phi_inverse_bpp(0.0);
    CHECK(x0 == doctest::Approx(0.0));
    CHECK(y0 == doctest::Approx(0.0));

    StreamRng rng(3, 3);
    for (int t = 0; t < 1000; ++t) {
        double r = 0.99 * std::sqrt(rng.uniform());
        double th = 2 * kPi * rng.uniform();
        std::complex<double> zeta = std::polar(r, th);
        auto [x, y] = phi_inverse_bpp(zeta);
        std::complex<double> back = phi_disk_map_bpp(x, y);
        CHECK(std::abs(back - zeta) < 1e-12);
    }

    // |zeta| -> 1 forces r -> sqrt(3)/2 (hemisphere equator)
    auto [xe, ye] = phi_inverse_bpp(std::polar(1.0, 0.7));
    CHECK(std::sqrt(xe * xe - xe * ye + ye * ye) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));

    CHECK_THROWS_AS(phi_inverse_bpp(std::polar(1.1, 0.0)), Error);
    CHECK_THROWS_AS(phi_disk_map_bpp(0.99, 0.0), Error);
}

TEST_CASE("slope fractions from the complex slope") {
    auto p0 = bpp_height_slope_consistency(0, 0);
    CHECK(p0[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(p0[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(p0[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));

    StreamRng rng(91, 4);
    for (int t = 0; t < 400; ++t) {
        auto [x, y] = random_interior(rng);
        auto p = bpp_height_slope_consistency(x, y);
        for (double v : p) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("self-Beltrami identity and the pulled-back structure") {
    // mu = xi(Phi) satisfies mu_zbar / mu_z = mu (Wirtinger derivatives in the
    // standard coordinate), and the Beltrami coefficient of the disk map phi
    // equals mu as well: both checked by central differences in z.
    StreamRng rng(55, 5);
    double hz = 1e-4;
    for (int t = 0; t < 100; ++t) {
        auto [x, y] = random_interior(rng, 0.7);
        std::complex<double> z = standard_coordinate(x, y);
        auto mu_at = [&](std::complex<double> zz) {
            auto [xx, yy] = standard_coordinate_inverse(zz);
            return beltrami_of_phi(phi_bpp(xx, yy));
        };
        auto d_dx = (mu_at(z + hz) - mu_at(z - hz)) / (2 * hz);
        auto d_dy = (mu_at(z + std::complex<double>(0, hz)) - mu_at(z - std::complex<double>(0, hz))) /
                    (2 * hz);
        std::complex<double> mu_z = 0.5 * (d_dx - std::complex<double>(0, 1) * d_dy);
        std::complex<double> mu_zbar = 0.5 * (d_dx + std::complex<double>(0, 1) * d_dy);
        std::complex<double> mu = mu_at(z);
        CHECK(std::abs(mu_zbar / mu_z - mu) < 5e-6);

        auto phimap_at = [&](std::complex<double> zz) {
            auto [xx, yy] = standard_coordinate_inverse(zz);
            return phi_disk_map_bpp(xx, yy);
        };
        auto p_dx = (phimap_at(z + hz) - phimap_at(z - hz)) / (2 * hz);
        auto p_dy = (phimap_at(z + std::complex<double>(0, hz)) -
                     phimap_at(z - std::complex<double>(0, hz))) /
                    (2 * hz);
        std::complex<double> p_z = 0.5 * (p_dx - std::complex<double>(0, 1) * p_dy);
        std::complex<double> p_zbar = 0.5 * (p_dx + std::complex<double>(0, 1) * p_dy);
        CHECK(std::abs(p_zbar / p_z - mu) < 5e-6);
    }
}
