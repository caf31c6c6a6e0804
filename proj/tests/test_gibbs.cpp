#include "dimerlab/gibbs.hpp"

#include "dimerlab/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace dimerlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

SlopeParams random_interior_slope(StreamRng& rng) {
    for (;;) {
        double x = 0.08 + 0.84 * rng.uniform();
        double y = 0.08 + 0.84 * rng.uniform();
        if (x + y > 0.92) continue;
        double z = 1.0 - x - y;
        if (z < 0.08) continue;
        return slope_from_p(x, y, z);
    }
}
} // namespace

TEST_CASE("slope_from_p basics") {
    SlopeParams s = slope_from_p(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(s.theta_a == doctest::Approx(kPi / 3));
    CHECK(s.a == doctest::Approx(s.b));
    CHECK(s.b == doctest::Approx(s.c));
    CHECK(std::abs(s.z - (-std::polar(1.0, -kPi / 3))) < 1e-14);
    CHECK(std::abs(s.w - (-std::polar(1.0, kPi / 3))) < 1e-14);
    CHECK(std::abs(s.a + s.b * s.z + s.c * s.w) < 1e-12);

    SlopeParams facet = slope_from_p(1.0, 0.0, 0.0);
    CHECK(facet.facet);

    SlopeParams g = slope_from_p(0.5, 0.3, 0.2);
    CHECK(std::abs(g.a + g.b * g.z + g.c * g.w) < 1e-12);

    CHECK_THROWS_AS(slope_from_p(0.5, 0.6, 0.2), Error);
}

TEST_CASE("bulk kernel: symmetric point value and delta identity") {
    SlopeParams s = slope_from_p(1.0 / 3, 1.0 / 3, 1.0 / 3);
    // a * K^{-1}_abc(0,0) = theta_a / pi = 1/3
    CHECK(s.a * bulk_kernel(s, 0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-9));

    StreamRng rng(7, 0);
    for (int trial = 0; trial < 6; ++trial) {
        SlopeParams t = random_interior_slope(rng);
        CHECK(t.a * bulk_kernel(t, 0, 0) == doctest::Approx(t.theta_a / kPi).epsilon(1e-8));
    }
}

TEST_CASE("K K^{-1} = delta at several displacements") {
    StreamRng rng(99, 1);
    for (int trial = 0; trial < 4; ++trial) {
        SlopeParams s = random_interior_slope(rng);
        // sum over whites adjacent to black b0 = (0,0):
        //   whites (0,0) [type1, weight b], (-1,0) [type2, weight a], (0,1) [type3, weight c]
        // against reference black b' at label (dm, dn).
        auto delta = [&](int dm, int dn) {
            Coord b0{0, 0};
            struct Nbr { Coord w; double k; };
            Nbr nbrs[3] = {{{0, 0}, s.b}, {{-1, 0}, s.a}, {{0, 1}, s.c}};
            double total = 0;
            for (const auto& nb : nbrs) {
                auto [m, n] = kernel_offset(nb.w, Coord{dm, dn});
                total += nb.k * bulk_kernel(s, m, n);
            }
            return total;
        };
        CHECK(delta(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(delta(1, 0) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(delta(0, 1) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(delta(-1, -1) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(delta(2, 1) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(delta(-2, 1) == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("bulk kernel agrees with direct torus quadrature") {
    // oracle self-check at the exactly-known symmetric value
    SlopeParams sym = slope_from_p(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(std::abs(sym.a * oracles::torus_kernel_quadrature(sym, 0, 0) - 1.0 / 3) < 1e-4);

    StreamRng rng(5, 5);
    for (int trial = 0; trial < 5; ++trial) {
        SlopeParams s = random_interior_slope(rng);
        int m = int(rng.below(7)) - 3;
        int n = int(rng.below(7)) - 3;
        double mine = bulk_kernel(s, m, n);
        double oracle = oracles::torus_kernel_quadrature(s, m, n);
        CHECK(std::abs(mine - oracle) < 1e-4);
    }
}

TEST_CASE("lattice symmetry at the symmetric slope") {
    SlopeParams s = slope_from_p(1.0 / 3, 1.0 / 3, 1.0 / 3);
    // swapping integration variables maps (m,n) -> (m, m-n) when b == c
    for (auto [m, n] : {std::pair<int, int>{2, 1}, {3, -1}, {1, 1}, {4, 2}}) {
        CHECK(bulk_kernel(s, m, n) == doctest::Approx(bulk_kernel(s, m, m - n)).epsilon(1e-8));
    }
}

TEST_CASE("asymptotic kernel: decay of the error") {
    SlopeParams s = slope_from_p(0.4, 0.35, 0.25);
    CHECK_THROWS_AS(bulk_kernel_asymptotic(s, 0, 0), Error);

    // denominator never vanishes for integer displacements at interior slopes
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n) {
            if (m == 0 && n == 0) continue;
            CHECK(std::abs(s.c * s.w * double(m) + s.a * double(n)) > 1e-6);
        }

    // log-log fit of |exact - asymptotic| along a ray: slope <= -1.8
    std::vector<double> logr, logerr;
    for (int r = 5; r <= 60; r += 5) {
        int m = r, n = -r / 2;
        double err = std::abs(bulk_kernel(s, m, n) - bulk_kernel_asymptotic(s, m, n));
        if (err < 1e-15) err = 1e-15;
        logr.push_back(std::log(std::sqrt(double(m) * m + double(n) * n)));
        logerr.push_back(std::log(err));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int N = int(logr.size());
    for (int i = 0; i < N; ++i) {
        sx += logr[i];
        sy += logerr[i];
        sxx += logr[i] * logr[i];
        sxy += logr[i] * logerr[i];
    }
    double fit = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    CHECK(fit <= -1.8);
}

TEST_CASE("asymptotic kernel symmetry under displacement negation") {
    SlopeParams s = slope_from_p(0.45, 0.3, 0.25);
    // asym(m,n) + asym(-m,-n) = (2 Re den / (pi |den|^2)) Im(osc): the two
    // values are antisymmetric up to the oscillating prefactor
    for (auto [m, n] : {std::pair<int, int>{3, 1}, {5, -2}, {2, 2}}) {
        std::complex<double> osc = std::pow(s.z, -m + n) * std::pow(s.w, -n);
        std::complex<double> den = s.c * s.w * double(m) + s.a * double(n);
        double lhs = bulk_kernel_asymptotic(s, m, n) + bulk_kernel_asymptotic(s, -m, -n);
        double rhs = 2.0 * den.real() / (kPi * std::norm(den)) * osc.imag();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("gauge kernel") {
    SlopeParams s = slope_from_p(0.4, 0.35, 0.25);
    // adjacent horizontal pair: white (0,0), black (1,0) -> offset (0,0), gauge factor a
    Coord w{0, 0}, b{1, 0};
    auto [m0, n0] = kernel_offset(w, b);
    CHECK(m0 == 0);
    CHECK(n0 == 0);
    CHECK(gauge_kernel(s, w, b) == doctest::Approx(s.a * bulk_kernel(s, 0, 0)).epsilon(1e-10));

    // gauge factors cancel around a hexagon face: alternating product of
    // K^{-1}_nu over the six (w,b) pairs of face (2,1) equals that of the
    // bulk-kernel route
    FaceId f{2, 1};
    Coord whites[3] = {{f.m, f.n}, {f.m, f.n + 1}, {f.m + 1, f.n + 1}};
    Coord blacks[3] = {{f.m, f.n}, {f.m + 1, f.n + 1}, {f.m + 1, f.n}};
    // pairs around the face: (w0,b0),(w1,b0),(w1,b1),(w2,b1),(w2,b2),(w0,b2)
    double alt_nu = 1.0, alt_abc = 1.0;
    auto k_abc = [&](Coord ww, Coord bb) {
        auto [mm, nn] = kernel_offset(ww, bb);
        return bulk_kernel(s, mm, nn);
    };
    alt_nu *= gauge_kernel(s, whites[0], blacks[0]) / gauge_kernel(s, whites[1], blacks[0]);
    alt_nu *= gauge_kernel(s, whites[1], blacks[1]) / gauge_kernel(s, whites[2], blacks[1]);
    alt_nu *= gauge_kernel(s, whites[2], blacks[2]) / gauge_kernel(s, whites[0], blacks[2]);
    alt_abc *= k_abc(whites[0], blacks[0]) / k_abc(whites[1], blacks[0]);
    alt_abc *= k_abc(whites[1], blacks[1]) / k_abc(whites[2], blacks[1]);
    alt_abc *= k_abc(whites[2], blacks[2]) / k_abc(whites[0], blacks[2]);
    CHECK(alt_nu == doctest::Approx(alt_abc).epsilon(1e-6));

    // Lemma: sum of F over blacks at a white and whites at a black vanish
    Coord w0{3, -1};
    std::complex<double> sb = gauge_F_black(s, edge_from_white(w0, 1).black) +
                              gauge_F_black(s, edge_from_white(w0, 2).black) +
                              gauge_F_black(s, edge_from_white(w0, 3).black);
    CHECK(std::abs(sb) < 1e-12 * std::abs(gauge_F_black(s, edge_from_white(w0, 1).black)));
    Coord b0{-2, 4};
    std::complex<double> sw = gauge_F_white(s, EdgeId{b0, 1}.white()) +
                              gauge_F_white(s, EdgeId{b0, 2}.white()) +
                              gauge_F_white(s, EdgeId{b0, 3}.white());
    CHECK(std::abs(sw) < 1e-12 * std::abs(gauge_F_white(s, EdgeId{b0, 1}.white())));

    // leading term of Eq.(10) at radius 40: relative error < 10%
    Coord far{41, 20};
    auto [mf, nf] = kernel_offset(w0, far);
    std::complex<double> FF = gauge_F_white(s, w0) * gauge_F_black(s, far);
    std::complex<double> den = s.c * s.w * double(mf) + s.a * double(nf);
    double leading = (FF / den).imag() / kPi;
    double exact = gauge_kernel(s, w0, far);
    CHECK(std::abs(exact - leading) < 0.10 * std::abs(exact));
}

TEST_CASE("lobachevsky function") {
    CHECK(lobachevsky(0.0) == 0.0);
    CHECK(std::abs(lobachevsky(kPi)) < 1e-10);
    CHECK(std::abs(lobachevsky(kPi / 2)) < 1e-10);
    CHECK(lobachevsky(kPi / 3) > 0);

    // quadrature and series oracles
    for (double x : {0.2, 0.7, kPi / 3, kPi / 6, 1.4, 2.0, 2.9}) {
        double mine = lobachevsky(x);
        CHECK(mine == doctest::Approx(oracles::lobachevsky_simpson(x)).epsilon(1e-9));
        CHECK(mine == doctest::Approx(oracles::lobachevsky_series(x)).epsilon(1e-7));
    }
    // periodicity
    CHECK(lobachevsky(0.4 + kPi) == doctest::Approx(lobachevsky(0.4)).epsilon(1e-10));
    // odd symmetry via periodic reduction
    CHECK(lobachevsky(-0.4) == doctest::Approx(-lobachevsky(0.4)).epsilon(1e-10));
}

TEST_CASE("surface tension") {
    CHECK(surface_tension(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    double center = surface_tension(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(center == doctest::Approx(-3.0 / kPi * lobachevsky(kPi / 3)).epsilon(1e-10));
    CHECK(center < 0);

    // minimized at the center over a simplex grid
    const int G = 10;
    for (int i = 0; i <= G; ++i)
        for (int j = 0; j + i <= G; ++j) {
            double pa = double(i) / G, pb = double(j) / G, pc = 1.0 - pa - pb;
            CHECK(surface_tension(pa, pb, pc) >= center - 1e-12);
        }

    // convexity along random chords
    StreamRng rng(17, 3);
    for (int t = 0; t < 200; ++t) {
        double p1[3], p2[3];
        auto draw = [&](double* p) {
            double x = rng.uniform(), y = rng.uniform();
            if (x + y > 1) {
                x = 1 - x;
                y = 1 - y;
            }
            p[0] = x;
            p[1] = y;
            p[2] = 1 - x - y;
        };
        draw(p1);
        draw(p2);
        double mid[3] = {(p1[0] + p2[0]) / 2, (p1[1] + p2[1]) / 2, (p1[2] + p2[2]) / 2};
        double lhs = surface_tension(mid[0], mid[1], mid[2]);
        double rhs = 0.5 * (surface_tension(p1[0], p1[1], p1[2]) + surface_tension(p2[0], p2[1], p2[2]));
        CHECK(lhs <= rhs + 1e-10);
    }
}

TEST_CASE("density identity and height gradient bookkeeping") {
    StreamRng rng(23, 9);
    for (int t = 0; t < 8; ++t) {
        SlopeParams s = random_interior_slope(rng);
        // a K^{-1}(0,0) = theta_a/pi, and the three edge-type densities are
        // theta/pi which reproduce height gradients 3p-1
        double pa = s.a * bulk_kernel(s, 0, 0);
        CHECK(pa == doctest::Approx(s.theta_a / kPi).epsilon(1e-8));
        // b-type edge: white (0,0), black (0,0) -> offset (-1,0), gauge b
        double pb = s.a * std::pow(s.a / s.b, -1.0) * bulk_kernel(s, -1, 0);
        CHECK(pb == doctest::Approx(s.theta_b / kPi).epsilon(1e-8));
        // c-type edge: white (0,1), black (0,0) -> offset (-1,-1), gauge factor
        double pc = s.a * std::pow(s.a / s.b, -1.0) * std::pow(s.b / s.c, -1.0) *
                    bulk_kernel(s, -1, -1);
        CHECK(pc == doctest::Approx(s.theta_c / kPi).epsilon(1e-8));
        CHECK(pa + pb + pc == doctest::Approx(1.0).epsilon(1e-8));
        // gradient components 3p-1 sum to zero
        CHECK((3 * pa - 1) + (3 * pb - 1) + (3 * pc - 1) == doctest::Approx(0.0).epsilon(1e-7));
    }
}
