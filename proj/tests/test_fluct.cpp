#include "dimerlab/fluct.hpp"

#include "dimerlab/sampler.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace dimerlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// enumeration-based covariance of heights based at a fixed face
double cov_by_enumeration(const Region& r, FaceId base, FaceId f1, FaceId f2) {
    auto ms = oracles::enumerate_matchings(r);
    double m1 = 0, m2 = 0, m12 = 0;
    for (const auto& m : ms) {
        HeightField h = height_field(m, base);
        m1 += h.at(f1);
        m2 += h.at(f2);
        m12 += double(h.at(f1)) * h.at(f2);
    }
    m1 /= ms.size();
    m2 /= ms.size();
    m12 /= ms.size();
    return m12 - m1 * m2;
}

double moment_by_enumeration(const Region& r, FaceId base, const std::vector<FaceId>& targets) {
    auto ms = oracles::enumerate_matchings(r);
    std::vector<double> means(targets.size(), 0.0);
    std::vector<std::vector<double>> vals(ms.size(), std::vector<double>(targets.size()));
    for (size_t i = 0; i < ms.size(); ++i) {
        HeightField h = height_field(ms[i], base);
        for (size_t t = 0; t < targets.size(); ++t) {
            vals[i][t] = h.at(targets[t]);
            means[t] += vals[i][t];
        }
    }
    for (auto& m : means) m /= ms.size();
    double acc = 0;
    for (size_t i = 0; i < ms.size(); ++i) {
        double prod = 1;
        for (size_t t = 0; t < targets.size(); ++t) prod *= vals[i][t] - means[t];
        acc += prod;
    }
    return acc / ms.size();
}
} // namespace

TEST_CASE("variance 9/4 on hexagon(1,1,1)") {
    Region r = Region::hexagon(1, 1, 1);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    // boundary face (1,0) steps -x to the center (0,0)
    DualPath p{{1, 0}, {{3, 1}}};
    CHECK(p.target() == FaceId{0, 0});
    double var = exact_height_covariance(sys, p, p);
    CHECK(var == doctest::Approx(9.0 / 4.0).epsilon(1e-12));
    CHECK(var == doctest::Approx(cov_by_enumeration(r, {1, 0}, {0, 0}, {0, 0})).epsilon(1e-12));
}

TEST_CASE("covariance: path independence and symmetry") {
    Region r = Region::hexagon(3, 3, 3);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    // two ways from the boundary to face (1,1)
    DualPath a1{{3, 0}, {{3, 2}, {1, 1}}};       // -x -x +y
    DualPath a2{{1, 3}, {{4, 2}}};                // -y -y
    REQUIRE(a1.target() == FaceId{1, 1});
    REQUIRE(a2.target() == FaceId{1, 1});
    DualPath b{{-3, -1}, {{2, 2}, {0, 1}}};       // +(x+y) x2, +x to (0,1)... adjust below
    // pick a second target with a valid path
    DualPath b1{{0, -3}, {{1, 2}}};               // +y +y -> (0,-1)
    REQUIRE(b1.target() == FaceId{0, -1});

    double c11 = exact_height_covariance(sys, a1, b1);
    double c21 = exact_height_covariance(sys, a2, b1);
    CHECK(c11 == doctest::Approx(c21).epsilon(1e-10));
    double c_sym = exact_height_covariance(sys, b1, a1);
    CHECK(c11 == doctest::Approx(c_sym).epsilon(1e-10));
    (void)b;
}

TEST_CASE("covariance matches enumeration on hexagon(2,2,2)") {
    Region r = Region::hexagon(2, 2, 2);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    DualPath p1{{2, 0}, {{3, 1}, {5, 1}}};
    DualPath p2{{-2, -2}, {{2, 2}}};
    FaceId f1 = p1.target(), f2 = p2.target();
    double mine = exact_height_covariance(sys, p1, p2);
    double oracle = cov_by_enumeration(r, p1.start, f1, f2);
    // enumeration bases heights at p1.start; covariance of increments matches
    // when the second path is also based deterministically: rebase by hand
    // via the identity Cov(h(f1)-h(s1), h(f2)-h(s2)) with s-heights fixed on
    // the fringe: on this region all boundary faces connect through spokes.
    CHECK(mine == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("higher moments") {
    Region r = Region::hexagon(2, 2, 2);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    DualPath p1{{2, 0}, {{3, 1}, {5, 1}}};
    DualPath p2{{-2, -2}, {{2, 2}}};

    // k = 2 agrees with the dedicated covariance
    double two = exact_higher_moment(sys, {p1, p2});
    CHECK(two == doctest::Approx(exact_height_covariance(sys, p1, p2)).epsilon(1e-12));

    // k = 3 against enumeration
    DualPath p3{{0, 2}, {{4, 1}}};
    double three = exact_higher_moment(sys, {p1, p2, p3});
    double oracle3 = moment_by_enumeration(r, FaceId{2, 0},
                                           {p1.target(), p2.target(), p3.target()});
    CHECK(three == doctest::Approx(oracle3).epsilon(1e-9));

    // k = 3 vanishes for a point-symmetric target set on hexagon(3,3,3):
    // the reflection through the center negates centered heights
    Region rs = Region::hexagon(3, 3, 3);
    KasteleynSystem ss = KasteleynSystem::assemble(rs);
    DualPath q1{{3, 0}, {{3, 3}}};              // -> (0,0), the fixed point
    DualPath q2{{3, 3}, {{3, 2}, {4, 2}}};      // -> (1,1)
    DualPath q3{{-3, -3}, {{2, 2}}};            // -> (-1,-1)
    REQUIRE(q1.target() == FaceId{0, 0});
    REQUIRE(q2.target() == FaceId{1, 1});
    REQUIRE(q3.target() == FaceId{-1, -1});
    double sym3 = exact_higher_moment(ss, {q1, q2, q3});
    CHECK(std::abs(sym3) < 1e-8);

    // k = 4 against enumeration
    DualPath p4{{-2, 0}, {{0, 1}, {1, 1}}};
    double four = exact_higher_moment(sys, {p1, p2, p3, p4});
    double oracle4 = moment_by_enumeration(
        r, FaceId{2, 0}, {p1.target(), p2.target(), p3.target(), p4.target()});
    CHECK(four == doctest::Approx(oracle4).epsilon(1e-9));

    // shared-edge paths are rejected
    CHECK_THROWS_AS(exact_higher_moment(sys, {p1, p1}), Error);
}

TEST_CASE("GFF Green's function on H") {
    std::complex<double> i{0, 1};
    CHECK(gff_greens_H(i, 2.0 * i) == doctest::Approx(std::log(3.0) / (2 * kPi)).epsilon(1e-14));
    CHECK(gff_greens_H(i, 2.0 * i) == doctest::Approx(gff_greens_H(2.0 * i, i)).epsilon(1e-14));
    // vanishing toward the boundary
    CHECK(gff_greens_H(i, std::complex<double>(0.5, 1e-7)) < 1e-5);
    CHECK_THROWS_AS(gff_greens_H(i, i), Error);

    // the normalization bridge: hhat = (2 sqrt(pi)/3eps)(h_eps - hbar) has
    // covariance G, so unnormalized centered heights carry (3/(2 sqrt(pi)))^2
    double factor = std::pow(3.0 / (2.0 * std::sqrt(kPi)), 2);
    CHECK(unnormalized_covariance_factor() == doctest::Approx(factor).epsilon(1e-15));
}

TEST_CASE("wick moments") {
    auto greens = [](std::complex<double> a, std::complex<double> b) { return gff_greens_H(a, b); };
    std::vector<std::complex<double>> pts{{0.0, 1.0}, {0.5, 2.0}, {-0.3, 1.5}};
    CHECK(wick_moment(pts, greens) == 0.0);

    std::vector<std::complex<double>> four{{0.0, 1.0}, {0.5, 2.0}, {-0.3, 1.5}, {0.2, 0.7}};
    double direct = greens(four[0], four[1]) * greens(four[2], four[3]) +
                    greens(four[0], four[2]) * greens(four[1], four[3]) +
                    greens(four[0], four[3]) * greens(four[1], four[2]);
    CHECK(wick_moment(four, greens) == doctest::Approx(direct).epsilon(1e-14));

    std::vector<std::complex<double>> two{{0.0, 1.0}, {0.5, 2.0}};
    CHECK(wick_moment(two, greens) == doctest::Approx(greens(two[0], two[1])).epsilon(1e-14));
}

TEST_CASE("monte carlo covariance agrees with exact") {
    Region r = Region::hexagon(3, 3, 3);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    DualPath p1{{3, 0}, {{3, 2}}};
    DualPath p2{{-3, -3}, {{2, 2}}};
    double exact = exact_height_covariance(sys, p1, p2);

    auto samples = sample_exact_many(sys, 3000, 123, 4);
    auto [cov, stderr_] = mc_height_covariance(samples, p1.target(), p2.target(), p1.start);
    CHECK(std::abs(cov - exact) < 3.0 * stderr_);
    CHECK(stderr_ > 0);

    // stderr shrinks like 1/sqrt(N)
    auto fewer = std::vector<Matching>(samples.begin(), samples.begin() + 750);
    auto [cov2, stderr2] = mc_height_covariance(fewer, p1.target(), p2.target(), p1.start);
    CHECK(stderr2 > 1.5 * stderr_);
    (void)cov2;

    // f1 == f2 gives a nonnegative variance
    auto [var, vs] = mc_height_covariance(samples, p1.target(), p1.target(), p1.start);
    CHECK(var >= 0);
    (void)vs;
}

TEST_CASE("bilinearity: splitting a path at an intermediate face") {
    Region r = Region::hexagon(3, 3, 3);
    KasteleynSystem sys = KasteleynSystem::assemble(r);
    DualPath whole{{3, 0}, {{3, 2}, {1, 1}}};
    DualPath first{{3, 0}, {{3, 2}}};
    DualPath probe{{0, 3}, {{4, 2}}};
    // Cov(h_whole, probe) = Cov(h_first, probe) + Cov(increment, probe):
    // realize the increment as the path starting where `first` ends
    DualPath tail{first.target(), {{1, 1}}};
    double lhs = exact_height_covariance(sys, whole, probe);
    double rhs = exact_height_covariance(sys, first, probe) +
                 exact_height_covariance(sys, tail, probe);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}
