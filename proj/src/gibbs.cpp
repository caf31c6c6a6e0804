#include "dimerlab/gibbs.hpp"

#include "dimerlab/quadrature.hpp"

#include <cmath>

namespace dimerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::complex<double> ipow(std::complex<double> base, long long e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    std::complex<double> r = 1.0, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// unit complex e^{i t}
std::complex<double> cis(double t) { return {std::cos(t), std::sin(t)}; }
} // namespace

SlopeParams slope_from_p(double pa, double pb, double pc) {
    if (pa < -1e-12 || pb < -1e-12 || pc < -1e-12 || std::abs(pa + pb + pc - 1.0) > 1e-9)
        throw Error(Errc::InvalidSimplexPoint, "p must be nonnegative and sum to 1");
    SlopeParams s;
    s.pa = pa;
    s.pb = pb;
    s.pc = pc;
    s.theta_a = kPi * pa;
    s.theta_b = kPi * pb;
    s.theta_c = kPi * pc;
    s.a = std::sin(s.theta_a);
    s.b = std::sin(s.theta_b);
    s.c = std::sin(s.theta_c);
    s.z = -cis(-s.theta_c);
    s.w = -cis(s.theta_b);
    s.facet = (pa < 1e-12 || pb < 1e-12 || pc < 1e-12);
    return s;
}

std::pair<int, int> kernel_offset(Coord white, Coord black) {
    return {black.m - white.m - 1, black.n - white.n};
}

double bulk_kernel(const SlopeParams& s, int m, int n, double abs_tol) {
    if (s.facet) throw Error(Errc::DegenerateSlope, "bulk kernel needs an interior slope");
    const double a = s.a, b = s.b, c = s.c;
    const long long p = -static_cast<long long>(m) + n - 1;

    // Inner z-contour by residues: pole at zeta(w1) = -(a + c*w1)/b, inside
    // the unit circle exactly for arg(w1) in (pi - theta_b, pi + theta_b).
    // On [0, pi] the integrand is smooth on each side of the split; the
    // conjugate arc is accounted for by taking the real part.
    auto integrand = [&](double phi) -> std::complex<double> {
        std::complex<double> zeta = -(a + c * cis(phi)) / b;
        return ipow(zeta, p) * cis(-double(n) * phi);
    };
    const double split = kPi - s.theta_b;
    std::complex<double> integral;
    double sign;
    if (p >= 0) {
        integral = integrate_adaptive(integrand, split, kPi, abs_tol * b * kPi / 2);
        sign = 1.0;
    } else {
        integral = integrate_adaptive(integrand, 0.0, split, abs_tol * b * kPi / 2);
        sign = -1.0;
    }
    return sign * integral.real() / (kPi * b);
}

double bulk_kernel_asymptotic(const SlopeParams& s, int m, int n) {
    if (s.facet) throw Error(Errc::DegenerateSlope, "asymptotics need an interior slope");
    if (m == 0 && n == 0) throw Error(Errc::ZeroDisplacement, "(m,n) must be nonzero");
    std::complex<double> numerator = ipow(s.z, -m + n) * ipow(s.w, -n);
    std::complex<double> denominator = s.c * s.w * double(m) + s.a * double(n);
    return (numerator / denominator).imag() / kPi;
}

std::complex<double> gauge_F_white(const SlopeParams& s, Coord w) {
    const std::complex<double> bz_a = s.b * s.z / s.a;
    const std::complex<double> cw_bz = s.c * s.w / (s.b * s.z);
    return ipow(bz_a, w.m) * ipow(cw_bz, w.n);
}

std::complex<double> gauge_F_black(const SlopeParams& s, Coord b) {
    const std::complex<double> bz_a = s.b * s.z / s.a;
    const std::complex<double> cw_bz = s.c * s.w / (s.b * s.z);
    return s.a * ipow(bz_a, -(b.m - 1)) * ipow(cw_bz, -b.n);
}

double gauge_kernel(const SlopeParams& s, Coord white, Coord black, double abs_tol) {
    auto [m, n] = kernel_offset(white, black);
    double gauge = s.a * std::pow(s.a / s.b, m) * std::pow(s.b / s.c, n);
    return gauge * bulk_kernel(s, m, n, abs_tol);
}

double lobachevsky(double x) {
    // reduce modulo pi, then use L(pi - y) = -L(y) to stay in [0, pi/2]
    double y = std::fmod(x, kPi);
    if (y < 0) y += kPi;
    double sign = 1.0;
    if (y > kPi / 2) {
        y = kPi - y;
        sign = -1.0;
    }
    if (y == 0.0) return 0.0;
    // -int_0^y log(2 sin t) dt with t = u^2 to soften the endpoint log
    auto f = [](double u) {
        double t = u * u;
        return std::log(2.0 * std::sin(t)) * 2.0 * u;
    };
    double integral = integrate_adaptive(f, 0.0, std::sqrt(y), 1e-12);
    return -sign * integral;
}

double surface_tension(double pa, double pb, double pc) {
    if (pa < -1e-12 || pb < -1e-12 || pc < -1e-12 || std::abs(pa + pb + pc - 1.0) > 1e-9)
        throw Error(Errc::InvalidSimplexPoint, "p must be nonnegative and sum to 1");
    return -(lobachevsky(kPi * pa) + lobachevsky(kPi * pb) + lobachevsky(kPi * pc)) / kPi;
}

} // namespace dimerlab
