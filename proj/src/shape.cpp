#include "dimerlab/shape.hpp"

#include <cmath>
#include <limits>

namespace dimerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kOmega{0.5, std::sqrt(3.0) / 2.0}; // e^{i pi/3}

bool is_nan(std::complex<double> z) { return std::isnan(z.real()) || std::isnan(z.imag()); }
} // namespace

std::complex<double> phi_bpp(double x, double y) {
    const double r2 = x * x - x * y + y * y;
    if (r2 >= 0.75) throw Error(Errc::OutsideInscribedCircle, "point outside the liquid region");
    if (std::abs(1.0 - x * x) < 1e-15) throw Error(Errc::OutsideInscribedCircle, "x^2 = 1");
    // sqrt(4 r^2 - 3) = i sqrt(3 - 4 r^2), the branch with Im(phi) > 0
    std::complex<double> root{0.0, std::sqrt(3.0 - 4.0 * r2)};
    return (1.0 - 2.0 * x * y + root) / (2.0 * (1.0 - x * x));
}

std::complex<double> beltrami_of_phi(std::complex<double> phi) {
    return (phi - kOmega) / (phi - std::conj(kOmega));
}

bool ComplexSlopeField::valid(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
    return !is_nan(at(i, j));
}

ComplexSlopeField sample_field(const PhiFunction& fn, double extent, int grid) {
    if (grid < 5) throw Error(Errc::GridTooCoarse, "grid must have at least 5 points");
    ComplexSlopeField f;
    f.nx = f.ny = grid;
    f.h = 2.0 * extent / (grid - 1);
    f.x0 = -extent;
    f.y0 = -extent;
    f.phi.assign(size_t(grid) * grid, {std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i) {
            try {
                f.phi[size_t(j) * grid + i] = fn(f.x_of(i), f.y_of(j));
            } catch (const Error&) {
                // outside the domain: stays NaN
            }
        }
    return f;
}

ComplexSlopeField sample_bpp_field(double extent, int grid) {
    return sample_field([](double x, double y) { return phi_bpp(x, y); }, extent, grid);
}

double burgers_residual(const ComplexSlopeField& field) {
    double worst = -1.0;
    const double h = field.h;
    for (int j = 1; j + 1 < field.ny; ++j)
        for (int i = 1; i + 1 < field.nx; ++i) {
            if (!field.valid(i, j) || !field.valid(i - 1, j) || !field.valid(i + 1, j) ||
                !field.valid(i, j - 1) || !field.valid(i, j + 1))
                continue;
            std::complex<double> dx = (field.at(i + 1, j) - field.at(i - 1, j)) / (2 * h);
            std::complex<double> dy = (field.at(i, j + 1) - field.at(i, j - 1)) / (2 * h);
            worst = std::max(worst, std::abs(dx + field.at(i, j) * dy));
        }
    if (worst < 0) throw Error(Errc::GridTooCoarse, "no interior stencil fits the domain");
    return worst;
}

ComplexSlopeField beltrami(const ComplexSlopeField& field) {
    ComplexSlopeField out = field;
    for (auto& v : out.phi)
        if (!is_nan(v)) v = beltrami_of_phi(v);
    return out;
}

namespace {
// log with branch continued from `prev`
std::complex<double> tracked_log(std::complex<double> value, const std::complex<double>* prev) {
    std::complex<double> principal = std::log(value);
    if (!prev) return principal;
    double shift = std::round((prev->imag() - principal.imag()) / (2 * kPi));
    std::complex<double> cont = principal + std::complex<double>(0.0, 2 * kPi * shift);
    if (std::abs(cont.imag() - prev->imag()) > kPi / 2)
        throw Error(Errc::BranchCutCrossing, "log branch tracking lost continuity");
    return cont;
}
} // namespace

std::complex<double> complex_height_increment(const PhiFunction& fn, std::complex<double> from,
                                              std::complex<double> to, int steps) {
    if (steps < 1) throw Error(Errc::BadInput, "need at least one step");
    const std::complex<double> delta = (to - from) / double(steps);
    const double dx = delta.real(), dy = delta.imag();
    std::complex<double> integral = 0.0;
    std::complex<double> u_prev, v_prev;
    bool have_prev = false;
    for (int k = 0; k <= steps; ++k) {
        std::complex<double> p = from + double(k) * delta;
        std::complex<double> phi = fn(p.real(), p.imag());
        std::complex<double> u = tracked_log(phi - 1.0, have_prev ? &u_prev : nullptr);
        std::complex<double> v = tracked_log(1.0 / phi - 1.0, have_prev ? &v_prev : nullptr);
        double weight = (k == 0 || k == steps) ? 0.5 : 1.0;
        integral += weight * (u * dx - v * dy);
        u_prev = u;
        v_prev = v;
        have_prev = true;
    }
    return integral;
}

std::complex<double> complex_height_loop(const PhiFunction& fn,
                                         const std::vector<std::complex<double>>& corners,
                                         int steps_per_edge) {
    std::complex<double> total = 0.0;
    for (size_t i = 0; i < corners.size(); ++i)
        total += complex_height_increment(fn, corners[i], corners[(i + 1) % corners.size()],
                                          steps_per_edge);
    return total;
}

std::complex<double> standard_coordinate(double x, double y) {
    // z = i (y - omega x); |z|^2 = x^2 - x y + y^2
    return std::complex<double>(0, 1) * (std::complex<double>(y, 0) - kOmega * x);
}

std::pair<double, double> standard_coordinate_inverse(std::complex<double> z) {
    double x = 2.0 * z.real() / std::sqrt(3.0);
    double y = z.imag() + z.real() / std::sqrt(3.0);
    return {x, y};
}

std::complex<double> phi_disk_map_bpp(double x, double y) {
    std::complex<double> u = standard_coordinate(x, y);
    double r = std::abs(u);
    if (r > std::sqrt(3.0) / 2 + 1e-12) throw Error(Errc::OutsideDomain, "outside inscribed disk");
    if (r < 1e-300) return 0.0;
    double r2 = std::min(r * r, 0.75);
    double mag = (std::sqrt(3.0) - std::sqrt(3.0 - 4.0 * r2)) / (2.0 * r);
    return mag * (u / r);
}

std::pair<double, double> phi_inverse_bpp(std::complex<double> zeta) {
    double az = std::abs(zeta);
    if (az > 1.0 + 1e-12) throw Error(Errc::OutsideDomain, "outside unit disk");
    std::complex<double> u = zeta * std::sqrt(3.0) / (1.0 + az * az);
    return standard_coordinate_inverse(u);
}

std::array<double, 3> slope_fractions_of_phi(std::complex<double> phi) {
    double pc = (kPi - std::arg(phi - 1.0)) / kPi;
    double pa = (kPi + std::arg(1.0 / phi - 1.0)) / kPi;
    return {pa, 1.0 - pa - pc, pc};
}

std::array<double, 3> bpp_height_slope_consistency(double x, double y) {
    return slope_fractions_of_phi(phi_bpp(x, y));
}

} // namespace dimerlab
