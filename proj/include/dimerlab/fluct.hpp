#pragma once

#include "dimerlab/kasteleyn.hpp"
#include "dimerlab/lattice.hpp"

#include <complex>
#include <functional>

namespace dimerlab {

// Dual path from a boundary face to a target, as direction runs.
struct DualPath {
    FaceId start;
    std::vector<std::pair<int, int>> segments; // (direction 0..5, count)

    std::vector<FaceId> faces() const;
    FaceId target() const;
};

// Crossed region edges along a path with their height-increment signs.
struct PathCrossings {
    std::vector<int> edges;  // region edge indices
    std::vector<int> signs;  // +/-1
};
PathCrossings path_crossings(const Region& region, const DualPath& path);

// Cov(h(f1), h(f2)) for integer heights based at the paths' starts: a double
// sum of centered pair correlations over crossed edges. Exact up to round-off.
double exact_height_covariance(const KasteleynSystem& system, const DualPath& path1,
                               const DualPath& path2);

// E[(h - Eh)(f_1) ... (h - Eh)(f_k)] for k <= 4 pairwise-disjoint paths, via
// the zero-diagonal determinant over k-tuples of crossed edges.
double exact_higher_moment(const KasteleynSystem& system, const std::vector<DualPath>& paths,
                           long long tuple_budget = 50000000);

// Dirichlet Green's function on the upper half plane.
double gff_greens_H(std::complex<double> z1, std::complex<double> z2);

// Map from faces to the upper half plane plus the Green's function.
struct GFFPrediction {
    std::function<std::complex<double>(FaceId)> phi;

    double covariance(FaceId s1, FaceId s2) const;
};

// phi for a flat disk region of radius R centered on face (0,0): rotate to
// the standard conformal coordinate and send the disk to H by a Mobius map.
GFFPrediction flat_disk_prediction(double radius);

// Covariance of unnormalized centered heights is (9/4pi) G(phi(s1), phi(s2)).
inline constexpr double unnormalized_covariance_factor() {
    return 9.0 / (4.0 * 3.14159265358979323846);
}

// Wick pairing sum of Green's values; zero for odd k.
double wick_moment(const std::vector<std::complex<double>>& points,
                   const std::function<double(std::complex<double>, std::complex<double>)>& greens);

// Sample covariance of heights at two faces with jackknife standard error.
std::pair<double, double> mc_height_covariance(const std::vector<Matching>& samples, FaceId f1,
                                               FaceId f2, FaceId base);

} // namespace dimerlab
