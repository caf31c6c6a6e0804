#include "dimerlab/fluct.hpp"

#include <cmath>
#include <set>

namespace dimerlab {

std::vector<FaceId> DualPath::faces() const {
    std::vector<FaceId> out{start};
    const auto offs = face_direction_offsets();
    FaceId cur = start;
    for (auto [dir, count] : segments) {
        if (dir < 0 || dir > 5 || count < 0) throw Error(Errc::PathsInvalid, "bad path segment");
        for (int i = 0; i < count; ++i) {
            cur = {cur.m + offs[dir].m, cur.n + offs[dir].n};
            out.push_back(cur);
        }
    }
    return out;
}

FaceId DualPath::target() const { return faces().back(); }

PathCrossings path_crossings(const Region& region, const DualPath& path) {
    PathCrossings out;
    auto faces = path.faces();
    const auto offs = face_direction_offsets();
    for (size_t i = 0; i + 1 < faces.size(); ++i) {
        if (!region.face_index(faces[i]) || !region.face_index(faces[i + 1]))
            throw Error(Errc::PathsInvalid, "path leaves the region");
        int dir = -1;
        for (int d = 0; d < 6; ++d)
            if (faces[i].m + offs[d].m == faces[i + 1].m && faces[i].n + offs[d].n == faces[i + 1].n)
                dir = d;
        DualStep step = dual_step(faces[i], dir);
        if (!region.edge_is_fringe(step.crossed))
            throw Error(Errc::PathsInvalid, "path crosses outside the region fringe");
        auto ei = region.edge_index(step.crossed);
        if (!ei) continue; // spoke: deterministic increment, no fluctuation
        out.edges.push_back(*ei);
        out.signs.push_back(step.sign);
    }
    return out;
}

double exact_height_covariance(const KasteleynSystem& system, const DualPath& path1,
                               const DualPath& path2) {
    const Region& region = system.region();
    PathCrossings a = path_crossings(region, path1);
    PathCrossings b = path_crossings(region, path2);

    // Cov = 9 sum_{e in a, f in b} s_e s_f Cov(chi_e, chi_f)
    double total = 0.0;
    for (size_t i = 0; i < a.edges.size(); ++i) {
        const int e = a.edges[i];
        const int we = region.edge_white_index(e), be = region.edge_black_index(e);
        const double pe = system.edge_probability(e);
        for (size_t j = 0; j < b.edges.size(); ++j) {
            const int f = b.edges[j];
            double cov;
            if (e == f) {
                cov = pe * (1.0 - pe);
            } else if (region.edge_white_index(f) == we || region.edge_black_index(f) == be) {
                cov = -pe * system.edge_probability(f); // incompatible dimers
            } else {
                // centered pair term: P(ef) - P(e)P(f) = -K^{-1}(b_f,w_e) K^{-1}(b_e,w_f)
                cov = -system.inverse_entry(region.edge_black_index(f), we) *
                      system.inverse_entry(be, region.edge_white_index(f));
            }
            total += a.signs[i] * b.signs[j] * cov;
        }
    }
    return 9.0 * total;
}

double exact_higher_moment(const KasteleynSystem& system, const std::vector<DualPath>& paths,
                           long long tuple_budget) {
    const Region& region = system.region();
    const int k = static_cast<int>(paths.size());
    if (k < 1 || k > 4) throw Error(Errc::TooLarge, "k must be between 1 and 4");
    std::vector<PathCrossings> cross;
    cross.reserve(k);
    for (const auto& p : paths) cross.push_back(path_crossings(region, p));

    // paths must not share edges (tuples would repeat an edge)
    {
        std::set<int> seen;
        for (const auto& c : cross)
            for (int e : c.edges)
                if (!seen.insert(e).second)
                    throw Error(Errc::PathsInvalid, "paths share a crossed edge");
    }
    long long tuples = 1;
    for (const auto& c : cross) {
        tuples *= std::max<long long>(1, c.edges.size());
        if (tuples > tuple_budget) throw Error(Errc::TooLarge, "tuple budget exceeded");
    }

    // cache K^{-1}(b_i, w_j) blocks between paths
    std::vector<std::vector<std::vector<double>>> inv(k,
        std::vector<std::vector<double>>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            inv[i][j].resize(cross[i].edges.size() * cross[j].edges.size());
            for (size_t ei = 0; ei < cross[i].edges.size(); ++ei)
                for (size_t ej = 0; ej < cross[j].edges.size(); ++ej)
                    inv[i][j][ei * cross[j].edges.size() + ej] = system.inverse_entry(
                        region.edge_black_index(cross[i].edges[ei]),
                        region.edge_white_index(cross[j].edges[ej]));
        }

    // zero-diagonal determinant of the k x k matrix M_{ij} = K^{-1}(b_i, w_j)
    double total = 0.0;
    std::vector<size_t> idx(k, 0);
    Eigen::MatrixXd M(k, k);
    for (;;) {
        double sign = 1.0;
        for (int i = 0; i < k; ++i) sign *= cross[i].signs[idx[i]];
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                M(i, j) = (i == j) ? 0.0 : inv[i][j][idx[i] * cross[j].edges.size() + idx[j]];
        total += sign * M.determinant();

        int pos = k - 1;
        while (pos >= 0 && ++idx[pos] == cross[pos].edges.size()) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return std::pow(3.0, k) * total;
}

double gff_greens_H(std::complex<double> z1, std::complex<double> z2) {
    if (std::abs(z1 - z2) < 1e-14) throw Error(Errc::CoincidentPoints, "coincident points");
    return -std::log(std::abs((z1 - z2) / (z1 - std::conj(z2)))) / (2.0 * 3.14159265358979323846);
}

double GFFPrediction::covariance(FaceId s1, FaceId s2) const { return gff_greens_H(phi(s1), phi(s2)); }

GFFPrediction flat_disk_prediction(double radius) {
    const std::complex<double> center = face_position({0, 0});
    GFFPrediction pred;
    pred.phi = [radius, center](FaceId f) {
        std::complex<double> u = face_position(f) - center;
        // disk of radius R to H: u -> i (R + u) / (R - u)
        return std::complex<double>(0, 1) * (radius + u) / (radius - u);
    };
    return pred;
}

double wick_moment(const std::vector<std::complex<double>>& points,
                   const std::function<double(std::complex<double>, std::complex<double>)>& greens) {
    const size_t k = points.size();
    if (k % 2 == 1) return 0.0;
    if (k == 0) return 1.0;
    // pair the first point with each other point, recurse
    double total = 0.0;
    for (size_t j = 1; j < k; ++j) {
        std::vector<std::complex<double>> rest;
        for (size_t i = 1; i < k; ++i)
            if (i != j) rest.push_back(points[i]);
        total += greens(points[0], points[j]) * wick_moment(rest, greens);
    }
    return total;
}

std::pair<double, double> mc_height_covariance(const std::vector<Matching>& samples, FaceId f1,
                                               FaceId f2, FaceId base) {
    const size_t n = samples.size();
    if (n < 100) throw Error(Errc::BadInput, "need at least 100 samples");
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
        HeightField h = height_field(samples[i], base);
        a[i] = h.at(f1);
        b[i] = h.at(f2);
    }
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0;
    for (size_t i = 0; i < n; ++i) sab += (a[i] - ma) * (b[i] - mb);
    double cov = sab / (n - 1);

    // jackknife standard error of the covariance
    double sa = ma * n, sb = mb * n;
    double mean_jack = 0;
    std::vector<double> jack(n);
    for (size_t i = 0; i < n; ++i) {
        double mai = (sa - a[i]) / (n - 1), mbi = (sb - b[i]) / (n - 1);
        double acc = 0;
        for (size_t jx = 0; jx < n; ++jx)
            if (jx != i) acc += (a[jx] - mai) * (b[jx] - mbi);
        jack[i] = acc / (n - 2);
        mean_jack += jack[i];
    }
    mean_jack /= n;
    double var = 0;
    for (size_t i = 0; i < n; ++i) var += (jack[i] - mean_jack) * (jack[i] - mean_jack);
    var *= double(n - 1) / n;
    return {cov, std::sqrt(var)};
}

} // namespace dimerlab
