#include "dimerlab/sampler.hpp"

#include "dimerlab/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace dimerlab {

Matching sample_exact(const KasteleynSystem& system, uint64_t seed, uint64_t draw_index) {
    const Region& region = system.region();
    const int n = region.white_count();
    if (!system.square()) throw Error(Errc::NonSquare, "sampling needs a square system");
    Eigen::MatrixXd inv = system.full_inverse(); // private workspace, conditioned in place
    StreamRng rng(seed, draw_index);

    std::vector<int> edge_of_white(n, -1);
    std::vector<uint8_t> black_used(region.black_count(), 0);
    std::vector<int> cand_edges;
    std::vector<double> cand_probs;
    for (int wi = 0; wi < n; ++wi) {
        cand_edges.clear();
        cand_probs.clear();
        double sum = 0.0;
        for (int ei : region.white_edges(wi)) {
            int bi = region.edge_black_index(ei);
            if (black_used[bi]) continue;
            double p = inv(bi, wi); // K entries are 1
            p = std::max(0.0, std::min(1.0, p));
            cand_edges.push_back(ei);
            cand_probs.push_back(p);
            sum += p;
        }
        if (cand_edges.empty() || std::abs(sum - 1.0) >= 1e-8) {
            std::ostringstream diag;
            diag << "conditional probabilities at white " << wi << " sum to " << sum
                 << " (candidates " << cand_edges.size() << "); matrix is ill-conditioned";
            throw Error(Errc::SingularMatrix, diag.str());
        }
        double u = rng.uniform() * sum;
        size_t pick = 0;
        double acc = 0.0;
        for (size_t i = 0; i < cand_probs.size(); ++i) {
            acc += cand_probs[i];
            if (u < acc || i + 1 == cand_probs.size()) {
                pick = i;
                break;
            }
        }
        const int ei = cand_edges[pick];
        const int bi = region.edge_black_index(ei);
        edge_of_white[wi] = ei;
        black_used[bi] = 1;

        // Condition on the placed dimer: Schur complement update of K^{-1}.
        double pivot = inv(bi, wi);
        if (wi + 1 < n) {
            Eigen::VectorXd col = inv.col(wi);
            Eigen::RowVectorXd row = inv.row(bi);
            inv.noalias() -= col * row / pivot;
        }
    }
    return Matching(region, std::move(edge_of_white));
}

std::vector<Matching> sample_exact_many(const KasteleynSystem& system, int count, uint64_t seed,
                                        int threads) {
    system.full_inverse(); // factor once before the workers copy it
    std::vector<std::optional<Matching>> slots(count);
    threads = std::max(1, threads);
    if (threads == 1) {
        std::vector<Matching> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i) out.push_back(sample_exact(system, seed, i));
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            slots[i] = sample_exact(system, seed, i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::vector<Matching> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

Matching initial_matching(const Region& region) {
    const int n = region.white_count();
    if (n != region.black_count()) throw Error(Errc::NoMatchingExists, "unequal color counts");
    std::vector<int> white_of_black(region.black_count(), -1);
    std::vector<int> edge_of_white(n, -1);

    // Kuhn's augmenting-path matching.
    std::vector<uint8_t> visited;
    std::function<bool(int)> try_white = [&](int wi) -> bool {
        for (int ei : region.white_edges(wi)) {
            int bi = region.edge_black_index(ei);
            if (visited[bi]) continue;
            visited[bi] = 1;
            if (white_of_black[bi] == -1 || try_white(white_of_black[bi])) {
                white_of_black[bi] = wi;
                edge_of_white[wi] = ei;
                return true;
            }
        }
        return false;
    };
    for (int wi = 0; wi < n; ++wi) {
        visited.assign(region.black_count(), 0);
        if (!try_white(wi)) throw Error(Errc::NoMatchingExists, "region admits no perfect matching");
    }
    return Matching(region, std::move(edge_of_white));
}

namespace {

// The six edges of interior face (M,N), listed as alternating triples:
// rotating a matched triple yields the complementary triple.
struct FaceEdges {
    std::array<EdgeId, 3> tri_a, tri_b;
};

FaceEdges face_rotation_edges(FaceId f) {
    const int M = f.m, N = f.n;
    FaceEdges fe;
    fe.tri_a = {EdgeId{{M, N}, 1}, EdgeId{{M + 1, N + 1}, 2}, EdgeId{{M + 1, N}, 3}};
    fe.tri_b = {EdgeId{{M, N}, 3}, EdgeId{{M + 1, N + 1}, 1}, EdgeId{{M + 1, N}, 2}};
    return fe;
}

} // namespace

Matching sample_glauber(const Region& region, uint64_t seed, int sweeps) {
    if (sweeps < 1) throw Error(Errc::BadInput, "glauber sweeps must be >= 1");
    Matching current = initial_matching(region);
    std::vector<int> edge_of_white = current.edges_by_white();
    std::vector<uint8_t> matched(region.edge_count(), 0);
    for (int ei : edge_of_white) matched[ei] = 1;

    std::vector<int> interior_faces;
    for (int fi = 0; fi < region.face_count(); ++fi)
        if (region.face_is_interior(fi)) interior_faces.push_back(fi);
    if (interior_faces.empty()) return current;

    StreamRng rng(seed, 0x9147u);
    const long long proposals = static_cast<long long>(sweeps) * interior_faces.size();
    for (long long it = 0; it < proposals; ++it) {
        int fi = interior_faces[rng.below(interior_faces.size())];
        FaceEdges fe = face_rotation_edges(region.faces()[fi]);
        auto edge_indices = [&](const std::array<EdgeId, 3>& tri, std::array<int, 3>& out) {
            for (int i = 0; i < 3; ++i) {
                auto idx = region.edge_index(tri[i]);
                if (!idx) return false;
                out[i] = *idx;
            }
            return true;
        };
        std::array<int, 3> a{}, b{};
        if (!edge_indices(fe.tri_a, a) || !edge_indices(fe.tri_b, b)) continue;
        bool a_full = matched[a[0]] && matched[a[1]] && matched[a[2]];
        bool b_full = matched[b[0]] && matched[b[1]] && matched[b[2]];
        if (!a_full && !b_full) continue;
        if (rng.uniform() >= 0.5) continue;
        const auto& from = a_full ? a : b;
        const auto& to = a_full ? b : a;
        for (int i = 0; i < 3; ++i) {
            matched[from[i]] = 0;
            matched[to[i]] = 1;
            edge_of_white[region.edge_white_index(to[i])] = to[i];
        }
    }
    return Matching(region, std::move(edge_of_white));
}

std::array<double, 3> empirical_lozenge_densities(const std::vector<Matching>& samples,
                                                  const std::vector<FaceId>& window) {
    if (samples.empty()) throw Error(Errc::BadInput, "need at least one sample");
    const Region& region = samples.front().region();
    std::set<FaceId> win(window.begin(), window.end());
    std::vector<int> window_edges;
    for (int ei = 0; ei < region.edge_count(); ++ei) {
        const EdgeId& e = region.edges()[ei];
        if (win.count(edge_left_face(e)) && win.count(edge_right_face(e))) window_edges.push_back(ei);
    }
    if (window_edges.empty()) throw Error(Errc::EmptyWindow, "window contains no edges");
    std::array<long long, 3> counts{0, 0, 0};
    for (const Matching& m : samples)
        for (int ei : window_edges)
            if (m.contains(ei)) counts[region.edges()[ei].type - 1]++;
    double total = double(counts[0] + counts[1] + counts[2]);
    if (total == 0) throw Error(Errc::EmptyWindow, "no matched edges in window");
    return {counts[0] / total, counts[1] / total, counts[2] / total};
}

} // namespace dimerlab
