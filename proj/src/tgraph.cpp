#include "dimerlab/tgraph.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace dimerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double cross(std::complex<double> a, std::complex<double> b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

std::array<FaceId, 3> white_corners(Coord w) {
    return {{{w.m, w.n}, {w.m - 1, w.n - 1}, {w.m, w.n - 1}}};
}

// The three blacks whose dual triangles have face f as a corner.
std::array<Coord, 3> blacks_of_face(FaceId f) {
    return {{{f.m + 1, f.n}, {f.m + 1, f.n + 1}, {f.m, f.n}}};
}

struct OmegaForm {
    const SlopeParams* slope;
    std::complex<double> lambda;

    std::complex<double> lamFw(Coord w) const { return lambda * gauge_F_white(*slope, w); }
    std::complex<double> lamFb(Coord b) const {
        return std::conj(lambda) * gauge_F_black(*slope, b);
    }
    std::complex<double> omega(Coord w, Coord b) const {
        return 2.0 * lamFw(w).real() * lamFb(b);
    }

    // Psi offsets of black b's dual-triangle corners relative to corner
    // (b.m, b.n); the corners are collinear along lamFb(b).
    // order: q0 = (b.m,b.n), q1 = (b.m-1,b.n-1), q2 = (b.m-1,b.n)
    std::array<std::complex<double>, 3> black_corner_offsets(Coord b) const {
        std::complex<double> q0 = 0.0;
        std::complex<double> q1 = q0 + omega({b.m, b.n}, b);          // type-1 side
        std::complex<double> q2 = q1 + omega({b.m - 1, b.n}, b);      // type-2 side
        return {q0, q1, q2};
    }
};

std::array<FaceId, 3> black_corner_faces(Coord b) {
    return {{{b.m, b.n}, {b.m - 1, b.n - 1}, {b.m - 1, b.n}}};
}

} // namespace

TGraph build_constant_slope_tgraph(const SlopeParams& slope, const Region& region,
                                   std::optional<std::complex<double>> lambda_opt) {
    if (slope.facet) throw Error(Errc::DegenerateSlope, "T-graph needs an interior slope");

    // dual vertex set: faces of the white triangles
    std::vector<FaceId> faces;
    {
        std::set<FaceId> fs;
        for (const Coord& w : region.whites())
            for (const FaceId& f : white_corners(w)) fs.insert(f);
        faces.assign(fs.begin(), fs.end());
    }
    std::map<FaceId, int> face_idx;
    for (size_t i = 0; i < faces.size(); ++i) face_idx[faces[i]] = int(i);

    // blacks with a present white neighbor
    std::vector<Coord> tblacks;
    {
        std::set<Coord> bs;
        for (const Coord& w : region.whites())
            for (int t = 1; t <= 3; ++t) bs.insert(edge_from_white(w, t).black);
        tblacks.assign(bs.begin(), bs.end());
    }

    const int max_retries = 64;
    std::string failure;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::complex<double> lambda =
            lambda_opt && attempt == 0
                ? *lambda_opt
                : std::polar(1.0, 2 * kPi * (0.3819660113 + 0.2654435912 * attempt));
        OmegaForm form{&slope, lambda};

        // no white may have nearly imaginary lambda F(w)
        bool degenerate = false;
        for (const Coord& b : tblacks) {
            for (int t = 1; t <= 3; ++t) {
                Coord w = EdgeId{b, t}.white();
                std::complex<double> lf = form.lamFw(w);
                if (std::abs(lf.real()) < 1e-9 * std::abs(lf)) degenerate = true;
            }
        }
        if (degenerate) {
            failure = "Re(lambda F(w)) vanishes at a vertex";
            if (lambda_opt && attempt == 0) lambda_opt.reset();
            continue;
        }

        TGraph tg;
        tg.region = &region;
        tg.slope = slope;
        tg.lambda = lambda;
        tg.vertex_faces = faces;
        tg.vertex_index = face_idx;
        tg.positions.assign(faces.size(), {0.0, 0.0});

        tg.lamFw.resize(region.white_count());
        for (int wi = 0; wi < region.white_count(); ++wi)
            tg.lamFw[wi] = form.lamFw(region.whites()[wi]);

        // integrate Psi over the dual triangles (BFS; the form is closed)
        double scale = 0.0;
        int scale_count = 0;
        {
            std::vector<uint8_t> seen(faces.size(), 0);
            // base: lowest-leftmost dual vertex in the plane
            int base = 0;
            for (size_t i = 1; i < faces.size(); ++i) {
                auto p = face_position(faces[i]), q = face_position(faces[base]);
                if (p.imag() < q.imag() - 1e-12 ||
                    (std::abs(p.imag() - q.imag()) < 1e-12 && p.real() < q.real()))
                    base = int(i);
            }
            // relations: per white, directed corner differences
            struct Rel { int from, to; std::complex<double> delta; };
            std::vector<std::vector<Rel>> adj(faces.size());
            for (const Coord& w : region.whites()) {
                auto c = white_corners(w); // A, B, C
                int A = face_idx.at(c[0]), B = face_idx.at(c[1]), C = face_idx.at(c[2]);
                std::complex<double> o1 = form.omega(w, edge_from_white(w, 1).black);
                std::complex<double> o2 = form.omega(w, edge_from_white(w, 2).black);
                std::complex<double> o3 = form.omega(w, edge_from_white(w, 3).black);
                adj[A].push_back({A, B, o1});
                adj[B].push_back({B, A, -o1});
                adj[C].push_back({C, A, o2});
                adj[A].push_back({A, C, -o2});
                adj[B].push_back({B, C, o3});
                adj[C].push_back({C, B, -o3});
                scale += std::abs(o1) + std::abs(o2) + std::abs(o3);
                scale_count += 3;
            }
            scale /= std::max(1, scale_count);
            std::deque<int> queue{base};
            seen[base] = 1;
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                for (const Rel& r : adj[v]) {
                    std::complex<double> pos = tg.positions[v] + r.delta;
                    if (seen[r.to]) {
                        if (std::abs(tg.positions[r.to] - pos) > 1e-8 * scale)
                            throw std::logic_error("Psi integration is inconsistent");
                    } else {
                        seen[r.to] = 1;
                        tg.positions[r.to] = pos;
                        queue.push_back(r.to);
                    }
                }
            }
            for (uint8_t s : seen)
                if (!s) throw std::logic_error("dual graph is not connected");
        }
        tg.scale = scale;

        // complete edges: per black with present whites
        bool geom_failure = false;
        tg.edges.clear();
        tg.edge_of_black.clear();
        tg.lamFb.clear();
        for (const Coord& b : tblacks) {
            TGraph::CompleteEdge ce;
            ce.black = b;
            ce.black_in_region = region.black_index(b).has_value();
            std::complex<double> fb = form.lamFb(b);
            ce.dir = fb / std::abs(fb);
            std::set<int> vs;
            for (int t = 1; t <= 3; ++t) {
                EdgeId e{b, t};
                if (!region.white_index(e.white())) continue;
                vs.insert(face_idx.at(edge_left_face(e)));
                vs.insert(face_idx.at(edge_right_face(e)));
            }
            if (vs.empty()) continue;
            ce.vertices.assign(vs.begin(), vs.end());
            auto proj = [&](int v) {
                return (tg.positions[v] * std::conj(ce.dir)).real();
            };
            std::sort(ce.vertices.begin(), ce.vertices.end(),
                      [&](int a, int c) { return proj(a) < proj(c); });
            // collinearity
            for (int v : ce.vertices) {
                double dev = std::abs((std::conj(ce.dir) *
                                       (tg.positions[v] - tg.positions[ce.vertices[0]]))
                                          .imag());
                if (dev > 1e-9 * scale) geom_failure = true;
            }
            tg.lamFb.push_back(fb);
            tg.edge_of_black[b] = int(tg.edges.size());
            tg.edges.push_back(std::move(ce));
        }
        if (geom_failure) {
            failure = "complete edge not collinear";
            if (lambda_opt && attempt == 0) lambda_opt.reset();
            continue;
        }

        // infinite-lattice owner (middle black) per vertex
        tg.owner_black.assign(faces.size(), Coord{0, 0});
        tg.owner_dir.assign(faces.size(), {1.0, 0.0});
        bool owner_failure = false;
        for (size_t vi = 0; vi < faces.size() && !owner_failure; ++vi) {
            const FaceId f = faces[vi];
            int middles = 0;
            for (const Coord& b : blacks_of_face(f)) {
                auto offs = form.black_corner_offsets(b);
                auto corners = black_corner_faces(b);
                std::complex<double> fb = form.lamFb(b);
                std::complex<double> dir = fb / std::abs(fb);
                double t[3];
                int self = -1;
                for (int i = 0; i < 3; ++i) {
                    t[i] = (offs[i] * std::conj(dir)).real();
                    if (corners[i] == f) self = i;
                }
                if (self < 0) throw std::logic_error("face is not a corner of its black");
                double lo = std::min({t[0], t[1], t[2]}), hi = std::max({t[0], t[1], t[2]});
                if (std::abs(t[self] - lo) < 1e-9 * scale || std::abs(t[self] - hi) < 1e-9 * scale) {
                    // near-tie endpoints are a degenerate lambda
                    if (t[self] > lo + 1e-12 * scale && t[self] < hi - 1e-12 * scale)
                        owner_failure = true;
                    continue;
                }
                if (t[self] > lo && t[self] < hi) {
                    ++middles;
                    tg.owner_black[vi] = b;
                    tg.owner_dir[vi] = dir;
                }
            }
            if (middles != 1) owner_failure = true;
        }
        if (owner_failure) {
            failure = "ambiguous owner (degenerate lambda)";
            if (lambda_opt && attempt == 0) lambda_opt.reset();
            continue;
        }

        // finite owner: edge whose interior contains the vertex
        tg.owner.assign(faces.size(), -1);
        for (size_t ei = 0; ei < tg.edges.size(); ++ei) {
            const auto& ce = tg.edges[ei];
            for (size_t k = 1; k + 1 < ce.vertices.size(); ++k) {
                int v = ce.vertices[k];
                if (tg.owner[v] != -1) throw Error(Errc::NonEmbedding, "vertex owned twice");
                tg.owner[v] = int(ei);
            }
        }
        tg.roots.clear();
        for (size_t vi = 0; vi < faces.size(); ++vi)
            if (tg.owner[vi] == -1) tg.roots.push_back(int(vi));

        // boundary loop from single-covered pieces
        {
            struct Piece { int from, to, edge; };
            std::map<int, Piece> outgoing; // from-vertex -> piece
            size_t boundary_count = 0;
            for (size_t ei = 0; ei < tg.edges.size(); ++ei) {
                const auto& ce = tg.edges[ei];
                auto proj = [&](std::complex<double> p) {
                    return (p * std::conj(ce.dir)).real();
                };
                double base_t = proj(tg.positions[ce.vertices[0]]);
                // spans of present sides with the side of their triangle
                struct Span { double lo, hi; double side; };
                std::vector<Span> spans;
                for (int t = 1; t <= 3; ++t) {
                    EdgeId e{ce.black, t};
                    auto wi = region.white_index(e.white());
                    if (!wi) continue;
                    auto c = white_corners(e.white());
                    std::complex<double> centroid =
                        (tg.positions[face_idx.at(c[0])] + tg.positions[face_idx.at(c[1])] +
                         tg.positions[face_idx.at(c[2])]) /
                        3.0;
                    double t1 = proj(tg.positions[face_idx.at(edge_left_face(e))]) - base_t;
                    double t2 = proj(tg.positions[face_idx.at(edge_right_face(e))]) - base_t;
                    std::complex<double> anchor = tg.positions[ce.vertices[0]];
                    double side = cross(ce.dir, centroid - anchor);
                    spans.push_back({std::min(t1, t2), std::max(t1, t2), side});
                }
                for (size_t k = 0; k + 1 < ce.vertices.size(); ++k) {
                    int va = ce.vertices[k], vb = ce.vertices[k + 1];
                    double lo = proj(tg.positions[va]) - base_t;
                    double hi = proj(tg.positions[vb]) - base_t;
                    int above = 0, below = 0;
                    for (const Span& s : spans) {
                        if (s.lo <= lo + 1e-9 * scale && hi <= s.hi + 1e-9 * scale) {
                            if (s.side > 0)
                                ++above;
                            else
                                ++below;
                        }
                    }
                    if (above + below == 0)
                        throw std::logic_error("piece covered by no triangle");
                    if (above >= 1 && below >= 1) continue; // interior piece
                    ++boundary_count;
                    // orient with the covering triangle on the left
                    bool triangle_above = above > 0;
                    int from = triangle_above ? vb : va;
                    int to = triangle_above ? va : vb;
                    // cross(dir_piece, above) > 0 when walking so the covered
                    // side is on the left: walking va->vb has direction +dir,
                    // "above" means cross(dir, .) > 0, i.e. left; so keep
                    // va->vb when the triangle is above.
                    if (triangle_above) {
                        from = va;
                        to = vb;
                    } else {
                        from = vb;
                        to = va;
                    }
                    if (outgoing.count(from))
                        throw Error(Errc::NonEmbedding, "boundary is not a simple polygon");
                    outgoing[from] = {from, to, int(ei)};
                }
            }
            tg.boundary_loop.clear();
            tg.boundary_piece_edges.clear();
            if (!outgoing.empty()) {
                int start = outgoing.begin()->first;
                int cur = start;
                do {
                    auto it = outgoing.find(cur);
                    if (it == outgoing.end())
                        throw Error(Errc::NonEmbedding, "boundary loop broken");
                    tg.boundary_loop.push_back(cur);
                    tg.boundary_piece_edges.push_back(it->second.edge);
                    cur = it->second.to;
                } while (cur != start && tg.boundary_loop.size() <= boundary_count + 1);
                if (tg.boundary_loop.size() != boundary_count)
                    throw Error(Errc::NonEmbedding, "boundary has several loops");
            }
        }

        // roots in ccw loop order, starting from the lowest-leftmost one; the
        // boundary arc from the last root back to the first carries no outer
        // face of the dimer graph, and cut paths must leave through it
        if (!tg.boundary_loop.empty() && !tg.roots.empty()) {
            const auto& loop = tg.boundary_loop;
            std::vector<size_t> root_pos;
            for (size_t i = 0; i < loop.size(); ++i)
                if (tg.owner[loop[i]] == -1) root_pos.push_back(i);
            size_t first = 0;
            for (size_t i = 1; i < root_pos.size(); ++i) {
                auto p = tg.positions[loop[root_pos[i]]];
                auto q = tg.positions[loop[root_pos[first]]];
                if (p.imag() < q.imag() - 1e-12 ||
                    (std::abs(p.imag() - q.imag()) < 1e-12 && p.real() < q.real()))
                    first = i;
            }
            for (size_t k = 0; k < root_pos.size(); ++k)
                tg.root_cycle.push_back(loop[root_pos[(first + k) % root_pos.size()]]);
            if (root_pos.size() >= 2) {
                size_t last = root_pos[(first + root_pos.size() - 1) % root_pos.size()];
                size_t stop = root_pos[first];
                for (size_t i = last; i != stop; i = (i + 1) % loop.size())
                    tg.dropped_arc.push_back(i);
            }
        }
        return tg;
    }
    throw Error(Errc::DegenerateLambda, "no usable lambda found: " + failure);
}

TGraphChain markov_chain(const TGraph& tg) {
    TGraphChain chain;
    chain.transitions.assign(tg.positions.size(), {});
    for (size_t vi = 0; vi < tg.positions.size(); ++vi) {
        int ei = tg.owner[vi];
        if (ei < 0) continue;
        const auto& ce = tg.edges[ei];
        auto it = std::find(ce.vertices.begin(), ce.vertices.end(), int(vi));
        size_t k = it - ce.vertices.begin();
        int prev = ce.vertices[k - 1], next = ce.vertices[k + 1];
        double d1 = std::abs(tg.positions[vi] - tg.positions[prev]);
        double d2 = std::abs(tg.positions[vi] - tg.positions[next]);
        double w1 = 1.0 / d1, w2 = 1.0 / d2;
        chain.transitions[vi] = {{prev, w1 / (w1 + w2)}, {next, w2 / (w1 + w2)}};
    }
    return chain;
}

DimerGraphGD dimer_graph(const TGraph& tg) {
    const Region& region = *tg.region;
    DimerGraphGD gd;
    gd.n_blacks = int(tg.edges.size());

    // triangle whites, counterclockwise entries
    for (int wi = 0; wi < region.white_count(); ++wi) {
        Coord w = region.whites()[wi];
        auto c = white_corners(w);
        int A = tg.vertex_of(c[0]), B = tg.vertex_of(c[1]), C = tg.vertex_of(c[2]);
        // corner pair -> black: {A,B} type1, {A,C} type2, {C,B} type3
        auto black_of_pair = [&](int u, int v) -> Coord {
            auto is = [&](int x, int y, int p, int q) {
                return (x == p && y == q) || (x == q && y == p);
            };
            if (is(u, v, A, B)) return edge_from_white(w, 1).black;
            if (is(u, v, A, C)) return edge_from_white(w, 2).black;
            if (is(u, v, C, B)) return edge_from_white(w, 3).black;
            throw std::logic_error("not a side of this triangle");
        };
        std::array<int, 3> cyc{A, B, C};
        double area = cross(tg.positions[B] - tg.positions[A], tg.positions[C] - tg.positions[A]);
        if (area < 0) cyc = {A, C, B};
        DimerGraphGD::White white;
        white.region_white = wi;
        for (int k = 0; k < 3; ++k) {
            int u = cyc[k], v = cyc[(k + 1) % 3];
            DimerGraphGD::Entry e;
            e.edge_id = tg.edge_of_black.at(black_of_pair(u, v));
            e.value = tg.positions[v] - tg.positions[u];
            e.anchor = 0.5 * (tg.positions[v] + tg.positions[u]);
            white.entries.push_back(e);
        }
        gd.whites.push_back(std::move(white));
    }

    // outer faces: boundary arcs between consecutive roots, all but the
    // dropped one
    const auto& loop = tg.boundary_loop;
    if (!loop.empty() && tg.root_cycle.size() >= 2) {
        auto loop_pos = [&](int vertex) {
            for (size_t i = 0; i < loop.size(); ++i)
                if (loop[i] == vertex) return i;
            throw std::logic_error("root not on the boundary loop");
        };
        const size_t m = tg.root_cycle.size();
        for (size_t arc = 0; arc + 1 < m; ++arc) {
            size_t ia = loop_pos(tg.root_cycle[arc]);
            size_t ib = loop_pos(tg.root_cycle[arc + 1]);
            // walk the loop from ia to ib, collecting pieces, then reverse
            struct Step { int from, to, edge; };
            std::vector<Step> pieces; // in loop order
            for (size_t i = ia; i != ib; i = (i + 1) % loop.size())
                pieces.push_back(
                    {loop[i], loop[(i + 1) % loop.size()], tg.boundary_piece_edges[i]});
            std::reverse(pieces.begin(), pieces.end());
            DimerGraphGD::White outer;
            outer.outer = true;
            for (const Step& p : pieces) {
                // reversed traversal: the actual step is to -> from
                std::complex<double> vec = tg.positions[p.from] - tg.positions[p.to];
                std::complex<double> anchor = 0.5 * (tg.positions[p.from] + tg.positions[p.to]);
                if (!outer.entries.empty() && outer.entries.back().edge_id == p.edge) {
                    outer.entries.back().value += vec;
                    outer.entries.back().anchor = anchor;
                } else {
                    outer.entries.push_back({p.edge, vec, anchor});
                }
            }
            gd.whites.push_back(std::move(outer));
        }
    }

    // --- faces via the rotation system -------------------------------------
    struct Dart { int white, entry; bool to_black; };
    // ccw rotations: whites by angle (triangles) or entry order (outer);
    // blacks by boustrophedon order along the segment.
    const int W = int(gd.whites.size());
    std::vector<std::vector<std::pair<int, int>>> white_rot(W); // (white, entry)
    for (int w = 0; w < W; ++w) {
        auto& entries = gd.whites[w].entries;
        std::vector<int> order(entries.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
        if (!gd.whites[w].outer) {
            Coord wc = region.whites()[gd.whites[w].region_white];
            auto c = white_corners(wc);
            std::complex<double> centroid =
                (tg.positions[tg.vertex_of(c[0])] + tg.positions[tg.vertex_of(c[1])] +
                 tg.positions[tg.vertex_of(c[2])]) /
                3.0;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return std::arg(entries[a].anchor - centroid) <
                       std::arg(entries[b].anchor - centroid);
            });
        }
        for (int i : order) white_rot[w].push_back({w, i});
    }
    std::vector<std::vector<std::pair<int, int>>> black_rot(gd.n_blacks);
    {
        struct Inc { int white, entry; double t, side; };
        std::vector<std::vector<Inc>> incident(gd.n_blacks);
        for (int w = 0; w < W; ++w)
            for (size_t k = 0; k < gd.whites[w].entries.size(); ++k) {
                const auto& e = gd.whites[w].entries[k];
                const auto& ce = tg.edges[e.edge_id];
                std::complex<double> base = tg.positions[ce.vertices[0]];
                double t = ((e.anchor - base) * std::conj(ce.dir)).real();
                double side;
                if (!gd.whites[w].outer) {
                    Coord wc = region.whites()[gd.whites[w].region_white];
                    auto c = white_corners(wc);
                    std::complex<double> centroid =
                        (tg.positions[tg.vertex_of(c[0])] + tg.positions[tg.vertex_of(c[1])] +
                         tg.positions[tg.vertex_of(c[2])]) /
                        3.0;
                    side = cross(ce.dir, centroid - e.anchor);
                } else {
                    // outer face sits on the uncovered side: find the covering
                    // triangle among this black's whites and take the opposite
                    side = 0;
                    for (int t3 = 1; t3 <= 3; ++t3) {
                        EdgeId he{ce.black, t3};
                        auto wi = region.white_index(he.white());
                        if (!wi) continue;
                        auto c = white_corners(he.white());
                        std::complex<double> centroid =
                            (tg.positions[tg.vertex_of(c[0])] + tg.positions[tg.vertex_of(c[1])] +
                             tg.positions[tg.vertex_of(c[2])]) /
                            3.0;
                        double tc1 = ((tg.positions[tg.vertex_of(edge_left_face(he))] - base) *
                                      std::conj(ce.dir))
                                         .real();
                        double tc2 = ((tg.positions[tg.vertex_of(edge_right_face(he))] - base) *
                                      std::conj(ce.dir))
                                         .real();
                        if (t >= std::min(tc1, tc2) - 1e-9 * tg.scale &&
                            t <= std::max(tc1, tc2) + 1e-9 * tg.scale)
                            side = -cross(ce.dir, centroid - e.anchor);
                    }
                    if (side == 0) throw std::logic_error("outer entry not over any side");
                }
                incident[e.edge_id].push_back({w, int(k), t, side});
            }
        for (int b = 0; b < gd.n_blacks; ++b) {
            auto& inc = incident[b];
            std::vector<Inc> top, bottom;
            for (const Inc& i : inc) (i.side > 0 ? top : bottom).push_back(i);
            std::sort(top.begin(), top.end(), [](const Inc& a, const Inc& b2) { return a.t > b2.t; });
            std::sort(bottom.begin(), bottom.end(),
                      [](const Inc& a, const Inc& b2) { return a.t < b2.t; });
            for (const Inc& i : top) black_rot[b].push_back({i.white, i.entry});
            for (const Inc& i : bottom) black_rot[b].push_back({i.white, i.entry});
        }
    }

    // face tracing: next dart = ccw-successor of the reversed dart
    auto rot_next = [&](const std::vector<std::pair<int, int>>& rot, std::pair<int, int> key) {
        for (size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == key) return rot[(i + 1) % rot.size()];
        throw std::logic_error("dart not in rotation");
    };
    long long n_edges = 0;
    for (int w = 0; w < W; ++w) n_edges += gd.whites[w].entries.size();
    std::set<std::pair<std::pair<int, int>, bool>> visited;
    std::vector<DimerGraphGD::FaceCycle> traced;
    std::vector<double> areas;
    for (int w = 0; w < W; ++w) {
        for (size_t k = 0; k < gd.whites[w].entries.size(); ++k) {
            for (bool to_black : {true, false}) {
                if (visited.count({{w, int(k)}, to_black})) continue;
                DimerGraphGD::FaceCycle cyc;
                std::vector<std::complex<double>> poly;
                int cw = w, ck = int(k);
                bool ctb = to_black;
                do {
                    visited.insert({{cw, ck}, ctb});
                    cyc.steps.push_back({cw, ck});
                    poly.push_back(gd.whites[cw].entries[ck].anchor);
                    if (ctb) {
                        // arrive at black: continue with ccw-successor there
                        auto nxt = rot_next(black_rot[gd.whites[cw].entries[ck].edge_id], {cw, ck});
                        cw = nxt.first;
                        ck = nxt.second;
                        ctb = false;
                    } else {
                        auto nxt = rot_next(white_rot[cw], {cw, ck});
                        cw = nxt.first;
                        ck = nxt.second;
                        ctb = true;
                    }
                } while (!visited.count({{cw, ck}, ctb}));
                double area = 0;
                for (size_t i = 0; i < poly.size(); ++i)
                    area += cross(poly[i], poly[(i + 1) % poly.size()]);
                traced.push_back(std::move(cyc));
                areas.push_back(area);
            }
        }
    }
    // drop the outer face (most negative area)
    if (!traced.empty()) {
        size_t outer = 0;
        for (size_t i = 1; i < traced.size(); ++i)
            if (areas[i] < areas[outer]) outer = i;
        for (size_t i = 0; i < traced.size(); ++i)
            if (i != outer) gd.bounded_faces.push_back(std::move(traced[i]));
    }
    return gd;
}

double check_discrete_analytic(const DimerGraphGD& gd, const std::vector<std::complex<double>>& g) {
    double worst = 0;
    for (const auto& w : gd.whites) {
        if (w.outer) continue;
        std::complex<double> sum = 0;
        for (const auto& e : w.entries) sum += e.value * g[e.edge_id];
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

namespace {

// signed crossings of segment [a,b] with the polyline ell; +1 when the step
// crosses from the right of ell to its left.
struct CrossingCounter {
    const std::vector<std::complex<double>>* ell;
    double tol;

    // returns false on a degenerate near-touch
    bool count(std::complex<double> a, std::complex<double> b, int& out) const {
        int total = 0;
        for (size_t i = 0; i + 1 < ell->size(); ++i) {
            std::complex<double> c = (*ell)[i], d = (*ell)[i + 1];
            double d1 = cross(d - c, a - c);
            double d2 = cross(d - c, b - c);
            double d3 = cross(b - a, c - a);
            double d4 = cross(b - a, d - a);
            double eps = tol * (std::abs(d - c) + std::abs(b - a));
            if (std::min(std::abs(d1), std::abs(d2)) < eps * std::abs(d - c) ||
                std::min(std::abs(d3), std::abs(d4)) < eps * std::abs(b - a)) {
                // touching configurations: only fatal if genuinely crossing nearby
                if ((d1 < 0) != (d2 < 0) && (d3 < 0) != (d4 < 0)) return false;
                continue;
            }
            if ((d1 < 0) != (d2 < 0) && (d3 < 0) != (d4 < 0)) total += d2 > 0 ? +1 : -1;
        }
        out = total;
        return true;
    }
};

} // namespace

HarmonicField conjugate_greens(const TGraph& tg, const TGraphChain& chain, int region_white,
                               std::vector<std::complex<double>> ell) {
    const Region& region = *tg.region;
    if (region_white < 0 || region_white >= region.white_count())
        throw Error(Errc::BadInput, "white index out of range");
    auto c = white_corners(region.whites()[region_white]);
    std::complex<double> centroid = (tg.positions[tg.vertex_of(c[0])] +
                                     tg.positions[tg.vertex_of(c[1])] +
                                     tg.positions[tg.vertex_of(c[2])]) /
                                    3.0;
    if (tg.dropped_arc.empty()) throw Error(Errc::MalformedBoundary, "no dropped boundary arc");

    // The cut must leave the polygon through the dropped arc (the boundary
    // path without an outer face); otherwise K K^{-1} = I picks up the cut's
    // jump on some outer face's row.
    auto boundary_exit_ok = [&](const std::vector<std::complex<double>>& cut) {
        CrossingCounter counter{&cut, 1e-7};
        int total = 0;
        int dropped = 0;
        for (size_t i = 0; i < tg.boundary_loop.size(); ++i) {
            int a = tg.boundary_loop[i];
            int b = tg.boundary_loop[(i + 1) % tg.boundary_loop.size()];
            int sigma = 0;
            if (!counter.count(tg.positions[a], tg.positions[b], sigma)) return false;
            if (sigma == 0) continue;
            total += std::abs(sigma);
            bool in_dropped = std::find(tg.dropped_arc.begin(), tg.dropped_arc.end(), i) !=
                              tg.dropped_arc.end();
            if (in_dropped) dropped += std::abs(sigma);
        }
        return total == 1 && dropped == 1;
    };

    const int attempts = ell.empty() ? int(tg.dropped_arc.size()) * 3 : 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<std::complex<double>> cut = ell;
        if (cut.empty()) {
            // aim through a point of the dropped arc, slightly varied per retry
            size_t piece = tg.dropped_arc[attempt % tg.dropped_arc.size()];
            int a = tg.boundary_loop[piece];
            int b = tg.boundary_loop[(piece + 1) % tg.boundary_loop.size()];
            double t = 0.5 + 0.17 * ((attempt / tg.dropped_arc.size()) % 3 - 1);
            std::complex<double> target =
                tg.positions[a] + t * (tg.positions[b] - tg.positions[a]);
            std::complex<double> dir = target - centroid;
            cut = {centroid, centroid + dir * (1.0 + 5.0 * tg.scale / std::abs(dir))};
        }
        if (!boundary_exit_ok(cut)) {
            if (!ell.empty())
                throw Error(Errc::BadInput, "cut path must exit through the dropped boundary arc");
            continue;
        }
        CrossingCounter counter{&cut, 1e-7};

        // assemble the harmonic system with jump bookkeeping
        const int n = int(tg.positions.size());
        std::vector<int> unknown(n, -1);
        int nu = 0;
        for (int v = 0; v < n; ++v)
            if (!chain.transitions[v].empty()) unknown[v] = nu++;
        Eigen::SparseMatrix<double> A(nu, nu);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
        std::vector<Eigen::Triplet<double>> trips;
        bool degenerate = false;
        for (int v = 0; v < n && !degenerate; ++v) {
            if (unknown[v] < 0) continue;
            trips.emplace_back(unknown[v], unknown[v], 1.0);
            for (auto [u, p] : chain.transitions[v]) {
                int sigma = 0;
                if (!counter.count(tg.positions[v], tg.positions[u], sigma)) {
                    degenerate = true;
                    break;
                }
                rhs(unknown[v]) += p * sigma;
                if (unknown[u] >= 0) trips.emplace_back(unknown[v], unknown[u], -p);
            }
        }
        if (degenerate) {
            if (!ell.empty()) throw Error(Errc::BadInput, "cut path touches a walk step");
            continue;
        }
        A.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
        solver.compute(A);
        if (solver.info() != Eigen::Success)
            throw Error(Errc::SingularMatrix, "harmonicity system is singular");
        Eigen::VectorXd sol = solver.solve(rhs);

        HarmonicField field;
        field.source_white = region_white;
        field.ell = cut;
        field.values.assign(n, 0.0);
        for (int v = 0; v < n; ++v)
            if (unknown[v] >= 0) field.values[v] = sol(unknown[v]);
        return field;
    }
    throw Error(Errc::BadInput, "could not place a cut path avoiding all vertices");
}

std::vector<std::complex<double>> kinv_from_greens(const TGraph& tg, const DimerGraphGD& gd,
                                                   const HarmonicField& field) {
    CrossingCounter counter{&field.ell, 1e-7};
    std::vector<std::complex<double>> column(tg.edges.size());
    for (size_t ei = 0; ei < tg.edges.size(); ++ei) {
        const auto& ce = tg.edges[ei];
        int v1 = ce.vertices[0], v2 = ce.vertices[1];
        int sigma = 0;
        if (!counter.count(tg.positions[v1], tg.positions[v2], sigma))
            throw Error(Errc::BadInput, "cut path touches a complete edge");
        double diff = field.values[v2] + sigma - field.values[v1];
        column[ei] = diff / (tg.positions[v2] - tg.positions[v1]);
    }
    (void)gd;
    return column;
}

CanonicalFlow canonical_flow(const TGraph& tg, const DimerGraphGD& gd) {
    const Region& region = *tg.region;
    CanonicalFlow flow;
    flow.values.resize(gd.whites.size());

    // rotation from ray `from` to ray `to` in direction `sense`, in [0, 2pi)
    auto sweep = [](std::complex<double> from, std::complex<double> to, double sense) {
        double a = std::arg(to) - std::arg(from);
        if (sense < 0) a = -a;
        a = std::fmod(a, 2 * kPi);
        if (a < 0) a += 2 * kPi;
        return a;
    };

    for (size_t w = 0; w < gd.whites.size(); ++w) {
        const auto& white = gd.whites[w];
        flow.values[w].assign(white.entries.size(), 0.0);
        if (white.outer) continue; // zero on boundary-white edges
        Coord wc = region.whites()[white.region_white];
        auto cs = white_corners(wc);
        std::array<int, 3> corner{tg.vertex_of(cs[0]), tg.vertex_of(cs[1]), tg.vertex_of(cs[2])};
        for (size_t k = 0; k < white.entries.size(); ++k) {
            const auto& entry = white.entries[k];
            const auto& ce = tg.edges[entry.edge_id];
            // endpoints of this side: the two corners on the edge's line
            int e1 = -1, e2 = -1, other = -1;
            for (int v : corner) {
                double dev = std::abs(
                    ((tg.positions[v] - tg.positions[ce.vertices[0]]) * std::conj(ce.dir)).imag());
                if (dev < 1e-7 * tg.scale) {
                    if (e1 < 0)
                        e1 = v;
                    else
                        e2 = v;
                } else {
                    other = v;
                }
            }
            if (e1 < 0 || e2 < 0 || other < 0)
                throw std::logic_error("triangle side does not sit on its complete edge");
            double total = 0;
            for (auto [v, vb] : {std::pair<int, int>{e1, e2}, {e2, e1}}) {
                if (tg.owner_black[v] == ce.black) continue; // angle zero
                std::complex<double> rho_s = tg.positions[vb] - tg.positions[v];
                std::complex<double> rho_o = tg.positions[other] - tg.positions[v];
                double sense = cross(rho_s, rho_o) > 0 ? -1.0 : 1.0; // rotate away from interior
                std::complex<double> u = tg.owner_dir[v];
                total += std::min(sweep(rho_s, u, sense), sweep(rho_s, -u, sense));
            }
            flow.values[w][k] = total / (2 * kPi);
        }
    }
    return flow;
}

double boundary_height_profile(const SlopeParams& slope, char direction, long long n) {
    if (slope.facet) throw Error(Errc::DegenerateSlope, "interior slope required");
    if (n < 1) throw Error(Errc::BadInput, "column length must be positive");
    double theta;
    switch (direction) {
        case 'x': theta = slope.theta_c; break;
        case 'y': theta = slope.theta_a; break;
        case 'z': theta = slope.theta_b; break;
        default: throw Error(Errc::BadInput, "direction must be x, y or z");
    }
    // convex-corner condition: 2 j theta in [pi, pi + 2 theta) modulo 2 pi.
    // The half-open side realizes the continuity limit for rational angles,
    // which hit the endpoints exactly; the tolerance absorbs fmod round-off.
    const double tol = 1e-9;
    long long count = 0;
    for (long long j = 1; j <= n; ++j) {
        double d = std::fmod(2.0 * double(j) * theta - kPi, 2 * kPi);
        if (d < 0) d += 2 * kPi;
        if (d <= 2 * theta - tol || d >= 2 * kPi - tol) ++count;
    }
    return double(count) / double(n) - 1.0 / 3.0;
}

} // namespace dimerlab
