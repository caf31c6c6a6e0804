#include "dimerlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace dimerlab {

namespace {
const std::complex<double> kXHat{1.0, 0.0};
const std::complex<double> kYHat{-0.5, std::sqrt(3.0) / 2.0};

int64_t cross64(int64_t ax, int64_t ay, int64_t bx, int64_t by) { return ax * by - ay * bx; }
} // namespace

std::complex<double> white_position(Coord w) { return double(w.m) * kXHat + double(w.n) * kYHat; }

std::complex<double> black_position(Coord b) {
    // e2 = (y_hat - x_hat)/3
    return white_position(b) + (kYHat - kXHat) / 3.0;
}

std::complex<double> face_position(FaceId f) {
    // e1 + e2 = (x_hat + 2 y_hat)/3
    return white_position(f) + (kXHat + 2.0 * kYHat) / 3.0;
}

TriCoord white_tricoord(Coord w) { return {3ll * w.m, 3ll * w.n}; }
TriCoord black_tricoord(Coord b) { return {3ll * b.m - 1, 3ll * b.n + 1}; }
TriCoord face_tricoord(FaceId f) { return {3ll * f.m + 1, 3ll * f.n + 2}; }

Coord EdgeId::white() const {
    switch (type) {
        case 1: return black;
        case 2: return {black.m - 1, black.n};
        case 3: return {black.m, black.n + 1};
    }
    throw Error(Errc::BadInput, "edge type must be 1, 2 or 3");
}

EdgeId edge_from_white(Coord white, int type) {
    switch (type) {
        case 1: return {white, 1};
        case 2: return {{white.m + 1, white.n}, 2};
        case 3: return {{white.m, white.n - 1}, 3};
    }
    throw Error(Errc::BadInput, "edge type must be 1, 2 or 3");
}

FaceId edge_left_face(const EdgeId& e) {
    switch (e.type) {
        case 1: return {e.black.m - 1, e.black.n - 1};
        case 2: return {e.black.m - 1, e.black.n};
        case 3: return {e.black.m, e.black.n};
    }
    throw Error(Errc::BadInput, "edge type must be 1, 2 or 3");
}

FaceId edge_right_face(const EdgeId& e) {
    switch (e.type) {
        case 1: return {e.black.m, e.black.n};
        case 2: return {e.black.m - 1, e.black.n - 1};
        case 3: return {e.black.m - 1, e.black.n};
    }
    throw Error(Errc::BadInput, "edge type must be 1, 2 or 3");
}

std::array<Coord, 6> face_direction_offsets() {
    return {{{1, 0}, {0, 1}, {1, 1}, {-1, 0}, {0, -1}, {-1, -1}}};
}

DualStep dual_step(FaceId f, int dir) {
    const int m = f.m, n = f.n;
    switch (dir) {
        case 0: return {{{m + 1, n}, 3}, +1, {m + 1, n}};
        case 1: return {{{m + 1, n + 1}, 2}, +1, {m, n + 1}};
        case 2: return {{{m + 1, n + 1}, 1}, -1, {m + 1, n + 1}};
        case 3: return {{{m, n}, 3}, -1, {m - 1, n}};
        case 4: return {{{m + 1, n}, 2}, -1, {m, n - 1}};
        case 5: return {{{m, n}, 1}, +1, {m - 1, n - 1}};
    }
    throw Error(Errc::BadInput, "dual direction must be 0..5");
}

// ---------------------------------------------------------------------------
// Region
// ---------------------------------------------------------------------------

void Region::build_indexes() {
    std::sort(whites_.begin(), whites_.end());
    whites_.erase(std::unique(whites_.begin(), whites_.end()), whites_.end());
    std::sort(blacks_.begin(), blacks_.end());
    blacks_.erase(std::unique(blacks_.begin(), blacks_.end()), blacks_.end());
    for (size_t i = 0; i < whites_.size(); ++i) white_idx_[whites_[i]] = static_cast<int>(i);
    for (size_t i = 0; i < blacks_.size(); ++i) black_idx_[blacks_[i]] = static_cast<int>(i);

    // Induced edges, canonical order: by black then type.
    edges_.clear();
    for (const Coord& b : blacks_) {
        for (int t = 1; t <= 3; ++t) {
            EdgeId e{b, t};
            if (white_idx_.count(e.white())) edges_.push_back(e);
        }
    }
    edge_white_.resize(edges_.size());
    edge_black_.resize(edges_.size());
    white_edges_.assign(whites_.size(), {});
    black_edges_.assign(blacks_.size(), {});
    for (size_t i = 0; i < edges_.size(); ++i) {
        edge_idx_[edges_[i]] = static_cast<int>(i);
        edge_white_[i] = white_idx_.at(edges_[i].white());
        edge_black_[i] = black_idx_.at(edges_[i].black);
        white_edges_[edge_white_[i]].push_back(static_cast<int>(i));
        black_edges_[edge_black_[i]].push_back(static_cast<int>(i));
    }

    // Faces touched by at least one vertex.
    std::set<FaceId> faces;
    for (const Coord& w : whites_) {
        faces.insert({w.m, w.n});
        faces.insert({w.m - 1, w.n - 1});
        faces.insert({w.m, w.n - 1});
    }
    for (const Coord& b : blacks_) {
        faces.insert({b.m, b.n});
        faces.insert({b.m - 1, b.n});
        faces.insert({b.m - 1, b.n - 1});
    }
    faces_.assign(faces.begin(), faces.end());
    face_interior_.assign(faces_.size(), 0);
    for (size_t i = 0; i < faces_.size(); ++i) {
        face_idx_[faces_[i]] = static_cast<int>(i);
        const FaceId f = faces_[i];
        bool full = white_idx_.count({f.m, f.n}) && white_idx_.count({f.m + 1, f.n + 1}) &&
                    white_idx_.count({f.m, f.n + 1}) && black_idx_.count({f.m + 1, f.n}) &&
                    black_idx_.count({f.m + 1, f.n + 1}) && black_idx_.count({f.m, f.n});
        face_interior_[i] = full ? 1 : 0;
    }
}

void Region::validate_topology() const {
    if (whites_.empty() && blacks_.empty()) throw Error(Errc::BadInput, "empty region");

    // Euler characteristic of the union of closed dual triangles:
    // corners - sides + triangles must equal 1 (connected, no holes).
    std::set<std::pair<Coord, int>> sides; // edge = (black, type), incident to >=1 vertex
    auto add_sides_of_white = [&](Coord w) {
        for (int t = 1; t <= 3; ++t) {
            EdgeId e = edge_from_white(w, t);
            sides.insert({e.black, e.type});
        }
    };
    for (const Coord& w : whites_) add_sides_of_white(w);
    for (const Coord& b : blacks_) {
        for (int t = 1; t <= 3; ++t) sides.insert({b, t});
    }
    const int64_t chi = static_cast<int64_t>(faces_.size()) - static_cast<int64_t>(sides.size()) +
                        static_cast<int64_t>(whites_.size() + blacks_.size());
    if (chi != 1)
        throw Error(Errc::BadInput,
                    "region is not simply connected (Euler characteristic " + std::to_string(chi) + ")");

    // Height propagation must reach every face.
    std::vector<uint8_t> seen(faces_.size(), 0);
    std::deque<int> queue;
    seen[0] = 1;
    queue.push_back(0);
    size_t reached = 1;
    while (!queue.empty()) {
        int fi = queue.front();
        queue.pop_front();
        for (int dir = 0; dir < 6; ++dir) {
            DualStep step = dual_step(faces_[fi], dir);
            if (!edge_is_fringe(step.crossed)) continue;
            auto it = face_idx_.find(step.to);
            if (it == face_idx_.end()) continue;
            if (!seen[it->second]) {
                seen[it->second] = 1;
                ++reached;
                queue.push_back(it->second);
            }
        }
    }
    if (reached != faces_.size())
        throw Error(Errc::BadInput, "region faces are not dual-connected");
}

Region Region::from_vertices(std::vector<Coord> whites, std::vector<Coord> blacks, double epsilon) {
    Region r;
    r.whites_ = std::move(whites);
    r.blacks_ = std::move(blacks);
    r.epsilon_ = epsilon;
    r.build_indexes();
    r.validate_topology();
    return r;
}

Region Region::from_boundary(FaceId start, const std::vector<int>& steps, double epsilon) {
    if (steps.size() < 3) throw Error(Errc::NotClosed, "boundary path has fewer than 3 steps");
    const auto offs = face_direction_offsets();
    std::vector<FaceId> path;
    path.reserve(steps.size());
    FaceId cur = start;
    for (int dir : steps) {
        if (dir < 0 || dir > 5) throw Error(Errc::BadInput, "bad step direction");
        path.push_back(cur);
        cur = {cur.m + offs[dir].m, cur.n + offs[dir].n};
    }
    if (!(cur == start)) throw Error(Errc::NotClosed, "boundary path does not close");
    {
        std::set<FaceId> distinct(path.begin(), path.end());
        if (distinct.size() != path.size())
            throw Error(Errc::NonSimplePath, "boundary path revisits a dual vertex");
    }

    // Signed area in tricoords; normalize to positive orientation.
    std::vector<TriCoord> poly;
    poly.reserve(path.size());
    for (const FaceId& f : path) poly.push_back(face_tricoord(f));
    int64_t area2 = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const TriCoord& a = poly[i];
        const TriCoord& b = poly[(i + 1) % poly.size()];
        area2 += cross64(a.u, a.v, b.u, b.v);
    }
    if (area2 == 0) throw Error(Errc::NonSimplePath, "degenerate boundary path");
    bool reversed = area2 < 0;
    if (reversed) {
        std::reverse(path.begin(), path.end());
        std::reverse(poly.begin(), poly.end());
    }

    // Local monotonicity heuristic: flag 120-degree turns.
    bool warn = false;
    std::vector<int> dirs(steps);
    if (reversed) {
        std::reverse(dirs.begin(), dirs.end());
        for (int& d : dirs) d = (d + 3) % 6;
    }
    auto turn_class = [](int d0, int d1) {
        static const int order[6] = {0, 2, 1, 3, 5, 4}; // direction -> angular position (60 deg units)
        return ((order[d1] - order[d0]) % 6 + 6) % 6;
    };
    for (size_t i = 0; i < dirs.size(); ++i) {
        int t = turn_class(dirs[i], dirs[(i + 1) % dirs.size()]);
        if (t == 2 || t == 4) warn = true;
    }

    auto strictly_inside = [&poly](TriCoord p) {
        int winding = 0;
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const TriCoord& a = poly[i];
            const TriCoord& b = poly[(i + 1) % n];
            if (a.v <= p.v) {
                if (b.v > p.v && cross64(b.u - a.u, b.v - a.v, p.u - a.u, p.v - a.v) > 0) ++winding;
            } else {
                if (b.v <= p.v && cross64(b.u - a.u, b.v - a.v, p.u - a.u, p.v - a.v) < 0) --winding;
            }
        }
        return winding != 0;
    };

    int mlo = path[0].m, mhi = path[0].m, nlo = path[0].n, nhi = path[0].n;
    for (const FaceId& f : path) {
        mlo = std::min(mlo, f.m);
        mhi = std::max(mhi, f.m);
        nlo = std::min(nlo, f.n);
        nhi = std::max(nhi, f.n);
    }
    std::vector<Coord> whites, blacks;
    for (int m = mlo - 1; m <= mhi + 1; ++m) {
        for (int n = nlo - 1; n <= nhi + 1; ++n) {
            if (strictly_inside(white_tricoord({m, n}))) whites.push_back({m, n});
            if (strictly_inside(black_tricoord({m, n}))) blacks.push_back({m, n});
        }
    }
    Region r = from_vertices(std::move(whites), std::move(blacks), epsilon);
    r.boundary_path_ = path;
    r.monotone_warning_ = warn;
    return r;
}

Region Region::hexagon(int a, int b, int c, double epsilon) {
    if (a < 1 || b < 1 || c < 1) throw Error(Errc::BadInput, "hexagon sides must be >= 1");
    std::vector<int> steps;
    auto run = [&steps](int dir, int count) {
        for (int i = 0; i < count; ++i) steps.push_back(dir);
    };
    run(1, a); // +y
    run(3, b); // -x
    run(5, c); // -(x+y)
    run(4, a); // -y
    run(0, b); // +x
    run(2, c); // +(x+y)
    return from_boundary({c, 0}, steps, epsilon);
}

Region Region::disk(double radius, double epsilon) {
    if (radius < 1.0) throw Error(Errc::BadInput, "disk radius must be >= 1");
    const std::complex<double> center = face_position({0, 0});
    const int span = static_cast<int>(std::ceil(radius * 1.6)) + 2;
    std::vector<Coord> whites, blacks;
    for (int m = -span; m <= span; ++m) {
        for (int n = -span; n <= span; ++n) {
            if (std::abs(white_position({m, n}) - center) <= radius) whites.push_back({m, n});
            if (std::abs(black_position({m, n}) - center) <= radius) blacks.push_back({m, n});
        }
    }
    return from_vertices(std::move(whites), std::move(blacks), epsilon);
}

std::optional<int> Region::white_index(Coord w) const {
    auto it = white_idx_.find(w);
    return it == white_idx_.end() ? std::nullopt : std::optional<int>(it->second);
}
std::optional<int> Region::black_index(Coord b) const {
    auto it = black_idx_.find(b);
    return it == black_idx_.end() ? std::nullopt : std::optional<int>(it->second);
}
std::optional<int> Region::face_index(FaceId f) const {
    auto it = face_idx_.find(f);
    return it == face_idx_.end() ? std::nullopt : std::optional<int>(it->second);
}
std::optional<int> Region::edge_index(const EdgeId& e) const {
    auto it = edge_idx_.find(e);
    return it == edge_idx_.end() ? std::nullopt : std::optional<int>(it->second);
}

bool Region::edge_is_fringe(const EdgeId& e) const {
    return black_idx_.count(e.black) || white_idx_.count(e.white());
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

Matching::Matching(const Region& region, std::vector<int> edge_of_white)
    : region_(&region), edge_of_white_(std::move(edge_of_white)) {
    if (static_cast<int>(edge_of_white_.size()) != region.white_count())
        throw Error(Errc::BadInput, "matching must assign every white vertex");
    edge_matched_.assign(region.edge_count(), 0);
    edge_of_black_.assign(region.black_count(), -1);
    for (int wi = 0; wi < region.white_count(); ++wi) {
        int ei = edge_of_white_[wi];
        if (ei < 0 || ei >= region.edge_count() || region.edge_white_index(ei) != wi)
            throw Error(Errc::BadInput, "matching edge does not belong to its white vertex");
        int bi = region.edge_black_index(ei);
        if (edge_of_black_[bi] != -1)
            throw Error(Errc::BadInput, "matching covers a black vertex twice");
        edge_of_black_[bi] = ei;
        edge_matched_[ei] = 1;
    }
    if (region.white_count() != region.black_count())
        throw Error(Errc::BadInput, "perfect matching requires equal color counts");
}

std::array<int, 3> Matching::type_counts() const {
    std::array<int, 3> counts{0, 0, 0};
    for (int wi = 0; wi < region_->white_count(); ++wi)
        counts[region_->edges()[edge_of_white_[wi]].type - 1]++;
    return counts;
}

// ---------------------------------------------------------------------------
// Heights and flows
// ---------------------------------------------------------------------------

int HeightField::at(FaceId f) const {
    auto idx = region->face_index(f);
    if (!idx) throw Error(Errc::BadInput, "face not in region");
    return values[*idx];
}

HeightField height_field(const Matching& m, FaceId base_face) {
    const Region& region = m.region();
    auto base_idx = region.face_index(base_face);
    if (!base_idx) throw Error(Errc::BadInput, "base face not in region");

    HeightField h;
    h.region = &region;
    h.base_face = base_face;
    h.values.assign(region.face_count(), 0);
    std::vector<uint8_t> seen(region.face_count(), 0);
    seen[*base_idx] = 1;
    std::deque<int> queue{*base_idx};
    while (!queue.empty()) {
        int fi = queue.front();
        queue.pop_front();
        for (int dir = 0; dir < 6; ++dir) {
            DualStep step = dual_step(region.faces()[fi], dir);
            if (!region.edge_is_fringe(step.crossed)) continue;
            auto ti = region.face_index(step.to);
            if (!ti) continue;
            auto ei = region.edge_index(step.crossed);
            int chi = (ei && m.contains(*ei)) ? 1 : 0;
            int value = h.values[fi] + step.sign * (3 * chi - 1);
            if (seen[*ti]) {
                if (h.values[*ti] != value)
                    throw std::logic_error("height increments are inconsistent around a loop");
            } else {
                seen[*ti] = 1;
                h.values[*ti] = value;
                queue.push_back(*ti);
            }
        }
    }
    return h;
}

Flow matching_flow(const Matching& m) {
    Flow f;
    f.region = &m.region();
    f.values.assign(m.region().edge_count(), 0.0);
    for (int ei = 0; ei < m.region().edge_count(); ++ei)
        if (m.contains(ei)) f.values[ei] = 1.0;
    f.off_region = 0.0;
    return f;
}

Flow omega_third(const Region& region) {
    Flow f;
    f.region = &region;
    f.values.assign(region.edge_count(), 1.0 / 3.0);
    f.off_region = 1.0 / 3.0;
    return f;
}

double flux_across(const Flow& flow, const std::vector<FaceId>& dual_path) {
    const Region& region = *flow.region;
    double total = 0.0;
    const auto offs = face_direction_offsets();
    for (size_t i = 0; i + 1 < dual_path.size(); ++i) {
        const FaceId a = dual_path[i], b = dual_path[i + 1];
        int dir = -1;
        for (int d = 0; d < 6; ++d)
            if (a.m + offs[d].m == b.m && a.n + offs[d].n == b.n) dir = d;
        if (dir < 0) throw Error(Errc::BadInput, "dual path steps must join adjacent faces");
        DualStep step = dual_step(a, dir);
        if (!region.edge_is_fringe(step.crossed)) continue;
        auto ei = region.edge_index(step.crossed);
        double value = ei ? flow.values[*ei] : flow.off_region;
        total += step.sign * value;
    }
    return total;
}

DualGraph dual_graph(const Region& region) {
    DualGraph g;
    g.white_triangles.reserve(region.white_count());
    std::set<FaceId> verts;
    for (const Coord& w : region.whites()) {
        DualGraph::Triangle t;
        t.corners = {FaceId{w.m, w.n}, FaceId{w.m - 1, w.n - 1}, FaceId{w.m, w.n - 1}};
        for (const FaceId& f : t.corners) verts.insert(f);
        g.white_triangles.push_back(t);
    }
    for (int bi = 0; bi < region.black_count(); ++bi) {
        const Coord b = region.blacks()[bi];
        bool full = region.white_index({b.m, b.n}) && region.white_index({b.m - 1, b.n}) &&
                    region.white_index({b.m, b.n + 1});
        if (full) g.black_triangles.push_back(bi);
    }
    g.vertices.assign(verts.begin(), verts.end());
    return g;
}

} // namespace dimerlab
