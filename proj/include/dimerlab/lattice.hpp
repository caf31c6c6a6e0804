#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimerlab {

enum class Errc {
    NonSimplePath,
    NotClosed,
    NonSquare,
    SingularMatrix,
    NoMatchingExists,
    EmptyWindow,
    InvalidSimplexPoint,
    DegenerateSlope,
    ZeroDisplacement,
    DegenerateLambda,
    NonEmbedding,
    MalformedBoundary,
    OutsideInscribedCircle,
    OutsideDomain,
    GridTooCoarse,
    BranchCutCrossing,
    CoincidentPoints,
    PathsInvalid,
    TooLarge,
    BadInput,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

// ---------------------------------------------------------------------------
// Honeycomb coordinates.
//
// Plane vectors: x_hat = (1,0), y_hat = (-1/2, sqrt3/2), z_hat = -x_hat-y_hat.
// White vertex (m,n) sits at m*x_hat + n*y_hat.  Black vertex (m,n) sits at
// e2 + m*x_hat + n*y_hat with e2 = (y_hat - x_hat)/3, which makes its three
// neighbors the whites (m,n), (m-1,n), (m,n+1) (edge types 1, 2, 3).
// Face (m,n) is the hexagon centered at (e1+e2) + m*x_hat + n*y_hat.
//
// In tripled (x_hat,y_hat)-affine integer coordinates:
//   white (m,n) -> (3m, 3n);  black (m,n) -> (3m-1, 3n+1);  face (m,n) -> (3m+1, 3n+2).
// ---------------------------------------------------------------------------

enum class Color : uint8_t { White, Black };

struct Coord {
    int m = 0, n = 0;
    friend bool operator==(Coord a, Coord b) { return a.m == b.m && a.n == b.n; }
    friend bool operator!=(Coord a, Coord b) { return !(a == b); }
    friend bool operator<(Coord a, Coord b) { return a.m != b.m ? a.m < b.m : a.n < b.n; }
};

using FaceId = Coord;

// Position in the plane, x_hat unit length.
std::complex<double> white_position(Coord w);
std::complex<double> black_position(Coord b);
std::complex<double> face_position(FaceId f);

// Tripled integer coordinates in the (x_hat, y_hat)-affine frame: exact
// geometry for point-in-polygon and orientation tests.
struct TriCoord {
    int64_t u = 0, v = 0;
};
TriCoord white_tricoord(Coord w);
TriCoord black_tricoord(Coord b);
TriCoord face_tricoord(FaceId f);

// Edge identified by its black endpoint and type:
//   type 1: (white(m,n),   black(m,n))
//   type 2: (white(m-1,n), black(m,n))
//   type 3: (white(m,n+1), black(m,n))
struct EdgeId {
    Coord black;
    int type = 1;
    Coord white() const;
    friend bool operator==(const EdgeId& a, const EdgeId& b) {
        return a.black == b.black && a.type == b.type;
    }
    friend bool operator<(const EdgeId& a, const EdgeId& b) {
        if (a.black != b.black) return a.black < b.black;
        return a.type < b.type;
    }
};
EdgeId edge_from_white(Coord white, int type);

// Faces flanking an edge, relative to the white->black walk direction.
FaceId edge_left_face(const EdgeId& e);
FaceId edge_right_face(const EdgeId& e);

// Dual steps between adjacent faces.  Directions 0..5:
//   0:+x  1:+y  2:+(x+y)  3:-x  4:-y  5:-(x+y)   (in the x_hat/y_hat frame)
struct DualStep {
    EdgeId crossed;
    int sign; // h(to) - h(from) = sign * (3*chi - 1)
    FaceId to;
};
DualStep dual_step(FaceId from, int direction);
std::array<Coord, 6> face_direction_offsets();

// ---------------------------------------------------------------------------
// Region: a finite induced subgraph of the honeycomb.
// ---------------------------------------------------------------------------

class Region {
public:
    // Induced subgraph on the given vertex sets.  Validates that the union of
    // the dual triangles is connected and simply connected.
    static Region from_vertices(std::vector<Coord> whites, std::vector<Coord> blacks,
                                double epsilon = 1.0);

    // The a x b x c hexagon (boxed-plane-partition region).
    static Region hexagon(int a, int b, int c, double epsilon = 1.0);

    // Region bounded by a simple closed positively-oriented path in the dual
    // lattice; `steps` are direction indices 0..5 starting from `start`.
    static Region from_boundary(FaceId start, const std::vector<int>& steps,
                                double epsilon = 1.0);

    // Disk-shaped region: all vertices within plane distance r of the center
    // of face (0,0).  Color-balanced by symmetry.
    static Region disk(double radius, double epsilon = 1.0);

    int white_count() const { return static_cast<int>(whites_.size()); }
    int black_count() const { return static_cast<int>(blacks_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

    const std::vector<Coord>& whites() const { return whites_; }
    const std::vector<Coord>& blacks() const { return blacks_; }
    const std::vector<EdgeId>& edges() const { return edges_; }
    const std::vector<FaceId>& faces() const { return faces_; }

    std::optional<int> white_index(Coord w) const;
    std::optional<int> black_index(Coord b) const;
    std::optional<int> face_index(FaceId f) const;
    std::optional<int> edge_index(const EdgeId& e) const;

    bool has_edge(const EdgeId& e) const { return edge_index(e).has_value(); }

    // A face is interior when all six surrounding vertices (hence edges) are
    // present; heights on interior faces are the lozenge-vertex heights.
    bool face_is_interior(int face_idx) const { return face_interior_[face_idx] != 0; }

    // Edge indices incident to a white / black vertex (2 or 3 entries).
    const std::vector<int>& white_edges(int white_idx) const { return white_edges_[white_idx]; }
    const std::vector<int>& black_edges(int black_idx) const { return black_edges_[black_idx]; }

    int edge_white_index(int edge_idx) const { return edge_white_[edge_idx]; }
    int edge_black_index(int edge_idx) const { return edge_black_[edge_idx]; }

    // True when the honeycomb edge has at least one endpoint in the region;
    // such edges are guaranteed unmatched when not fully present, so height
    // propagation may cross them.
    bool edge_is_fringe(const EdgeId& e) const;

    double epsilon() const { return epsilon_; }

    const std::optional<std::vector<FaceId>>& boundary_path() const { return boundary_path_; }
    bool monotone_warning() const { return monotone_warning_; }

private:
    Region() = default;
    void build_indexes();
    void validate_topology() const;

    std::vector<Coord> whites_, blacks_;
    std::vector<EdgeId> edges_;
    std::vector<FaceId> faces_;
    std::vector<uint8_t> face_interior_;
    std::vector<std::vector<int>> white_edges_, black_edges_;
    std::vector<int> edge_white_, edge_black_;
    std::map<Coord, int> white_idx_, black_idx_;
    std::map<FaceId, int> face_idx_;
    std::map<EdgeId, int> edge_idx_;
    std::optional<std::vector<FaceId>> boundary_path_;
    bool monotone_warning_ = false;
    double epsilon_ = 1.0;
};

// ---------------------------------------------------------------------------
// Matching and heights.
// ---------------------------------------------------------------------------

class Matching {
public:
    Matching(const Region& region, std::vector<int> edge_of_white);

    const Region& region() const { return *region_; }
    // Edge index matched to each white (by white index).
    const std::vector<int>& edges_by_white() const { return edge_of_white_; }
    bool contains(int edge_idx) const { return edge_matched_[edge_idx] != 0; }
    int matched_edge_of_black(int black_idx) const { return edge_of_black_[black_idx]; }

    // Count of matched edges of each type (1,2,3) inside a face window.
    std::array<int, 3> type_counts() const;

private:
    const Region* region_;
    std::vector<int> edge_of_white_;
    std::vector<int> edge_of_black_;
    std::vector<uint8_t> edge_matched_;
};

struct HeightField {
    std::vector<int> values;  // by face index of the region
    FaceId base_face;
    const Region* region = nullptr;

    int at(FaceId f) const;
};

// Integer height field: BFS over faces crossing fringe edges, increments
// sign*(3*chi-1) with chi=1 on matched region edges and 0 otherwise.
// Propagation is checked for loop consistency.
HeightField height_field(const Matching& m, FaceId base_face);

// Flow (1-form): values on region edges in the white->black direction.
// `off_region` is the value carried by fringe edges that are not fully in
// the region (always unmatched, so 0 for a matching flow and 1/3 for
// omega_third).
struct Flow {
    std::vector<double> values; // by edge index
    double off_region = 0.0;
    const Region* region = nullptr;
};

// Unit flow of a matching: 1 on matched edges, 0 elsewhere.
Flow matching_flow(const Matching& m);
// Constant flow with value 1/3 on every white->black edge.
Flow omega_third(const Region& region);

// Flux of a flow across a dual path (list of faces, consecutive adjacent):
// sum of +/- flow(edge) over crossed edges, positive when the white endpoint
// lies on the left of the crossing direction.  Only region edges carry flow.
double flux_across(const Flow& flow, const std::vector<FaceId>& dual_path);

// Dual graph G*: one triangle of faces per white vertex; black triangles are
// present exactly when all three black neighbors exist.
struct DualGraph {
    struct Triangle {
        std::array<FaceId, 3> corners;
    };
    std::vector<Triangle> white_triangles; // by white index
    std::vector<int> black_triangles;      // black indices with all 3 whites present
    std::vector<FaceId> vertices;           // distinct face ids appearing in triangles
};
DualGraph dual_graph(const Region& region);

} // namespace dimerlab
