#pragma once

#include "dimerlab/gibbs.hpp"
#include "dimerlab/lattice.hpp"

#include <complex>
#include <map>
#include <optional>

namespace dimerlab {

// Constant-slope T-graph: the Psi image of the region's dual graph under the
// gauge form Omega(w,b) = 2 Re(lambda F(w)) conj(lambda) F(b).  White
// triangles map to triangles similar to the (a,b,c)-triangle, black
// triangles collapse to segments (the complete edges).
struct TGraph {
    const Region* region = nullptr;
    SlopeParams slope;
    std::complex<double> lambda;

    std::vector<FaceId> vertex_faces;            // vertex id -> dual-lattice face
    std::map<FaceId, int> vertex_index;
    std::vector<std::complex<double>> positions; // Psi images

    struct CompleteEdge {
        Coord black;
        bool black_in_region = false;
        std::complex<double> dir;      // unit direction along the segment
        std::vector<int> vertices;     // sorted along dir (2 or 3 entries)
    };
    std::vector<CompleteEdge> edges;   // one per black with a present white
    std::map<Coord, int> edge_of_black;

    std::vector<int> owner;                       // vertex -> owning edge; -1 at roots
    std::vector<Coord> owner_black;               // infinite-lattice owner per vertex
    std::vector<std::complex<double>> owner_dir;  // its line direction
    std::vector<int> roots;

    std::vector<int> boundary_loop;        // ccw vertex loop of the outer polygon
    std::vector<int> boundary_piece_edges; // complete edge under each loop piece
    std::vector<int> root_cycle;           // roots in ccw order, deterministic start
    std::vector<size_t> dropped_arc;       // loop piece indices of the arc with no
                                           // outer face (between the last root and
                                           // the first); cut paths must exit there

    std::vector<std::complex<double>> lamFw; // lambda F(w) per region white
    std::vector<std::complex<double>> lamFb; // conj(lambda) F(b) per complete edge

    double scale = 1.0;                // typical side length, for tolerances

    int vertex_of(FaceId f) const { return vertex_index.at(f); }
};

TGraph build_constant_slope_tgraph(const SlopeParams& slope, const Region& region,
                                   std::optional<std::complex<double>> lambda = std::nullopt);

// Absorbing Markov chain: transitions from each non-root vertex to its two
// neighbors along the owning edge, probabilities inversely proportional to
// the Euclidean distances.
struct TGraphChain {
    std::vector<std::vector<std::pair<int, double>>> transitions; // empty at roots
};
TGraphChain markov_chain(const TGraph& tg);

// The associated dimer graph G_D: blacks are the complete edges; whites are
// the triangle faces plus one outer face per boundary arc between
// consecutive roots (all but one).  Entries are the complex edge vectors
// traversed counterclockwise around the white face.
struct DimerGraphGD {
    struct Entry {
        int edge_id;                 // complete-edge (black) index
        std::complex<double> value;  // Kasteleyn entry
        std::complex<double> anchor; // midpoint of the carrying subsegment
    };
    struct White {
        bool outer = false;
        int region_white = -1; // for triangle faces
        std::vector<Entry> entries;
    };
    std::vector<White> whites;
    int n_blacks = 0;

    // bounded faces as alternating cycles, for the Kasteleyn sign condition;
    // each holds the (white index, entry position) pairs in cyclic order
    struct FaceCycle {
        std::vector<std::pair<int, int>> steps;
    };
    std::vector<FaceCycle> bounded_faces;
};
DimerGraphGD dimer_graph(const TGraph& tg);

// max over triangle whites of |sum_b K(w,b) g(b)|.
double check_discrete_analytic(const DimerGraphGD& gd, const std::vector<std::complex<double>>& g);

// Conjugate Green's function: zero on roots, harmonic off the cut, unit jump
// across the cut path ell (from inside face w to the outside).
struct HarmonicField {
    std::vector<double> values;            // per T-graph vertex
    std::vector<std::complex<double>> ell; // polyline
    int source_white = -1;                 // region white index of the face w
};
HarmonicField conjugate_greens(const TGraph& tg, const TGraphChain& chain, int region_white,
                               std::vector<std::complex<double>> ell = {});

// Column K^{-1}_{G_D}(., w) from the conjugate Green's function, one value
// per complete edge.
std::vector<std::complex<double>> kinv_from_greens(const TGraph& tg, const DimerGraphGD& gd,
                                                   const HarmonicField& field);

// Canonical unit flow: value on (w,b) is (angle1+angle2)/(2 pi), aligned with
// gd.whites[i].entries[j]; outer-face edges carry zero.
struct CanonicalFlow {
    std::vector<std::vector<double>> values;
};
CanonicalFlow canonical_flow(const TGraph& tg, const DimerGraphGD& gd);

// Average flux per edge of omega_{1/3} - omega along a length-n column in a
// lattice direction ('y' crosses the horizontal edges), from the
// convex-corner frequency.  Tends to p - 1/3.
double boundary_height_profile(const SlopeParams& slope, char direction, long long n);

} // namespace dimerlab
