#pragma once

#include "dimerlab/fluct.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/tgraph.hpp"

#include <string>

namespace dimerlab::io {

// Region JSON: {"kind":"hexagon","a":..,"b":..,"c":..},
// {"kind":"path","start":[m,n],"steps":[dir,...]} or {"kind":"disk","radius":r}.
Region region_from_json(const std::string& text);
std::string region_to_json(const Region& region);
Region load_region(const std::string& path);

// Matching JSON: list of [white_m, white_n, edge_type].
std::string matching_to_json(const Matching& m);
Matching matching_from_json(const Region& region, const std::string& text);

// HeightField CSV: face_m, face_n, h.
std::string height_field_to_csv(const HeightField& h);

// Edge probabilities CSV: white_m, white_n, edge_type, probability.
std::string edge_probabilities_to_csv(const Region& region, const std::vector<double>& probs);

// Deterministic SVG renderings.
std::string matching_to_svg(const Matching& m);
std::string tgraph_to_svg(const TGraph& tg);
std::string height_field_to_svg(const HeightField& h);

// T-graph JSON: segments, vertices, chain transitions, roots.
std::string tgraph_to_json(const TGraph& tg, const TGraphChain& chain);

// Shortest round-trip decimal formatting used across CSV/JSON output.
std::string format_double(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace dimerlab::io
