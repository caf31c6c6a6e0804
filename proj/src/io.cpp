#include "dimerlab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dimerlab::io {

using nlohmann::json;

std::string format_double(double v) {
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << v;
        double back = std::stod(os.str());
        if (back == v) return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::BadInput, "cannot open for writing: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::BadInput, "cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Region region_from_json(const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    double eps = j.value("epsilon", 1.0);
    if (kind == "hexagon") {
        return Region::hexagon(j.at("a").get<int>(), j.at("b").get<int>(), j.at("c").get<int>(),
                               eps);
    }
    if (kind == "path") {
        auto start = j.at("start");
        FaceId s{start.at(0).get<int>(), start.at(1).get<int>()};
        std::vector<int> steps = j.at("steps").get<std::vector<int>>();
        return Region::from_boundary(s, steps, eps);
    }
    if (kind == "disk") {
        return Region::disk(j.at("radius").get<double>(), eps);
    }
    throw Error(Errc::BadInput, "unknown region kind: " + kind);
}

std::string region_to_json(const Region& region) {
    json j;
    if (region.boundary_path()) {
        const auto& path = *region.boundary_path();
        j["kind"] = "path";
        j["start"] = {path[0].m, path[0].n};
        std::vector<int> steps;
        const auto offs = face_direction_offsets();
        for (size_t i = 0; i < path.size(); ++i) {
            FaceId a = path[i], b = path[(i + 1) % path.size()];
            for (int d = 0; d < 6; ++d)
                if (a.m + offs[d].m == b.m && a.n + offs[d].n == b.n) steps.push_back(d);
        }
        j["steps"] = steps;
    } else {
        j["kind"] = "vertices";
        json whites = json::array(), blacks = json::array();
        for (const Coord& w : region.whites()) whites.push_back({w.m, w.n});
        for (const Coord& b : region.blacks()) blacks.push_back({b.m, b.n});
        j["whites"] = whites;
        j["blacks"] = blacks;
    }
    j["epsilon"] = region.epsilon();
    return j.dump();
}

Region load_region(const std::string& path) { return region_from_json(read_file(path)); }

std::string matching_to_json(const Matching& m) {
    json j = json::array();
    const Region& r = m.region();
    for (int wi = 0; wi < r.white_count(); ++wi) {
        const EdgeId& e = r.edges()[m.edges_by_white()[wi]];
        Coord w = e.white();
        j.push_back({w.m, w.n, e.type});
    }
    return j.dump();
}

Matching matching_from_json(const Region& region, const std::string& text) {
    json j = json::parse(text);
    std::vector<int> edge_of_white(region.white_count(), -1);
    for (const auto& item : j) {
        Coord w{item.at(0).get<int>(), item.at(1).get<int>()};
        int type = item.at(2).get<int>();
        auto wi = region.white_index(w);
        auto ei = region.edge_index(edge_from_white(w, type));
        if (!wi || !ei) throw Error(Errc::BadInput, "matching references a missing edge");
        edge_of_white[*wi] = *ei;
    }
    return Matching(region, std::move(edge_of_white));
}

std::string height_field_to_csv(const HeightField& h) {
    std::ostringstream os;
    os << "face_m,face_n,h\n";
    for (int fi = 0; fi < h.region->face_count(); ++fi) {
        FaceId f = h.region->faces()[fi];
        os << f.m << "," << f.n << "," << h.values[fi] << "\n";
    }
    return os.str();
}

std::string edge_probabilities_to_csv(const Region& region, const std::vector<double>& probs) {
    std::ostringstream os;
    os << "white_m,white_n,edge_type,probability\n";
    for (int ei = 0; ei < region.edge_count(); ++ei) {
        const EdgeId& e = region.edges()[ei];
        Coord w = e.white();
        os << w.m << "," << w.n << "," << e.type << "," << format_double(probs[ei]) << "\n";
    }
    return os.str();
}

namespace {

std::string svg_coord(double v) {
    // fixed rounding keeps output byte-identical across runs
    double r = std::round(v * 1e6) / 1e6;
    if (r == 0.0) r = 0.0; // normalize -0
    std::ostringstream os;
    os << r;
    return os.str();
}

struct SvgCanvas {
    std::ostringstream body;
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;

    void extend(std::complex<double> p) {
        min_x = std::min(min_x, p.real());
        max_x = std::max(max_x, p.real());
        min_y = std::min(min_y, p.imag());
        max_y = std::max(max_y, p.imag());
    }
    std::string finish() {
        double pad = 0.5;
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_coord(min_x - pad)
           << " " << svg_coord(min_y - pad) << " " << svg_coord(max_x - min_x + 2 * pad) << " "
           << svg_coord(max_y - min_y + 2 * pad) << "\">\n"
           << body.str() << "</svg>\n";
        return os.str();
    }
};

// y axis flipped so the picture matches the mathematical orientation
std::complex<double> flip(std::complex<double> p) { return {p.real(), -p.imag()}; }

} // namespace

std::string matching_to_svg(const Matching& m) {
    const Region& r = m.region();
    SvgCanvas canvas;
    static const char* fills[3] = {"#d94f4f", "#4f8ad9", "#58b368"};
    for (int wi = 0; wi < r.white_count(); ++wi) {
        const EdgeId& e = r.edges()[m.edges_by_white()[wi]];
        // lozenge = union of the two faces flanking the matched edge
        FaceId fl = edge_left_face(e), fr = edge_right_face(e);
        std::complex<double> w = flip(white_position(e.white()));
        std::complex<double> b = flip(black_position(e.black));
        std::complex<double> l = flip(face_position(fl));
        std::complex<double> rr = flip(face_position(fr));
        // the lozenge is the rhombus with diagonals (l, 2 mid - l) and
        // (rr, 2 mid - rr), centered on the dimer midpoint
        std::complex<double> mid = 0.5 * (w + b);
        std::complex<double> c1 = l, c2 = rr, c3 = mid + (mid - l), c4 = mid + (mid - rr);
        canvas.extend(c1);
        canvas.extend(c2);
        canvas.extend(c3);
        canvas.extend(c4);
        canvas.body << "<polygon points=\"" << svg_coord(c1.real()) << "," << svg_coord(c1.imag())
                    << " " << svg_coord(c2.real()) << "," << svg_coord(c2.imag()) << " "
                    << svg_coord(c3.real()) << "," << svg_coord(c3.imag()) << " "
                    << svg_coord(c4.real()) << "," << svg_coord(c4.imag())
                    << "\" fill=\"" << fills[e.type - 1]
                    << "\" stroke=\"#222222\" stroke-width=\"0.04\"/>\n";
    }
    return canvas.finish();
}

std::string tgraph_to_svg(const TGraph& tg) {
    SvgCanvas canvas;
    for (const auto& ce : tg.edges) {
        std::complex<double> p0 = flip(tg.positions[ce.vertices.front()]);
        std::complex<double> p1 = flip(tg.positions[ce.vertices.back()]);
        canvas.extend(p0);
        canvas.extend(p1);
        canvas.body << "<line x1=\"" << svg_coord(p0.real()) << "\" y1=\"" << svg_coord(p0.imag())
                    << "\" x2=\"" << svg_coord(p1.real()) << "\" y2=\"" << svg_coord(p1.imag())
                    << "\" stroke=\"#333333\" stroke-width=\"0.03\"/>\n";
    }
    for (int rt : tg.roots) {
        std::complex<double> p = flip(tg.positions[rt]);
        canvas.extend(p);
        canvas.body << "<circle cx=\"" << svg_coord(p.real()) << "\" cy=\"" << svg_coord(p.imag())
                    << "\" r=\"0.09\" fill=\"#d94f4f\"/>\n";
    }
    return canvas.finish();
}

std::string height_field_to_svg(const HeightField& h) {
    const Region& r = *h.region;
    SvgCanvas canvas;
    int lo = h.values[0], hi = h.values[0];
    for (int v : h.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (int fi = 0; fi < r.face_count(); ++fi) {
        std::complex<double> p = flip(face_position(r.faces()[fi]));
        canvas.extend(p);
        double t = hi == lo ? 0.5 : double(h.values[fi] - lo) / (hi - lo);
        int shade = int(std::round(40 + 180 * t));
        canvas.body << "<circle cx=\"" << svg_coord(p.real()) << "\" cy=\"" << svg_coord(p.imag())
                    << "\" r=\"0.22\" fill=\"rgb(" << shade << "," << shade << ","
                    << (255 - shade) << ")\"/>\n";
        canvas.body << "<text x=\"" << svg_coord(p.real()) << "\" y=\""
                    << svg_coord(p.imag() + 0.08) << "\" font-size=\"0.25\" text-anchor=\"middle\">"
                    << h.values[fi] << "</text>\n";
    }
    return canvas.finish();
}

std::string tgraph_to_json(const TGraph& tg, const TGraphChain& chain) {
    json j;
    json verts = json::array();
    for (size_t v = 0; v < tg.positions.size(); ++v) {
        verts.push_back({{"face", {tg.vertex_faces[v].m, tg.vertex_faces[v].n}},
                         {"x", tg.positions[v].real()},
                         {"y", tg.positions[v].imag()}});
    }
    j["vertices"] = verts;
    json segs = json::array();
    for (const auto& ce : tg.edges) {
        segs.push_back({{"black", {ce.black.m, ce.black.n}},
                        {"in_region", ce.black_in_region},
                        {"vertices", ce.vertices}});
    }
    j["segments"] = segs;
    j["roots"] = tg.roots;
    json trans = json::array();
    for (size_t v = 0; v < chain.transitions.size(); ++v) {
        json row = json::array();
        for (auto [u, p] : chain.transitions[v]) row.push_back({{"to", u}, {"p", p}});
        trans.push_back(row);
    }
    j["chain"] = trans;
    j["lambda"] = {tg.lambda.real(), tg.lambda.imag()};
    return j.dump();
}

} // namespace dimerlab::io
