#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pierce4/approx.hpp"
#include "pierce4/geometry.hpp"
#include "pierce4/piercing.hpp"
#include "pierce4/transversal.hpp"

namespace pierce4 {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// JSON encoding. Field order is fixed so serialized artifacts are stable
// enough for golden-file comparison.
// ---------------------------------------------------------------------------

inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }

inline Vec2 vec2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("expected [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const ConvexPolygon& p) {
    json verts = json::array();
    for (const auto& v : p.vertices()) verts.push_back(to_json(v));
    return json{{"vertices", std::move(verts)}};
}

inline ConvexPolygon polygon_from_json(const json& j) {
    if (!j.contains("vertices")) throw Error("polygon JSON needs a \"vertices\" field");
    std::vector<Point2> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(vec2_from_json(v));
    return ConvexPolygon::from_points(std::move(pts));
}

inline json to_json(const Parallelogram& p) {
    return json{{"anchor", to_json(p.anchor)}, {"e1", to_json(p.e1)}, {"e2", to_json(p.e2)}};
}

inline Parallelogram parallelogram_from_json(const json& j) {
    return Parallelogram(vec2_from_json(j.at("anchor")), vec2_from_json(j.at("e1")),
                         vec2_from_json(j.at("e2")));
}

inline json to_json(const Line& l) {
    return json{{"normal", to_json(l.normal)}, {"offset", l.offset}};
}

inline Line line_from_json(const json& j) {
    return Line(vec2_from_json(j.at("normal")), j.at("offset").get<double>());
}

inline json to_json(const ApproxResult& r) {
    return json{
        {"P", to_json(r.P)},
        {"P_circ", to_json(r.P_circ)},
        {"Q", to_json(r.Q)},
        {"u", r.u.angle()},
        {"v", r.v.angle()},
        {"alpha", r.alpha},
        {"ratio", r.ratio},
        {"residual", r.residual},
        {"shaved", r.shaved},
        {"iterations", r.iterations},
        {"grid_fallback", r.grid_fallback},
    };
}

inline ApproxResult approx_from_json(const json& j) {
    ApproxResult r{parallelogram_from_json(j.at("P")),
                   parallelogram_from_json(j.at("P_circ")),
                   parallelogram_from_json(j.at("Q")),
                   Direction(j.at("u").get<double>()),
                   Direction(j.at("v").get<double>()),
                   j.at("alpha").get<double>(),
                   j.at("ratio").get<double>(),
                   j.at("residual").get<double>(),
                   j.at("shaved").get<bool>(),
                   j.value("grid_fallback", false),
                   j.value("iterations", 0)};
    return r;
}

inline json to_json(const Instance& inst) {
    json fams = json::array();
    for (const auto& f : inst.families) {
        json row = json::array();
        for (const auto& x : f) row.push_back(to_json(x));
        fams.push_back(std::move(row));
    }
    return json{{"schema_version", kSchemaVersion},
                {"body", to_json(inst.body)},
                {"families", std::move(fams)},
                {"seed", inst.seed}};
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    inst.body = polygon_from_json(j.at("body"));
    for (const auto& row : j.at("families")) {
        std::vector<Vec2> fam;
        for (const auto& x : row) fam.push_back(vec2_from_json(x));
        inst.families.push_back(std::move(fam));
    }
    inst.seed = j.value("seed", std::uint64_t{0});
    return inst;
}

inline json to_json(const PiercingCertificate& c) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(to_json(p));
    json assign = json::array();
    for (const auto& row : c.assignment) assign.push_back(row);
    return json{
        {"schema_version", kSchemaVersion},
        {"branch", c.branch == Branch::TransversalFourPoints ? "transversal_four_points"
                                                             : "fallback_brute_force"},
        {"excluded_family", c.excluded_family},
        {"points", std::move(pts)},
        {"ell", c.ell ? to_json(*c.ell) : json(nullptr)},
        {"ell_prime", c.ell_prime ? to_json(*c.ell_prime) : json(nullptr)},
        {"assignment", std::move(assign)},
        {"approx", c.approx ? to_json(*c.approx) : json(nullptr)},
    };
}

inline PiercingCertificate certificate_from_json(const json& j) {
    PiercingCertificate c;
    const std::string branch = j.at("branch").get<std::string>();
    if (branch == "transversal_four_points")
        c.branch = Branch::TransversalFourPoints;
    else if (branch == "fallback_brute_force")
        c.branch = Branch::FallbackBruteForce;
    else
        throw Error("unknown certificate branch: " + branch);
    c.excluded_family = j.at("excluded_family").get<int>();
    for (const auto& p : j.at("points")) c.points.push_back(vec2_from_json(p));
    if (!j.at("ell").is_null()) c.ell = line_from_json(j.at("ell"));
    if (!j.at("ell_prime").is_null()) c.ell_prime = line_from_json(j.at("ell_prime"));
    for (const auto& row : j.at("assignment")) c.assignment.push_back(row.get<std::vector<int>>());
    if (!j.at("approx").is_null()) c.approx = approx_from_json(j.at("approx"));
    return c;
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

/// FNV-1a content digest; stable across runs for identical bytes.
inline std::string digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << "fnv1a:" << std::hex << h;
    return os.str();
}

inline json make_report(const std::string& command, const std::string& input_bytes,
                        json tolerances, json result, double timing_ms) {
    return json{
        {"schema_version", kSchemaVersion},
        {"tool_version", kToolVersion},
        {"command", command},
        {"input_digest", digest(input_bytes)},
        {"tolerances", std::move(tolerances)},
        {"timing_ms", timing_ms},
        {"result", std::move(result)},
    };
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << bytes;
}

}  // namespace pierce4
