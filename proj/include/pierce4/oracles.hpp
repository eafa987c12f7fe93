#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pierce4/geometry.hpp"
#include "pierce4/transversal.hpp"

namespace pierce4 {

// ---------------------------------------------------------------------------
// Exact piercing oracles at desk scale, plus the seeded instance generator.
// These are the independent ground-truth side of the pipeline: sorted-sweep
// interval piercing is provably minimum, and the 2-D search enumerates
// arrangement-vertex candidates exhaustively.
// ---------------------------------------------------------------------------

/// Minimum piercing set for closed intervals: sort by upper end, sweep, and
/// pick the upper end of every interval the current points miss.
inline std::vector<double> greedy_interval_piercing(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.hi < b.hi; });
    std::vector<double> points;
    double last = -std::numeric_limits<double>::infinity();
    bool have_last = false;
    for (const auto& iv : intervals) {
        if (!have_last || iv.lo > last) {
            last = iv.hi;
            have_last = true;
            points.push_back(last);
        }
    }
    return points;
}

struct PiercingSolution {
    int k = 0;
    std::vector<Point2> points;
};

namespace detail {

inline bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d, Point2& out) {
    const Vec2 r = b - a, s = d - c;
    const double den = r.cross(s);
    if (den == 0.0) return false;
    const double t = (c - a).cross(s) / den;
    const double u = (c - a).cross(r) / den;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
    out = a + r * t;
    return true;
}

inline std::vector<Point2> boundary_intersections(const ConvexPolygon& p, const ConvexPolygon& q) {
    std::vector<Point2> out;
    const auto& pv = p.vertices();
    const auto& qv = q.vertices();
    for (std::size_t i = 0; i < pv.size(); ++i) {
        for (std::size_t j = 0; j < qv.size(); ++j) {
            Point2 x;
            if (segments_cross(pv[i], pv[(i + 1) % pv.size()], qv[j], qv[(j + 1) % qv.size()], x))
                out.push_back(x);
        }
    }
    return out;
}

}  // namespace detail

/// Exhaustive minimum piercing for a small set of convex polygons, searching
/// over arrangement-vertex candidates (polygon vertices plus all pairwise
/// boundary intersections) with dominance pruning. Returns the smallest
/// k <= k_max with a witness, or nothing if k_max points cannot pierce.
inline std::optional<PiercingSolution> brute_force_piercing(std::span<const ConvexPolygon> polys,
                                                            int k_max) {
    if (polys.size() > 24 || k_max > 4)
        throw TooLarge("brute-force piercing is limited to 24 polygons and k <= 4");
    if (polys.empty()) return PiercingSolution{0, {}};

    double scale = 1.0;
    for (const auto& p : polys) scale = std::max(scale, p.diameter());
    const double tol = kDefaultTol * scale;

    std::vector<Point2> candidates;
    for (const auto& p : polys)
        for (const auto& v : p.vertices()) candidates.push_back(v);
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i + 1; j < polys.size(); ++j)
            for (const auto& x : detail::boundary_intersections(polys[i], polys[j]))
                candidates.push_back(x);

    const std::uint32_t full = polys.size() == 32 ? ~0u : ((1u << polys.size()) - 1u);
    std::vector<std::uint32_t> masks;
    std::vector<Point2> pts;
    masks.reserve(candidates.size());
    for (const auto& c : candidates) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < polys.size(); ++i)
            if (contains_point(polys[i], c, tol)) m |= (1u << i);
        if (m == 0) continue;
        masks.push_back(m);
        pts.push_back(c);
    }

    // Dominance pruning: drop candidates whose hit-set is covered by another.
    std::vector<std::uint32_t> keep_mask;
    std::vector<Point2> keep_pt;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < masks.size() && !dominated; ++j) {
            if (i == j) continue;
            const bool subset = (masks[i] & masks[j]) == masks[i];
            if (subset && (masks[j] != masks[i] || j < i)) dominated = true;
        }
        if (!dominated) {
            keep_mask.push_back(masks[i]);
            keep_pt.push_back(pts[i]);
        }
    }

    const std::size_t n = keep_mask.size();
    for (int k = 1; k <= k_max; ++k) {
        if (k == 1) {
            for (std::size_t i = 0; i < n; ++i)
                if (keep_mask[i] == full) return PiercingSolution{1, {keep_pt[i]}};
        } else if (k == 2) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if ((keep_mask[i] | keep_mask[j]) == full)
                        return PiercingSolution{2, {keep_pt[i], keep_pt[j]}};
        } else if (k == 3) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const std::uint32_t ij = keep_mask[i] | keep_mask[j];
                    if (ij == full) continue;
                    for (std::size_t l = j + 1; l < n; ++l)
                        if ((ij | keep_mask[l]) == full)
                            return PiercingSolution{3, {keep_pt[i], keep_pt[j], keep_pt[l]}};
                }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const std::uint32_t ij = keep_mask[i] | keep_mask[j];
                    for (std::size_t l = j + 1; l < n; ++l) {
                        const std::uint32_t ijl = ij | keep_mask[l];
                        if (ijl == full) continue;
                        for (std::size_t h = l + 1; h < n; ++h)
                            if ((ijl | keep_mask[h]) == full)
                                return PiercingSolution{
                                    4, {keep_pt[i], keep_pt[j], keep_pt[l], keep_pt[h]}};
                    }
                }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Body construction
// ---------------------------------------------------------------------------

namespace detail {

// Canonical uniform in [0, 1) from the top 53 bits of the generator; keeps
// generated instances byte-identical across standard library versions.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ConvexPolygon regular_kgon(int k, double circumradius, double phase = 0.0) {
    constexpr double kTau = 6.28318530717958647693;
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double a = phase + kTau * i / k;
        pts.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return ConvexPolygon::from_points(std::move(pts));
}

inline ConvexPolygon ellipse_ngon(int k, double semi_x, double semi_y) {
    constexpr double kTau = 6.28318530717958647693;
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double a = kTau * i / k;
        pts.push_back({semi_x * std::cos(a), semi_y * std::sin(a)});
    }
    return ConvexPolygon::from_points(std::move(pts));
}

// Reuleaux triangle of width 1 sampled with `per_arc` points per arc: three
// circular arcs of radius 1 centered at the opposite corners of an
// equilateral triangle of side 1.
inline ConvexPolygon reuleaux_triangle(int per_arc) {
    constexpr double kPi = 3.14159265358979323846;
    const double r = 1.0 / std::sqrt(3.0);
    std::vector<Point2> corners;
    for (int i = 0; i < 3; ++i) {
        const double a = kPi / 2.0 + 2.0 * kPi * i / 3.0;
        corners.push_back({r * std::cos(a), r * std::sin(a)});
    }
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(3 * per_arc));
    for (int i = 0; i < 3; ++i) {
        const Point2 c = corners[static_cast<std::size_t>(i)];
        const Point2 from = corners[static_cast<std::size_t>((i + 1) % 3)];
        const double a0 = std::atan2(from.y - c.y, from.x - c.x);
        for (int s = 0; s < per_arc; ++s) {
            const double a = a0 + (kPi / 3.0) * s / (per_arc - 1);
            pts.push_back({c.x + std::cos(a), c.y + std::sin(a)});
        }
    }
    return ConvexPolygon::from_points(std::move(pts));
}

// Valtr's construction of a random polygon in convex position inside the
// unit square; deterministic for a fixed seed.
inline ConvexPolygon random_convex(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    auto chain_deltas = [&](int count) {
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (auto& v : vals) v = uniform01(rng);
        std::sort(vals.begin(), vals.end());
        std::vector<double> deltas;
        deltas.reserve(static_cast<std::size_t>(count));
        // Split into two chains at a random pivot walk.
        double last_top = vals.front(), last_bot = vals.front();
        for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
            if (rng() & 1u) {
                deltas.push_back(vals[i] - last_top);
                last_top = vals[i];
            } else {
                deltas.push_back(last_bot - vals[i]);
                last_bot = vals[i];
            }
        }
        deltas.push_back(vals.back() - last_top);
        deltas.push_back(last_bot - vals.back());
        return deltas;
    };

    std::vector<double> xs = chain_deltas(n), ys = chain_deltas(n);
    for (std::size_t i = ys.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(ys[i], ys[j]);
    }
    std::vector<Vec2> edges;
    edges.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) edges.push_back({xs[i], ys[i]});
    std::sort(edges.begin(), edges.end(), [](const Vec2& a, const Vec2& b) {
        return std::atan2(a.y, a.x) < std::atan2(b.y, b.x);
    });

    std::vector<Point2> pts;
    pts.reserve(edges.size());
    Point2 cur{0.0, 0.0};
    for (const auto& e : edges) {
        pts.push_back(cur);
        cur = cur + e;
    }
    return ConvexPolygon::from_points(std::move(pts));
}

}  // namespace detail

/// Named body constructors. Specs: "square", "triangle", "kgon:K",
/// "disk256", "ellipse256[:RATIO]", "reuleaux192", "random:NV[:SEED]",
/// where the optional seed defaults to the supplied one.
inline ConvexPolygon gen_body(const std::string& spec, std::uint64_t seed = 0) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(':', start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    const auto parts = split(spec);
    const std::string& name = parts[0];

    try {
        if (name == "square")
            return ConvexPolygon::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        if (name == "triangle")
            return ConvexPolygon::from_points({{0, 0}, {1, 0}, {0, 1}});
        if (name == "disk256") return detail::regular_kgon(256, 0.5);
        if (name == "kgon") {
            const int k = std::stoi(parts.at(1));
            if (k < 3 || k > 64) throw Error("kgon vertex count must be in 3..64");
            return detail::regular_kgon(k, 1.0);
        }
        if (name == "ellipse256") {
            const double ratio = parts.size() > 1 ? std::stod(parts[1]) : 2.0;
            if (!(ratio > 0.0)) throw Error("ellipse ratio must be positive");
            return detail::ellipse_ngon(256, 0.5 * ratio, 0.5);
        }
        if (name == "reuleaux192") return detail::reuleaux_triangle(64);
        if (name == "random") {
            const int nv = std::stoi(parts.at(1));
            if (nv < 3 || nv > 256) throw Error("random body vertex count must be in 3..256");
            const std::uint64_t s = parts.size() > 2 ? std::stoull(parts[2]) : seed;
            return detail::random_convex(nv, s);
        }
    } catch (const std::invalid_argument&) {
        throw Error("malformed body spec: " + spec);
    } catch (const std::out_of_range&) {
        throw Error("malformed body spec: " + spec);
    }
    throw Error("unknown body spec: " + spec);
}

// ---------------------------------------------------------------------------
// Seeded instance generation by rejection sampling
// ---------------------------------------------------------------------------

struct GenConfig {
    std::uint64_t seed = 1;
    int n_families = 3;
    std::vector<int> sizes = {5, 5, 5};
    double spread = 0.25;
    std::string body = "disk256";
    int max_rejections = 100000;
};

/// Draws family anchors whose pairwise differences sit well inside the
/// difference body, then scatters members around the anchors, accepting a
/// candidate only when the cross-family intersection condition holds with
/// strict margin against every member accepted so far. Deterministic per
/// seed; the output always passes Instance::validate().
inline Instance gen_instance(const GenConfig& cfg) {
    if (cfg.n_families < 2) throw Error("need at least 2 families");
    if (static_cast<int>(cfg.sizes.size()) != cfg.n_families)
        throw Error("sizes list must match the family count");
    for (int s : cfg.sizes)
        if (s < 1) throw Error("family sizes must be positive");
    if (cfg.spread < 0.0) throw Error("spread must be nonnegative");

    const ConvexPolygon body = gen_body(cfg.body, cfg.seed);
    const ConvexPolygon dk = difference_body(body);
    const double anchor_margin = 0.3;
    const double member_margin = 1e-6 * std::max(1.0, body.diameter());

    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    for (const auto& v : dk.vertices()) {
        xlo = std::min(xlo, v.x);
        xhi = std::max(xhi, v.x);
        ylo = std::min(ylo, v.y);
        yhi = std::max(yhi, v.y);
    }

    std::mt19937_64 rng(cfg.seed);
    int rejections = 0;
    auto budget = [&]() {
        if (++rejections > cfg.max_rejections)
            throw RejectionBudgetExceeded("instance generator exceeded its rejection budget");
    };

    // Family anchors, pairwise strictly inside (1 - margin) * difference body.
    std::vector<Vec2> anchors{{0.0, 0.0}};
    while (static_cast<int>(anchors.size()) < cfg.n_families) {
        const Vec2 c{(xlo + (xhi - xlo) * detail::uniform01(rng)) * 0.5,
                     (ylo + (yhi - ylo) * detail::uniform01(rng)) * 0.5};
        bool ok = true;
        for (const auto& a : anchors) {
            const Vec2 d = (c - a) / (1.0 - anchor_margin);
            if (!contains_point(dk, d, 0.0)) {
                ok = false;
                break;
            }
        }
        if (ok)
            anchors.push_back(c);
        else
            budget();
    }

    const double disp = cfg.spread * 0.5 * std::min(xhi - xlo, yhi - ylo);
    Instance inst;
    inst.body = body;
    inst.seed = cfg.seed;
    inst.families.assign(static_cast<std::size_t>(cfg.n_families), {});
    for (int i = 0; i < cfg.n_families; ++i) {
        auto& fam = inst.families[static_cast<std::size_t>(i)];
        while (static_cast<int>(fam.size()) < cfg.sizes[static_cast<std::size_t>(i)]) {
            Vec2 x = anchors[static_cast<std::size_t>(i)];
            if (disp > 0.0) {
                const double ang = 6.28318530717958647693 * detail::uniform01(rng);
                const double rad = disp * std::sqrt(detail::uniform01(rng));
                x = x + Vec2{rad * std::cos(ang), rad * std::sin(ang)};
            }
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                for (const auto& y : inst.families[static_cast<std::size_t>(j)]) {
                    if (!contains_point(dk, x - y, -member_margin)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok)
                fam.push_back(x);
            else
                budget();
        }
    }
    return inst;
}

}  // namespace pierce4
