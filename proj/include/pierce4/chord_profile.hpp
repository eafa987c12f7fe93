#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pierce4/geometry.hpp"

namespace pierce4 {

// ---------------------------------------------------------------------------
// ChordProfile: the horizontal chord length l(h) of a normalized body.
//
// For a convex body with unit vertical extent, l is concave on [0,1], rises
// from l(0)=0 to a maximum m attained on a plateau [h_a, h_b] (possibly a
// single height) and falls back to l(1)=0, so every chord length in (0, m)
// occurs at exactly one height below the plateau and one above it. For a
// polygon l is piecewise linear in h, which makes both inverse solvers exact.
// ---------------------------------------------------------------------------

class ChordProfile {
public:
    /// Requires vertex support at top and bottom: l(0) and l(1) below 1e-9.
    /// Bodies whose top or bottom support set is a horizontal edge must be
    /// shaved first (see eps_shave).
    static ChordProfile build(const ConvexPolygon& normalized) {
        ChordProfile prof(normalized);
        if (prof.length_at(0.0) > 1e-9 || prof.length_at(1.0) > 1e-9)
            throw DegenerateSupport("horizontal edge support at slab boundary; shave first");
        return prof;
    }

    /// Same construction without the vertex-support requirement. The inverse
    /// solvers then only cover chord lengths above max(l(0), l(1)).
    static ChordProfile build_unchecked(const ConvexPolygon& normalized) {
        return ChordProfile(normalized);
    }

    const ConvexPolygon& body() const { return body_; }
    double max_chord() const { return m_; }
    double plateau_lo() const { return h_[plateau_lo_]; }
    double plateau_hi() const { return h_[plateau_hi_]; }

    double length_at(double h) const {
        const auto c = chord_at_height(body_, h);
        return c ? c->second - c->first : 0.0;
    }

    /// Height h1(l) <= plateau_lo with l(h1) = l, by exact piecewise-linear
    /// inversion on the rising part.
    double lower_height(double l) const { return solve(l, /*rising=*/true); }

    /// Height h2(l) >= plateau_hi with l(h2) = l, on the falling part.
    double upper_height(double l) const { return solve(l, /*rising=*/false); }

private:
    explicit ChordProfile(const ConvexPolygon& normalized) : body_(normalized) {
        // Breakpoints of the piecewise-linear profile are the vertex heights.
        std::vector<double> hs;
        hs.reserve(body_.size() + 2);
        for (const auto& v : body_.vertices()) hs.push_back(std::clamp(v.y, 0.0, 1.0));
        hs.push_back(0.0);
        hs.push_back(1.0);
        std::sort(hs.begin(), hs.end());
        hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

        h_ = std::move(hs);
        l_.reserve(h_.size());
        for (double h : h_) l_.push_back(length_at(h));

        m_ = *std::max_element(l_.begin(), l_.end());
        const double plateau_tol = 1e-12 * std::max(1.0, m_);
        plateau_lo_ = 0;
        while (m_ - l_[plateau_lo_] > plateau_tol) ++plateau_lo_;
        plateau_hi_ = h_.size() - 1;
        while (m_ - l_[plateau_hi_] > plateau_tol) --plateau_hi_;
    }

    double solve(double l, bool rising) const {
        if (!(l >= 0.0 && l <= m_)) throw InvalidChord("chord length outside [0, m]");
        if (rising) {
            if (l >= m_) return h_[plateau_lo_];
            if (l <= l_.front()) return h_.front();
            std::size_t j = plateau_lo_;
            while (j > 0 && l_[j - 1] >= l) --j;
            return lerp_height(j - 1, l);  // l_[j-1] < l <= l_[j]
        }
        if (l >= m_) return h_[plateau_hi_];
        if (l <= l_.back()) return h_.back();
        std::size_t j = plateau_hi_;
        while (j + 1 < h_.size() && l_[j + 1] >= l) ++j;
        return lerp_height(j, l);  // l_[j] >= l > l_[j+1]
    }

    double lerp_height(std::size_t seg, double l) const {
        const double l0 = l_[seg], l1 = l_[seg + 1];
        const double h0 = h_[seg], h1 = h_[seg + 1];
        if (l1 == l0) return h0;
        return h0 + (h1 - h0) * (l - l0) / (l1 - l0);
    }

    ConvexPolygon body_;
    std::vector<double> h_;
    std::vector<double> l_;
    double m_ = 0.0;
    std::size_t plateau_lo_ = 0;
    std::size_t plateau_hi_ = 0;
};

namespace detail {

// Clip a convex polygon against the half-plane {x : n.(x - p0) >= 0}.
inline ConvexPolygon clip_half_plane(const ConvexPolygon& poly, Point2 p0, Vec2 n) {
    const auto& vs = poly.vertices();
    std::vector<Point2> out;
    out.reserve(vs.size() + 2);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point2& a = vs[i];
        const Point2& b = vs[(i + 1) % vs.size()];
        const double da = n.dot(a - p0);
        const double db = n.dot(b - p0);
        if (da >= 0.0) out.push_back(a);
        if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    if (out.size() < 3) throw InvalidPolygon("half-plane clip removed the polygon");
    return ConvexPolygon::from_points(std::move(out));
}

// Indices of the horizontal support edge at y = level, or nullopt when the
// support set is a single vertex. Returns (left endpoint, right endpoint).
inline std::optional<std::pair<Point2, Point2>> horizontal_support_edge(
    const ConvexPolygon& poly, double level, double tol) {
    std::vector<Point2> on;
    for (const auto& v : poly.vertices())
        if (std::abs(v.y - level) <= tol) on.push_back(v);
    if (on.size() < 2) return std::nullopt;
    auto [lo, hi] = std::minmax_element(on.begin(), on.end(),
                                        [](const Point2& p, const Point2& q) { return p.x < q.x; });
    return std::make_pair(*lo, *hi);
}

}  // namespace detail

/// Removes horizontal edge supports by a tilt cut: if the bottom support set
/// is an edge [p, q], the body is intersected with the half-plane above the
/// line through the right endpoint q and p + (0, eps); the top edge is cut
/// against the line through its left endpoint and the eps-lowered right
/// endpoint. The result is a subset of the input within Hausdorff distance
/// eps, has unique top and bottom support vertices, and is returned in the
/// unit slab. Bodies that already have vertex supports pass through unchanged.
inline ConvexPolygon eps_shave(const ConvexPolygon& normalized, double eps) {
    if (!(eps > 0.0)) throw Error("eps_shave requires eps > 0");
    const double tol = 1e-12;
    ConvexPolygon out = normalized;
    bool cut = false;

    if (auto e = detail::horizontal_support_edge(out, 0.0, tol)) {
        const auto [p, q] = *e;  // left, right
        const Vec2 dir = q - (p + Vec2{0.0, eps});
        out = detail::clip_half_plane(out, q, dir.rot90());
        cut = true;
    }
    if (auto e = detail::horizontal_support_edge(out, 1.0, tol)) {
        const auto [p, q] = *e;
        const Vec2 dir = (q - Vec2{0.0, eps}) - p;
        out = detail::clip_half_plane(out, p, -dir.rot90());
        cut = true;
    }
    if (!cut) return normalized;
    // The cuts keep one endpoint of each support edge, so the slab is intact
    // up to rounding; renormalize to clean it up.
    return normalize_to_unit_slab(out, Direction(0.0)).poly;
}

}  // namespace pierce4
