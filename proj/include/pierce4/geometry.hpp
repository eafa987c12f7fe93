#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pierce4 {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidPolygon : public Error { public: using Error::Error; };
class DegenerateBody : public Error { public: using Error::Error; };
class DegenerateSupport : public Error { public: using Error::Error; };
class InvalidChord : public Error { public: using Error::Error; };
class DegenerateDirection : public Error { public: using Error::Error; };
class NoRootFound : public Error { public: using Error::Error; };
class HypothesisViolation : public Error { public: using Error::Error; };
class DegenerateLines : public Error { public: using Error::Error; };
class RatioExceeded : public Error { public: using Error::Error; };
class PipelineFailure : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class RejectionBudgetExceeded : public Error { public: using Error::Error; };

// Default containment tolerance in normalized units.
inline constexpr double kDefaultTol = 1e-9;

// ---------------------------------------------------------------------------
// Vec2 / Point2
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // 90-degree counterclockwise rotation.
    constexpr Vec2 rot90() const { return {-y, x}; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

using Point2 = Vec2;

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

// ---------------------------------------------------------------------------
// Direction: an undirected direction, canonical angle in [0, pi)
// ---------------------------------------------------------------------------

class Direction {
public:
    Direction() : theta_(0.0) {}
    explicit Direction(double angle_radians) { set_angle(angle_radians); }

    static Direction of_vector(Vec2 v) {
        if (!v.finite() || v.norm2() == 0.0)
            throw DegenerateDirection("direction from zero or non-finite vector");
        return Direction(std::atan2(v.y, v.x));
    }

    double angle() const { return theta_; }
    Vec2 unit() const { return {std::cos(theta_), std::sin(theta_)}; }
    Direction perp() const { return Direction(theta_ + kPi / 2.0); }

    bool operator==(const Direction& o) const { return theta_ == o.theta_; }

private:
    static constexpr double kPi = 3.14159265358979323846;

    void set_angle(double t) {
        if (!std::isfinite(t)) throw DegenerateDirection("non-finite angle");
        t = std::fmod(t, kPi);
        if (t < 0.0) t += kPi;
        if (t >= kPi) t = 0.0;  // fmod rounding at the seam
        theta_ = t;
    }

    double theta_;
};

// ---------------------------------------------------------------------------
// Line: {x : normal . x = offset}, |normal| = 1
// ---------------------------------------------------------------------------

struct Line {
    Vec2 normal;
    double offset = 0.0;

    Line() = default;
    Line(Vec2 n, double c) : normal(n), offset(c) {
        const double len = normal.norm();
        if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-12)
            throw Error("line normal must be unit length");
        if (!std::isfinite(offset)) throw Error("non-finite line offset");
    }

    static Line through(Point2 p, Direction d) {
        const Vec2 n = d.unit().rot90();
        return Line(n, n.dot(p));
    }

    Direction direction() const { return Direction::of_vector(normal.rot90()); }

    // Signed offset of a point from the line, in length units.
    double eval(Point2 p) const { return normal.dot(p) - offset; }
};

// ---------------------------------------------------------------------------
// Strip: {x : lo <= normal . x <= hi}
// ---------------------------------------------------------------------------

struct Strip {
    Vec2 normal;
    double lo = 0.0;
    double hi = 0.0;

    Strip() = default;
    Strip(Vec2 n, double lo_, double hi_) : normal(n), lo(lo_), hi(hi_) {
        if (lo > hi) throw Error("strip range inverted");
    }

    bool contains(Point2 p, double tol = 0.0) const {
        const double v = normal.dot(p);
        return v >= lo - tol && v <= hi + tol;
    }
    double width() const { return hi - lo; }
};

// ---------------------------------------------------------------------------
// AffineMap: x -> L x + t with invertible L
// ---------------------------------------------------------------------------

struct AffineMap {
    // Linear part [[a, b], [c, d]] plus translation t.
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    Vec2 t;

    static AffineMap identity() { return {}; }

    static AffineMap similarity(double angle, double scale, Vec2 translation) {
        const double co = std::cos(angle) * scale;
        const double si = std::sin(angle) * scale;
        return {co, -si, si, co, translation};
    }

    double det() const { return a * d - b * c; }

    Vec2 apply(Vec2 p) const { return {a * p.x + b * p.y + t.x, c * p.x + d * p.y + t.y}; }
    Vec2 apply_linear(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    AffineMap inverse() const {
        const double dt = det();
        if (!std::isfinite(dt) || std::abs(dt) < 1e-12 * (std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d) + 1.0))
            throw Error("affine map not invertible");
        AffineMap inv;
        inv.a = d / dt;
        inv.b = -b / dt;
        inv.c = -c / dt;
        inv.d = a / dt;
        inv.t = -inv.apply_linear(t);
        return inv;
    }

    // Composition: first `first`, then *this.
    AffineMap after(const AffineMap& first) const {
        AffineMap r;
        r.a = a * first.a + b * first.c;
        r.b = a * first.b + b * first.d;
        r.c = c * first.a + d * first.c;
        r.d = c * first.b + d * first.d;
        r.t = apply(first.t);
        return r;
    }
};

// ---------------------------------------------------------------------------
// ConvexPolygon: counterclockwise, strictly convex canonical form
// ---------------------------------------------------------------------------

class ConvexPolygon {
public:
    /// Empty placeholder; every operation expects a polygon built through
    /// from_points or from_ccw_unchecked.
    ConvexPolygon() = default;

    /// Canonicalizes an arbitrary vertex list: enforces CCW orientation
    /// (reversing silently if needed), drops repeated vertices and collinear
    /// runs, rejects non-convex input, and rotates the list to start at the
    /// lexicographically smallest vertex.
    static ConvexPolygon from_points(std::vector<Point2> pts) {
        for (const auto& p : pts)
            if (!p.finite()) throw InvalidPolygon("non-finite vertex coordinate");
        if (pts.size() < 3) throw InvalidPolygon("polygon needs at least 3 vertices");

        double area2 = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            area2 += pts[i].cross(pts[(i + 1) % pts.size()]);
        if (area2 < 0.0) std::reverse(pts.begin(), pts.end());

        const double diam = bbox_diagonal(pts);
        if (diam <= 0.0) throw InvalidPolygon("all vertices coincide");
        const double dist_tol = 1e-12 * diam;
        const double cross_tol = 1e-12 * diam * diam;

        // Drop near-duplicate neighbours (including the wrap pair).
        std::vector<Point2> dedup;
        dedup.reserve(pts.size());
        for (const auto& p : pts) {
            if (dedup.empty() || distance(dedup.back(), p) > dist_tol) dedup.push_back(p);
        }
        while (dedup.size() > 1 && distance(dedup.front(), dedup.back()) <= dist_tol)
            dedup.pop_back();

        // Collapse collinear runs; reject reflex corners.
        bool changed = true;
        while (changed && dedup.size() >= 3) {
            changed = false;
            for (std::size_t i = 0; i < dedup.size();) {
                const std::size_t n = dedup.size();
                const Point2& prev = dedup[(i + n - 1) % n];
                const Point2& cur = dedup[i];
                const Point2& next = dedup[(i + 1) % n];
                const double cr = (cur - prev).cross(next - cur);
                if (cr < -cross_tol)
                    throw InvalidPolygon("vertex list is not convex");
                if (cr <= cross_tol) {
                    dedup.erase(dedup.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                } else {
                    ++i;
                }
            }
        }
        if (dedup.size() < 3) throw InvalidPolygon("degenerate polygon after canonicalization");

        // Deterministic start vertex.
        auto lex_less = [](const Point2& p, const Point2& q) {
            return p.x < q.x || (p.x == q.x && p.y < q.y);
        };
        auto start = std::min_element(dedup.begin(), dedup.end(), lex_less);
        std::rotate(dedup.begin(), start, dedup.end());

        return ConvexPolygon(std::move(dedup));
    }

    /// Trusts the input to already be in canonical CCW strictly-convex form.
    static ConvexPolygon from_ccw_unchecked(std::vector<Point2> pts) {
        return ConvexPolygon(std::move(pts));
    }

    const std::vector<Point2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Point2& operator[](std::size_t i) const { return verts_[i]; }

    double diameter() const { return bbox_diagonal(verts_); }

    std::pair<double, double> y_range() const {
        double lo = verts_[0].y, hi = verts_[0].y;
        for (const auto& v : verts_) {
            lo = std::min(lo, v.y);
            hi = std::max(hi, v.y);
        }
        return {lo, hi};
    }

    double area() const {
        double area2 = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            area2 += verts_[i].cross(verts_[(i + 1) % verts_.size()]);
        return 0.5 * area2;
    }

    Point2 centroid() const {
        Vec2 s{0.0, 0.0};
        for (const auto& v : verts_) s = s + v;
        return s / static_cast<double>(verts_.size());
    }

    ConvexPolygon translated(Vec2 by) const {
        std::vector<Point2> pts;
        pts.reserve(verts_.size());
        for (const auto& v : verts_) pts.push_back(v + by);
        return ConvexPolygon(std::move(pts));  // translation preserves canonical form
    }

    ConvexPolygon transformed(const AffineMap& m) const {
        std::vector<Point2> pts;
        pts.reserve(verts_.size());
        for (const auto& v : verts_) pts.push_back(m.apply(v));
        return from_points(std::move(pts));
    }

private:
    explicit ConvexPolygon(std::vector<Point2> pts) : verts_(std::move(pts)) {}

    static double bbox_diagonal(const std::vector<Point2>& pts) {
        double xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
        for (const auto& p : pts) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
        return std::hypot(xhi - xlo, yhi - ylo);
    }

    std::vector<Point2> verts_;
};

// ---------------------------------------------------------------------------
// Parallelogram: anchor + two edge vectors, positively oriented
// ---------------------------------------------------------------------------

struct Parallelogram {
    Point2 anchor;
    Vec2 e1;
    Vec2 e2;

    Parallelogram() = default;
    Parallelogram(Point2 a, Vec2 e1_, Vec2 e2_) : anchor(a), e1(e1_), e2(e2_) {
        if (!anchor.finite() || !e1.finite() || !e2.finite())
            throw Error("non-finite parallelogram");
        if (e1.cross(e2) <= 0.0)
            throw Error("parallelogram edges must be positively oriented");
    }

    std::array<Point2, 4> vertices() const {
        return {anchor, anchor + e1, anchor + e1 + e2, anchor + e2};
    }
    Point2 center() const { return anchor + (e1 + e2) * 0.5; }
    double area() const { return e1.cross(e2); }

    Parallelogram translated(Vec2 by) const { return {anchor + by, e1, e2}; }

    /// Containment with a signed-distance tolerance against each side.
    bool contains(Point2 p, double tol = 0.0) const {
        const double cr = e1.cross(e2);
        const Vec2 r = p - anchor;
        // Parameter coordinates: p = anchor + s*e1 + t*e2.
        const double s = r.cross(e2) / cr;
        const double t = e1.cross(r) / cr;
        // Convert distance tolerance to parameter slack per side pair.
        const double slack_s = tol * e2.norm() / cr;
        const double slack_t = tol * e1.norm() / cr;
        return s >= -slack_s && s <= 1.0 + slack_s && t >= -slack_t && t <= 1.0 + slack_t;
    }

    ConvexPolygon to_polygon() const {
        const auto v = vertices();
        return ConvexPolygon::from_points({v[0], v[1], v[2], v[3]});
    }
};

// ---------------------------------------------------------------------------
// Support function and friends
// ---------------------------------------------------------------------------

struct SupportResult {
    double value = 0.0;
    Point2 witness;
    std::size_t index = 0;
};

/// Max of n.v over the vertices; ties resolved to the lowest vertex index.
inline SupportResult support(const ConvexPolygon& poly, Vec2 n) {
    const auto& vs = poly.vertices();
    SupportResult best{n.dot(vs[0]), vs[0], 0};
    for (std::size_t i = 1; i < vs.size(); ++i) {
        const double v = n.dot(vs[i]);
        if (v > best.value) best = {v, vs[i], i};
    }
    return best;
}

inline double width(const ConvexPolygon& poly, Vec2 n) {
    return support(poly, n).value + support(poly, -n).value;
}

struct Normalized {
    ConvexPolygon poly;
    AffineMap map;  // original frame -> normalized frame
};

/// Rotates u to horizontal and rescales so the body's horizontal supporting
/// lines become y=0 and y=1. The returned similarity map is invertible; pull
/// results back with map.inverse().
inline Normalized normalize_to_unit_slab(const ConvexPolygon& poly, Direction u) {
    const double theta = u.angle();
    const AffineMap rot = AffineMap::similarity(-theta, 1.0, {0.0, 0.0});

    double ylo = std::numeric_limits<double>::infinity();
    double yhi = -std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices()) {
        const double y = rot.apply(v).y;
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
    const double h = yhi - ylo;
    if (!(h > 1e-12 * poly.diameter()))
        throw DegenerateBody("body has no extent perpendicular to u");

    const double s = 1.0 / h;
    AffineMap map = AffineMap::similarity(-theta, s, {0.0, 0.0});
    map.t = {0.0, -s * ylo};
    return {poly.transformed(map), map};
}

/// Endpoints (x_left, x_right) of the horizontal chord at height h of a
/// unit-slab-normalized polygon. None outside [0, 1]; the chord may have zero
/// length at the extremes.
inline std::optional<std::pair<double, double>> chord_at_height(const ConvexPolygon& poly, double h) {
    if (!(h >= 0.0 && h <= 1.0)) return std::nullopt;
    const auto [ylo, yhi] = poly.y_range();
    const double hh = std::clamp(h, ylo, yhi);  // absorb normalization rounding

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point2& p = vs[i];
        const Point2& q = vs[(i + 1) % vs.size()];
        if (std::min(p.y, q.y) > hh || std::max(p.y, q.y) < hh) continue;
        if (p.y == q.y) {
            xmin = std::min({xmin, p.x, q.x});
            xmax = std::max({xmax, p.x, q.x});
        } else {
            const double t = (hh - p.y) / (q.y - p.y);
            const double x = p.x + t * (q.x - p.x);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    if (xmin > xmax) return std::nullopt;  // unreachable after the clamp
    return std::make_pair(xmin, xmax);
}

/// Minkowski sum poly + (-poly); centrally symmetric about the origin.
/// x - y in difference_body(K) iff the translates K+x and K+y intersect.
inline ConvexPolygon difference_body(const ConvexPolygon& poly) {
    auto bottom_start = [](const ConvexPolygon& p) {
        const auto& vs = p.vertices();
        std::size_t best = 0;
        for (std::size_t i = 1; i < vs.size(); ++i) {
            if (vs[i].y < vs[best].y || (vs[i].y == vs[best].y && vs[i].x < vs[best].x)) best = i;
        }
        return best;
    };

    std::vector<Point2> neg;
    neg.reserve(poly.size());
    for (const auto& v : poly.vertices()) neg.push_back(-v);
    const ConvexPolygon negp = ConvexPolygon::from_points(std::move(neg));

    const auto& a = poly.vertices();
    const auto& b = negp.vertices();
    const std::size_t n = a.size(), m = b.size();
    const std::size_t ia0 = bottom_start(poly), ib0 = bottom_start(negp);

    // Standard convex Minkowski-sum edge merge.
    std::vector<Point2> out;
    out.reserve(n + m);
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        out.push_back(a[(ia0 + i) % n] + b[(ib0 + j) % m]);
        if (i >= n) {
            ++j;
        } else if (j >= m) {
            ++i;
        } else {
            const Vec2 ea = a[(ia0 + i + 1) % n] - a[(ia0 + i) % n];
            const Vec2 eb = b[(ib0 + j + 1) % m] - b[(ib0 + j) % m];
            const double cr = ea.cross(eb);
            if (cr > 0.0) {
                ++i;
            } else if (cr < 0.0) {
                ++j;
            } else {
                ++i;
                ++j;
            }
        }
    }
    return ConvexPolygon::from_points(std::move(out));
}

/// True iff p is within signed distance tol of the inside (tol < 0 demands
/// strict interior by |tol|).
inline bool contains_point(const ConvexPolygon& poly, Point2 p, double tol = kDefaultTol) {
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point2& a = vs[i];
        const Point2& b = vs[(i + 1) % vs.size()];
        const Vec2 e = b - a;
        const double d = e.cross(p - a) / e.norm();
        if (d < -tol) return false;
    }
    return true;
}

/// Vertex containment; exact for convex inner polygons.
inline bool contains_polygon(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol = kDefaultTol) {
    for (const auto& v : inner.vertices())
        if (!contains_point(outer, v, tol)) return false;
    return true;
}

inline bool contains_polygon(const Parallelogram& outer, const ConvexPolygon& inner, double tol = kDefaultTol) {
    for (const auto& v : inner.vertices())
        if (!outer.contains(v, tol)) return false;
    return true;
}

}  // namespace pierce4
