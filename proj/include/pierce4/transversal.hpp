#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pierce4/geometry.hpp"

namespace pierce4 {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw Error("interval bounds inverted");
    }

    bool contains(double t) const { return lo <= t && t <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// ---------------------------------------------------------------------------
// Instance: a body K plus n families of translation offsets. Every two
// translates drawn from distinct families must intersect, which is exactly
// membership of the offset difference in the difference body of K.
// ---------------------------------------------------------------------------

struct Instance {
    ConvexPolygon body;
    std::vector<std::vector<Vec2>> families;
    std::uint64_t seed = 0;

    std::size_t total_translates() const {
        std::size_t n = 0;
        for (const auto& f : families) n += f.size();
        return n;
    }

    /// Tolerance scale for containment checks in instance coordinates.
    double tol_scale() const { return std::max(1.0, body.diameter()); }

    /// Throws HypothesisViolation when the structural or cross-intersection
    /// invariants fail.
    void validate() const {
        if (families.size() < 2) throw HypothesisViolation("need at least 2 families");
        for (const auto& f : families)
            if (f.empty()) throw HypothesisViolation("empty family");
        const ConvexPolygon dk = difference_body(body);
        const double tol = kDefaultTol * tol_scale();
        for (std::size_t i = 0; i < families.size(); ++i) {
            for (std::size_t j = i + 1; j < families.size(); ++j) {
                for (const auto& x : families[i]) {
                    for (const auto& y : families[j]) {
                        if (!contains_point(dk, x - y, tol))
                            throw HypothesisViolation("cross-family translates do not intersect");
                    }
                }
            }
        }
    }
};

/// Projects every translate onto the axis with the given unit normal; the
/// family structure is preserved. The translate K+x projects to the base
/// interval of K shifted by x.n.
inline std::vector<std::vector<Interval>> project_to_intervals(const Instance& inst, Vec2 axis_normal) {
    const double hi0 = support(inst.body, axis_normal).value;
    const double lo0 = -support(inst.body, -axis_normal).value;
    std::vector<std::vector<Interval>> out;
    out.reserve(inst.families.size());
    for (const auto& fam : inst.families) {
        std::vector<Interval> row;
        row.reserve(fam.size());
        for (const auto& x : fam) {
            const double s = axis_normal.dot(x);
            row.emplace_back(lo0 + s, hi0 + s);
        }
        out.push_back(std::move(row));
    }
    return out;
}

/// Helly point of a family of intervals: max of the lows when it does not
/// exceed the min of the highs, otherwise nothing.
inline std::optional<double> common_point(std::span<const Interval> intervals) {
    if (intervals.empty()) return std::nullopt;
    double lo = intervals[0].lo, hi = intervals[0].hi;
    for (const auto& iv : intervals) {
        lo = std::max(lo, iv.lo);
        hi = std::min(hi, iv.hi);
    }
    if (lo <= hi) return lo;
    return std::nullopt;
}

namespace detail {

// Projection slack of the whole instance in direction theta: the width of the
// window of offsets shared by every translate (negative when none exists).
struct SlackResult {
    double slack;
    double mid;
    Vec2 normal;
};

inline SlackResult direction_slack(const Instance& inst, Direction theta) {
    const Vec2 n = theta.unit().rot90();
    const double hi0 = support(inst.body, n).value;
    const double lo0 = -support(inst.body, -n).value;
    double max_lo = -std::numeric_limits<double>::infinity();
    double min_hi = std::numeric_limits<double>::infinity();
    for (const auto& fam : inst.families) {
        for (const auto& x : fam) {
            const double s = n.dot(x);
            max_lo = std::max(max_lo, lo0 + s);
            min_hi = std::min(min_hi, hi0 + s);
        }
    }
    return {min_hi - max_lo, 0.5 * (max_lo + min_hi), n};
}

// Exact re-check, independent of the slack bookkeeping: distance from the
// line to every translate must vanish up to tolerance.
inline bool line_meets_all(const Instance& inst, const Line& line, double tol) {
    const double hi0 = support(inst.body, line.normal).value;
    const double lo0 = -support(inst.body, -line.normal).value;
    for (const auto& fam : inst.families) {
        for (const auto& x : fam) {
            const double s = line.normal.dot(x);
            if (line.offset < lo0 + s - tol || line.offset > hi0 + s + tol) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Line with direction theta meeting every translate, when the projections
/// onto the normal of theta share a point.
inline std::optional<Line> transversal_in_direction(const Instance& inst, Direction theta) {
    const auto proj = project_to_intervals(inst, theta.unit().rot90());
    std::vector<Interval> flat;
    flat.reserve(inst.total_translates());
    for (const auto& row : proj) flat.insert(flat.end(), row.begin(), row.end());
    const auto t = common_point(flat);
    if (!t) return std::nullopt;
    return Line(theta.unit().rot90(), *t);
}

struct TransversalConfig {
    int coarse_samples = 720;
    int refine_iters = 60;
};

/// Sampled search for a line transversal to all translates in all families:
/// a coarse sweep over directions returning immediately on nonnegative slack,
/// followed by golden-section refinement around the best sampled direction.
/// Every returned line is re-validated against all translates. None is a
/// legitimate outcome and routes callers to the piercing fallback.
inline std::optional<std::pair<Direction, Line>> find_transversal(const Instance& inst,
                                                                  const TransversalConfig& cfg = {}) {
    constexpr double kPi = 3.14159265358979323846;
    const double tol = kDefaultTol * inst.tol_scale();

    // A direction is usable when the exact re-check passes; slack within
    // -tol covers tangent transversals the sampling cannot hit exactly.
    auto validated = [&](Direction theta) -> std::optional<std::pair<Direction, Line>> {
        const auto s = detail::direction_slack(inst, theta);
        if (s.slack < -tol) return std::nullopt;
        const Line line(s.normal, s.mid);
        if (!detail::line_meets_all(inst, line, tol)) return std::nullopt;
        return std::make_pair(theta, line);
    };

    double best_slack = -std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    for (int k = 0; k < cfg.coarse_samples; ++k) {
        const double theta = kPi * static_cast<double>(k) / cfg.coarse_samples;
        const auto s = detail::direction_slack(inst, Direction(theta));
        if (s.slack >= -tol) {
            if (auto hit = validated(Direction(theta))) return hit;
        }
        if (s.slack > best_slack) {
            best_slack = s.slack;
            best_theta = theta;
        }
    }

    // Golden-section maximization of the slack around the best coarse sample.
    const double step = kPi / cfg.coarse_samples;
    double a = best_theta - step, b = best_theta + step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = detail::direction_slack(inst, Direction(c)).slack;
    double fd = detail::direction_slack(inst, Direction(d)).slack;
    for (int i = 0; i < cfg.refine_iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = detail::direction_slack(inst, Direction(c)).slack;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = detail::direction_slack(inst, Direction(d)).slack;
        }
        const double theta = fc > fd ? c : d;
        if (std::max(fc, fd) >= -tol) {
            if (auto hit = validated(Direction(theta))) return hit;
        }
    }
    return std::nullopt;
}

}  // namespace pierce4
