#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "pierce4/chord_profile.hpp"
#include "pierce4/geometry.hpp"

namespace pierce4 {

// ---------------------------------------------------------------------------
// For a convex body K and a direction u this module constructs an inscribed
// parallelogram P with a u-parallel side pair and a translate Q of 2P with
// K inside Q. The construction sweeps the chord-length parameter l of the
// inscribed parallelogram until it is homothetic to the circumscribed
// parallelogram with parallel sides; the resulting homothety ratio stays
// within 2 (plus configured slack for shaved bodies).
// ---------------------------------------------------------------------------

struct ApproxConfig {
    // Tilt-cut size for the standalone eps_shave preprocessing; the solver
    // itself handles edge supports exactly and does not consume it.
    double eps_shave = 1e-4;
    double root_tol = 1e-10;    // target |gap| at the accepted root
    int max_iter = 200;         // bisection budget
    double ratio_slack = 1e-3;  // accepted overshoot of the ratio bound 2
};

struct ApproxResult {
    Parallelogram P;       // inscribed, in the original frame
    Parallelogram P_circ;  // circumscribed, in the original frame
    Parallelogram Q;       // translate of 2P containing K
    Direction u;           // direction of the P side pair AB/CD
    Direction v;           // direction of the P side pair AD/BC
    double alpha = 0.0;    // interior angle between the side pairs, radians
    double ratio = 0.0;    // homothety ratio |P_circ.e1| / |P.e1|
    double residual = 0.0; // | |P_circ.e1|/|P.e1| - |P_circ.e2|/|P.e2| |
    bool shaved = false;   // horizontal edge supports handled by the aligned-chord rule
    bool grid_fallback = false;
    int iterations = 0;
};

/// Inscribed parallelogram whose u-parallel sides are the full chords of
/// length l at heights h1(l) and h2(l). At l = m the plateau endpoints are
/// used, which requires a plateau of positive length. Bodies whose bottom or
/// top support set is a horizontal edge admit chords shorter than that edge
/// only on the edge itself; those sides align with the limit of the tilt-cut
/// approximation: flush right on the bottom edge, flush left on the top.
inline Parallelogram inscribed_parallelogram(const ChordProfile& profile, double l) {
    const double m = profile.max_chord();
    if (!(l > 0.0 && l <= m)) throw InvalidChord("chord length outside (0, m]");

    const auto c_bottom = chord_at_height(profile.body(), 0.0);
    const auto c_top = chord_at_height(profile.body(), 1.0);
    const double e0 = c_bottom ? c_bottom->second - c_bottom->first : 0.0;
    const double e1 = c_top ? c_top->second - c_top->first : 0.0;

    if (l == m && profile.plateau_hi() - profile.plateau_lo() <= 1e-12)
        throw InvalidChord("maximum chord attained at a single height");

    Point2 a, d;
    if (l < e0) {
        a = {c_bottom->second - l, 0.0};
    } else {
        const double h1 = l == m ? profile.plateau_lo() : profile.lower_height(l);
        const auto c1 = chord_at_height(profile.body(), h1);
        if (!c1) throw InvalidChord("chord solver left the slab");
        a = {c1->first, h1};
    }
    if (l < e1) {
        d = {c_top->first, 1.0};
    } else {
        const double h2 = l == m ? profile.plateau_hi() : profile.upper_height(l);
        const auto c2 = chord_at_height(profile.body(), h2);
        if (!c2) throw InvalidChord("chord solver left the slab");
        d = {c2->first, h2};
    }
    return Parallelogram(a, Vec2{l, 0.0}, d - a);
}

/// Smallest parallelogram containing the body with one side pair on its
/// horizontal supporting lines and the other parallel to v. In the unit slab
/// the v-parallel sides have length (slab height)/sin(angle of v).
inline Parallelogram circumscribed_parallelogram(const ConvexPolygon& poly, Direction v) {
    const Vec2 vu = v.unit();
    if (std::abs(vu.y) < 1e-9) throw DegenerateDirection("circumscribing direction is horizontal");
    // Orient v upward so the corners below come out positively oriented.
    const Vec2 w = vu.y > 0.0 ? vu : -vu;
    const Vec2 n{w.y, -w.x};

    const double chi = support(poly, n).value;
    const double clo = -support(poly, -n).value;
    const auto [ylo, yhi] = poly.y_range();

    auto corner = [&](double c, double y) { return Point2{(c + y * w.x) / w.y, y}; };
    const Point2 a = corner(clo, ylo);
    const Point2 b = corner(chi, ylo);
    const Point2 d = corner(clo, yhi);
    return Parallelogram(a, b - a, d - a);
}

/// Signed homothety mismatch g(l) = AB/BC - A'B'/B'C' between the inscribed
/// parallelogram at parameter l and the circumscribed parallelogram of
/// circ_body with sides parallel to it. Negative for small l; a root makes
/// the two parallelograms homothetic.
inline double homothety_gap(const ChordProfile& profile, const ConvexPolygon& circ_body, double l) {
    const Parallelogram in = inscribed_parallelogram(profile, l);
    const Parallelogram out = circumscribed_parallelogram(circ_body, Direction::of_vector(in.e2));
    return in.e1.norm() / in.e2.norm() - out.e1.norm() / out.e2.norm();
}

namespace detail {

// Gap evaluation that treats degenerate inscribed parallelograms (vanishing
// or horizontal AD near the chord maximum) as +infinity, matching the limit
// of AB/BC there.
inline double gap_or_inf(const ChordProfile& profile, const ConvexPolygon& circ_body, double l) {
    try {
        return homothety_gap(profile, circ_body, l);
    } catch (const InvalidChord&) {
        return std::numeric_limits<double>::infinity();
    } catch (const DegenerateDirection&) {
        return std::numeric_limits<double>::infinity();
    }
}

struct FrameResult {
    Parallelogram inscribed;  // in the (possibly shaved) profile frame
    Parallelogram circ;       // in the base normalized frame
    bool grid_fallback = false;
    int iterations = 0;
};

// Root search over the chord parameter: bracket from the low end, bisect.
inline FrameResult solve_gap_root(const ChordProfile& profile, const ConvexPolygon& circ_body,
                                  const ApproxConfig& cfg) {
    const double m = profile.max_chord();
    auto g = [&](double l) { return gap_or_inf(profile, circ_body, l); };

    double l_lo = m * 1e-4;
    for (int i = 0; i < 64 && !(g(l_lo) < 0.0); ++i) l_lo *= 0.5;
    const bool have_low = g(l_lo) < 0.0;
    const double l_hi = m;

    FrameResult res;
    if (have_low && g(l_hi) >= 0.0) {
        // First sign-change bracket from the low end, then bisection.
        const int scan = 64;
        double a = l_lo;
        double b = l_hi;
        for (int i = 1; i <= scan; ++i) {
            const double x = l_lo + (l_hi - l_lo) * static_cast<double>(i) / scan;
            if (g(x) >= 0.0) {
                b = x;
                break;
            }
            a = x;
        }
        double best_l = b, best_g = g(b);
        int it = 0;
        while (std::abs(best_g) > cfg.root_tol && it < cfg.max_iter) {
            ++it;
            const double mid = 0.5 * (a + b);
            const double gm = g(mid);
            if (std::abs(gm) < std::abs(best_g)) {
                best_g = gm;
                best_l = mid;
            }
            if ((b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * m) break;
            if (gm < 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        res.iterations = it;
        res.inscribed = inscribed_parallelogram(profile, best_l);
    } else {
        // No sign change: minimal |g| over a fine grid.
        const int samples = 10000;
        double best_l = 0.0, best_g = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= samples; ++i) {
            const double l = m * static_cast<double>(i) / samples;
            const double gl = std::abs(g(l));
            if (gl < best_g) {
                best_g = gl;
                best_l = l;
            }
        }
        if (!(best_g < std::numeric_limits<double>::infinity()))
            throw NoRootFound("homothety gap undefined across the whole chord range");
        res.grid_fallback = true;
        res.inscribed = inscribed_parallelogram(profile, best_l);
    }
    res.circ = circumscribed_parallelogram(circ_body, Direction::of_vector(res.inscribed.e2));
    return res;
}

inline Parallelogram map_parallelogram(const AffineMap& m, const Parallelogram& p) {
    return Parallelogram(m.apply(p.anchor), m.apply_linear(p.e1), m.apply_linear(p.e2));
}

}  // namespace detail

/// Constructive approximation of a body by parallelograms: normalizes K so u
/// is horizontal, finds the chord parameter where inscribed and circumscribed
/// parallelograms are homothetic, and anchors Q = 2P concentric with the
/// circumscribed parallelogram. All outputs are pulled back to the original
/// frame. Horizontal edge supports are handled by the aligned-chord rule in
/// inscribed_parallelogram rather than by perturbing the body, so the tight
/// cases (parallelogram bodies at ratio 1, triangles at ratio 2) come out
/// exact.
inline ApproxResult find_homothetic_pair(const ConvexPolygon& body, Direction u,
                                         const ApproxConfig& cfg = {}) {
    const Normalized base = normalize_to_unit_slab(body, u);
    const ConvexPolygon& k0 = base.poly;

    const ChordProfile profile = ChordProfile::build_unchecked(k0);

    ApproxResult out;
    out.u = u;
    out.shaved = profile.length_at(0.0) > 1e-9 || profile.length_at(1.0) > 1e-9;
    out.grid_fallback = false;

    const detail::FrameResult solved = detail::solve_gap_root(profile, k0, cfg);
    out.grid_fallback = solved.grid_fallback;
    out.iterations = solved.iterations;

    const Parallelogram& p_base = solved.inscribed;
    const Parallelogram& circ = solved.circ;

    // Pull back to the original frame.
    const AffineMap inv = base.map.inverse();
    out.P = detail::map_parallelogram(inv, p_base);
    out.P_circ = detail::map_parallelogram(inv, circ);
    out.v = Direction::of_vector(out.P.e2);
    {
        const Vec2 e1 = out.P.e1, e2 = out.P.e2;
        out.alpha = std::atan2(e1.cross(e2), e1.dot(e2));
    }
    out.ratio = out.P_circ.e1.norm() / out.P.e1.norm();
    out.residual = std::abs(out.ratio - out.P_circ.e2.norm() / out.P.e2.norm());

    const Point2 qc = inv.apply(circ.center());
    out.Q = Parallelogram(qc - out.P.e1 - out.P.e2, 2.0 * out.P.e1, 2.0 * out.P.e2);

    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << what << " (ratio=" << out.ratio << ", residual=" << out.residual
           << ", shaved=" << out.shaved << ", grid_fallback=" << out.grid_fallback << ")";
        throw NoRootFound(os.str());
    };
    if (!(out.ratio <= 2.0 + cfg.ratio_slack)) fail("homothety ratio exceeds bound");
    if (!out.grid_fallback && !(out.residual <= 1e-6)) fail("homothety residual too large");
    if (!contains_polygon(k0, detail::map_parallelogram(base.map, out.P).to_polygon(), kDefaultTol))
        fail("inscribed parallelogram escapes the body");
    if (!contains_polygon(detail::map_parallelogram(base.map, out.Q), k0, kDefaultTol))
        fail("body escapes the doubled parallelogram");
    return out;
}

struct ApproxCheck {
    bool p_in_k = false;
    bool k_in_q = false;
    bool q_is_2p = false;
    bool residual_ok = false;
    bool ratio_ok = false;
    double p_slack = 0.0;        // worst signed violation of P inside K
    double q_slack = 0.0;        // worst signed violation of K inside Q
    double edge_mismatch = 0.0;  // |Q.e - 2 P.e|, should be exactly zero
    double residual = 0.0;
    double ratio = 0.0;

    bool ok() const { return p_in_k && k_in_q && q_is_2p && residual_ok && ratio_ok; }
};

/// Report-only re-check of an ApproxResult against the body, in normalized
/// units (tolerances are interpreted in the unit slab of K with respect to u).
inline ApproxCheck verify_approx(const ConvexPolygon& body, const ApproxResult& r,
                                 double tol = kDefaultTol) {
    const Normalized base = normalize_to_unit_slab(body, r.u);
    const ConvexPolygon& k0 = base.poly;
    const Parallelogram p = detail::map_parallelogram(base.map, r.P);
    const Parallelogram q = detail::map_parallelogram(base.map, r.Q);

    ApproxCheck chk;
    auto signed_depth = [&](const ConvexPolygon& outer, Point2 pt) {
        double worst = std::numeric_limits<double>::infinity();
        const auto& vs = outer.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const Vec2 e = vs[(i + 1) % vs.size()] - vs[i];
            worst = std::min(worst, e.cross(pt - vs[i]) / e.norm());
        }
        return worst;  // >= 0 inside
    };

    chk.p_slack = 0.0;
    for (const auto& vtx : p.vertices()) chk.p_slack = std::min(chk.p_slack, signed_depth(k0, vtx));
    chk.p_in_k = chk.p_slack >= -tol;

    const ConvexPolygon qpoly = q.to_polygon();
    chk.q_slack = 0.0;
    for (const auto& vtx : k0.vertices())
        chk.q_slack = std::min(chk.q_slack, signed_depth(qpoly, vtx));
    chk.k_in_q = chk.q_slack >= -tol;

    chk.edge_mismatch = std::max((r.Q.e1 - 2.0 * r.P.e1).norm(), (r.Q.e2 - 2.0 * r.P.e2).norm());
    chk.q_is_2p = chk.edge_mismatch == 0.0;

    chk.ratio = r.P_circ.e1.norm() / r.P.e1.norm();
    chk.residual = std::abs(chk.ratio - r.P_circ.e2.norm() / r.P.e2.norm());
    chk.residual_ok = chk.residual <= 1e-6;
    chk.ratio_ok = chk.ratio <= 2.0 + 1e-3;
    return chk;
}

}  // namespace pierce4
