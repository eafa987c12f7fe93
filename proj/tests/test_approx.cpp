#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pierce4/approx.hpp"
#include "pierce4/oracles.hpp"
#include "test_util.hpp"

using namespace pierce4;

namespace {

constexpr double kPi = 3.14159265358979323846;

ConvexPolygon normalized(const std::string& spec, double angle = 0.0) {
    return normalize_to_unit_slab(gen_body(spec), Direction(angle)).poly;
}

// Independent root oracle: dense sweep over the chord parameter for the
// minimal |gap|, far away from the bisection path.
double sweep_ratio(const ConvexPolygon& body, Direction u, int samples = 20000) {
    const auto norm = normalize_to_unit_slab(body, u);
    ConvexPolygon work = norm.poly;
    const auto prof0 = ChordProfile::build_unchecked(work);
    if (prof0.length_at(0.0) > 1e-9 || prof0.length_at(1.0) > 1e-9) work = eps_shave(work, 1e-4);
    const auto prof = ChordProfile::build(work);
    const double m = prof.max_chord();
    double best_gap = 1e300, best_ratio = 0.0;
    for (int i = 1; i < samples; ++i) {
        const double l = m * i / samples;
        try {
            const auto in = inscribed_parallelogram(prof, l);
            const auto out = circumscribed_parallelogram(norm.poly, Direction::of_vector(in.e2));
            const double gap = in.e1.norm() / in.e2.norm() - out.e1.norm() / out.e2.norm();
            if (std::abs(gap) < best_gap) {
                best_gap = std::abs(gap);
                best_ratio = out.e1.norm() / in.e1.norm();
            }
        } catch (const Error&) {
        }
    }
    return best_ratio;
}

}  // namespace

TEST_CASE("inscribed parallelogram") {
    SECTION("disk at the inscribed-square chord") {
        const auto prof = ChordProfile::build(normalized("disk256"));
        const double l = std::sqrt(2.0) / 2.0;
        const auto p = inscribed_parallelogram(prof, l);
        REQUIRE(p.anchor.y == Catch::Approx(0.5 - std::sqrt(2.0) / 4.0).margin(1e-3));
        REQUIRE((p.anchor + p.e2).y == Catch::Approx(0.5 + std::sqrt(2.0) / 4.0).margin(1e-3));
        REQUIRE(p.e2.norm() == Catch::Approx(p.e1.norm()).margin(1e-3));
    }
    SECTION("vertices land on the boundary") {
        const auto body = eps_shave(normalized("triangle"), 1e-4);
        const auto prof = ChordProfile::build(body);
        const auto p = inscribed_parallelogram(prof, prof.max_chord() / 2.0);
        for (const auto& v : p.vertices()) {
            REQUIRE(contains_point(body, v, 1e-9));
            REQUIRE_FALSE(contains_point(body, v, -1e-6));  // on, not inside
        }
    }
    SECTION("aspect ratio collapses as l tends to zero") {
        const auto prof = ChordProfile::build(normalized("kgon:9"));
        const auto p = inscribed_parallelogram(prof, prof.max_chord() * 1e-4);
        REQUIRE(p.e1.norm() / p.e2.norm() < 0.01);
    }
    SECTION("rejects lengths outside (0, m]") {
        const auto prof = ChordProfile::build(normalized("kgon:9"));
        REQUIRE_THROWS_AS(inscribed_parallelogram(prof, 0.0), InvalidChord);
        REQUIRE_THROWS_AS(inscribed_parallelogram(prof, prof.max_chord() * 1.01), InvalidChord);
    }
}

TEST_CASE("circumscribed parallelogram") {
    SECTION("square with vertical sides is the square itself") {
        const auto sq = normalized("square");
        const auto p = circumscribed_parallelogram(sq, Direction(kPi / 2.0));
        REQUIRE(p.area() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(p.e1.norm() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(p.e2.norm() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("disk with vertical sides is the unit square") {
        const auto p = circumscribed_parallelogram(normalized("disk256"), Direction(kPi / 2.0));
        REQUIRE(p.e1.norm() == Catch::Approx(1.0).margin(2e-4));
        REQUIRE(p.e2.norm() == Catch::Approx(1.0).margin(2e-4));
    }
    SECTION("side length is 1/sin(alpha)") {
        std::mt19937_64 rng(29);
        for (int i = 0; i < 30; ++i) {
            const auto poly =
                normalize_to_unit_slab(testutil::random_polygon(rng), Direction(0.0)).poly;
            const double ang = testutil::uniform(rng, 0.2, kPi - 0.2);
            const auto p = circumscribed_parallelogram(poly, Direction(ang));
            REQUIRE(p.e2.norm() * std::sin(ang) == Catch::Approx(1.0).margin(1e-9));
            // All four sides touch the body.
            const auto poly_p = p.to_polygon();
            REQUIRE(contains_polygon(poly_p, poly, 1e-9));
            const auto& vs = poly_p.vertices();
            for (std::size_t k = 0; k < 4; ++k) {
                const Vec2 edge = vs[(k + 1) % 4] - vs[k];
                const Vec2 inward = edge.rot90().normalized();
                double depth = 1e300;
                for (const auto& bv : poly.vertices())
                    depth = std::min(depth, inward.dot(bv - vs[k]));
                REQUIRE(depth <= 1e-9);  // some body vertex on each side
            }
        }
        const auto sq = normalized("square");
        REQUIRE(circumscribed_parallelogram(sq, Direction(kPi / 4.0)).e2.norm() ==
                Catch::Approx(std::sqrt(2.0)).margin(1e-9));
    }
    SECTION("horizontal direction is degenerate") {
        REQUIRE_THROWS_AS(circumscribed_parallelogram(normalized("square"), Direction(0.0)),
                          DegenerateDirection);
    }
}

TEST_CASE("homothety gap") {
    const auto disk = normalized("disk256");
    const auto prof = ChordProfile::build(disk);
    SECTION("negative for tiny l") {
        REQUIRE(homothety_gap(prof, disk, prof.max_chord() * 1e-4) < 0.0);
    }
    SECTION("zero at the disk's symmetric parameter") {
        REQUIRE(homothety_gap(prof, disk, std::sqrt(2.0) / 2.0) == Catch::Approx(0.0).margin(1e-3));
    }
    SECTION("positive near m for the shaved square") {
        const auto sq = normalized("square");
        const auto shaved = eps_shave(sq, 1e-4);
        const auto sprof = ChordProfile::build(shaved);
        REQUIRE(homothety_gap(sprof, sq, sprof.max_chord()) > 0.0);
    }
}

TEST_CASE("find_homothetic_pair on parallelogram bodies") {
    SECTION("unit square, horizontal u") {
        const auto r = find_homothetic_pair(gen_body("square"), Direction(0.0));
        REQUIRE(r.ratio == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(r.residual <= 1e-9);
        // P is the body itself.
        REQUIRE(r.P.area() == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("sheared parallelogram, u along the horizontal side pair") {
        const auto body = ConvexPolygon::from_points({{0, 0}, {2, 0}, {2.7, 1.3}, {0.7, 1.3}});
        const auto r = find_homothetic_pair(body, Direction(0.0));
        REQUIRE(r.ratio == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(r.P.area() == Catch::Approx(body.area()).margin(1e-9));
    }
    SECTION("rotated square, u along a side") {
        const auto sq = gen_body("square").transformed(AffineMap::similarity(0.4, 1.0, {1, 2}));
        const auto r = find_homothetic_pair(sq, Direction(0.4));
        REQUIRE(r.ratio == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("find_homothetic_pair on the disk") {
    const auto disk = gen_body("disk256");
    for (int k = 0; k < 8; ++k) {
        const Direction u(kPi * k / 8.0);
        const auto r = find_homothetic_pair(disk, u);
        REQUIRE(r.ratio == Catch::Approx(std::sqrt(2.0)).margin(1e-2));
        REQUIRE(verify_approx(disk, r).ok());
    }
    // Independent confirmation by the dense parameter sweep.
    REQUIRE(sweep_ratio(disk, Direction(0.3)) == Catch::Approx(std::sqrt(2.0)).margin(1e-2));
}

TEST_CASE("find_homothetic_pair on the triangle is extremal") {
    const auto tri = gen_body("triangle");
    for (double deg : {10.0, 25.0, 40.0, 55.0, 70.0, 105.0, 120.0, 150.0}) {
        const Direction u(deg * kPi / 180.0);
        const auto r = find_homothetic_pair(tri, u);
        REQUIRE(r.ratio == Catch::Approx(2.0).margin(2e-2));
        REQUIRE(verify_approx(tri, r).ok());
    }
    REQUIRE(sweep_ratio(tri, Direction(25.0 * kPi / 180.0)) == Catch::Approx(2.0).margin(2e-2));
}

TEST_CASE("approximation invariants over a corpus") {
    const std::vector<std::string> specs = {"kgon:3", "kgon:5", "kgon:8", "square",
                                            "disk256", "ellipse256:2", "reuleaux192"};
    for (const auto& spec : specs) {
        const auto body = gen_body(spec);
        for (int k = 0; k < 12; ++k) {
            const Direction u(kPi * k / 12.0);
            const auto r = find_homothetic_pair(body, u);
            CAPTURE(spec, k);
            REQUIRE(r.ratio <= 2.0 + 1e-3);
            REQUIRE(r.residual <= 1e-6);
            const auto chk = verify_approx(body, r);
            REQUIRE(chk.p_in_k);
            REQUIRE(chk.k_in_q);
            REQUIRE(chk.q_is_2p);
            // Q's edges are exactly twice P's by construction.
            REQUIRE((r.Q.e1 - 2.0 * r.P.e1).norm() == 0.0);
            REQUIRE((r.Q.e2 - 2.0 * r.P.e2).norm() == 0.0);
        }
    }
}

TEST_CASE("inscribed vertices stay near the boundary") {
    const auto body = gen_body("kgon:11");
    const auto r = find_homothetic_pair(body, Direction(0.35));
    REQUIRE_FALSE(r.shaved);
    const auto norm = normalize_to_unit_slab(body, Direction(0.35));
    for (const auto& v : r.P.vertices()) {
        const Point2 w = norm.map.apply(v);
        REQUIRE(contains_point(norm.poly, w, 1e-9));
        REQUIRE_FALSE(contains_point(norm.poly, w, -1e-7));
    }
}

TEST_CASE("affine invariance of the ratio bound") {
    std::mt19937_64 rng(61);
    const auto base = gen_body("kgon:7");
    for (int i = 0; i < 20; ++i) {
        AffineMap m;
        do {
            m.a = testutil::uniform(rng, -2, 2);
            m.b = testutil::uniform(rng, -2, 2);
            m.c = testutil::uniform(rng, -2, 2);
            m.d = testutil::uniform(rng, -2, 2);
        } while (std::abs(m.det()) < 0.2);
        m.t = {testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3)};
        const auto body = base.transformed(m);
        const Direction u = Direction::of_vector(m.apply_linear(Direction(0.7).unit()));
        const auto r = find_homothetic_pair(body, u);
        REQUIRE(r.ratio <= 2.0 + 1e-3);
        REQUIRE(verify_approx(body, r).ok());
    }
}

TEST_CASE("circumscribed side times sin(alpha) is the slab height") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 20; ++i) {
        const auto body = normalize_to_unit_slab(testutil::random_polygon(rng), Direction(0.0)).poly;
        const auto r = find_homothetic_pair(body, Direction(0.0));
        REQUIRE(r.P_circ.e2.norm() * std::sin(r.alpha) == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("verify_approx flags corrupted results") {
    const auto body = gen_body("kgon:8");
    const auto r = find_homothetic_pair(body, Direction(0.5));
    REQUIRE(verify_approx(body, r).ok());

    SECTION("shrunken Q loses the body") {
        // Below P's own size no parallel parallelogram can hold K.
        ApproxResult bad = r;
        const Point2 c = bad.Q.center();
        bad.Q = Parallelogram(c + (bad.Q.anchor - c) * 0.45, bad.Q.e1 * 0.45, bad.Q.e2 * 0.45);
        const auto chk = verify_approx(body, bad);
        REQUIRE_FALSE(chk.k_in_q);
    }
    SECTION("inflated P escapes the body") {
        ApproxResult bad = r;
        const Point2 c = bad.P.center();
        bad.P = Parallelogram(c + (bad.P.anchor - c) * 1.1, bad.P.e1 * 1.1, bad.P.e2 * 1.1);
        const auto chk = verify_approx(body, bad);
        REQUIRE_FALSE(chk.p_in_k);
    }
}
