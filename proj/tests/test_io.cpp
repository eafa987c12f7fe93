#include <catch2/catch_amalgamated.hpp>

#include "pierce4/io.hpp"
#include "pierce4/oracles.hpp"
#include "pierce4/piercing.hpp"
#include "pierce4/probe.hpp"

using namespace pierce4;

TEST_CASE("polygon JSON round trip") {
    const auto p = gen_body("kgon:7");
    const auto j = to_json(p);
    REQUIRE(j.contains("vertices"));
    const auto q = polygon_from_json(j);
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(distance(p[i], q[i]) == 0.0);
}

TEST_CASE("polygon JSON enforces orientation and convexity") {
    // Clockwise input loads silently as CCW.
    const json cw = {{"vertices", {{0, 0}, {0, 1}, {1, 1}, {1, 0}}}};
    const auto p = polygon_from_json(cw);
    REQUIRE(p.area() > 0.0);
    // Non-convex input is rejected.
    const json bad = {{"vertices", {{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}}};
    REQUIRE_THROWS_AS(polygon_from_json(bad), InvalidPolygon);
}

TEST_CASE("instance JSON round trip preserves bytes") {
    GenConfig cfg;
    cfg.seed = 31;
    cfg.n_families = 3;
    cfg.sizes = {2, 3, 2};
    const auto inst = gen_instance(cfg);
    const auto j = to_json(inst);
    REQUIRE(j.at("schema_version") == kSchemaVersion);
    const auto back = instance_from_json(j);
    REQUIRE(back.seed == inst.seed);
    REQUIRE(to_json(back).dump() == j.dump());
}

TEST_CASE("certificate JSON round trip") {
    GenConfig cfg;
    cfg.seed = 8;
    cfg.n_families = 2;
    cfg.sizes = {3, 3};
    const auto inst = gen_instance(cfg);
    const auto cert = pierce(inst);
    const auto j = to_json(cert);
    // Stable field order for golden files.
    auto it = j.begin();
    REQUIRE(it.key() == "schema_version");
    ++it;
    REQUIRE(it.key() == "branch");
    ++it;
    REQUIRE(it.key() == "excluded_family");

    const auto back = certificate_from_json(j);
    REQUIRE(to_json(back).dump() == j.dump());
    REQUIRE(verify_certificate(inst, back).ok);
}

TEST_CASE("approx JSON round trip") {
    const auto r = find_homothetic_pair(gen_body("kgon:9"), Direction(0.3));
    const auto j = to_json(r);
    const auto back = approx_from_json(j);
    REQUIRE(to_json(back).dump() == j.dump());
    REQUIRE(back.ratio == r.ratio);
    REQUIRE((back.Q.e1 - r.Q.e1).norm() == 0.0);
}

TEST_CASE("digest is stable and content sensitive") {
    REQUIRE(digest("abc") == digest("abc"));
    REQUIRE(digest("abc") != digest("abd"));
    const auto rep = make_report("cmd", "input", json{{"tol", 1e-9}}, json{{"x", 1}}, 1.5);
    REQUIRE(rep.at("schema_version") == "1");
    REQUIRE(rep.at("input_digest") == digest("input"));
    REQUIRE(rep.at("result").at("x") == 1);
}
