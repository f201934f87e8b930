#include <catch2/catch_amalgamated.hpp>

#include "glyphmark/keypoints.hpp"
#include "glyphmark/skeleton.hpp"
#include "testers.hpp"

using namespace glyphmark;

TEST_CASE("detect on a straight line") {
    GrayImage line(6, 20, 255);
    gmtest::draw_line(line, {2, 3}, {17, 3});
    const KeypointSet kp = detect(line);
    REQUIRE(kp.endpoints.size() == 2);
    REQUIRE(kp.junctions.empty());
    REQUIRE(kp.endpoints[0].pos == Point{2, 3});
    REQUIRE(kp.endpoints[1].pos == Point{17, 3});
}

TEST_CASE("detect on a T skeleton") {
    GrayImage t_img(16, 16, 255);
    gmtest::draw_line(t_img, {2, 2}, {12, 2});
    gmtest::draw_line(t_img, {7, 2}, {7, 12});
    const KeypointSet kp = detect(t_img);
    REQUIRE(kp.endpoints.size() == 3);
    REQUIRE(kp.junctions.size() == 1);
    REQUIRE(chebyshev(kp.junctions[0].pos, {7, 2}) <= 1);
}

TEST_CASE("detect on a closed loop") {
    GrayImage o_raw(12, 12, 255);
    gmtest::draw_line(o_raw, {3, 3}, {8, 3});
    gmtest::draw_line(o_raw, {8, 3}, {8, 8});
    gmtest::draw_line(o_raw, {8, 8}, {3, 8});
    gmtest::draw_line(o_raw, {3, 8}, {3, 3});
    const KeypointSet kp = detect(thin(o_raw));
    REQUIRE(kp.endpoints.empty());
    REQUIRE(kp.junctions.empty());
}

TEST_CASE("endpoints have skeleton degree exactly 1") {
    GrayImage img(24, 24, 255);
    gmtest::draw_line(img, {3, 3}, {20, 3});
    gmtest::draw_line(img, {10, 3}, {10, 20});
    gmtest::draw_line(img, {10, 12}, {20, 20});
    const KeypointSet kp = detect(img);
    for (const Keypoint& e : kp.endpoints)
        REQUIRE(skeleton_degree(img, e.pos.x, e.pos.y) == 1);
}

TEST_CASE("detect is deterministic and sorted by (y, x)") {
    GrayImage img(24, 24, 255);
    gmtest::draw_line(img, {3, 3}, {20, 3});
    gmtest::draw_line(img, {10, 3}, {10, 20});
    const KeypointSet a = detect(img);
    const KeypointSet b = detect(img);
    REQUIRE(a.endpoints.size() == b.endpoints.size());
    for (std::size_t i = 0; i < a.endpoints.size(); ++i)
        REQUIRE(a.endpoints[i].pos == b.endpoints[i].pos);
    for (std::size_t i = 1; i < a.endpoints.size(); ++i)
        REQUIRE(point_before(a.endpoints[i - 1].pos, a.endpoints[i].pos));
}

TEST_CASE("handshake: node degrees match edge incidences on trees") {
    GrayImage img(24, 30, 255);
    gmtest::draw_line(img, {3, 5}, {26, 5});
    gmtest::draw_line(img, {8, 5}, {8, 20});
    gmtest::draw_line(img, {18, 5}, {18, 20});
    const KeypointSet kp = detect(img);
    const StrokeGraph g = build_stroke_graph(img, kp);

    std::size_t incidences = 0;
    for (const auto& edges : g.node_edges) incidences += edges.size();
    std::size_t endpoint_slots = 0;
    for (const StrokeEdge& e : g.edges) {
        if (e.a >= 0) ++endpoint_slots;
        if (e.b >= 0 && e.b != e.a) ++endpoint_slots;
    }
    REQUIRE(incidences == endpoint_slots);
}
