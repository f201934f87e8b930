#include <catch2/catch_amalgamated.hpp>

#include "glyphmark/mpe.hpp"
#include "glyphmark/rng.hpp"
#include "glyphmark/skeleton.hpp"
#include "oracles.hpp"
#include "testers.hpp"

using namespace glyphmark;

namespace {

struct Scene {
    SkeletonImage ske;
    KeypointSet kp;
    StrokeGraph graph;
};

Scene scene_of(const GrayImage& raw) {
    Scene s;
    s.ske = thin(raw);
    s.kp = detect(s.ske);
    s.graph = build_stroke_graph(s.ske, s.kp);
    return s;
}

/// Random tree-ish skeletons for the oracle-equivalence sweep.
Scene random_scene(Rng& rng) {
    GrayImage raw(48, 48, 255);
    const int arms = rng.uniform_int(1, 4);
    Point hub{rng.uniform_int(12, 36), rng.uniform_int(12, 36)};
    Point prev = hub;
    for (int i = 0; i < arms; ++i) {
        const Point to{rng.uniform_int(2, 45), rng.uniform_int(2, 45)};
        gmtest::draw_line(raw, i == 0 || rng.uniform() < 0.7 ? hub : prev, to);
        prev = to;
    }
    return scene_of(raw);
}

} // namespace

TEST_CASE("reference_set membership and ordering") {
    GrayImage raw(30, 30, 255);
    gmtest::draw_line(raw, {4, 4}, {24, 4});
    gmtest::draw_line(raw, {14, 4}, {14, 24});
    const Scene s = scene_of(raw);
    REQUIRE(s.kp.endpoints.size() == 3);
    REQUIRE(s.kp.junctions.size() == 1);

    const Keypoint left = s.kp.endpoints[0];
    const auto all = reference_set(left, s.kp, 80);
    REQUIRE(all.size() == 3);  // every other keypoint in range
    for (std::size_t i = 1; i < all.size(); ++i)
        REQUIRE(point_before(all[i - 1].pos, all[i].pos));

    REQUIRE(reference_set(left, s.kp, 0).empty());  // degenerate box

    // isolated endpoint: a lone segment far from everything
    GrayImage lone(20, 60, 255);
    gmtest::draw_line(lone, {2, 10}, {12, 10});
    const Scene s2 = scene_of(lone);
    REQUIRE(reference_set(s2.kp.endpoints[0], s2.kp, 4).empty());
}

TEST_CASE("evaluate: L-shaped glyph, same-stroke pair ties at score 1") {
    // endpoints (5,0) and (12,10), one stroke, tau 20
    GrayImage raw(14, 16, 255);
    gmtest::draw_line(raw, {5, 0}, {5, 10});
    gmtest::draw_line(raw, {5, 10}, {12, 10});
    const Scene s = scene_of(raw);
    REQUIRE(s.kp.endpoints.size() == 2);
    REQUIRE(s.kp.junctions.empty());

    const auto sel = evaluate(s.kp, s.graph, 20);
    REQUIRE(sel.has_value());
    REQUIRE(sel->score == 1);
    REQUIRE(sel->handle.pos == Point{5, 0});     // smaller y wins the tie
    REQUIRE(sel->reference.pos == Point{12, 10});
}

TEST_CASE("evaluate: T-shaped glyph exercises the x tie-break") {
    // endpoints (0,0), (10,0), (5,10); junction at (5,0); tau 20
    GrayImage raw(12, 12, 255);
    gmtest::draw_line(raw, {0, 0}, {10, 0});
    gmtest::draw_line(raw, {5, 0}, {5, 10});
    const SkeletonImage ske = raw;  // already one pixel wide
    const KeypointSet kp = detect(ske);
    REQUIRE(kp.endpoints.size() == 3);
    REQUIRE(kp.junctions.size() == 1);
    REQUIRE(kp.junctions[0].pos == Point{5, 0});
    const StrokeGraph g = build_stroke_graph(ske, kp);

    const auto sel = evaluate(kp, g, 20);
    REQUIRE(sel.has_value());
    REQUIRE(sel->score == 3);
    for (const ScoredTriple& t : sel->trace) REQUIRE(t.best_score == 3);
    REQUIRE(sel->handle.pos == Point{0, 0});   // y tie at 0 broken by smaller x
    REQUIRE(sel->reference.pos == Point{10, 0});
}

TEST_CASE("evaluate: loop glyph is non-embeddable") {
    GrayImage raw(12, 12, 255);
    gmtest::draw_line(raw, {3, 3}, {8, 3});
    gmtest::draw_line(raw, {8, 3}, {8, 8});
    gmtest::draw_line(raw, {8, 8}, {3, 8});
    gmtest::draw_line(raw, {3, 8}, {3, 3});
    const Scene s = scene_of(raw);
    REQUIRE_FALSE(evaluate(s.kp, s.graph, 20).has_value());
}

TEST_CASE("evaluate: isolated endpoints all score zero") {
    GrayImage raw(20, 60, 255);
    gmtest::draw_line(raw, {2, 10}, {12, 10});
    const Scene s = scene_of(raw);
    REQUIRE_FALSE(evaluate(s.kp, s.graph, 3).has_value());
}

TEST_CASE("evaluate is deterministic and bounded") {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const Scene s = random_scene(rng);
        const auto a = evaluate(s.kp, s.graph, 30);
        const auto b = evaluate(s.kp, s.graph, 30);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            REQUIRE(a->handle.pos == b->handle.pos);
            REQUIRE(a->reference.pos == b->reference.pos);
            REQUIRE(a->score >= 1);
            REQUIRE(a->score <= 3);
            for (const auto& t : a->trace) {
                REQUIRE(t.best_score >= 0);
                REQUIRE(t.best_score <= 3);
                REQUIRE((t.best_score == 0) == !t.best_reference.has_value());
            }
        }
    }
}

TEST_CASE("evaluate matches the brute-force enumeration scorer") {
    Rng rng(2024);
    int checked = 0;
    for (int i = 0; i < 120 && checked < 60; ++i) {
        const Scene s = random_scene(rng);
        if (s.kp.endpoints.size() + s.kp.junctions.size() > 6) continue;
        ++checked;
        for (int tau : {8, 20, 40}) {
            const auto got = evaluate(s.kp, s.graph, tau);
            const auto want = gmtest::mpe_bruteforce(s.kp, s.graph, tau);
            REQUIRE(got.has_value() == want.has_value());
            if (got) {
                REQUIRE(got->handle.pos == want->handle.pos);
                REQUIRE(got->reference.pos == want->reference.pos);
                REQUIRE(got->score == want->score);
            }
        }
    }
    REQUIRE(checked >= 50);
}

TEST_CASE("ablation variants stay usable") {
    GrayImage raw(12, 12, 255);
    gmtest::draw_line(raw, {0, 0}, {10, 0});
    gmtest::draw_line(raw, {5, 0}, {5, 10});
    const KeypointSet kp = detect(raw);
    const StrokeGraph g = build_stroke_graph(raw, kp);

    MpeVariant no_r2;
    no_r2.rule2_connectivity = false;
    const auto sel2 = evaluate(kp, g, 20, no_r2);
    REQUIRE(sel2.has_value());
    REQUIRE(sel2->score == 2);  // initial 1 + min-y bonus among top scorers

    Rng rng(5);
    MpeVariant no_r3;
    no_r3.rule3_min_y = false;
    no_r3.rng = &rng;
    const auto sel3 = evaluate(kp, g, 20, no_r3);
    REQUIRE(sel3.has_value());

    MpeVariant no_r1;
    no_r1.rule1_endpoints_only = false;
    const auto sel1 = evaluate(kp, g, 20, no_r1);
    REQUIRE(sel1.has_value());
    REQUIRE(sel1->trace.size() == 4);  // junction scored as a candidate too
}
