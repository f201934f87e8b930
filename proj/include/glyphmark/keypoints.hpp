#pragma once

// Topological keypoint detection on a thinned skeleton: endpoints are
// pixels of degree 1, junctions are clusters of pixels with degree >= 3.
// Degree is counted in 8-connectivity. Skeleton images use the glyph
// convention (0 = skeleton pixel, 255 = background).

#include <algorithm>
#include <cmath>
#include <vector>

#include "glyphmark/image.hpp"

namespace glyphmark {

using SkeletonImage = GrayImage;

enum class KeypointKind { endpoint, junction };

struct Keypoint {
    Point pos;
    KeypointKind kind = KeypointKind::endpoint;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct KeypointSet {
    std::vector<Keypoint> endpoints;  // sorted by (y, x)
    std::vector<Keypoint> junctions;  // sorted by (y, x)

    bool empty() const { return endpoints.empty() && junctions.empty(); }
};

inline bool is_skeleton_pixel(const SkeletonImage& ske, int x, int y) {
    return ske.in_bounds(x, y) && ske.at(x, y) == 0;
}

/// Number of skeleton pixels among the 8 neighbors.
inline int skeleton_degree(const SkeletonImage& ske, int x, int y) {
    int d = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (is_skeleton_pixel(ske, x + dx, y + dy)) ++d;
        }
    return d;
}

inline bool point_before(Point a, Point b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

namespace detail {

struct JunctionCluster {
    Point centroid;
    std::vector<Point> members;  // degree >= 3 skeleton pixels
};

/// Cluster degree->=3 pixels that lie within Chebyshev distance 2 of each
/// other (transitively) and place the node at the rounded centroid.
/// Thinning tends to split one visual junction into adjacent high-degree
/// pixels, which this merges back.
inline std::vector<JunctionCluster> junction_clusters(const SkeletonImage& ske) {
    std::vector<Point> high;
    for (int y = 0; y < ske.height(); ++y)
        for (int x = 0; x < ske.width(); ++x)
            if (ske.at(x, y) == 0 && skeleton_degree(ske, x, y) >= 3)
                high.push_back({x, y});

    std::vector<JunctionCluster> clusters;
    std::vector<bool> used(high.size(), false);
    for (std::size_t i = 0; i < high.size(); ++i) {
        if (used[i]) continue;
        JunctionCluster c;
        std::vector<std::size_t> stack{i};
        used[i] = true;
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            c.members.push_back(high[a]);
            for (std::size_t j = 0; j < high.size(); ++j)
                if (!used[j] && chebyshev(high[a], high[j]) <= 2) {
                    used[j] = true;
                    stack.push_back(j);
                }
        }
        double sx = 0, sy = 0;
        for (Point m : c.members) {
            sx += m.x;
            sy += m.y;
        }
        c.centroid = {static_cast<int>(std::lround(sx / c.members.size())),
                      static_cast<int>(std::lround(sy / c.members.size()))};
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const JunctionCluster& a, const JunctionCluster& b) {
                  return point_before(a.centroid, b.centroid);
              });
    return clusters;
}

} // namespace detail

/// Detect endpoints (degree 1) and junction clusters (degree >= 3) on a
/// thinned, spur-pruned skeleton. Output ordering is (y, x) ascending so
/// detection is deterministic.
inline KeypointSet detect(const SkeletonImage& ske) {
    KeypointSet kp;
    for (int y = 0; y < ske.height(); ++y)
        for (int x = 0; x < ske.width(); ++x)
            if (ske.at(x, y) == 0 && skeleton_degree(ske, x, y) == 1)
                kp.endpoints.push_back({{x, y}, KeypointKind::endpoint});

    for (const auto& c : detail::junction_clusters(ske))
        kp.junctions.push_back({c.centroid, KeypointKind::junction});

    std::sort(kp.endpoints.begin(), kp.endpoints.end(),
              [](const Keypoint& a, const Keypoint& b) { return point_before(a.pos, b.pos); });
    // junction_clusters already sorts by centroid
    return kp;
}

} // namespace glyphmark
