#pragma once

// Thinning and stroke-level structure. thin() reduces a glyph to a
// one-pixel-wide skeleton (Zhang-Suen with a staircase cleanup pass),
// prune_spurs() removes short thinning artifacts, and build_stroke_graph()
// decomposes the skeleton into keypoint nodes and stroke-segment edges.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "glyphmark/image.hpp"
#include "glyphmark/keypoints.hpp"

namespace glyphmark {

namespace detail {

// Neighbor sequence P2..P9: N, NE, E, SE, S, SW, W, NW.
constexpr int kNbrX[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNbrY[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

inline void ring_values(const GrayImage& img, int x, int y, int (&v)[8]) {
    for (int k = 0; k < 8; ++k) {
        const int nx = x + kNbrX[k], ny = y + kNbrY[k];
        v[k] = (img.in_bounds(nx, ny) && img.at(nx, ny) == 0) ? 1 : 0;
    }
}

inline int transitions(const int (&v)[8]) {
    int a = 0;
    for (int k = 0; k < 8; ++k)
        if (v[k] == 0 && v[(k + 1) % 8] == 1) ++a;
    return a;
}

inline int ring_sum(const int (&v)[8]) {
    int b = 0;
    for (int k = 0; k < 8; ++k) b += v[k];
    return b;
}

/// Yokoi connectivity number for 8-connected foreground. A black pixel
/// with C8 == 1 is simple: deleting it preserves local connectivity and
/// hole structure.
inline int yokoi_c8(const GrayImage& img, int x, int y) {
    // ring order E, NE, N, NW, W, SW, S, SE (x1..x8)
    static constexpr int rx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int ry[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    int inv[8];
    for (int k = 0; k < 8; ++k)
        inv[k] = (img.in_bounds(x + rx[k], y + ry[k]) && img.at(x + rx[k], y + ry[k]) == 0)
                     ? 0
                     : 1;
    int c = 0;
    for (int k = 0; k < 8; k += 2)
        c += inv[k] - inv[k] * inv[(k + 1) % 8] * inv[(k + 2) % 8];
    return c;
}

} // namespace detail

/// Zhang-Suen thinning to a one-pixel-wide, 8-connected skeleton, followed
/// by a cleanup pass that removes staircase-redundant pixels (degree-2
/// pixels whose two neighbors are mutually adjacent) and resolves any
/// residual 2x2 blocks.
inline SkeletonImage thin(const BinaryGlyph& glyph) {
    SkeletonImage ske = glyph;
    const int h = ske.height(), w = ske.width();

    std::vector<Point> kill;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            kill.clear();
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (ske.at(x, y) != 0) continue;
                    int v[8];
                    detail::ring_values(ske, x, y, v);
                    const int b = detail::ring_sum(v);
                    if (b < 2 || b > 6) continue;
                    if (detail::transitions(v) != 1) continue;
                    // indices: 0=N, 2=E, 4=S, 6=W
                    if (pass == 0) {
                        if (v[0] * v[2] * v[4] != 0) continue;
                        if (v[2] * v[4] * v[6] != 0) continue;
                    } else {
                        if (v[0] * v[2] * v[6] != 0) continue;
                        if (v[0] * v[4] * v[6] != 0) continue;
                    }
                    kill.push_back({x, y});
                }
            }
            for (Point p : kill) ske.at(p) = 255;
            if (!kill.empty()) changed = true;
        }
    }

    // Redundancy cleanup: sequentially delete simple pixels of degree >= 2
    // (staircase corners, doubled diagonal steps, residual 2x2 blocks).
    // Straight-run interiors and endpoints are never simple under this
    // test, so the pass cannot erode the skeleton.
    changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (ske.at(x, y) != 0) continue;
                if (skeleton_degree(ske, x, y) < 2) continue;
                if (detail::yokoi_c8(ske, x, y) == 1) {
                    ske.at(x, y) = 255;
                    changed = true;
                }
            }
        }
    }
    return ske;
}

/// Minimum branch length kept by prune_spurs, scaled with image size.
inline int spur_min_length(int height, int width) {
    return std::max(3, static_cast<int>(std::lround(0.02 * std::min(height, width))));
}

namespace detail {

/// Number of 8-connected groups among a handful of points.
inline int point_group_count(const std::vector<Point>& pts) {
    std::vector<int> group(pts.size(), -1);
    int groups = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (group[i] >= 0) continue;
        group[i] = groups;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (group[j] < 0 && chebyshev(pts[a], pts[j]) <= 1) {
                    group[j] = groups;
                    stack.push_back(j);
                }
        }
        ++groups;
    }
    return groups;
}

} // namespace detail

/// Remove skeleton branches shorter than min_len pixels that attach to the
/// rest of the structure. Free-standing segments (endpoint to endpoint)
/// are kept. The walk from each endpoint stops where two or more onward
/// neighbors appear; if those neighbors stay 8-connected without the stop
/// pixel, it belongs to the spur and is removed with it.
inline SkeletonImage prune_spurs(const SkeletonImage& input, int min_len) {
    SkeletonImage ske = input;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Point> ends;
        for (int y = 0; y < ske.height(); ++y)
            for (int x = 0; x < ske.width(); ++x)
                if (ske.at(x, y) == 0 && skeleton_degree(ske, x, y) == 1)
                    ends.push_back({x, y});

        for (Point e : ends) {
            if (ske.at(e) != 0 || skeleton_degree(ske, e.x, e.y) != 1)
                continue;  // consumed by an earlier deletion this round
            std::vector<Point> path{e};
            std::vector<Point> spur;
            Point cur = e;
            bool attached = false;
            while (static_cast<int>(path.size()) <= min_len) {
                std::vector<Point> onward;
                for (int k = 0; k < 8; ++k) {
                    const Point q{cur.x + detail::kNbrX[k], cur.y + detail::kNbrY[k]};
                    if (!is_skeleton_pixel(ske, q.x, q.y)) continue;
                    if (std::find(path.begin(), path.end(), q) != path.end()) continue;
                    onward.push_back(q);
                }
                if (onward.empty()) break;  // free segment ends here
                if (onward.size() >= 2) {
                    attached = true;
                    // the stop pixel joins the spur when the structure
                    // stays connected without it
                    spur = detail::point_group_count(onward) == 1
                               ? path
                               : std::vector<Point>(path.begin(), path.end() - 1);
                    break;
                }
                cur = onward.front();
                path.push_back(cur);
            }
            if (attached && !spur.empty() && static_cast<int>(spur.size()) < min_len) {
                for (Point p : spur) ske.at(p) = 255;
                changed = true;
            }
        }
    }
    return ske;
}

/// Follow the unique skeleton path `steps` pixels from a degree-1 start
/// point; stops early at a junction or at the path's end and returns the
/// last pixel reached.
inline Point walk_from(const SkeletonImage& ske, Point start, int steps) {
    if (!is_skeleton_pixel(ske, start.x, start.y) ||
        skeleton_degree(ske, start.x, start.y) != 1)
        throw ContractError("walk_from: start is not a degree-1 skeleton pixel");
    if (steps < 0) throw ContractError("walk_from: negative step count");

    Point prev{-1, -1};
    Point cur = start;
    for (int i = 0; i < steps; ++i) {
        if (i > 0 && skeleton_degree(ske, cur.x, cur.y) >= 3) break;
        Point next{-1, -1};
        for (int k = 0; k < 8; ++k) {
            const Point q{cur.x + detail::kNbrX[k], cur.y + detail::kNbrY[k]};
            if (is_skeleton_pixel(ske, q.x, q.y) && !(q == prev)) {
                if (next.x < 0 || point_before(q, next)) next = q;
            }
        }
        if (next.x < 0) break;  // path ended
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Local stroke thickness: twice the Euclidean distance from p to the
/// nearest background pixel. Returns 0 when p is on background.
inline double stroke_width_at(const BinaryGlyph& glyph, Point p) {
    if (!glyph.in_bounds(p) || glyph.at(p) != 0) return 0.0;
    const int h = glyph.height(), w = glyph.width();
    double best = std::numeric_limits<double>::infinity();
    const int rmax = std::max(h, w);
    for (int r = 1; r <= rmax; ++r) {
        if (static_cast<double>(r) > best) break;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                const int nx = p.x + dx, ny = p.y + dy;
                if (!glyph.in_bounds(nx, ny)) continue;
                if (glyph.at(nx, ny) == 255)
                    best = std::min(best, std::sqrt(static_cast<double>(dx) * dx +
                                                    static_cast<double>(dy) * dy));
            }
        }
    }
    if (!std::isfinite(best)) best = rmax;
    return 2.0 * best;
}

struct StrokeNode {
    Point pos;
    KeypointKind kind = KeypointKind::endpoint;
};

struct StrokeEdge {
    int a = -1;
    int b = -1;               // node indices; both -1 for a node-free loop
    std::vector<Point> path;  // node position, interior pixels, node position

    bool closed_loop() const { return a < 0 && b < 0; }
};

struct StrokeGraph {
    std::vector<StrokeNode> nodes;
    std::vector<StrokeEdge> edges;
    std::vector<std::vector<int>> node_edges;

    int find_node(Point p) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].pos == p) return static_cast<int>(i);
        return -1;
    }
};

/// Partition the skeleton into node clusters and edge paths. An edge joins
/// two nodes iff a keypoint-free skeleton path connects them; node-free
/// cycles become closed-loop edges.
inline StrokeGraph build_stroke_graph(const SkeletonImage& ske, const KeypointSet& kp) {
    const int h = ske.height(), w = ske.width();
    StrokeGraph g;

    auto clusters = detail::junction_clusters(ske);
    if (clusters.size() != kp.junctions.size())
        throw ContractError("build_stroke_graph: keypoints do not match skeleton");

    std::vector<int> node_of(static_cast<std::size_t>(h) * w, -1);
    auto idx = [w](Point p) { return static_cast<std::size_t>(p.y) * w + p.x; };

    for (const Keypoint& e : kp.endpoints) {
        if (!is_skeleton_pixel(ske, e.pos.x, e.pos.y) ||
            skeleton_degree(ske, e.pos.x, e.pos.y) != 1)
            throw ContractError("build_stroke_graph: endpoint not on skeleton");
        node_of[idx(e.pos)] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({e.pos, KeypointKind::endpoint});
    }
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        if (!(clusters[c].centroid == kp.junctions[c].pos))
            throw ContractError("build_stroke_graph: junction not on skeleton");
        const int id = static_cast<int>(g.nodes.size());
        g.nodes.push_back({clusters[c].centroid, KeypointKind::junction});
        for (Point m : clusters[c].members) node_of[idx(m)] = id;
    }

    std::vector<int> edge_of(static_cast<std::size_t>(h) * w, -1);
    std::set<std::pair<int, int>> direct_edges;

    auto member_pixels = [&](int node) {
        std::vector<Point> px;
        if (g.nodes[node].kind == KeypointKind::endpoint) {
            px.push_back(g.nodes[node].pos);
        } else {
            for (const auto& c : clusters)
                if (c.centroid == g.nodes[node].pos) {
                    px = c.members;
                    break;
                }
            std::sort(px.begin(), px.end(), point_before);
        }
        return px;
    };

    for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
        for (Point mp : member_pixels(n)) {
            for (int k = 0; k < 8; ++k) {
                const Point q{mp.x + detail::kNbrX[k], mp.y + detail::kNbrY[k]};
                if (!is_skeleton_pixel(ske, q.x, q.y)) continue;
                const int qn = node_of[idx(q)];
                if (qn >= 0) {
                    if (qn != n) {
                        auto key = std::minmax(n, qn);
                        if (direct_edges.insert({key.first, key.second}).second)
                            g.edges.push_back({key.first, key.second,
                                               {g.nodes[key.first].pos, g.nodes[key.second].pos}});
                    }
                    continue;
                }
                if (edge_of[idx(q)] >= 0) continue;

                // trace an interior path starting at q
                const int eid = static_cast<int>(g.edges.size());
                std::vector<Point> interior;
                Point prev = mp;
                Point cur = q;
                int end_node = -1;
                while (true) {
                    interior.push_back(cur);
                    edge_of[idx(cur)] = eid;
                    Point next_path{-1, -1};
                    int term = -1;           // different node, or same node further on
                    int term_fallback = -1;  // immediate return to the start node
                    for (int j = 0; j < 8; ++j) {
                        const Point r{cur.x + detail::kNbrX[j], cur.y + detail::kNbrY[j]};
                        if (!is_skeleton_pixel(ske, r.x, r.y) || r == prev) continue;
                        const int rn = node_of[idx(r)];
                        if (rn >= 0) {
                            if (rn != n || interior.size() >= 2) {
                                if (term < 0) term = rn;
                            } else if (term_fallback < 0) {
                                term_fallback = rn;
                            }
                        } else if (edge_of[idx(r)] < 0) {
                            if (next_path.x < 0) next_path = r;
                        }
                    }
                    if (term >= 0) {
                        end_node = term;
                        break;
                    }
                    if (next_path.x >= 0) {
                        prev = cur;
                        cur = next_path;
                        continue;
                    }
                    if (term_fallback >= 0) {
                        end_node = term_fallback;  // one-pixel self-loop on a cluster
                        break;
                    }
                    throw ContractError("build_stroke_graph: dangling skeleton path");
                }

                StrokeEdge edge;
                edge.a = n;
                edge.b = end_node;
                edge.path.push_back(g.nodes[n].pos);
                edge.path.insert(edge.path.end(), interior.begin(), interior.end());
                edge.path.push_back(g.nodes[end_node].pos);
                g.edges.push_back(std::move(edge));
            }
        }
    }

    // node-free closed loops
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Point p{x, y};
            if (!is_skeleton_pixel(ske, x, y) || node_of[idx(p)] >= 0 || edge_of[idx(p)] >= 0)
                continue;
            const int eid = static_cast<int>(g.edges.size());
            StrokeEdge edge;
            Point prev{-1, -1};
            Point cur = p;
            while (true) {
                edge.path.push_back(cur);
                edge_of[idx(cur)] = eid;
                Point next{-1, -1};
                for (int k = 0; k < 8; ++k) {
                    const Point q{cur.x + detail::kNbrX[k], cur.y + detail::kNbrY[k]};
                    if (!is_skeleton_pixel(ske, q.x, q.y) || q == prev) continue;
                    if (edge_of[idx(q)] == eid && !(q == p)) continue;
                    next = q;
                    break;
                }
                if (next.x < 0 || next == p) break;
                prev = cur;
                cur = next;
            }
            g.edges.push_back(std::move(edge));
        }
    }

    g.node_edges.assign(g.nodes.size(), {});
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (g.edges[e].a >= 0) g.node_edges[g.edges[e].a].push_back(e);
        if (g.edges[e].b >= 0 && g.edges[e].b != g.edges[e].a)
            g.node_edges[g.edges[e].b].push_back(e);
    }
    return g;
}

/// True iff a single stroke edge is incident to both keypoints (reflexive
/// by convention). Both points must be nodes of the graph.
inline bool same_stroke(Point p, Point q, const StrokeGraph& g) {
    const int pi = g.find_node(p);
    const int qi = g.find_node(q);
    if (pi < 0 || qi < 0) throw ContractError("same_stroke: point is not a graph node");
    if (pi == qi) return true;
    for (const StrokeEdge& e : g.edges)
        if ((e.a == pi && e.b == qi) || (e.a == qi && e.b == pi)) return true;
    return false;
}

} // namespace glyphmark
