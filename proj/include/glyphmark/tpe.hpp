#pragma once

// Target point estimation: given the handle/reference pair, the stroke
// direction and the bit to embed, compute where the handle point moves.
// The gap between P_h and P_r is measured along the lambda-axis (the axis
// of the smaller coordinate difference); embedding drives that gap to
// max(0, T - margin) for bit 0 or T + margin for bit 1. When no movement
// is needed the plan is a no-op and the glyph stays untouched.

#include <cmath>
#include <optional>
#include <string>

#include "glyphmark/image.hpp"
#include "glyphmark/skeleton.hpp"

namespace glyphmark {

enum class Axis { X, Y };

struct EmbedGeometry {
    int dx = 0;
    int dy = 0;
    Axis axis = Axis::X;
    int delta = 0;       // min(dx, dy), the lambda-axis gap
    double vx = 0.0;     // unit stroke direction, from P_k toward P_h
    double vy = 0.0;
    int hx = 0;          // handle -> reference
    int hy = 0;
    double theta = 0.0;  // angle of (vx, -vy) from +x, in [0, 2*pi)
    Point pk;
};

struct TargetPlan {
    int bit = 0;
    bool moved = false;
    Point target;            // equals P_h when moved is false
    double distance = 0.0;   // movement magnitude actually applied
    int degenerate_branch = 0;  // 0 none, 1 elongated, 2 shortened
    EmbedGeometry geometry;
};

// Movements whose lambda component of the unit direction falls below this
// cannot reach the required gap without huge displacement.
inline constexpr double kMinAxisComponent = 0.05;

/// Stroke geometry at the handle point. Returns nullopt (with a reason)
/// when the skeleton walk degenerates, which marks the glyph
/// non-embeddable.
inline std::optional<EmbedGeometry> geometry_of(Point ph, Point pr,
                                                const SkeletonImage& ske, int r_h,
                                                std::string* why = nullptr) {
    if (r_h < 1) throw ContractError("geometry_of: r_h must be >= 1");
    EmbedGeometry geo;
    geo.pk = walk_from(ske, ph, r_h);
    if (geo.pk == ph) {
        if (why) *why = "degenerate geometry: zero-length stroke walk";
        return std::nullopt;
    }
    const double rvx = static_cast<double>(ph.x - geo.pk.x);
    const double rvy = static_cast<double>(ph.y - geo.pk.y);
    const double norm = std::sqrt(rvx * rvx + rvy * rvy);
    geo.vx = rvx / norm;
    geo.vy = rvy / norm;
    geo.hx = pr.x - ph.x;
    geo.hy = pr.y - ph.y;
    geo.dx = std::abs(geo.hx);
    geo.dy = std::abs(geo.hy);
    geo.axis = geo.dx <= geo.dy ? Axis::X : Axis::Y;
    geo.delta = std::min(geo.dx, geo.dy);
    // image y grows downward; flip it so theta follows the usual math
    // convention with "up" positive
    geo.theta = std::atan2(-geo.vy, geo.vx);
    if (geo.theta < 0) geo.theta += 6.283185307179586476925286766559;
    return geo;
}

/// Compute the target point for one bit. Returns nullopt when the movement
/// cannot achieve the required gap (embed-infeasible for this glyph).
inline std::optional<TargetPlan> plan_target(const EmbedGeometry& geo, Point ph, Point pr,
                                             int bit, int t_embed, int margin,
                                             int height, int width,
                                             std::string* why = nullptr) {
    if (bit != 0 && bit != 1) throw ContractError("plan_target: bit must be 0 or 1");
    if (!(t_embed > margin && margin >= 1))
        throw ContractError("plan_target: need t_embed > margin >= 1");

    TargetPlan plan;
    plan.bit = bit;
    plan.geometry = geo;

    const bool needs_move = bit == 0 ? geo.delta > t_embed : geo.delta <= t_embed;
    if (!needs_move) {
        plan.moved = false;
        plan.target = ph;
        return plan;
    }

    const int target_gap = bit == 0 ? std::max(0, t_embed - margin) : t_embed + margin;
    auto sgn = [](int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };

    double mx = 0, my = 0;  // movement vector
    double dist = 0;
    if (geo.delta == 0) {
        // bit 0 with delta 0 never needs a move, so this is the bit-1
        // degenerate case: move along the stroke itself.
        double ux = geo.vx, uy = geo.vy;
        if (geo.axis == Axis::Y) {
            const bool elongate = geo.theta < 3.14159265358979323846;
            if (!elongate) {
                ux = -ux;
                uy = -uy;
            }
            plan.degenerate_branch = elongate ? 1 : 2;
        } else {
            plan.degenerate_branch = 1;  // stroke elongation direction
        }
        const double v_axis = geo.axis == Axis::X ? std::abs(ux) : std::abs(uy);
        if (v_axis < kMinAxisComponent) {
            if (why) *why = "stroke nearly perpendicular to the lambda-axis";
            return std::nullopt;
        }
        dist = target_gap / v_axis;
        mx = dist * ux;
        my = dist * uy;
    } else {
        const double v_axis = geo.axis == Axis::X ? std::abs(geo.vx) : std::abs(geo.vy);
        if (v_axis < kMinAxisComponent) {
            if (why) *why = "stroke nearly perpendicular to the lambda-axis";
            return std::nullopt;
        }
        const int gap_change = bit == 0 ? geo.delta - target_gap : target_gap - geo.delta;
        dist = gap_change / v_axis;
        // per-axis direction: toward the reference for bit 0, away for bit 1
        const int flip = bit == 0 ? 1 : -1;
        mx = dist * std::abs(geo.vx) * sgn(geo.hx) * flip;
        my = dist * std::abs(geo.vy) * sgn(geo.hy) * flip;
    }

    Point pt{static_cast<int>(std::lround(ph.x + mx)),
             static_cast<int>(std::lround(ph.y + my))};
    pt.x = std::clamp(pt.x, 0, width - 1);
    pt.y = std::clamp(pt.y, 0, height - 1);

    if (pt == ph) {
        if (why) *why = "movement rounds to a no-op";
        return std::nullopt;
    }

    const int gap = geo.axis == Axis::X ? std::abs(pt.x - pr.x) : std::abs(pt.y - pr.y);
    const bool decodes = bit == 0 ? gap <= t_embed : gap > t_embed;
    const bool in_band = bit == 0 ? gap <= t_embed - margin + 1 : gap >= t_embed + margin - 1;
    if (!decodes || !in_band) {
        if (why) *why = "target clipped outside the decodable gap band";
        return std::nullopt;
    }

    plan.moved = true;
    plan.target = pt;
    plan.distance = dist;
    return plan;
}

} // namespace glyphmark
