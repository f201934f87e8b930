#pragma once

// Embedding pipeline. The default backend is a deterministic, mask-confined
// stroke warp: the terminal portion of the handle point's stroke is erased
// inside the mask and redrawn as a round-capped segment ending at the
// target point. Masked region replacement then guarantees pixels outside
// the mask match the cover exactly. Every embed is verified by running the
// extractor on the result; failures surface as EmbedInfeasible rather than
// silent bit errors.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "glyphmark/image.hpp"
#include "glyphmark/keypoints.hpp"
#include "glyphmark/mdm.hpp"
#include "glyphmark/mpe.hpp"
#include "glyphmark/params.hpp"
#include "glyphmark/skeleton.hpp"
#include "glyphmark/tpe.hpp"

namespace glyphmark {

enum class EmbedStatus { ok, non_embeddable, infeasible };

struct EncodedGlyph {
    GrayImage image;
    TargetPlan plan;
    std::optional<Mask> mask;  // absent for no-op embeds
    std::string backend_id;
};

struct EmbedResult {
    EmbedStatus status = EmbedStatus::ok;
    std::string detail;
    std::optional<EncodedGlyph> glyph;

    bool ok() const { return status == EmbedStatus::ok; }
};

/// Shared front of both pipelines: binarize, despeckle, thin, prune,
/// detect, build the stroke graph.
struct GlyphAnalysis {
    BinaryGlyph bin;
    SkeletonImage ske;
    KeypointSet kp;
    StrokeGraph graph;
};

inline GlyphAnalysis analyze_glyph(const GrayImage& img, const ScaledParams& sp) {
    GlyphAnalysis a;
    a.bin = clean_binary(binarize(img, isodata_threshold(img)), sp.speckle);
    a.ske = prune_spurs(thin(a.bin), sp.spur_len);
    a.kp = detect(a.ske);
    a.graph = build_stroke_graph(a.ske, a.kp);
    return a;
}

inline int count_black_components(const BinaryGlyph& bin) {
    std::vector<ComponentBox> boxes;
    detail::label_components(bin, 0, 8, &boxes);
    return static_cast<int>(boxes.size());
}

/// Per-glyph extraction: re-run MPE on the (possibly attacked) image and
/// decide the bit by the strict threshold rule on the lambda-axis gap.
struct GlyphDecode {
    bool decodable = false;
    std::string reason;
    int bit = 0;
    int delta_prime = 0;
    int confidence = 0;  // |delta' - T|
    std::optional<HandleSelection> selection;
};

inline GlyphDecode decode_bit(const GrayImage& img, const Params& params,
                              GlyphAnalysis* analysis_out = nullptr) {
    const ScaledParams sp = params.scaled_for(img.height(), img.width());
    GlyphAnalysis a = analyze_glyph(img, sp);
    GlyphDecode d;
    if (a.kp.endpoints.empty()) {
        d.reason = "no endpoints";
    } else if (auto sel = evaluate(a.kp, a.graph, sp.tau)) {
        d.selection = *sel;
        d.delta_prime = std::min(std::abs(sel->handle.pos.x - sel->reference.pos.x),
                                 std::abs(sel->handle.pos.y - sel->reference.pos.y));
        d.bit = d.delta_prime > sp.t_embed ? 1 : 0;
        d.confidence = std::abs(d.delta_prime - sp.t_embed);
        d.decodable = true;
    } else {
        d.reason = "every endpoint scores zero";
    }
    if (analysis_out) *analysis_out = std::move(a);
    return d;
}

/// Document-side embeddability test. Extraction must be able to recompute
/// this from the image alone, so it uses only decode-visible state: MPE
/// success plus a valid stroke geometry at the recovered handle.
inline bool glyph_carries_bit(const GrayImage& img, const Params& params,
                              GlyphDecode* decode_out = nullptr) {
    const ScaledParams sp = params.scaled_for(img.height(), img.width());
    GlyphAnalysis a;
    GlyphDecode d = decode_bit(img, params, &a);
    bool carries = false;
    if (d.decodable)
        carries = geometry_of(d.selection->handle.pos, d.selection->reference.pos,
                              a.ske, sp.r_h)
                      .has_value();
    if (decode_out) *decode_out = std::move(d);
    return carries;
}

namespace detail {

inline double dist_to_segment(double px, double py, double ax, double ay, double bx,
                              double by) {
    const double abx = bx - ax, aby = by - ay;
    const double apx = px - ax, apy = py - ay;
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0 ? (apx * abx + apy * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = ax + t * abx, cy = ay + t * aby;
    return std::hypot(px - cx, py - cy);
}

inline double dist_to_segment(double px, double py, Point a, Point b) {
    return dist_to_segment(px, py, a.x, a.y, b.x, b.y);
}

/// Skeleton endpoint nearest to `near`, measured on a thinned crop around
/// the worked region. Returns false when the crop has no endpoints.
inline bool local_endpoint_near(const GrayImage& img, Point near, int margin, Point& found) {
    const int x0 = std::max(0, near.x - margin);
    const int y0 = std::max(0, near.y - margin);
    const int x1 = std::min(img.width() - 1, near.x + margin);
    const int y1 = std::min(img.height() - 1, near.y + margin);
    GrayImage crop(y1 - y0 + 1, x1 - x0 + 1, 255);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) crop.at(x - x0, y - y0) = img.at(x, y);
    const SkeletonImage ske = thin(crop);
    bool ok = false;
    double best = 0;
    for (int y = 0; y < ske.height(); ++y)
        for (int x = 0; x < ske.width(); ++x) {
            if (ske.at(x, y) != 0 || skeleton_degree(ske, x, y) != 1) continue;
            const double d = std::hypot(x + x0 - near.x, y + y0 - near.y);
            if (!ok || d < best) {
                ok = true;
                best = d;
                found = {x + x0, y + y0};
            }
        }
    return ok;
}

} // namespace detail

/// Erase the terminal portion of P_h's stroke inside the mask and redraw it
/// as a round-capped segment of the given thickness from the anchor (where
/// the erased tail attached) to P_t. All writes are confined to the mask.
inline std::optional<GrayImage> warp_stroke(const BinaryGlyph& cover, const StrokeGraph& g,
                                            Point ph, Point pt, const Mask& mask,
                                            double width, std::string* why = nullptr) {
    if (cover.height() != mask.height() || cover.width() != mask.width())
        throw ContractError("warp_stroke: cover/mask dimension mismatch");
    if (width <= 0) throw ContractError("warp_stroke: width must be > 0");
    const int node = g.find_node(ph);
    if (node < 0 || g.nodes[node].kind != KeypointKind::endpoint)
        throw ContractError("warp_stroke: P_h is not an endpoint node");
    if (mask.at(ph) != 255 || mask.at(pt) != 255)
        throw ContractError("warp_stroke: mask must contain P_h and P_t");

    if (g.node_edges[node].empty()) {
        if (why) *why = "handle endpoint has no incident stroke";
        return std::nullopt;
    }
    std::vector<Point> path = g.edges[g.node_edges[node][0]].path;
    if (!(path.front() == ph)) std::reverse(path.begin(), path.end());
    if (!(path.front() == ph)) {
        if (why) *why = "stroke path does not start at the handle";
        return std::nullopt;
    }

    std::size_t k = 0;
    while (k < path.size() && mask.at(path[k]) == 255) ++k;
    if (k == path.size()) --k;  // whole path inside: anchor at the far node
    const Point anchor = path[k];
    if (k == 0) {
        if (why) *why = "anchor not found inside mask";
        return std::nullopt;
    }

    GrayImage erased = cover;
    const double erase_r = width / 2.0 + 1.0;
    const double draw_r = std::max(1.0, width / 2.0 - 1.0);  // reproduces the measured width
    const int er = static_cast<int>(std::ceil(erase_r));

    // erase the tail; the anchor neighborhood is protected so the joint to
    // the remaining stroke stays intact
    for (std::size_t i = 0; i < k; ++i) {
        const Point q = path[i];
        for (int dy = -er; dy <= er; ++dy) {
            for (int dx = -er; dx <= er; ++dx) {
                const int x = q.x + dx, y = q.y + dy;
                if (!erased.in_bounds(x, y) || mask.at(x, y) != 255) continue;
                if (std::hypot(static_cast<double>(dx), static_cast<double>(dy)) > erase_r)
                    continue;
                if (std::hypot(static_cast<double>(x - anchor.x),
                               static_cast<double>(y - anchor.y)) <= erase_r)
                    continue;
                erased.at(x, y) = 255;
            }
        }
    }

    // Redraw a round-capped segment from the anchor. Thinning retracts a
    // capped tip by roughly the stroke width, so the cap is pushed past the
    // target until the re-thinned skeleton endpoint lands on P_t.
    const double seg_len = std::hypot(static_cast<double>(pt.x - anchor.x),
                                      static_cast<double>(pt.y - anchor.y));
    const double ux = seg_len > 0 ? (pt.x - anchor.x) / seg_len : 1.0;
    const double uy = seg_len > 0 ? (pt.y - anchor.y) / seg_len : 0.0;

    GrayImage best_out = erased;
    double best_err = 1e18;
    double ext = draw_r;
    const int measure_margin = static_cast<int>(std::ceil(3 * width)) + 8;
    for (int attempt = 0; attempt < 4; ++attempt) {
        GrayImage out = erased;
        const double ex = pt.x + ext * ux, ey = pt.y + ext * uy;
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min<double>(anchor.x, ex))) - er);
        const int x1 = std::min(cover.width() - 1,
                                static_cast<int>(std::ceil(std::max<double>(anchor.x, ex))) + er);
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min<double>(anchor.y, ey))) - er);
        const int y1 = std::min(cover.height() - 1,
                                static_cast<int>(std::ceil(std::max<double>(anchor.y, ey))) + er);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                if (mask.at(x, y) != 255) continue;
                if (detail::dist_to_segment(x, y, anchor.x, anchor.y, ex, ey) <= draw_r)
                    out.at(x, y) = 0;
            }

        Point tip;
        if (!detail::local_endpoint_near(out, pt, measure_margin, tip)) {
            if (why) *why = "warped stroke lost its endpoint";
            return std::nullopt;
        }
        const double err_along = (pt.x - tip.x) * ux + (pt.y - tip.y) * uy;
        const double err = std::hypot(static_cast<double>(pt.x - tip.x),
                                      static_cast<double>(pt.y - tip.y));
        if (err < best_err) {
            best_err = err;
            best_out = out;
        }
        if (std::abs(err_along) <= 0.75 && err <= 1.5) break;
        ext = std::clamp(ext + err_along, 0.0, 3.0 * width + 4.0);
    }
    return best_out;
}

/// Replace the mask region of the cover with (binarized) edited content;
/// everything outside the mask stays pixel-identical to the cover.
inline BinaryGlyph masked_region_replacement(const BinaryGlyph& cover,
                                             const GrayImage& edited, const Mask& mask) {
    if (cover.height() != edited.height() || cover.width() != edited.width())
        throw ContractError("masked_region_replacement: dimension mismatch");
    const BinaryGlyph patch = is_binary(edited) ? edited : binarize(edited);
    return composite_region(cover, patch, mask);
}

/// Pluggable encode backend: implementations may alter pixels only inside
/// the mask and must return an image of the cover's dimensions.
class EncodeBackend {
public:
    virtual ~EncodeBackend() = default;
    virtual std::string id() const = 0;
    virtual std::optional<GrayImage> encode(const BinaryGlyph& cover, Point ph, Point pt,
                                            const Mask& mask,
                                            std::string* why = nullptr) const = 0;
};

class WarpBackend final : public EncodeBackend {
public:
    explicit WarpBackend(Params params) : params_(std::move(params)) {}

    std::string id() const override { return "warp"; }

    std::optional<GrayImage> encode(const BinaryGlyph& cover, Point ph, Point pt,
                                    const Mask& mask,
                                    std::string* why = nullptr) const override {
        const ScaledParams sp = params_.scaled_for(cover.height(), cover.width());
        const GlyphAnalysis a = analyze_glyph(cover, sp);
        if (a.graph.find_node(ph) < 0) {
            if (why) *why = "handle is not a keypoint of the cover";
            return std::nullopt;
        }
        const Point wp = walk_from(a.ske, ph, 3);
        const double width = std::max(2.0, stroke_width_at(a.bin, wp));
        return warp_stroke(a.bin, a.graph, ph, pt, mask, width, why);
    }

private:
    Params params_;
};

/// Hooks for the ablation harness: replace handle selection and/or target
/// planning, optionally skipping post-embed verification.
struct EmbedHooks {
    std::function<std::optional<HandleSelection>(const GlyphAnalysis&, const ScaledParams&)>
        select;
    std::function<std::optional<TargetPlan>(const EmbedGeometry&, Point, Point, int,
                                            const ScaledParams&, int, int)>
        plan;
    bool verify = true;
};

namespace detail {

inline bool verify_embed(const EncodedGlyph& eg, const GlyphAnalysis& cover_a, int bit,
                         const Params& params, std::string* why) {
    const ScaledParams sp = params.scaled_for(eg.image.height(), eg.image.width());
    GlyphAnalysis ea;
    const GlyphDecode d = decode_bit(eg.image, params, &ea);
    if (!d.decodable) {
        if (why) *why = "verify: encoded glyph undecodable (" + d.reason + ")";
        return false;
    }
    if (d.bit != bit) {
        if (why) *why = "verify: encoded glyph decodes to the wrong bit";
        return false;
    }
    std::string gwhy;
    if (!geometry_of(d.selection->handle.pos, d.selection->reference.pos, ea.ske, sp.r_h,
                     &gwhy)) {
        if (why) *why = "verify: " + gwhy;
        return false;
    }
    // handle identity: the endpoint nearest the target must be the one MPE
    // re-selects, else extraction would desynchronize
    if (eg.plan.moved) {
        const Keypoint* nearest = nullptr;
        int best = 0;
        for (const Keypoint& e : ea.kp.endpoints) {
            const int dist = chebyshev(e.pos, eg.plan.target);
            if (!nearest || dist < best) {
                nearest = &e;
                best = dist;
            }
        }
        const int tol = std::max(3, sp.r_h);
        if (!nearest || best > tol || !(nearest->pos == d.selection->handle.pos)) {
            if (why) *why = "verify: moved endpoint lost its handle identity";
            return false;
        }
    }
    if (ea.kp.endpoints.size() != cover_a.kp.endpoints.size() ||
        ea.kp.junctions.size() != cover_a.kp.junctions.size()) {
        if (why) *why = "verify: keypoint count changed";
        return false;
    }
    if (count_black_components(ea.bin) != count_black_components(cover_a.bin)) {
        if (why) *why = "verify: component count changed";
        return false;
    }
    return true;
}

} // namespace detail

/// Full per-glyph embed: ADI (MPE + TPE + MDM), stroke warp, masked region
/// replacement, then decode verification. NonEmbeddable and infeasible
/// outcomes are distinguished results the document codec handles by
/// skipping the character.
inline EmbedResult embed_bit(const GrayImage& cover, int bit, const Params& params,
                             const EmbedHooks& hooks = {}) {
    if (bit != 0 && bit != 1) throw ContractError("embed_bit: bit must be 0 or 1");
    EmbedResult res;
    const ScaledParams sp = params.scaled_for(cover.height(), cover.width());
    const GlyphAnalysis a = analyze_glyph(cover, sp);

    if (count_value(a.bin, 0) == 0) {
        res.status = EmbedStatus::non_embeddable;
        res.detail = "non-embeddable: empty glyph";
        return res;
    }
    if (a.kp.endpoints.empty()) {
        res.status = EmbedStatus::non_embeddable;
        res.detail = "non-embeddable: no endpoints";
        return res;
    }

    const auto sel = hooks.select ? hooks.select(a, sp) : evaluate(a.kp, a.graph, sp.tau);
    if (!sel) {
        res.status = EmbedStatus::non_embeddable;
        res.detail = "non-embeddable: every endpoint scores zero";
        return res;
    }

    std::string why;
    const auto geo = geometry_of(sel->handle.pos, sel->reference.pos, a.ske, sp.r_h, &why);
    if (!geo) {
        res.status = EmbedStatus::non_embeddable;
        res.detail = "non-embeddable: " + why;
        return res;
    }

    const auto plan = hooks.plan
                          ? hooks.plan(*geo, sel->handle.pos, sel->reference.pos, bit, sp,
                                       cover.height(), cover.width())
                          : plan_target(*geo, sel->handle.pos, sel->reference.pos, bit,
                                        sp.t_embed, sp.margin, cover.height(),
                                        cover.width(), &why);
    if (!plan) {
        res.status = EmbedStatus::infeasible;
        res.detail = "embed-infeasible: " + why;
        return res;
    }

    if (!plan->moved) {
        res.glyph = EncodedGlyph{cover, *plan, std::nullopt, "none"};
        if (hooks.verify &&
            !detail::verify_embed(*res.glyph, a, bit, params, &why)) {
            res.status = EmbedStatus::infeasible;
            res.detail = "embed-infeasible: " + why;
            res.glyph.reset();
        }
        return res;
    }

    const Point wp = walk_from(a.ske, sel->handle.pos, 3);
    const double width = std::max(2.0, stroke_width_at(a.bin, wp));

    const MaskRect rect = compute_rect(a.bin, sel->handle.pos, plan->target, geo->axis);
    // the deterministic warp needs room inside the mask for its cap plus
    // the thinning-retraction compensation
    const int sigma_eff =
        std::max(sp.sigma, static_cast<int>(std::ceil(2.0 * width)) + 2);
    const Mask mask = draw_mask(rect, cover.height(), cover.width(), sigma_eff);

    const auto warped =
        warp_stroke(a.bin, a.graph, sel->handle.pos, plan->target, mask, width, &why);
    if (!warped) {
        res.status = EmbedStatus::infeasible;
        res.detail = "embed-infeasible: " + why;
        return res;
    }

    EncodedGlyph eg{composite_region(cover, *warped, mask), *plan, mask, params.backend};
    if (hooks.verify && !detail::verify_embed(eg, a, bit, params, &why)) {
        res.status = EmbedStatus::infeasible;
        res.detail = "embed-infeasible: " + why;
        return res;
    }
    res.glyph = std::move(eg);
    return res;
}

} // namespace glyphmark
