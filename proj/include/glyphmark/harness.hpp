#pragma once

// Robustness / imperceptibility evaluation over a glyph corpus: embed both
// bits per item, apply each attack, extract, and tally accuracy alongside
// PSNR/SSIM. Ablation modes replace handle selection and/or target
// planning with seeded random choices (extraction always runs the full
// pipeline).

#include <map>
#include <string>
#include <vector>

#include "glyphmark/channel.hpp"
#include "glyphmark/codec.hpp"
#include "glyphmark/encoder.hpp"
#include "glyphmark/quality.hpp"

namespace glyphmark {

struct EvalOptions {
    std::vector<AttackSpec> attacks;
    std::string ablation = "full";  // full | mpe_only | random
    std::uint64_t seed = 0;
    Codebook* codebook = nullptr;
};

struct EvalItem {
    std::string id;
    int bit = 0;
    std::string status;  // embedded | non_embeddable | infeasible
    std::string detail;
    bool moved = false;
    double psnr = 0;
    double ssim = 0;
    std::map<std::string, bool> correct;  // per attack label
};

struct AttackTally {
    std::string label;
    int total = 0;
    int correct = 0;

    double acc() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

struct EvalReport {
    std::string schema = "glyphmark/eval-v1";
    std::string ablation = "full";
    int embedded = 0;
    int non_embeddable = 0;
    int infeasible = 0;
    double psnr_mean = 0;
    double ssim_mean = 0;
    std::vector<AttackTally> attacks;
    std::vector<EvalItem> items;

    const AttackTally* tally(const std::string& label) const {
        for (const auto& t : attacks)
            if (t.label == label) return &t;
        return nullptr;
    }
};

/// Seeded random replacements for MPE / TPE (Table-6-style ablations).
/// "random" replaces both; "mpe_only" keeps handle selection but moves in
/// a random direction, which breaks the identity-preserving geometry.
inline EmbedHooks make_ablation_hooks(const std::string& mode, Rng* rng) {
    EmbedHooks hooks;
    if (mode == "full") return hooks;
    hooks.verify = false;

    auto random_plan = [rng](const EmbedGeometry& geo, Point ph, Point /*pr*/, int bit,
                             const ScaledParams& sp, int height,
                             int width) -> std::optional<TargetPlan> {
        TargetPlan p;
        p.bit = bit;
        p.geometry = geo;
        p.moved = true;
        const double theta = rng->uniform(0.0, 6.283185307179586);
        const double d = rng->uniform(2.0, 2.0 * sp.t_embed);
        p.target = {static_cast<int>(std::lround(ph.x + d * std::cos(theta))),
                    static_cast<int>(std::lround(ph.y + d * std::sin(theta)))};
        p.target.x = std::clamp(p.target.x, 0, width - 1);
        p.target.y = std::clamp(p.target.y, 0, height - 1);
        if (p.target == ph) p.target.x = std::clamp(ph.x + 2, 0, width - 1);
        p.distance = d;
        return p;
    };

    if (mode == "random") {
        hooks.select = [rng](const GlyphAnalysis& a,
                             const ScaledParams&) -> std::optional<HandleSelection> {
            if (a.kp.endpoints.empty()) return std::nullopt;
            HandleSelection s;
            s.handle = a.kp.endpoints[static_cast<std::size_t>(
                rng->uniform_int(0, static_cast<int>(a.kp.endpoints.size()) - 1))];
            std::vector<Keypoint> others;
            for (const Keypoint& e : a.kp.endpoints)
                if (!(e.pos == s.handle.pos)) others.push_back(e);
            others.insert(others.end(), a.kp.junctions.begin(), a.kp.junctions.end());
            if (others.empty()) return std::nullopt;
            s.reference = others[static_cast<std::size_t>(
                rng->uniform_int(0, static_cast<int>(others.size()) - 1))];
            s.score = 1;
            return s;
        };
        hooks.plan = random_plan;
        return hooks;
    }

    if (mode == "mpe_only") {
        hooks.plan = [rng](const EmbedGeometry& geo, Point ph, Point pr, int bit,
                           const ScaledParams& sp, int height,
                           int width) -> std::optional<TargetPlan> {
            TargetPlan p;
            p.bit = bit;
            p.geometry = geo;
            const bool needs = bit == 0 ? geo.delta > sp.t_embed : geo.delta <= sp.t_embed;
            if (!needs) {
                p.moved = false;
                p.target = ph;
                return p;
            }
            const int target_gap =
                bit == 0 ? std::max(0, sp.t_embed - sp.margin) : sp.t_embed + sp.margin;
            const double s0 = geo.axis == Axis::X ? static_cast<double>(ph.x - pr.x)
                                                  : static_cast<double>(ph.y - pr.y);
            for (int attempt = 0; attempt < 16; ++attempt) {
                const double theta = rng->uniform(0.0, 6.283185307179586);
                double ux = std::cos(theta), uy = std::sin(theta);
                const double dl = geo.axis == Axis::X ? ux : uy;
                if (std::abs(dl) < kMinAxisComponent) continue;
                const double d1 = (target_gap - s0) / dl;
                const double d2 = (-target_gap - s0) / dl;
                double d = std::abs(d1) <= std::abs(d2) ? d1 : d2;
                if (d < 0) {
                    ux = -ux;
                    uy = -uy;
                    d = -d;
                }
                p.target = {static_cast<int>(std::lround(ph.x + d * ux)),
                            static_cast<int>(std::lround(ph.y + d * uy))};
                p.target.x = std::clamp(p.target.x, 0, width - 1);
                p.target.y = std::clamp(p.target.y, 0, height - 1);
                if (p.target == ph) continue;
                p.moved = true;
                p.distance = d;
                return p;
            }
            return std::nullopt;
        };
        return hooks;
    }

    throw ConfigError("evaluation: unknown ablation mode: " + mode);
}

inline EvalReport run_evaluation(const std::vector<std::pair<std::string, GrayImage>>& corpus,
                                 const EvalOptions& opts, const Params& params) {
    EvalReport rep;
    rep.ablation = opts.ablation;
    for (const AttackSpec& a : opts.attacks) rep.attacks.push_back({a.to_string(), 0, 0});

    Codebook local;
    Codebook* book = opts.codebook ? opts.codebook : &local;
    Rng ablation_rng(mix_seed(opts.seed, 0xab1aULL));
    const bool full = opts.ablation == "full";
    EmbedHooks hooks = make_ablation_hooks(opts.ablation, &ablation_rng);

    double psnr_sum = 0, ssim_sum = 0;
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& [id, cover] = corpus[idx];
        for (int bit : {0, 1}) {
            EvalItem item;
            item.id = id;
            item.bit = bit;

            EmbedResult r;
            if (full) {
                const auto& v = book->get_or_embed(cover, bit, params);
                r.status = v.status;
                r.detail = v.detail;
                if (v.glyph) r.glyph = *v.glyph;
            } else {
                r = embed_bit(cover, bit, params, hooks);
            }

            if (r.status == EmbedStatus::non_embeddable) {
                item.status = "non_embeddable";
                item.detail = r.detail;
                ++rep.non_embeddable;
                rep.items.push_back(std::move(item));
                continue;
            }
            if (r.status == EmbedStatus::infeasible) {
                item.status = "infeasible";
                item.detail = r.detail;
                ++rep.infeasible;
                rep.items.push_back(std::move(item));
                continue;
            }

            item.status = "embedded";
            item.moved = r.glyph->plan.moved;
            item.psnr = psnr(cover, r.glyph->image);
            item.ssim = ssim(cover, r.glyph->image);
            psnr_sum += item.psnr;
            ssim_sum += item.ssim;
            ++rep.embedded;

            for (std::size_t ai = 0; ai < opts.attacks.size(); ++ai) {
                AttackSpec spec = opts.attacks[ai];
                spec.seed = mix_seed(mix_seed(opts.seed, ai), idx * 2 + static_cast<std::size_t>(bit));
                const GrayImage attacked = apply(r.glyph->image, spec);
                const GlyphDecode d = decode_bit(attacked, params);
                const bool ok = d.decodable && d.bit == bit;
                item.correct[rep.attacks[ai].label] = ok;
                ++rep.attacks[ai].total;
                if (ok) ++rep.attacks[ai].correct;
            }
            rep.items.push_back(std::move(item));
        }
    }
    if (rep.embedded > 0) {
        rep.psnr_mean = psnr_sum / rep.embedded;
        rep.ssim_mean = ssim_sum / rep.embedded;
    }
    return rep;
}

} // namespace glyphmark
