#pragma once

// Movement probability evaluator: deterministically score (endpoint,
// reference) pairs and pick the handle point P_h with its reference P_r.
// Scoring: every reference in the tau-box starts at 1, gains +1 when it
// lies on a different stroke than the endpoint, and among score-2
// references the one with the smallest y (then smallest x) gains a further
// +1. Endpoints with no reference score 0. Ties at every stage break by
// smallest y, then smallest x, so encoder and decoder always agree.

#include <optional>
#include <vector>

#include "glyphmark/keypoints.hpp"
#include "glyphmark/rng.hpp"
#include "glyphmark/skeleton.hpp"

namespace glyphmark {

struct ScoredTriple {
    Keypoint endpoint;
    std::optional<Keypoint> best_reference;
    int best_score = 0;
};

struct HandleSelection {
    Keypoint handle;
    Keypoint reference;
    int score = 0;
    std::vector<ScoredTriple> trace;
};

/// Scoring-rule switches for the ablation harness. The default is the full
/// rule set; the variants mirror the "w/o Rule 1/2/3" configurations
/// (junctions as handle candidates / no connectivity bonus / random choice
/// among tied candidates).
struct MpeVariant {
    bool rule1_endpoints_only = true;
    bool rule2_connectivity = true;
    bool rule3_min_y = true;
    Rng* rng = nullptr;  // required when rule3_min_y is false
};

/// All keypoints other than p (endpoints or junctions) inside the tau-box
/// around p, ordered by (y, x).
inline std::vector<Keypoint> reference_set(const Keypoint& p, const KeypointSet& kp,
                                           int tau) {
    if (tau < 0) throw ContractError("reference_set: tau must be >= 0");
    std::vector<Keypoint> out;
    auto consider = [&](const Keypoint& q) {
        if (q.pos == p.pos && q.kind == p.kind) return;
        if (std::abs(q.pos.x - p.pos.x) <= tau && std::abs(q.pos.y - p.pos.y) <= tau)
            out.push_back(q);
    };
    for (const Keypoint& q : kp.endpoints) consider(q);
    for (const Keypoint& q : kp.junctions) consider(q);
    std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
        return point_before(a.pos, b.pos);
    });
    return out;
}

/// Run the scoring over every handle candidate. Returns nullopt when the
/// glyph is non-embeddable (no endpoints, or every candidate scores 0).
inline std::optional<HandleSelection> evaluate(const KeypointSet& kp,
                                               const StrokeGraph& g, int tau,
                                               const MpeVariant& variant = {}) {
    std::vector<Keypoint> candidates = kp.endpoints;
    if (!variant.rule1_endpoints_only)
        candidates.insert(candidates.end(), kp.junctions.begin(), kp.junctions.end());

    std::vector<ScoredTriple> trace;
    trace.reserve(candidates.size());
    for (const Keypoint& cand : candidates) {
        if (g.find_node(cand.pos) < 0)
            throw ContractError("mpe::evaluate: keypoints inconsistent with stroke graph");
        ScoredTriple t{cand, std::nullopt, 0};
        const auto refs = reference_set(cand, kp, tau);
        if (!refs.empty()) {
            std::vector<int> score(refs.size(), 1);
            if (variant.rule2_connectivity) {
                for (std::size_t j = 0; j < refs.size(); ++j)
                    if (!same_stroke(cand.pos, refs[j].pos, g)) ++score[j];
            }
            // Min-y bonus among score-2 references. The ablation variant
            // without the connectivity rule applies it to the top scorers.
            const int bonus_level =
                variant.rule2_connectivity ? 2 : *std::max_element(score.begin(), score.end());
            int bonus_j = -1;
            for (std::size_t j = 0; j < refs.size(); ++j)
                if (score[j] == bonus_level && bonus_j < 0) bonus_j = static_cast<int>(j);
            if (bonus_j >= 0) ++score[bonus_j];  // refs sorted (y, x): first hit is min

            int best_j = 0;
            for (std::size_t j = 1; j < refs.size(); ++j)
                if (score[j] > score[best_j]) best_j = static_cast<int>(j);
            t.best_reference = refs[best_j];
            t.best_score = score[best_j];
        }
        trace.push_back(std::move(t));
    }

    int max_score = 0;
    for (const auto& t : trace) max_score = std::max(max_score, t.best_score);
    if (max_score == 0) return std::nullopt;

    std::vector<const ScoredTriple*> tied;
    for (const auto& t : trace)
        if (t.best_score == max_score) tied.push_back(&t);

    const ScoredTriple* winner = nullptr;
    if (variant.rule3_min_y || tied.size() == 1) {
        winner = tied.front();
        for (const ScoredTriple* t : tied)
            if (point_before(t->endpoint.pos, winner->endpoint.pos)) winner = t;
    } else {
        if (!variant.rng)
            throw ContractError("mpe::evaluate: rule-3 ablation requires an RNG");
        winner = tied[static_cast<std::size_t>(
            variant.rng->uniform_int(0, static_cast<int>(tied.size()) - 1))];
    }

    HandleSelection sel;
    sel.handle = winner->endpoint;
    sel.reference = *winner->best_reference;
    sel.score = winner->best_score;
    sel.trace = std::move(trace);
    return sel;
}

} // namespace glyphmark
