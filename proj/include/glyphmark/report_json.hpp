#pragma once

// JSON adapters for the machine-readable outputs: embed manifests,
// extraction reports, evaluation reports, and attack specs.

#include <json.hpp>

#include "glyphmark/channel.hpp"
#include "glyphmark/codec.hpp"
#include "glyphmark/harness.hpp"

namespace glyphmark {

using nlohmann::json;

inline void to_json(json& j, const CharBox& b) {
    j = json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}
inline void from_json(const json& j, CharBox& b) {
    j.at("x").get_to(b.x);
    j.at("y").get_to(b.y);
    j.at("w").get_to(b.w);
    j.at("h").get_to(b.h);
}

inline void to_json(json& j, const AttackSpec& a) {
    j = json{{"kind", attack_kind_name(a.kind)}, {"params", a.params}, {"seed", a.seed}};
}

inline void to_json(json& j, const CharRecord& r) {
    j = json{{"box", r.box},     {"carries", r.carries}, {"position", r.position},
             {"bit", r.bit},     {"status", r.status},   {"detail", r.detail}};
}
inline void from_json(const json& j, CharRecord& r) {
    j.at("box").get_to(r.box);
    j.at("carries").get_to(r.carries);
    j.at("position").get_to(r.position);
    j.at("bit").get_to(r.bit);
    j.at("status").get_to(r.status);
    j.at("detail").get_to(r.detail);
}

inline void to_json(json& j, const EmbedManifest& m) {
    j = json{{"schema", m.schema},
             {"message_bits", m.message_bits},
             {"capacity", m.capacity},
             {"repetitions", m.repetitions},
             {"full_coverage", m.full_coverage},
             {"chars", m.chars}};
}
inline void from_json(const json& j, EmbedManifest& m) {
    j.at("schema").get_to(m.schema);
    j.at("message_bits").get_to(m.message_bits);
    j.at("capacity").get_to(m.capacity);
    j.at("repetitions").get_to(m.repetitions);
    j.at("full_coverage").get_to(m.full_coverage);
    j.at("chars").get_to(m.chars);
}

inline void to_json(json& j, const CharReadout& r) {
    j = json{{"box", r.box},
             {"carries", r.carries},
             {"raw_index", r.raw_index},
             {"delta_prime", r.delta_prime},
             {"bit", r.bit},
             {"confidence", r.confidence},
             {"t_used", r.t_used}};
}
inline void from_json(const json& j, CharReadout& r) {
    j.at("box").get_to(r.box);
    j.at("carries").get_to(r.carries);
    j.at("raw_index").get_to(r.raw_index);
    j.at("delta_prime").get_to(r.delta_prime);
    j.at("bit").get_to(r.bit);
    j.at("confidence").get_to(r.confidence);
    j.at("t_used").get_to(r.t_used);
}

inline void to_json(json& j, const ExtractionReport& r) {
    j = json{{"schema", r.schema},
             {"diagnostic", r.diagnostic},
             {"t_embed_reference", r.t_embed_reference},
             {"chars", r.chars},
             {"raw_bits", r.raw_bits},
             {"message_bits", r.message_bits},
             {"vote_margins", r.vote_margins},
             {"repetitions_seen", r.repetitions_seen}};
}
inline void from_json(const json& j, ExtractionReport& r) {
    j.at("schema").get_to(r.schema);
    j.at("diagnostic").get_to(r.diagnostic);
    j.at("t_embed_reference").get_to(r.t_embed_reference);
    j.at("chars").get_to(r.chars);
    j.at("raw_bits").get_to(r.raw_bits);
    j.at("message_bits").get_to(r.message_bits);
    j.at("vote_margins").get_to(r.vote_margins);
    j.at("repetitions_seen").get_to(r.repetitions_seen);
}

inline void to_json(json& j, const AttackTally& t) {
    j = json{{"attack", t.label}, {"total", t.total}, {"correct", t.correct}, {"acc", t.acc()}};
}

inline void to_json(json& j, const EvalItem& i) {
    j = json{{"id", i.id},         {"bit", i.bit},   {"status", i.status},
             {"detail", i.detail}, {"moved", i.moved}, {"psnr", i.psnr},
             {"ssim", i.ssim},     {"correct", i.correct}};
}

inline void to_json(json& j, const EvalReport& r) {
    j = json{{"schema", r.schema},
             {"ablation", r.ablation},
             {"embedded", r.embedded},
             {"non_embeddable", r.non_embeddable},
             {"infeasible", r.infeasible},
             {"psnr_mean", r.psnr_mean},
             {"ssim_mean", r.ssim_mean},
             {"attacks", r.attacks},
             {"items", r.items}};
}

} // namespace glyphmark
