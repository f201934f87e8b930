#pragma once

// Document-level embedding and extraction. Characters come from
// connected-component segmentation (dots merge with their stems, boxes
// order by row band then x). Each character is lifted into a square white
// frame so the auto-scaled parameters see the same glyph-to-canvas regime
// as standalone fixtures; whitened message bits are assigned cyclically to
// bit-carrying characters in reading order, and extraction recomputes the
// carrier test from the image alone so the two sides stay index-aligned.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "glyphmark/channel.hpp"
#include "glyphmark/encoder.hpp"
#include "glyphmark/image.hpp"
#include "glyphmark/params.hpp"
#include "glyphmark/prf.hpp"

namespace glyphmark {

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CharBox {
    int x = 0, y = 0, w = 0, h = 0;
    bool embeddable = false;

    friend bool operator==(const CharBox& a, const CharBox& b) {
        return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
    }
};

struct DocumentLayout {
    std::vector<CharBox> boxes;  // reading order: row bands, then ascending x
    int median_height = 0;
};

/// Group 8-connected components into characters and order them for
/// reading. Components whose horizontal spans overlap by at least half of
/// the narrower one and whose vertical gap is small merge (the dot of an
/// "i" joins its stem).
inline DocumentLayout segment(const BinaryGlyph& page) {
    DocumentLayout layout;
    std::vector<ComponentBox> comps;
    detail::label_components(page, 0, 8, &comps);
    std::erase_if(comps, [](const ComponentBox& c) { return c.area < 8; });
    if (comps.empty()) return layout;

    std::vector<int> heights;
    for (const auto& c : comps) heights.push_back(c.h);
    std::sort(heights.begin(), heights.end());
    const int med_h = heights[heights.size() / 2];

    // union-find merge of dot-like satellites
    std::vector<std::size_t> parent(comps.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (std::size_t j = i + 1; j < comps.size(); ++j) {
            const auto& a = comps[i];
            const auto& b = comps[j];
            const int ov = std::min(a.right(), b.right()) - std::max(a.x, b.x) + 1;
            if (ov <= 0) continue;
            if (2 * ov < std::min(a.w, b.w)) continue;
            int vgap = 0;
            if (a.bottom() < b.y) vgap = b.y - a.bottom() - 1;
            else if (b.bottom() < a.y) vgap = a.y - b.bottom() - 1;
            if (2 * vgap <= med_h) parent[find(i)] = find(j);
        }
    }

    std::unordered_map<std::size_t, ComponentBox> merged;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::size_t r = find(i);
        auto it = merged.find(r);
        if (it == merged.end()) {
            merged.emplace(r, comps[i]);
        } else {
            ComponentBox& m = it->second;
            const int x1 = std::max(m.right(), comps[i].right());
            const int y1 = std::max(m.bottom(), comps[i].bottom());
            m.x = std::min(m.x, comps[i].x);
            m.y = std::min(m.y, comps[i].y);
            m.w = x1 - m.x + 1;
            m.h = y1 - m.y + 1;
            m.area += comps[i].area;
        }
    }

    std::vector<ComponentBox> boxes;
    for (const auto& [_, b] : merged) boxes.push_back(b);
    std::vector<int> mh;
    for (const auto& b : boxes) mh.push_back(b.h);
    std::sort(mh.begin(), mh.end());
    const int band_h = mh[mh.size() / 2];
    layout.median_height = band_h;

    // row bands: split where consecutive y-centers jump
    std::sort(boxes.begin(), boxes.end(), [](const ComponentBox& a, const ComponentBox& b) {
        const int ac = 2 * a.y + a.h, bc = 2 * b.y + b.h;
        return ac != bc ? ac < bc : a.x < b.x;
    });
    std::vector<std::vector<ComponentBox>> bands;
    for (const auto& b : boxes) {
        const double yc = b.y + b.h / 2.0;
        if (bands.empty()) {
            bands.push_back({b});
            continue;
        }
        const auto& last = bands.back().back();
        const double lc = last.y + last.h / 2.0;
        if (yc - lc >= 0.6 * band_h) bands.push_back({b});
        else bands.back().push_back(b);
    }
    for (auto& band : bands) {
        std::sort(band.begin(), band.end(), [](const ComponentBox& a, const ComponentBox& b) {
            return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        for (const auto& b : band) layout.boxes.push_back({b.x, b.y, b.w, b.h, false});
    }
    return layout;
}

/// A character lifted into a square white frame, glyph centered at roughly
/// 29% of the frame side, matching the fixture regime the auto-scaled
/// parameters were calibrated for.
struct CharFrame {
    GrayImage image;
    int off_x = 0;  // frame coords = page coords - box origin + offset
    int off_y = 0;
};

inline CharFrame frame_char(const GrayImage& page, const CharBox& box) {
    const int side = std::max(64, static_cast<int>(std::lround(3.5 * std::max(box.w, box.h))));
    CharFrame f{GrayImage(side, side, 255), (side - box.w) / 2, (side - box.h) / 2};
    for (int y = 0; y < box.h; ++y)
        for (int x = 0; x < box.w; ++x) {
            const int px = box.x + x, py = box.y + y;
            if (page.in_bounds(px, py)) f.image.at(f.off_x + x, f.off_y + y) = page.at(px, py);
        }
    return f;
}

/// Cache of encoded glyph variants keyed by cover content. Lookups compare
/// full pixel data, so hash collisions cannot substitute a wrong glyph.
class Codebook {
public:
    struct BitVariant {
        EmbedStatus status = EmbedStatus::ok;
        std::string detail;
        std::optional<EncodedGlyph> glyph;
    };

    struct Entry {
        BinaryGlyph cover;
        std::optional<BitVariant> bit[2];
    };

    const BitVariant& get_or_embed(const BinaryGlyph& cover, int bit, const Params& params) {
        Entry& e = locate(cover);
        if (!e.bit[bit]) {
            BitVariant v;
            EmbedResult r = embed_bit(cover, bit, params);
            v.status = r.status;
            v.detail = r.detail;
            if (r.ok()) v.glyph = std::move(*r.glyph);
            e.bit[bit] = std::move(v);
        }
        return *e.bit[bit];
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }

    Entry& locate(const BinaryGlyph& cover) {
        const std::uint64_t h = content_hash(cover);
        auto& bucket = index_[h];
        for (std::size_t id : bucket)
            if (entries_[id].cover == cover) return entries_[id];
        bucket.push_back(entries_.size());
        entries_.push_back(Entry{cover, {}});
        return entries_.back();
    }

    static std::uint64_t content_hash(const GrayImage& img) {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 1099511628211ULL;
            }
        };
        mix(static_cast<std::uint64_t>(img.height()));
        mix(static_cast<std::uint64_t>(img.width()));
        for (std::uint8_t p : img.pixels()) {
            h ^= p;
            h *= 1099511628211ULL;
        }
        return h;
    }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

struct CharRecord {
    CharBox box;
    bool carries = false;
    int position = -1;    // message position (bit index % L), -1 when skipped
    int bit = -1;         // whitened bit assigned
    std::string status;   // embedded | noop | skipped | infeasible | reverted
    std::string detail;
};

struct EmbedManifest {
    std::string schema = "glyphmark/manifest-v1";
    int message_bits = 0;
    int capacity = 0;
    int repetitions = 0;
    bool full_coverage = true;
    std::vector<CharRecord> chars;
};

struct DocumentEmbedResult {
    GrayImage page;
    EmbedManifest manifest;
};

namespace detail {

struct PixelDiff {
    Point at;
    std::uint8_t before = 0;
    std::uint8_t after = 0;
};

/// Changed pixels of an encoded frame, mapped into page coordinates.
inline std::vector<PixelDiff> frame_diff(const GrayImage& cover_frame,
                                         const GrayImage& encoded_frame,
                                         const CharFrame& f, const CharBox& box,
                                         const GrayImage& page) {
    std::vector<PixelDiff> diffs;
    for (int y = 0; y < encoded_frame.height(); ++y)
        for (int x = 0; x < encoded_frame.width(); ++x) {
            if (cover_frame.at(x, y) == encoded_frame.at(x, y)) continue;
            const Point p{box.x - f.off_x + x, box.y - f.off_y + y};
            if (!page.in_bounds(p)) continue;
            diffs.push_back({p, page.at(p), encoded_frame.at(x, y)});
        }
    return diffs;
}

} // namespace detail

/// Raw per-character readout used by both extraction and the embed-side
/// consistency pass.
struct CharReadout {
    CharBox box;
    bool carries = false;
    int raw_index = -1;
    int delta_prime = 0;
    int bit = 0;
    int confidence = 0;
    int t_used = 0;  // scaled threshold at this character's frame size
};

inline std::vector<CharReadout> read_characters(const GrayImage& page, const Params& params) {
    const BinaryGlyph pbin = binarize(page);
    const DocumentLayout layout = segment(pbin);
    std::vector<CharReadout> out;
    int raw = 0;
    for (const CharBox& box : layout.boxes) {
        CharReadout r;
        r.box = box;
        const CharFrame f = frame_char(pbin, box);
        GlyphDecode d;
        r.carries = glyph_carries_bit(f.image, params, &d);
        if (r.carries) {
            r.raw_index = raw++;
            r.delta_prime = d.delta_prime;
            r.bit = d.bit;
            r.confidence = d.confidence;
            r.t_used = params.scaled_for(f.image.height(), f.image.width()).t_embed;
        }
        out.push_back(r);
    }
    return out;
}

/// Embed a whitened message across the page's bit-carrying characters,
/// cyclically in reading order. Characters the encoder cannot modify still
/// consume their position (extraction cannot tell them apart from carriers)
/// and are recorded in the manifest; the repetition vote absorbs them.
inline DocumentEmbedResult embed_document(const GrayImage& page, const Message& msg,
                                          const SecretKey& key, const Params& params,
                                          Codebook* codebook = nullptr) {
    if (msg.empty()) throw ContractError("embed_document: empty message");
    const BinaryGlyph pbin = binarize(page);
    const DocumentLayout layout = segment(pbin);

    Codebook local;
    Codebook& book = codebook ? *codebook : local;

    DocumentEmbedResult result{page, {}};
    EmbedManifest& man = result.manifest;
    man.message_bits = static_cast<int>(msg.size());

    const Message wmsg = whiten(msg, key);
    const int L = static_cast<int>(wmsg.size());

    struct Pending {
        std::size_t record;
        std::vector<detail::PixelDiff> diffs;
    };
    std::vector<Pending> pasted;

    int j = 0;
    for (const CharBox& box : layout.boxes) {
        CharRecord rec;
        rec.box = box;
        const CharFrame f = frame_char(pbin, box);
        rec.carries = glyph_carries_bit(f.image, params);
        if (!rec.carries) {
            rec.status = "skipped";
            rec.detail = "not a bit carrier";
            man.chars.push_back(rec);
            continue;
        }
        rec.position = j % L;
        rec.bit = wmsg.bits[rec.position];
        ++j;

        const auto& variant = book.get_or_embed(f.image, rec.bit, params);
        if (variant.status != EmbedStatus::ok) {
            rec.status = "infeasible";
            rec.detail = variant.detail;
            man.chars.push_back(rec);
            continue;
        }
        if (!variant.glyph->plan.moved) {
            rec.status = "noop";
            man.chars.push_back(rec);
            continue;
        }

        auto diffs = detail::frame_diff(f.image, variant.glyph->image, f, box, result.page);
        for (const auto& d : diffs) result.page.at(d.at) = d.after;
        rec.status = "embedded";
        man.chars.push_back(rec);
        pasted.push_back({man.chars.size() - 1, std::move(diffs)});
    }

    man.capacity = j;
    if (j == 0) throw CapacityError("embed_document: no bit-carrying characters on the page");
    man.repetitions = j / L;
    man.full_coverage = j >= L;

    // Consistency pass: the modified page must segment identically and every
    // carrier must read back its assigned bit; characters that fail are
    // reverted and left to the repetition vote.
    for (int round = 0; round < 2; ++round) {
        auto readout = read_characters(result.page, params);
        bool aligned = readout.size() == man.chars.size();
        if (aligned)
            for (std::size_t i = 0; i < readout.size(); ++i)
                if (readout[i].carries != man.chars[i].carries) aligned = false;

        std::vector<std::size_t> bad;
        if (!aligned) {
            for (const auto& p : pasted) bad.push_back(p.record);  // give up: revert all
        } else {
            for (std::size_t i = 0; i < readout.size(); ++i) {
                if (!readout[i].carries || man.chars[i].status != "embedded") continue;
                if (readout[i].bit != man.chars[i].bit) bad.push_back(i);
            }
        }
        if (bad.empty()) break;
        for (std::size_t rec_id : bad) {
            auto it = std::find_if(pasted.begin(), pasted.end(),
                                   [rec_id](const Pending& p) { return p.record == rec_id; });
            if (it == pasted.end()) continue;
            for (const auto& d : it->diffs) result.page.at(d.at) = d.before;
            man.chars[rec_id].status = "reverted";
            man.chars[rec_id].detail = "failed page-level readback";
            pasted.erase(it);
        }
    }
    return result;
}

struct ExtractionReport {
    std::string schema = "glyphmark/report-v1";
    std::string diagnostic;
    int t_embed_reference = 0;
    std::vector<CharReadout> chars;
    std::vector<int> raw_bits;
    std::vector<int> message_bits;  // majority-voted, unwhitened
    std::vector<int> vote_margins;
    int repetitions_seen = 0;
};

struct VoteResult {
    std::vector<int> bits;
    std::vector<int> margins;
};

/// Per-position majority over the cyclically assigned raw stream. Ties
/// break toward the side with the higher summed confidence, then 0.
inline VoteResult majority_vote(const std::vector<int>& raw, const std::vector<int>& conf,
                                int positions) {
    if (positions < 1) throw ContractError("majority_vote: positions must be >= 1");
    if (raw.size() != conf.size()) throw ContractError("majority_vote: length mismatch");
    VoteResult v;
    v.bits.assign(static_cast<std::size_t>(positions), 0);
    v.margins.assign(static_cast<std::size_t>(positions), 0);
    for (int p = 0; p < positions; ++p) {
        int count[2] = {0, 0};
        long long csum[2] = {0, 0};
        for (std::size_t j = static_cast<std::size_t>(p); j < raw.size();
             j += static_cast<std::size_t>(positions)) {
            ++count[raw[j]];
            csum[raw[j]] += conf[j];
        }
        int b = 0;
        if (count[1] > count[0]) b = 1;
        else if (count[1] == count[0] && csum[1] > csum[0]) b = 1;
        v.bits[static_cast<std::size_t>(p)] = b;
        v.margins[static_cast<std::size_t>(p)] = std::abs(count[1] - count[0]);
    }
    return v;
}

/// Extract: segment, decode every bit-carrying character, undo the
/// repetition by per-position majority vote, then unwhiten.
inline ExtractionReport extract_document(const GrayImage& page, const Params& params,
                                         const SecretKey& key, int message_bits) {
    if (message_bits < 1) throw ContractError("extract_document: message length must be >= 1");
    ExtractionReport rep;
    rep.t_embed_reference = static_cast<int>(params.t_embed);
    rep.chars = read_characters(page, params);
    std::vector<int> conf;
    for (const auto& c : rep.chars)
        if (c.carries) {
            rep.raw_bits.push_back(c.bit);
            conf.push_back(c.confidence);
        }

    if (rep.raw_bits.empty()) {
        rep.diagnostic = "no decodable characters";
        return rep;
    }
    rep.repetitions_seen = static_cast<int>(rep.raw_bits.size()) / message_bits;

    const VoteResult v = majority_vote(rep.raw_bits, conf, message_bits);
    rep.vote_margins = v.margins;
    rep.message_bits = xor_bits(v.bits, keystream(key, v.bits.size()));
    return rep;
}

} // namespace glyphmark
