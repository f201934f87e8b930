#pragma once

// Independent oracles used to check the implementation: a brute-force
// topology counter, a literal transcription of the mask-rect column scan,
// and a direct enumeration scorer for handle selection. These deliberately
// avoid the library's internal code paths.

#include <algorithm>
#include <optional>
#include <vector>

#include "glyphmark/image.hpp"
#include "glyphmark/keypoints.hpp"
#include "glyphmark/mdm.hpp"
#include "glyphmark/mpe.hpp"

namespace gmtest {

struct Topology {
    int components = 0;  // 8-connected black regions
    int holes = 0;       // 4-connected white regions not touching the border
};

/// Flood-fill topology count, written directly against the pixel buffer.
inline Topology topology_of(const glyphmark::GrayImage& img) {
    const int h = img.height(), w = img.width();
    std::vector<int> mark(static_cast<std::size_t>(h) * w, 0);
    auto at = [&](int x, int y) -> int& { return mark[static_cast<std::size_t>(y) * w + x]; };
    Topology t;

    std::vector<glyphmark::Point> stack;
    for (int sy = 0; sy < h; ++sy)
        for (int sx = 0; sx < w; ++sx) {
            if (img.at(sx, sy) != 0 || at(sx, sy)) continue;
            ++t.components;
            stack.push_back({sx, sy});
            at(sx, sy) = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if ((dx || dy) && nx >= 0 && nx < w && ny >= 0 && ny < h &&
                            img.at(nx, ny) == 0 && !at(nx, ny)) {
                            at(nx, ny) = 1;
                            stack.push_back({nx, ny});
                        }
                    }
            }
        }

    // white regions, 4-connected; those reaching the border are background
    std::fill(mark.begin(), mark.end(), 0);
    int region = 0;
    for (int sy = 0; sy < h; ++sy)
        for (int sx = 0; sx < w; ++sx) {
            if (img.at(sx, sy) != 255 || at(sx, sy)) continue;
            ++region;
            bool border = false;
            stack.push_back({sx, sy});
            at(sx, sy) = region;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border = true;
                const int nx4[] = {x - 1, x + 1, x, x};
                const int ny4[] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx4[k] < 0 || nx4[k] >= w || ny4[k] < 0 || ny4[k] >= h) continue;
                    if (img.at(nx4[k], ny4[k]) == 255 && !at(nx4[k], ny4[k])) {
                        at(nx4[k], ny4[k]) = region;
                        stack.push_back({nx4[k], ny4[k]});
                    }
                }
            }
            if (!border) ++t.holes;
        }
    return t;
}

/// Literal transcription of the mask-rect column scan for the x-axis case:
/// per column, the difference sequence against its shift (first element
/// removed, 254 appended), 255 entries at or above y_h, -255 entries at or
/// below y_h, with y_h defaults.
inline glyphmark::MaskRect mdm_reference_scan(const glyphmark::GrayImage& cover,
                                              glyphmark::Point ph, glyphmark::Point pt) {
    const int h = cover.height();
    const int left = std::min(ph.x, pt.x);
    const int right = std::max(ph.x, pt.x);

    std::vector<int> k_top, k_bottom;
    for (int i = 0; i < right - left; ++i) {
        const int x = left + i;
        std::vector<int> col, shifted;
        for (int y = 0; y < h; ++y) col.push_back(cover.at(x, y));
        shifted.assign(col.begin() + 1, col.end());
        shifted.push_back(254);
        std::vector<int> zeta;
        for (int y = 0; y < h; ++y) zeta.push_back(col[static_cast<std::size_t>(y)] -
                                                   shifted[static_cast<std::size_t>(y)]);
        std::vector<int> z255, zm255;
        for (int y = 0; y < h; ++y) {
            if (zeta[static_cast<std::size_t>(y)] == 255 && y <= ph.y) z255.push_back(y);
            if (zeta[static_cast<std::size_t>(y)] == -255 && y >= ph.y) zm255.push_back(y);
        }
        k_top.push_back(z255.empty() ? ph.y : *std::max_element(z255.begin(), z255.end()));
        k_bottom.push_back(zm255.empty() ? ph.y
                                         : *std::min_element(zm255.begin(), zm255.end()));
    }

    glyphmark::MaskRect r;
    r.left = left;
    r.right = right;
    int top = std::min(ph.y, pt.y);
    for (int v : k_top) top = std::min(top, v);
    int bottom = std::max(ph.y, pt.y);
    for (int v : k_bottom) bottom = std::max(bottom, v);
    r.top = top;
    r.bottom = bottom;
    return r;
}

/// Direct enumeration scorer for handle selection: every (endpoint,
/// reference) pair, scored literally, with (y, x) tie-breaks.
inline std::optional<glyphmark::HandleSelection> mpe_bruteforce(
    const glyphmark::KeypointSet& kp, const glyphmark::StrokeGraph& g, int tau) {
    using glyphmark::Keypoint;
    struct Best {
        Keypoint endpoint;
        std::optional<Keypoint> ref;
        int score = 0;
    };
    std::vector<Best> bests;
    for (const Keypoint& e : kp.endpoints) {
        std::vector<Keypoint> refs;
        for (const Keypoint& q : kp.endpoints)
            if (!(q.pos == e.pos) && std::abs(q.pos.x - e.pos.x) <= tau &&
                std::abs(q.pos.y - e.pos.y) <= tau)
                refs.push_back(q);
        for (const Keypoint& q : kp.junctions)
            if (std::abs(q.pos.x - e.pos.x) <= tau && std::abs(q.pos.y - e.pos.y) <= tau)
                refs.push_back(q);

        Best b{e, std::nullopt, 0};
        if (!refs.empty()) {
            std::vector<int> score(refs.size(), 1);
            for (std::size_t j = 0; j < refs.size(); ++j)
                if (!glyphmark::same_stroke(e.pos, refs[j].pos, g)) score[j] = 2;
            // +1 to the score-2 reference with the smallest y (then x)
            int pick = -1;
            for (std::size_t j = 0; j < refs.size(); ++j) {
                if (score[j] != 2) continue;
                if (pick < 0 ||
                    glyphmark::point_before(refs[j].pos, refs[static_cast<std::size_t>(pick)].pos))
                    pick = static_cast<int>(j);
            }
            if (pick >= 0) score[static_cast<std::size_t>(pick)] = 3;
            int bj = -1;
            for (std::size_t j = 0; j < refs.size(); ++j) {
                if (bj < 0 || score[j] > score[static_cast<std::size_t>(bj)] ||
                    (score[j] == score[static_cast<std::size_t>(bj)] &&
                     glyphmark::point_before(refs[j].pos, refs[static_cast<std::size_t>(bj)].pos)))
                    bj = static_cast<int>(j);
            }
            b.ref = refs[static_cast<std::size_t>(bj)];
            b.score = score[static_cast<std::size_t>(bj)];
        }
        bests.push_back(b);
    }

    const Best* win = nullptr;
    for (const Best& b : bests) {
        if (b.score == 0) continue;
        if (!win || b.score > win->score ||
            (b.score == win->score && glyphmark::point_before(b.endpoint.pos, win->endpoint.pos)))
            win = &b;
    }
    if (!win) return std::nullopt;
    glyphmark::HandleSelection sel;
    sel.handle = win->endpoint;
    sel.reference = *win->ref;
    sel.score = win->score;
    return sel;
}

} // namespace gmtest
