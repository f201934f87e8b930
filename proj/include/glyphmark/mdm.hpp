#pragma once

// Mask drawing module: bound the editing rectangle from P_h and P_t, then
// rasterize it with a sigma expansion. The column scan walks the candidate
// strip between the two x-coordinates and extends the rectangle to the
// stroke transitions above and below y_h, so strokes crossing the movement
// corridor end up fully inside the mask. The y-axis case runs the same
// procedure on the transposed image.

#include <algorithm>

#include "glyphmark/image.hpp"
#include "glyphmark/tpe.hpp"

namespace glyphmark {

struct MaskRect {
    int left = 0;
    int right = 0;
    int top = 0;
    int bottom = 0;

    friend bool operator==(const MaskRect&, const MaskRect&) = default;
};

inline MaskRect compute_rect(const BinaryGlyph& cover, Point ph, Point pt, Axis axis) {
    if (axis == Axis::Y) {
        const MaskRect t = compute_rect(transpose(cover), {ph.y, ph.x}, {pt.y, pt.x}, Axis::X);
        return {t.top, t.bottom, t.left, t.right};
    }

    const int h = cover.height();
    MaskRect r;
    r.left = std::min(ph.x, pt.x);
    r.right = std::max(ph.x, pt.x);

    int scan_top = ph.y;
    int scan_bottom = ph.y;
    // candidate strip: (right - left) columns starting at `left`
    for (int x = r.left; x < r.right; ++x) {
        int k_top = ph.y;
        int k_bottom = ph.y;
        bool top_found = false, bottom_found = false;
        for (int j = 0; j + 1 < h; ++j) {
            const int z = static_cast<int>(cover.at(x, j)) - static_cast<int>(cover.at(x, j + 1));
            if (z == 255 && j <= ph.y) {  // non-black to black, at or above y_h
                k_top = j;                // keep the largest such index
                top_found = true;
            }
            if (z == -255 && j >= ph.y && !bottom_found) {  // black to non-black, at or below y_h
                k_bottom = j;                               // keep the smallest such index
                bottom_found = true;
            }
        }
        (void)top_found;
        scan_top = std::min(scan_top, k_top);
        scan_bottom = std::max(scan_bottom, k_bottom);
    }

    r.top = std::min({ph.y, pt.y, scan_top});
    r.bottom = std::max({ph.y, pt.y, scan_bottom});
    return r;
}

/// White rectangle [left - sigma, right + sigma] x [top - sigma, bottom +
/// sigma], clamped to the image; black elsewhere.
inline Mask draw_mask(const MaskRect& rect, int height, int width, int sigma) {
    if (sigma < 0) throw ContractError("draw_mask: sigma must be >= 0");
    if (rect.left > rect.right || rect.top > rect.bottom)
        throw ContractError("draw_mask: malformed rect");
    Mask m(height, width, 0);
    const int x0 = std::max(0, rect.left - sigma);
    const int x1 = std::min(width - 1, rect.right + sigma);
    const int y0 = std::max(0, rect.top - sigma);
    const int y1 = std::min(height - 1, rect.bottom + sigma);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) m.at(x, y) = 255;
    return m;
}

} // namespace glyphmark
