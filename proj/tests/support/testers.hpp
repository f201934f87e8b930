#pragma once

// Shared helpers for the test suites: ASCII-art image construction and
// small drawing utilities for synthetic glyphs.

#include <initializer_list>
#include <string>
#include <vector>

#include "glyphmark/image.hpp"

namespace gmtest {

/// Build a glyph from rows of ASCII art: '#' (or 'X') = text/skeleton
/// pixel, anything else = background. All rows must share one width.
inline glyphmark::GrayImage art(std::initializer_list<std::string> rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.begin()->size());
    glyphmark::GrayImage img(h, w, 255);
    int y = 0;
    for (const auto& row : rows) {
        for (int x = 0; x < w; ++x)
            if (row[static_cast<std::size_t>(x)] == '#' || row[static_cast<std::size_t>(x)] == 'X')
                img.at(x, y) = 0;
        ++y;
    }
    return img;
}

/// Draw a 1-px 8-connected line (Bresenham) onto an image in place.
inline void draw_line(glyphmark::GrayImage& img, glyphmark::Point a, glyphmark::Point b,
                      std::uint8_t value = 0) {
    int x0 = a.x, y0 = a.y;
    const int dx = std::abs(b.x - x0), sx = x0 < b.x ? 1 : -1;
    const int dy = -std::abs(b.y - y0), sy = y0 < b.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (img.in_bounds(x0, y0)) img.at(x0, y0) = value;
        if (x0 == b.x && y0 == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

/// Draw a thick line segment (round caps) for synthetic glyph strokes.
inline void draw_stroke(glyphmark::GrayImage& img, glyphmark::Point a, glyphmark::Point b,
                        double radius) {
    const int r = static_cast<int>(radius) + 1;
    const int x0 = std::max(0, std::min(a.x, b.x) - r);
    const int x1 = std::min(img.width() - 1, std::max(a.x, b.x) + r);
    const int y0 = std::max(0, std::min(a.y, b.y) - r);
    const int y1 = std::min(img.height() - 1, std::max(a.y, b.y) + r);
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double t = len2 > 0 ? ((x - a.x) * abx + (y - a.y) * aby) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double cx = a.x + t * abx, cy = a.y + t * aby;
            const double d = std::hypot(x - cx, y - cy);
            if (d <= radius) img.at(x, y) = 0;
        }
}

inline std::size_t count_black(const glyphmark::GrayImage& img) {
    return glyphmark::count_value(img, 0);
}

} // namespace gmtest
