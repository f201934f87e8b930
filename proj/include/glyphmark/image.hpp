#pragma once

// Pixel substrate: 8-bit grayscale images, binarization and region
// compositing. Convention throughout the library: x is the column index
// (increasing right), y is the row index (increasing down). Binary glyphs
// hold exactly the values 0 (text) and 255 (background).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphmark {

struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline int chebyshev(Point a, Point b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Row-major 8-bit grayscale raster. Immutable in spirit: operations
/// return new images rather than mutating shared state.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int height, int width, std::uint8_t fill = 255)
        : height_(height), width_(width),
          px_(static_cast<std::size_t>(height) * width, fill) {
        if (height < 1 || width < 1)
            throw ContractError("GrayImage: dimensions must be >= 1");
    }

    GrayImage(int height, int width, std::vector<std::uint8_t> pixels)
        : height_(height), width_(width), px_(std::move(pixels)) {
        if (height < 1 || width < 1)
            throw ContractError("GrayImage: dimensions must be >= 1");
        if (px_.size() != static_cast<std::size_t>(height) * width)
            throw ContractError("GrayImage: pixel count != H*W");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    bool empty() const { return px_.empty(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }
    bool in_bounds(Point p) const { return in_bounds(p.x, p.y); }

    std::uint8_t at(int x, int y) const {
        return px_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t& at(int x, int y) {
        return px_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t at(Point p) const { return at(p.x, p.y); }
    std::uint8_t& at(Point p) { return at(p.x, p.y); }

    const std::vector<std::uint8_t>& pixels() const { return px_; }
    std::vector<std::uint8_t>& pixels() { return px_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> px_;
};

// A BinaryGlyph is a GrayImage restricted to {0, 255}; a Mask uses the same
// convention with 255 marking the editable region.
using BinaryGlyph = GrayImage;
using Mask = GrayImage;

inline bool is_binary(const GrayImage& img) {
    for (std::uint8_t v : img.pixels())
        if (v != 0 && v != 255) return false;
    return true;
}

inline std::size_t count_value(const GrayImage& img, std::uint8_t v) {
    return static_cast<std::size_t>(
        std::count(img.pixels().begin(), img.pixels().end(), v));
}

/// Otsu's inter-class-variance-maximizing threshold. Returns a value t such
/// that pixels < t are foreground. For a constant image returns 0 (nothing
/// below threshold, i.e. an empty glyph for all-white input).
inline int otsu_threshold(const GrayImage& img) {
    std::array<std::int64_t, 256> hist{};
    for (std::uint8_t v : img.pixels()) ++hist[v];
    const double total = static_cast<double>(img.pixels().size());

    double sum_all = 0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

    double best_sigma = -1.0;
    int best_t = 0;
    double w0 = 0, sum0 = 0;
    // threshold t separates [0, t) from [t, 255]
    for (int t = 1; t < 256; ++t) {
        w0 += static_cast<double>(hist[t - 1]);
        sum0 += static_cast<double>(t - 1) * hist[t - 1];
        const double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double sigma = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_t = t;
        }
    }
    return best_t;
}

/// Iterated-midpoint (isodata) threshold: t converges to the midpoint of
/// the two class means. On sparse text images with heavy pixel noise this
/// stays in the valley between the modes, where plain Otsu drifts into the
/// dominant background class; the extraction pipeline relies on that.
inline int isodata_threshold(const GrayImage& img) {
    std::array<std::int64_t, 256> hist{};
    for (std::uint8_t v : img.pixels()) ++hist[v];
    int t = otsu_threshold(img);
    if (t == 0) return 0;  // single-class image
    for (int iter = 0; iter < 64; ++iter) {
        std::int64_t n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (int v = 0; v < 256; ++v) {
            if (v < t) {
                n0 += hist[v];
                s0 += static_cast<std::int64_t>(v) * hist[v];
            } else {
                n1 += hist[v];
                s1 += static_cast<std::int64_t>(v) * hist[v];
            }
        }
        if (n0 == 0 || n1 == 0) break;
        const int next = static_cast<int>(
            std::lround((static_cast<double>(s0) / n0 + static_cast<double>(s1) / n1) / 2.0)) + 1;
        if (next == t) break;
        t = next;
    }
    return t;
}

/// Threshold to a 0/255 glyph: pixels < t become 0 (text), others 255.
/// Without an explicit threshold, t comes from otsu_threshold().
inline BinaryGlyph binarize(const GrayImage& img,
                            std::optional<int> threshold = std::nullopt) {
    const int t = threshold ? *threshold : otsu_threshold(img);
    BinaryGlyph out(img.height(), img.width());
    const auto& src = img.pixels();
    auto& dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = src[i] < t ? 0 : 255;
    return out;
}

/// Per-pixel select: patch where the mask is white, base elsewhere.
inline GrayImage composite_region(const GrayImage& base, const GrayImage& patch,
                                  const Mask& mask) {
    if (base.height() != patch.height() || base.width() != patch.width() ||
        base.height() != mask.height() || base.width() != mask.width())
        throw ContractError("composite_region: dimension mismatch");
    GrayImage out = base;
    const auto& p = patch.pixels();
    const auto& m = mask.pixels();
    auto& dst = out.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (m[i] == 255) dst[i] = p[i];
    return out;
}

inline GrayImage transpose(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(y, x) = img.at(x, y);
    return out;
}

struct ComponentBox {
    int x = 0, y = 0, w = 0, h = 0;
    int area = 0;

    int right() const { return x + w - 1; }
    int bottom() const { return y + h - 1; }
    friend bool operator==(const ComponentBox&, const ComponentBox&) = default;
};

namespace detail {

/// Label connected regions of pixels equal to `value`. 8-connectivity for
/// text (0), 4-connectivity for background (255), the standard dual pair.
inline std::vector<int> label_components(const GrayImage& img, std::uint8_t value,
                                         int connectivity,
                                         std::vector<ComponentBox>* boxes = nullptr) {
    const int h = img.height(), w = img.width();
    std::vector<int> label(static_cast<std::size_t>(h) * w, -1);
    std::vector<Point> stack;
    int next = 0;
    static constexpr int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static constexpr int dx4[] = {0, -1, 1, 0};
    static constexpr int dy4[] = {-1, 0, 0, 1};
    const int* dxs = connectivity == 8 ? dx8 : dx4;
    const int* dys = connectivity == 8 ? dy8 : dy4;
    const int nn = connectivity;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (img.at(x, y) != value || label[static_cast<std::size_t>(y) * w + x] >= 0)
                continue;
            const int id = next++;
            ComponentBox box{x, y, 1, 1, 0};
            int x0 = x, x1 = x, y0 = y, y1 = y, area = 0;
            stack.push_back({x, y});
            label[static_cast<std::size_t>(y) * w + x] = id;
            while (!stack.empty()) {
                Point p = stack.back();
                stack.pop_back();
                ++area;
                x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
                y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
                for (int k = 0; k < nn; ++k) {
                    const int nx = p.x + dxs[k], ny = p.y + dys[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    auto& l = label[static_cast<std::size_t>(ny) * w + nx];
                    if (img.at(nx, ny) == value && l < 0) {
                        l = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
            box = {x0, y0, x1 - x0 + 1, y1 - y0 + 1, area};
            if (boxes) boxes->push_back(box);
        }
    }
    return label;
}

} // namespace detail

/// Speckle cleanup used when re-binarizing possibly attacked images: remove
/// text components smaller than min_area, then fill background holes (white
/// regions not reaching the border) smaller than min_area.
inline BinaryGlyph clean_binary(const BinaryGlyph& bin, int min_area) {
    const int h = bin.height(), w = bin.width();
    BinaryGlyph out = bin;

    std::vector<ComponentBox> black_boxes;
    auto black_labels = detail::label_components(bin, 0, 8, &black_boxes);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int l = black_labels[static_cast<std::size_t>(y) * w + x];
            if (l >= 0 && black_boxes[l].area < min_area) out.at(x, y) = 255;
        }

    std::vector<ComponentBox> white_boxes;
    auto white_labels = detail::label_components(out, 255, 4, &white_boxes);
    std::vector<bool> touches_border(white_boxes.size(), false);
    for (int x = 0; x < w; ++x) {
        for (int y : {0, h - 1}) {
            const int l = white_labels[static_cast<std::size_t>(y) * w + x];
            if (l >= 0) touches_border[l] = true;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x : {0, w - 1}) {
            const int l = white_labels[static_cast<std::size_t>(y) * w + x];
            if (l >= 0) touches_border[l] = true;
        }
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int l = white_labels[static_cast<std::size_t>(y) * w + x];
            if (l >= 0 && !touches_border[l] && white_boxes[l].area < min_area)
                out.at(x, y) = 0;
        }
    return out;
}

/// Area threshold for clean_binary, scaled with image size.
inline int speckle_area(int height, int width) {
    const int side = std::min(height, width);
    const int a = side / 64;
    return std::max(4, a * a);
}

} // namespace glyphmark
