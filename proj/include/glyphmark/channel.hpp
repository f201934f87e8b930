#pragma once

// Cross-media channel simulation: pixel noise, blur, rescale round trips,
// print-scan and print-camera composites, elastic stroke morphing, and a
// block-DCT recompression round trip. Every attack is a pure function of
// (image, spec, seed); identical inputs give bit-identical outputs.

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "glyphmark/image.hpp"
#include "glyphmark/rng.hpp"

namespace glyphmark {

enum class AttackKind {
    identity,
    gaussian_noise,
    gaussian_blur,
    rescale,
    print_scan,
    print_camera,
    elastic_morph,
    recompress,
};

inline const char* attack_kind_name(AttackKind k) {
    switch (k) {
        case AttackKind::identity: return "identity";
        case AttackKind::gaussian_noise: return "gaussian_noise";
        case AttackKind::gaussian_blur: return "gaussian_blur";
        case AttackKind::rescale: return "rescale";
        case AttackKind::print_scan: return "print_scan";
        case AttackKind::print_camera: return "print_camera";
        case AttackKind::elastic_morph: return "elastic_morph";
        case AttackKind::recompress: return "recompress";
    }
    return "?";
}

struct AttackSpec {
    AttackKind kind = AttackKind::identity;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    double param(const std::string& key, double fallback) const {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    static AttackSpec parse(const std::string& text);

    std::string to_string() const {
        std::string s = attack_kind_name(kind);
        if (!params.empty()) {
            s += '(';
            bool first = true;
            for (const auto& [k, v] : params) {
                if (!first) s += ',';
                first = false;
                char buf[48];
                std::snprintf(buf, sizeof buf, "%s=%g", k.c_str(), v);
                s += buf;
            }
            s += ')';
        }
        return s;
    }
};

namespace detail {

inline GrayImage from_doubles(const std::vector<double>& v, int h, int w) {
    GrayImage out(h, w);
    for (std::size_t i = 0; i < v.size(); ++i)
        out.pixels()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v[i]), 0L, 255L));
    return out;
}

inline std::vector<double> to_doubles(const GrayImage& img) {
    std::vector<double> v(img.pixels().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = img.pixels()[i];
    return v;
}

inline std::vector<double> gaussian_kernel(double sigma, int radius) {
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0;
    for (int i = -radius; i <= radius; ++i) {
        k[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i + radius)];
    }
    for (double& v : k) v /= sum;
    return k;
}

// separable convolution with replicated borders
inline std::vector<double> convolve_replicate(const std::vector<double>& src, int h, int w,
                                              const std::vector<double>& k) {
    const int r = static_cast<int>(k.size()) / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0;
            for (int i = -r; i <= r; ++i)
                s += k[static_cast<std::size_t>(i + r)] *
                     src[static_cast<std::size_t>(y) * w + std::clamp(x + i, 0, w - 1)];
            tmp[static_cast<std::size_t>(y) * w + x] = s;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0;
            for (int i = -r; i <= r; ++i)
                s += k[static_cast<std::size_t>(i + r)] *
                     tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            out[static_cast<std::size_t>(y) * w + x] = s;
        }
    return out;
}

inline double bilinear_at(const GrayImage& img, double x, double y, double fill) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double tx = x - x0, ty = y - y0;
    auto px = [&](int xx, int yy) {
        return img.in_bounds(xx, yy) ? static_cast<double>(img.at(xx, yy)) : fill;
    };
    const double a = px(x0, y0) * (1 - tx) + px(x0 + 1, y0) * tx;
    const double b = px(x0, y0 + 1) * (1 - tx) + px(x0 + 1, y0 + 1) * tx;
    return a * (1 - ty) + b * ty;
}

// 3x3 homography acting on homogeneous (x, y, 1), row-major
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
                r.m[i * 3 + j] = s;
            }
        return r;
    }

    Mat3 inverse() const {
        const auto& a = m;
        const double det = a[0] * (a[4] * a[8] - a[5] * a[7]) -
                           a[1] * (a[3] * a[8] - a[5] * a[6]) +
                           a[2] * (a[3] * a[7] - a[4] * a[6]);
        if (std::abs(det) < 1e-12) throw ContractError("homography not invertible");
        Mat3 r;
        r.m = {(a[4] * a[8] - a[5] * a[7]) / det, (a[2] * a[7] - a[1] * a[8]) / det,
               (a[1] * a[5] - a[2] * a[4]) / det, (a[5] * a[6] - a[3] * a[8]) / det,
               (a[0] * a[8] - a[2] * a[6]) / det, (a[2] * a[3] - a[0] * a[5]) / det,
               (a[3] * a[7] - a[4] * a[6]) / det, (a[1] * a[6] - a[0] * a[7]) / det,
               (a[0] * a[4] - a[1] * a[3]) / det};
        return r;
    }

    void apply(double x, double y, double& ox, double& oy) const {
        const double wz = m[6] * x + m[7] * y + m[8];
        ox = (m[0] * x + m[1] * y + m[2]) / wz;
        oy = (m[3] * x + m[4] * y + m[5]) / wz;
    }
};

/// Page-to-camera projection for a page tilted about the vertical axis,
/// viewed at a relative distance; identity at angle 0, scale 1.
inline Mat3 camera_homography(double angle_deg, double dist_scale, int width, int height) {
    const double a = angle_deg * 3.14159265358979323846 / 180.0;
    const double d = static_cast<double>(std::max(width, height));
    const double f = d * dist_scale;
    Mat3 proj;
    proj.m = {f * std::cos(a), 0, 0, 0, f, 0, std::sin(a), 0, d};
    Mat3 center;
    center.m = {1, 0, -(width - 1) / 2.0, 0, 1, -(height - 1) / 2.0, 0, 0, 1};
    Mat3 uncenter;
    uncenter.m = {1, 0, (width - 1) / 2.0, 0, 1, (height - 1) / 2.0, 0, 0, 1};
    return uncenter * (proj * center);
}

/// Resample so that out(x, y) = src(map(x, y)); out-of-frame samples read
/// as background white.
inline GrayImage warp_by(const GrayImage& src, const Mat3& map) {
    GrayImage out(src.height(), src.width());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            double sx, sy;
            map.apply(x, y, sx, sy);
            out.at(x, y) = static_cast<std::uint8_t>(
                std::clamp(std::lround(bilinear_at(src, sx, sy, 255.0)), 0L, 255L));
        }
    return out;
}

} // namespace detail

inline GrayImage attack_gaussian_noise(const GrayImage& img, double var, Rng& rng) {
    const double stddev = std::sqrt(var) * 255.0;
    GrayImage out(img.height(), img.width());
    for (std::size_t i = 0; i < img.pixels().size(); ++i) {
        const double v = img.pixels()[i] + stddev * rng.gauss();
        out.pixels()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    return out;
}

inline GrayImage attack_gaussian_blur(const GrayImage& img, int k) {
    const double sigma = 0.3 * ((k - 1) / 2.0 - 1.0) + 0.8;
    const auto kernel = detail::gaussian_kernel(sigma, k / 2);
    const auto blurred =
        detail::convolve_replicate(detail::to_doubles(img), img.height(), img.width(), kernel);
    return detail::from_doubles(blurred, img.height(), img.width());
}

inline GrayImage attack_rescale(const GrayImage& img, double factor) {
    const int sh = std::max(1, static_cast<int>(std::lround(img.height() * factor)));
    const int sw = std::max(1, static_cast<int>(std::lround(img.width() * factor)));
    auto resample = [](const GrayImage& src, int nh, int nw) {
        GrayImage out(nh, nw);
        const double ry = static_cast<double>(src.height()) / nh;
        const double rx = static_cast<double>(src.width()) / nw;
        for (int y = 0; y < nh; ++y)
            for (int x = 0; x < nw; ++x) {
                const double sx = std::clamp((x + 0.5) * rx - 0.5, 0.0, src.width() - 1.0);
                const double sy = std::clamp((y + 0.5) * ry - 0.5, 0.0, src.height() - 1.0);
                out.at(x, y) = static_cast<std::uint8_t>(
                    std::clamp(std::lround(detail::bilinear_at(src, sx, sy, 255.0)), 0L, 255L));
            }
        return out;
    };
    return resample(resample(img, sh, sw), img.height(), img.width());
}

/// blur(3) + noise(0.01) + per-pixel threshold jitter of +-8 around 128 +
/// gamma 0.9, in that order.
inline GrayImage attack_print_scan(const GrayImage& img, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x705cULL));
    GrayImage out = attack_gaussian_blur(img, 3);
    out = attack_gaussian_noise(out, 0.01, rng);
    for (auto& v : out.pixels()) {
        const int t = 128 + rng.uniform_int(-8, 8);
        v = v < t ? 0 : 255;
    }
    for (auto& v : out.pixels())
        v = static_cast<std::uint8_t>(
            std::clamp(std::lround(255.0 * std::pow(v / 255.0, 0.9)), 0L, 255L));
    return out;
}

/// print_scan, then a perspective view at the given angle/distance,
/// rectified back with the inverse homography (the evaluator deskews).
inline GrayImage attack_print_camera(const GrayImage& img, double angle_deg,
                                     double dist_scale, std::uint64_t seed) {
    GrayImage scanned = attack_print_scan(img, seed);
    if (angle_deg == 0.0 && dist_scale == 1.0) return scanned;
    const auto fwd = detail::camera_homography(angle_deg, dist_scale, img.width(), img.height());
    const GrayImage camera = detail::warp_by(scanned, fwd.inverse());
    return detail::warp_by(camera, fwd);
}

/// Smoothed random displacement field (per-component std alpha, correlation
/// length sigma, both at 512 reference scale).
inline GrayImage attack_elastic_morph(const GrayImage& img, double alpha, double sigma,
                                      std::uint64_t seed) {
    const int h = img.height(), w = img.width();
    const double s = std::min(h, w) / 512.0;
    const double a_px = alpha * s;
    const double sig_px = std::max(1.0, sigma * s);
    Rng rng(mix_seed(seed, 0xe1a5ULL));

    std::vector<double> dx(static_cast<std::size_t>(h) * w), dy(dx.size());
    for (auto& v : dx) v = rng.gauss();
    for (auto& v : dy) v = rng.gauss();
    const auto kernel = detail::gaussian_kernel(sig_px, static_cast<int>(std::ceil(3 * sig_px)));
    dx = detail::convolve_replicate(dx, h, w, kernel);
    dy = detail::convolve_replicate(dy, h, w, kernel);

    auto normalize = [a_px](std::vector<double>& f) {
        double mean = 0;
        for (double v : f) mean += v;
        mean /= static_cast<double>(f.size());
        double var = 0;
        for (double v : f) var += (v - mean) * (v - mean);
        const double stddev = std::sqrt(var / static_cast<double>(f.size()));
        if (stddev < 1e-12) return;
        for (double& v : f) v = (v - mean) * (a_px / stddev);
    };
    normalize(dx);
    normalize(dy);

    GrayImage out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double sx = std::clamp(x + dx[i], 0.0, w - 1.0);
            const double sy = std::clamp(y + dy[i], 0.0, h - 1.0);
            out.at(x, y) = static_cast<std::uint8_t>(
                std::clamp(std::lround(detail::bilinear_at(img, sx, sy, 255.0)), 0L, 255L));
        }
    return out;
}

namespace detail {

inline const std::array<int, 64>& jpeg_luma_table() {
    static const std::array<int, 64> t = {
        16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
        14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
        18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
        49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
    return t;
}

} // namespace detail

/// 8x8 block-DCT quantization round trip at the given quality.
inline GrayImage attack_recompress(const GrayImage& img, int quality) {
    const int h = img.height(), w = img.width();
    const int bh = (h + 7) / 8 * 8, bw = (w + 7) / 8 * 8;

    const int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<double, 64> q;
    for (int i = 0; i < 64; ++i)
        q[i] = std::clamp((detail::jpeg_luma_table()[i] * s + 50) / 100, 1, 255);

    std::array<std::array<double, 8>, 8> cosv;
    for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x)
            cosv[u][x] = std::cos((2 * x + 1) * u * 3.14159265358979323846 / 16.0);
    auto cu = [](int u) { return u == 0 ? 0.70710678118654752440 : 1.0; };

    GrayImage out(h, w);
    std::array<double, 64> f, F;
    for (int by = 0; by < bh; by += 8) {
        for (int bx = 0; bx < bw; bx += 8) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const int sx = std::min(bx + x, w - 1), sy = std::min(by + y, h - 1);
                    f[y * 8 + x] = img.at(sx, sy) - 128.0;
                }
            for (int v = 0; v < 8; ++v)
                for (int u = 0; u < 8; ++u) {
                    double acc = 0;
                    for (int y = 0; y < 8; ++y)
                        for (int x = 0; x < 8; ++x)
                            acc += f[y * 8 + x] * cosv[u][x] * cosv[v][y];
                    const double coeff = 0.25 * cu(u) * cu(v) * acc;
                    F[v * 8 + u] = std::round(coeff / q[v * 8 + u]) * q[v * 8 + u];
                }
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    double acc = 0;
                    for (int v = 0; v < 8; ++v)
                        for (int u = 0; u < 8; ++u)
                            acc += cu(u) * cu(v) * F[v * 8 + u] * cosv[u][x] * cosv[v][y];
                    const int ox = bx + x, oy = by + y;
                    if (ox < w && oy < h)
                        out.at(ox, oy) = static_cast<std::uint8_t>(
                            std::clamp(std::lround(0.25 * acc + 128.0), 0L, 255L));
                }
        }
    }
    return out;
}

/// Dispatch a parsed attack spec with range validation.
inline GrayImage apply(const GrayImage& img, const AttackSpec& spec) {
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("attack " + std::string(attack_kind_name(spec.kind)) +
                                   ": " + msg);
    };
    switch (spec.kind) {
        case AttackKind::identity:
            return img;
        case AttackKind::gaussian_noise: {
            const double var = spec.param("var", 0.03);
            require(var >= 0 && var <= 0.25, "var must be in [0, 0.25]");
            Rng rng(mix_seed(spec.seed, 0x6e01ULL));
            return attack_gaussian_noise(img, var, rng);
        }
        case AttackKind::gaussian_blur: {
            const int k = static_cast<int>(spec.param("k", 3));
            require(k >= 3 && k <= 31 && k % 2 == 1, "kernel must be odd, in [3, 31]");
            return attack_gaussian_blur(img, k);
        }
        case AttackKind::rescale: {
            const double f = spec.param("factor", 0.75);
            require(f >= 0.1 && f <= 1.0, "factor must be in [0.1, 1]");
            return attack_rescale(img, f);
        }
        case AttackKind::print_scan:
            return attack_print_scan(img, spec.seed);
        case AttackKind::print_camera: {
            const double angle = spec.param("angle", 30);
            const double dist = spec.param("distance", 1.0);
            require(angle >= 0 && angle <= 60, "angle must be in [0, 60] degrees");
            require(dist >= 0.5 && dist <= 2.0, "distance must be in [0.5, 2]");
            return attack_print_camera(img, angle, dist, spec.seed);
        }
        case AttackKind::elastic_morph: {
            const double alpha = spec.param("alpha", 1.5);
            const double sigma = spec.param("sigma", 8.0);
            require(alpha > 0 && alpha <= 16, "alpha must be in (0, 16]");
            require(sigma >= 1 && sigma <= 64, "sigma must be in [1, 64]");
            return attack_elastic_morph(img, alpha, sigma, spec.seed);
        }
        case AttackKind::recompress: {
            const int quality = static_cast<int>(spec.param("quality", 75));
            require(quality >= 5 && quality <= 100, "quality must be in [5, 100]");
            return attack_recompress(img, quality);
        }
    }
    throw ConfigError("attack: unknown kind");
}

inline AttackSpec AttackSpec::parse(const std::string& text) {
    AttackSpec spec;
    std::string name = text;
    std::string args;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')')
            throw ConfigError("attack spec: missing ')': " + text);
        name = text.substr(0, open);
        args = text.substr(open + 1, text.size() - open - 2);
    }
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    name = trim(name);

    bool known = false;
    for (AttackKind k :
         {AttackKind::identity, AttackKind::gaussian_noise, AttackKind::gaussian_blur,
          AttackKind::rescale, AttackKind::print_scan, AttackKind::print_camera,
          AttackKind::elastic_morph, AttackKind::recompress}) {
        if (name == attack_kind_name(k)) {
            spec.kind = k;
            known = true;
            break;
        }
    }
    if (!known) throw ConfigError("attack spec: unknown kind: " + name);

    std::size_t pos = 0;
    while (pos < args.size()) {
        auto comma = args.find(',', pos);
        if (comma == std::string::npos) comma = args.size();
        const std::string kv = trim(args.substr(pos, comma - pos));
        pos = comma + 1;
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("attack spec: expected key=value: " + kv);
        const std::string key = trim(kv.substr(0, eq));
        const std::string val = trim(kv.substr(eq + 1));
        if (key == "preset" && spec.kind == AttackKind::elastic_morph) {
            if (val == "light") {
                spec.params["alpha"] = 1.5;
                spec.params["sigma"] = 8.0;
            } else if (val == "strong") {
                spec.params["alpha"] = 3.0;
                spec.params["sigma"] = 6.0;
            } else {
                throw ConfigError("attack spec: unknown elastic preset: " + val);
            }
            continue;
        }
        if (key == "seed") {
            try {
                spec.seed = std::stoull(val);
            } catch (const std::exception&) {
                throw ConfigError("attack spec: bad seed: " + val);
            }
            continue;
        }
        try {
            std::size_t used = 0;
            spec.params[key] = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ConfigError("attack spec: bad value for " + key + ": " + val);
        }
    }
    return spec;
}

/// Parse a ';'-separated attack list.
inline std::vector<AttackSpec> parse_attack_list(const std::string& text) {
    std::vector<AttackSpec> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto semi = text.find(';', pos);
        if (semi == std::string::npos) semi = text.size();
        const std::string one = text.substr(pos, semi - pos);
        pos = semi + 1;
        const auto b = one.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(AttackSpec::parse(one.substr(b, one.find_last_not_of(" \t") - b + 1)));
    }
    return out;
}

} // namespace glyphmark
