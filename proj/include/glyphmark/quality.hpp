#pragma once

// Imperceptibility and robustness metrics: PSNR (capped at 99 dB for
// identical images), SSIM with the canonical 11x11 Gaussian window
// (sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 255), and bit accuracy.

#include <cmath>
#include <vector>

#include "glyphmark/image.hpp"

namespace glyphmark {

inline double psnr(const GrayImage& a, const GrayImage& b) {
    if (a.height() != b.height() || a.width() != b.width())
        throw ContractError("psnr: dimension mismatch");
    double se = 0;
    const auto& pa = a.pixels();
    const auto& pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        se += d * d;
    }
    if (se == 0) return 99.0;
    const double mse = se / static_cast<double>(pa.size());
    return std::min(99.0, 10.0 * std::log10(255.0 * 255.0 / mse));
}

namespace detail {

// valid-mode separable filtering: output shrinks by (taps - 1) per axis
inline std::vector<double> filter_valid(const std::vector<double>& src, int h, int w,
                                        const std::vector<double>& k, int& oh, int& ow) {
    const int t = static_cast<int>(k.size());
    ow = w - t + 1;
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < t; ++i) s += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    oh = h - t + 1;
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < t; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

} // namespace detail

inline double ssim(const GrayImage& a, const GrayImage& b) {
    if (a.height() != b.height() || a.width() != b.width())
        throw ContractError("ssim: dimension mismatch");
    const int h = a.height(), w = a.width();
    if (std::min(h, w) < 11) throw ContractError("ssim: image smaller than the 11x11 window");

    std::vector<double> kernel(11);
    double ksum = 0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5.0;
        kernel[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        ksum += kernel[i];
    }
    for (double& v : kernel) v /= ksum;

    const std::size_t n = static_cast<std::size_t>(h) * w;
    std::vector<double> fa(n), fb(n), faa(n), fbb(n), fab(n);
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] = a.pixels()[i];
        fb[i] = b.pixels()[i];
        faa[i] = fa[i] * fa[i];
        fbb[i] = fb[i] * fb[i];
        fab[i] = fa[i] * fb[i];
    }
    int oh = 0, ow = 0;
    const auto mu_a = detail::filter_valid(fa, h, w, kernel, oh, ow);
    const auto mu_b = detail::filter_valid(fb, h, w, kernel, oh, ow);
    const auto e_aa = detail::filter_valid(faa, h, w, kernel, oh, ow);
    const auto e_bb = detail::filter_valid(fbb, h, w, kernel, oh, ow);
    const auto e_ab = detail::filter_valid(fab, h, w, kernel, oh, ow);

    const double c1 = (0.01 * 255) * (0.01 * 255);
    const double c2 = (0.03 * 255) * (0.03 * 255);
    double acc = 0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = e_aa[i] - ma * ma;
        const double vb = e_bb[i] - mb * mb;
        const double cov = e_ab[i] - ma * mb;
        acc += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return acc / static_cast<double>(mu_a.size());
}

inline double bit_accuracy(const std::vector<int>& truth, const std::vector<int>& decoded) {
    if (truth.size() != decoded.size())
        throw ContractError("bit_accuracy: length mismatch");
    if (truth.empty()) throw ContractError("bit_accuracy: empty sequences");
    std::size_t match = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == decoded[i]) ++match;
    return 100.0 * static_cast<double>(match) / static_cast<double>(truth.size());
}

} // namespace glyphmark
