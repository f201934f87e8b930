#pragma once

// PNG read/write via libpng. The pipeline works in 8-bit grayscale; color
// inputs are reduced by ITU-R BT.601 luminance. An RGB writer is provided
// for debug overlays only.

#include <cstdio>
#include <csetjmp>
#include <memory>
#include <string>

#include <png.h>

#include "glyphmark/image.hpp"

namespace glyphmark {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace detail

/// Decode a PNG file to grayscale. RGB/RGBA inputs are converted with
/// BT.601 weights; 16-bit channels are reduced to 8-bit; alpha is
/// composited over white.
inline GrayImage load_png(const std::string& path) {
    detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open PNG for reading: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("malformed PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_packing(png);
    const png_byte color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels);
    GrayImage img(h, w);
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) {
            const std::uint8_t* p = &row[static_cast<std::size_t>(x) * channels];
            double v;
            double a = 1.0;
            switch (channels) {
                case 1: v = p[0]; break;
                case 2: v = p[0]; a = p[1] / 255.0; break;
                case 3: v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]; break;
                default: // RGBA
                    v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
                    a = p[3] / 255.0;
                    break;
            }
            v = a * v + (1.0 - a) * 255.0;
            img.at(x, y) = static_cast<std::uint8_t>(v + 0.5);
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline void save_png(const std::string& path, const GrayImage& img) {
    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open PNG for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height(); ++y)
        png_write_row(png, const_cast<png_bytep>(&img.pixels()[static_cast<std::size_t>(y) * img.width()]));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

/// Debug-overlay writer: interleaved RGB rows, same dimensions as the three
/// channel images.
inline void save_png_rgb(const std::string& path, const GrayImage& r,
                         const GrayImage& g, const GrayImage& b) {
    if (r.height() != g.height() || r.height() != b.height() ||
        r.width() != g.width() || r.width() != b.width())
        throw ContractError("save_png_rgb: channel dimension mismatch");

    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open PNG for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, r.width(), r.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(r.width()) * 3);
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
            row[static_cast<std::size_t>(x) * 3 + 0] = r.at(x, y);
            row[static_cast<std::size_t>(x) * 3 + 1] = g.at(x, y);
            row[static_cast<std::size_t>(x) * 3 + 2] = b.at(x, y);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

} // namespace glyphmark
