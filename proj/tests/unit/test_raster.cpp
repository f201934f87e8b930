#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "glyphmark/image.hpp"
#include "glyphmark/png_io.hpp"
#include "testers.hpp"

using namespace glyphmark;

namespace {

std::string temp_png(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// exhaustive-sweep Otsu oracle: maximize between-class variance directly
int otsu_sweep(const GrayImage& img) {
    double best = -1;
    int best_t = 0;
    for (int t = 1; t < 256; ++t) {
        double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (std::uint8_t v : img.pixels()) {
            if (v < t) {
                n0 += 1;
                s0 += v;
            } else {
                n1 += 1;
                s1 += v;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const double m0 = s0 / n0, m1 = s1 / n1;
        const double sigma = n0 * n1 * (m0 - m1) * (m0 - m1);
        if (sigma > best) {
            best = sigma;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace

TEST_CASE("png round trip and decode") {
    const std::string path = temp_png("gm_white2x2.png");
    GrayImage white(2, 2, 255);
    save_png(path, white);
    const GrayImage back = load_png(path);
    REQUIRE(back.height() == 2);
    REQUIRE(back.width() == 2);
    REQUIRE(back == white);

    GrayImage noise(13, 9);
    for (int y = 0; y < 13; ++y)
        for (int x = 0; x < 9; ++x) noise.at(x, y) = static_cast<std::uint8_t>((x * 31 + y * 7) % 256);
    const std::string p2 = temp_png("gm_noise.png");
    save_png(p2, noise);
    REQUIRE(load_png(p2) == noise);

    std::remove(path.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("png decode errors carry path context") {
    REQUIRE_THROWS_AS(load_png("/nonexistent/nothing.png"), IoError);
    try {
        load_png("/nonexistent/nothing.png");
    } catch (const IoError& e) {
        REQUIRE(std::string(e.what()).find("nothing.png") != std::string::npos);
    }
}

TEST_CASE("binarize basics") {
    const GrayImage white(3, 3, 255);
    const BinaryGlyph empty = binarize(white);
    REQUIRE(count_value(empty, 255) == 9);  // all-white input is a legal empty glyph

    GrayImage two(2, 2);
    two.at(0, 0) = 0;
    two.at(1, 0) = 255;
    two.at(0, 1) = 255;
    two.at(1, 1) = 0;
    REQUIRE(binarize(two, 128) == two);
}

TEST_CASE("binarize auto threshold matches the sweep oracle on a bimodal image") {
    GrayImage img(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) img.at(x, y) = y < 4 ? 30 : 220;
    const int t_oracle = otsu_sweep(img);
    const int t_impl = otsu_threshold(img);
    REQUIRE(t_impl == t_oracle);
    const BinaryGlyph b = binarize(img);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) REQUIRE(b.at(x, y) == (y < 4 ? 0 : 255));
}

TEST_CASE("binarize is idempotent at a fixed threshold") {
    GrayImage img(5, 7);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) img.at(x, y) = static_cast<std::uint8_t>((x * 40 + y * 13) % 256);
    const BinaryGlyph once = binarize(img, 99);
    REQUIRE(binarize(once, 99) == once);
}

TEST_CASE("composite_region") {
    GrayImage base(4, 4, 10), patch(4, 4, 200);
    const Mask none(4, 4, 0);
    const Mask full(4, 4, 255);
    REQUIRE(composite_region(base, patch, none) == base);
    REQUIRE(composite_region(base, patch, full) == patch);

    Mask half(4, 4, 0);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 2; ++x) half.at(x, y) = 255;
    const GrayImage out = composite_region(base, patch, half);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            // per-pixel reference: patch where mask white, else base
            const std::uint8_t want = half.at(x, y) == 255 ? patch.at(x, y) : base.at(x, y);
            REQUIRE(out.at(x, y) == want);
        }

    const GrayImage small(2, 2, 0);
    REQUIRE_THROWS_AS(composite_region(base, small, full), ContractError);
}

TEST_CASE("clean_binary removes specks and fills pinholes") {
    GrayImage img = gmtest::art({
        "................",
        ".##########..#..",
        ".##########.....",
        ".####.#####.....",
        ".##########..#..",
        ".##########.....",
        "................",
    });
    const BinaryGlyph cleaned = clean_binary(img, 4);
    REQUIRE(cleaned.at(13, 1) == 255);  // lone speck dropped
    REQUIRE(cleaned.at(13, 4) == 255);
    REQUIRE(cleaned.at(5, 3) == 0);  // pinhole filled
    REQUIRE(cleaned.at(2, 2) == 0);  // body untouched
}
