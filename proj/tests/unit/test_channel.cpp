#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "glyphmark/channel.hpp"
#include "glyphmark/quality.hpp"
#include "testers.hpp"

using namespace glyphmark;

namespace {

GrayImage sample_glyph() {
    GrayImage img(128, 128, 255);
    gmtest::draw_stroke(img, {30, 30}, {98, 30}, 4.0);
    gmtest::draw_stroke(img, {30, 30}, {30, 98}, 4.0);
    gmtest::draw_stroke(img, {30, 98}, {98, 98}, 4.0);
    return img;
}

double mean_of(const GrayImage& img) {
    const auto& p = img.pixels();
    return std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
}

} // namespace

TEST_CASE("noise with zero variance is the identity") {
    const GrayImage img = sample_glyph();
    AttackSpec spec = AttackSpec::parse("gaussian_noise(var=0)");
    spec.seed = 5;
    REQUIRE(apply(img, spec) == img);
}

TEST_CASE("blur leaves a constant image unchanged and preserves the mean") {
    const GrayImage flat(64, 64, 180);
    REQUIRE(apply(flat, AttackSpec::parse("gaussian_blur(k=3)")) == flat);

    const GrayImage img = sample_glyph();
    const GrayImage blurred = apply(img, AttackSpec::parse("gaussian_blur(k=5)"));
    REQUIRE(std::abs(mean_of(blurred) - mean_of(img)) <= 1.0 / 255.0 * 255.0);
}

TEST_CASE("noise preserves the mean within sampling error") {
    const GrayImage flat(128, 128, 128);
    AttackSpec spec = AttackSpec::parse("gaussian_noise(var=0.01)");
    spec.seed = 42;
    const GrayImage noisy = apply(flat, spec);
    const double stddev = std::sqrt(0.01) * 255.0;
    const double tol = 3.0 * stddev / std::sqrt(128.0 * 128.0);
    REQUIRE(std::abs(mean_of(noisy) - 128.0) <= tol);
}

TEST_CASE("attacks are bit-identical under a fixed seed") {
    const GrayImage img = sample_glyph();
    for (const char* text : {"gaussian_noise(var=0.03)", "print_scan", "elastic_morph(preset=light)",
                             "print_camera(angle=25,distance=0.8)"}) {
        AttackSpec spec = AttackSpec::parse(text);
        spec.seed = 1234;
        REQUIRE(apply(img, spec) == apply(img, spec));
    }
}

TEST_CASE("print_camera at angle 0 and distance 1 reduces to print_scan") {
    const GrayImage img = sample_glyph();
    AttackSpec cam = AttackSpec::parse("print_camera(angle=0,distance=1)");
    cam.seed = 77;
    AttackSpec scan = AttackSpec::parse("print_scan");
    scan.seed = 77;
    REQUIRE(apply(img, cam) == apply(img, scan));
}

TEST_CASE("rescale and recompress stay close to the source") {
    const GrayImage img = sample_glyph();
    REQUIRE(psnr(img, apply(img, AttackSpec::parse("rescale(factor=0.75)"))) > 18.0);
    REQUIRE(psnr(img, apply(img, AttackSpec::parse("recompress(quality=90)"))) > 25.0);
}

TEST_CASE("elastic morph displaces pixels but keeps the palette") {
    const GrayImage img = sample_glyph();
    AttackSpec spec = AttackSpec::parse("elastic_morph(preset=strong)");
    spec.seed = 9;
    const GrayImage out = apply(img, spec);
    REQUIRE_FALSE(out == img);
    REQUIRE(out.height() == img.height());
    REQUIRE(out.width() == img.width());
}

TEST_CASE("spec parsing and validation") {
    const AttackSpec s = AttackSpec::parse("gaussian_noise(var=0.03,seed=7)");
    REQUIRE(s.kind == AttackKind::gaussian_noise);
    REQUIRE(s.seed == 7);
    REQUIRE(s.param("var", 0) == Catch::Approx(0.03));
    REQUIRE(s.to_string() == "gaussian_noise(var=0.03)");

    const auto list = parse_attack_list("identity; gaussian_blur(k=3);elastic_morph(preset=light)");
    REQUIRE(list.size() == 3);
    REQUIRE(list[1].kind == AttackKind::gaussian_blur);
    REQUIRE(list[2].param("alpha", 0) == Catch::Approx(1.5));

    REQUIRE_THROWS_AS(AttackSpec::parse("sharpen(k=3)"), ConfigError);
    REQUIRE_THROWS_AS(AttackSpec::parse("gaussian_blur(k"), ConfigError);
    REQUIRE_THROWS_AS(apply(sample_glyph(), AttackSpec::parse("gaussian_noise(var=0.5)")),
                      ConfigError);
    REQUIRE_THROWS_AS(apply(sample_glyph(), AttackSpec::parse("gaussian_blur(k=4)")),
                      ConfigError);
    REQUIRE_THROWS_AS(apply(sample_glyph(), AttackSpec::parse("print_camera(angle=80)")),
                      ConfigError);
}
