#include <set>

#include "doctest.h"
#include "roso/error.hpp"
#include "roso/grounding.hpp"
#include "roso/imgmetrics.hpp"
#include "roso/inpaint.hpp"
#include "support.hpp"

using namespace roso;

namespace {

struct Fixture {
    Scene scene;
    RgbdImage image;
    Mask mask;
};

Fixture goal_block(std::uint64_t seed)
{
    TaskSpec t;
    Fixture f;
    f.scene = generate_scene(t, seed, test::catalog());
    f.image = render_topdown(f.scene);
    f.mask = instance_mask(f.scene, f.scene.goal_pick_index());
    return f;
}

EditRequest request(const Fixture& f, EditTarget target, std::uint64_t seed, EditMode mode = EditMode::DetectedFrame)
{
    EditRequest r;
    r.image = f.image;
    r.mask = f.mask;
    r.mode = mode;
    r.target = std::move(target);
    r.seed = seed;
    return r;
}

std::vector<std::uint8_t> inside(const RgbImage& img, const Mask& m)
{
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.at_index(i))
            out.insert(out.end(), img.pixels.begin() + 3 * i, img.pixels.begin() + 3 * i + 3);
    return out;
}

} // namespace

TEST_CASE("recoloring a block to brown")
{
    const Fixture f = goal_block(7);
    const auto res = inpaint(request(f, {TargetKind::Color, "brown"}, 1), FidelityModel{}, test::catalog());
    double L = 0, a = 0, b = 0;
    std::size_t n = 0;
    for (int v = 0; v < f.image.height(); ++v)
        for (int u = 0; u < f.image.width(); ++u) {
            if (f.mask.at(u, v)) {
                const Lab x = srgb_to_lab(res.image.rgb.at(u, v));
                L += x.L, a += x.a, b += x.b, ++n;
            } else {
                CHECK(res.image.rgb.at(u, v) == f.image.rgb.at(u, v));
            }
        }
    REQUIRE(n > 0);
    CHECK(delta_e({L / n, a / n, b / n}, test::catalog().palette.at("brown").lab) <= 5.0);
    CHECK(res.image.depth == f.image.depth);
    CHECK_FALSE(res.degraded);
}

TEST_CASE("variants are reproducible and bounded by variability")
{
    const Fixture f = goal_block(3);
    const EditTarget target{TargetKind::Category, "Pepsi wild cherry box"};
    const auto a = inpaint(request(f, target, 5), FidelityModel{}, test::catalog());
    const auto b = inpaint(request(f, target, 5), FidelityModel{}, test::catalog());
    CHECK(a.image == b.image);

    std::set<std::vector<std::uint8_t>> renders;
    std::set<int> variants;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        EditRequest r = request(f, target, seed);
        r.variability = 3;
        const auto res = inpaint(r, FidelityModel{}, test::catalog());
        renders.insert(inside(res.image.rgb, f.mask));
        variants.insert(res.variant);
    }
    CHECK(renders.size() == 3);
    CHECK(variants == std::set<int>{0, 1, 2});
}

TEST_CASE("edits are local and keep depth across 200 seeded requests")
{
    const std::vector<EditTarget> targets = {{TargetKind::Color, "green"},
                                             {TargetKind::Color, "yellow"},
                                             {TargetKind::Category, "Spider-man figure"},
                                             {TargetKind::Category, "scissors"}};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Fixture f = goal_block(seed);
        const EditMode mode = seed % 2 ? EditMode::WholeImage : EditMode::DetectedFrame;
        const auto res = inpaint(request(f, targets[seed % targets.size()], seed, mode), FidelityModel{},
                                 test::catalog());
        CHECK(res.image.depth == f.image.depth);
        std::size_t outside_changes = 0;
        for (std::size_t i = 0; i < f.mask.size(); ++i)
            if (!f.mask.at_index(i))
                for (int c = 0; c < 3; ++c)
                    outside_changes += res.image.rgb.pixels[3 * i + c] != f.image.rgb.pixels[3 * i + c];
        CHECK(outside_changes == 0);
    }
}

TEST_CASE("edited regions keep the object's shape against the background")
{
    const Fixture f = goal_block(11);
    const Rgb bg = f.scene.background;
    const auto res = inpaint(request(f, {TargetKind::Color, "gray"}, 2), FidelityModel{}, test::catalog());
    for (std::size_t i = 0; i < f.mask.size(); ++i)
        if (f.mask.at_index(i)) {
            const Rgb px{res.image.rgb.pixels[3 * i], res.image.rgb.pixels[3 * i + 1], res.image.rgb.pixels[3 * i + 2]};
            CHECK_FALSE(px == bg);
        }
}

TEST_CASE("whole-image edits of small frames are degraded and less sharp")
{
    int degraded = 0;
    double sharp_frame = 0, sharp_whole = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Fixture f = goal_block(seed);
        const Rect tight = frame_of(f.mask);
        const Rect frame{tight.x0 - 2, tight.y0 - 2, tight.width + 4, tight.height + 4};
        const EditTarget target{TargetKind::Color, "cyan"};
        const auto det = inpaint(request(f, target, seed, EditMode::DetectedFrame), FidelityModel{}, test::catalog());
        const auto whole = inpaint(request(f, target, seed, EditMode::WholeImage), FidelityModel{}, test::catalog());
        degraded += whole.degraded;
        CHECK_FALSE(det.degraded);
        const double e_det = gradient_energy(det.image.rgb, frame);
        const double e_whole = gradient_energy(whole.image.rgb, frame);
        CHECK(e_whole < e_det);
        sharp_frame += e_det;
        sharp_whole += e_whole;
    }
    CHECK(degraded == 100);
    CHECK(sharp_whole < sharp_frame);

    // No degradation once the frame is large enough.
    const Fixture f = goal_block(1);
    FidelityModel lenient;
    lenient.min_frame_pixels = 1;
    CHECK_FALSE(inpaint(request(f, {TargetKind::Color, "cyan"}, 0, EditMode::WholeImage), lenient, test::catalog())
                    .degraded);
}

TEST_CASE("category targets reflect declared alignment")
{
    const auto& cat = test::catalog();
    const auto& spider = cat.vocabulary.at("Spider-man figure");
    const Appearance edited = target_appearance({TargetKind::Category, "Spider-man figure"}, 0, cat);
    const double shift = delta_e(edited.mean_lab(), spider.appearance->mean_lab());
    CHECK(shift > 0.0);
    CHECK(shift <= (1.0 - spider.alignment) * 60.0 + 3.0);
    CHECK(target_appearance({TargetKind::Color, "red"}, 0, cat).base == cat.palette.at("red").rgb);
}

TEST_CASE("edit errors")
{
    const Fixture f = goal_block(2);
    CHECK_THROWS_AS(inpaint(request(f, {TargetKind::Color, "chartreuse"}, 0), FidelityModel{}, test::catalog()),
                    EditError);
    CHECK_THROWS_AS(inpaint(request(f, {TargetKind::Category, "unicorn"}, 0), FidelityModel{}, test::catalog()),
                    EditError);
    EditRequest empty = request(f, {TargetKind::Color, "red"}, 0);
    empty.mask = Mask(f.image.width(), f.image.height());
    CHECK_THROWS_AS(inpaint(empty, FidelityModel{}, test::catalog()), EditError);
}

TEST_CASE("background recoloring")
{
    const Fixture f = goal_block(9);
    const Mask bg = segment_background(f.image);
    const Rgb lime = test::catalog().palette.at("lime").rgb;
    const Rgb dark = test::catalog().palette.at("darkgray").rgb;

    const RgbdImage on_lime = recolor_background(f.image, bg, lime);
    const RgbdImage back = recolor_background(on_lime, segment_background(on_lime), test::catalog());
    for (std::size_t i = 0; i < bg.size(); ++i)
        if (bg.at_index(i)) {
            CHECK(Rgb{back.rgb.pixels[3 * i], back.rgb.pixels[3 * i + 1], back.rgb.pixels[3 * i + 2]} == dark);
        }
    CHECK(back == f.image); // scene was rendered on darkgray
    CHECK(recolor_background(back, segment_background(back), test::catalog()) == back);
    CHECK(on_lime.depth == f.image.depth);
}

TEST_CASE("edit sidecar")
{
    const Fixture f = goal_block(2);
    EditRequest r = request(f, {TargetKind::Color, "red"}, 9);
    r.variability = 2;
    const auto res = inpaint(r, FidelityModel{}, test::catalog());
    const std::string side = edit_sidecar(r, res);
    CHECK(side.find("mode detected-frame\n") != std::string::npos);
    CHECK(side.find("target color red\n") != std::string::npos);
    CHECK(side.find("seed 9\n") != std::string::npos);
}
