#include <set>
#include <sstream>

#include "doctest.h"
#include "roso/error.hpp"
#include "roso/tabletop.hpp"
#include "roso/text.hpp"
#include "support.hpp"

using namespace roso;

namespace {

Scene empty_scene(TaskKind task = TaskKind::PutBlockInBowl)
{
    Scene s;
    s.task = task;
    s.background_name = "darkgray";
    s.background = test::catalog().palette.at("darkgray").rgb;
    return s;
}

ObjectSpec fixture(const std::string& category, const std::string& color, double x, double y)
{
    const auto& cat = test::catalog();
    const auto& kind = cat.vocabulary.at(category);
    ObjectSpec o;
    o.category = category;
    o.color = color;
    o.footprint = kind.footprint;
    o.appearance = kind.appearance.value_or(Appearance{cat.palette.at(color).rgb, TextureKind::Plain, {}});
    o.height = kind.height;
    o.volume = kind.footprint.area() * kind.height;
    o.pose = {x, y, 0.0};
    return o;
}

Scene block_and_bowls()
{
    Scene s = empty_scene();
    s.objects.push_back(fixture("block", "red", 0.2, 0.2));
    s.objects.push_back(fixture("bowl", "blue", 0.6, 0.25));
    s.objects.push_back(fixture("bowl", "green", 0.8, 0.25));
    for (int i = 0; i < 3; ++i)
        s.objects[i].id = i;
    s.goal = {{"red", "block"}, {"blue", "bowl"}};
    return s;
}

Action action_between(Vec2 from, Vec2 to)
{
    return {table_to_pixel(from), table_to_pixel(to)};
}

} // namespace

TEST_CASE("seen block-in-bowl goals use seen colors only")
{
    TaskSpec t;
    const auto& pal = test::catalog().palette;
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL, 1234ULL}) {
        const Scene s = generate_scene(t, seed, test::catalog());
        REQUIRE(s.goal.pick.color);
        REQUIRE(s.goal.place.color);
        CHECK(pal.at(*s.goal.pick.color).in_split(Split::Seen));
        CHECK(pal.at(*s.goal.place.color).in_split(Split::Seen));
        CHECK(s.background_name == "darkgray");
    }
}

TEST_CASE("unseen-background packing never uses the training background")
{
    TaskSpec t;
    t.kind = TaskKind::PackObjectUnseenBackground;
    t.split = Split::Unseen;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scene s = generate_scene(t, seed, test::catalog());
        CHECK(s.background_name != "darkgray");
        CHECK(s.background != test::catalog().palette.at("darkgray").rgb);
    }
}

TEST_CASE("scene generation and serialization are deterministic")
{
    TaskSpec t;
    const Scene a = generate_scene(t, 7, test::catalog());
    const Scene b = generate_scene(t, 7, test::catalog());
    CHECK(serialize_scene(a) == serialize_scene(b));
    CHECK(parse_scene(serialize_scene(a)) == a);

    for (TaskKind k : all_task_kinds())
        for (Split sp : {Split::Seen, Split::Unseen}) {
            TaskSpec ts;
            ts.kind = k;
            ts.split = sp;
            const Scene s = generate_scene(ts, 99, test::catalog());
            CHECK(parse_scene(serialize_scene(s)) == s);
        }
    CHECK_THROWS_AS(parse_scene("not a scene"), DataError);
}

TEST_CASE("requesting more distractors than the vocabulary holds fails")
{
    TaskSpec t;
    t.min_distractors = 40;
    t.max_distractors = 40;
    CHECK_THROWS_AS(generate_scene(t, 1, test::catalog()), GenerationError);
}

TEST_CASE("rendering")
{
    SUBCASE("empty scene is uniform background with zero depth")
    {
        const Scene s = empty_scene();
        const RgbdImage img = render_topdown(s);
        CHECK(img.width() == kImageWidth);
        CHECK(img.height() == kImageHeight);
        CHECK(img.rgb == RgbImage(kImageWidth, kImageHeight, s.background));
        for (float d : img.depth.values)
            CHECK(d == 0.0f);
    }
    SUBCASE("a 10x10 pixel block covers exactly its rasterized pixels")
    {
        Scene s = empty_scene();
        ObjectSpec b = fixture("block", "red", 100.0 / kPixelsPerUnit, 50.0 / kPixelsPerUnit);
        b.footprint = Footprint(RectShape{10.0 / kPixelsPerUnit, 10.0 / kPixelsPerUnit});
        b.height = 0.04;
        s.objects.push_back(b);
        const RgbdImage img = render_topdown(s);
        int covered = 0;
        for (int v = 0; v < img.height(); ++v)
            for (int u = 0; u < img.width(); ++u) {
                const bool inside = u >= 95 && u < 105 && v >= 45 && v < 55;
                CHECK((img.depth.at(u, v) == 0.04f) == inside);
                covered += inside;
            }
        CHECK(covered == 100);
        CHECK(render_topdown(s) == img);
    }
}

TEST_CASE("pixel and table coordinates")
{
    CHECK(pixel_to_table({0, 0}) == Vec2{0.5 / 320, 0.5 / 320});
    for (int u : {0, 17, 319})
        for (int v : {0, 80, 159})
            CHECK(table_to_pixel(pixel_to_table({u, v})) == Pixel{u, v});
}

TEST_CASE("suction pick and place")
{
    const Scene s = block_and_bowls();
    const ExecutionConfig clean{0.0};

    SUBCASE("pick on bare table misses")
    {
        const auto r = apply_action(s, action_between({0.05, 0.45}, {0.6, 0.25}), clean, 1);
        CHECK(r.outcome == ExecutionOutcome::GraspMiss);
        CHECK(r.scene == s);
        CHECK(r.moved_index == -1);
    }
    SUBCASE("block centroid moves onto the bowl centroid")
    {
        const Pixel to = table_to_pixel({0.6, 0.25});
        const auto r = apply_action(s, {table_to_pixel({0.2, 0.2}), to}, clean, 1);
        CHECK(r.outcome == ExecutionOutcome::Grasped);
        CHECK(r.scene.objects[0].pose.x == pixel_to_table(to).x);
        CHECK(r.scene.objects[0].pose.y == pixel_to_table(to).y);
        CHECK(score_put_block(r.scene) == 1.0);
    }
}

TEST_CASE("drops follow the frozen seeded stream")
{
    std::set<std::uint64_t> expected;
    std::istringstream in(test::read_fixture("drop_stream_p030.txt"));
    for (std::uint64_t x; in >> x;)
        expected.insert(x);
    REQUIRE(!expected.empty());

    const Scene s = block_and_bowls();
    const Action a = action_between({0.2, 0.2}, {0.6, 0.25});
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CAPTURE(seed);
        const auto r1 = apply_action(s, a, ExecutionConfig{0.3}, seed);
        const auto r2 = apply_action(s, a, ExecutionConfig{0.3}, seed);
        CHECK((r1.outcome == ExecutionOutcome::Dropped) == (expected.count(seed) == 1));
        CHECK(r1.scene == r2.scene);
    }
}

TEST_CASE("block-in-bowl scoring")
{
    Scene s = block_and_bowls();
    CHECK(score_put_block(s) == 0.0); // outside every bowl
    s.objects[0].pose = s.objects[1].pose;
    CHECK(score_put_block(s) == 1.0);
    s.objects[0].pose = s.objects[2].pose; // wrong-color bowl
    CHECK(score_put_block(s) == 0.0);
    s.objects.erase(s.objects.begin());
    CHECK_THROWS_AS(score_put_block(s), ScoringError);
}

TEST_CASE("packing scoring weighs by volume")
{
    Scene s = empty_scene(TaskKind::PackObject);
    ObjectSpec box = fixture("box", "brown", 0.7, 0.25);
    box.id = 0;
    s.objects.push_back(box);
    ObjectSpec a = fixture("block", "red", 0.2, 0.1);
    a.category = "widget";
    a.volume = 2.0;
    ObjectSpec b = a;
    b.volume = 1.0;
    b.pose = {0.2, 0.4, 0.0};
    s.objects.push_back(a);
    s.objects.push_back(b);
    s.goal = {{std::nullopt, "widget"}, {"brown", "box"}};

    CHECK(score_packing(s) == 0.0);
    s.objects[1].pose = box.pose;
    CHECK(score_packing(s) == doctest::Approx(2.0 / 3.0));
    s.objects[2].pose = {0.72, 0.26, 0.0};
    CHECK(score_packing(s) == 1.0);

    s.goal.pick.category = "missing";
    CHECK_THROWS_AS(score_packing(s), ScoringError);
}

TEST_CASE("task names round trip")
{
    for (TaskKind k : all_task_kinds())
        CHECK(parse_task_kind(to_string(k)) == k);
    CHECK(all_task_kinds().size() == 4);
    CHECK_THROWS_AS(parse_task_kind("stack-blocks"), DataError);
}
