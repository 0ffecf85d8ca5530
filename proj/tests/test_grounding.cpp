#include <algorithm>

#include "doctest.h"
#include "roso/error.hpp"
#include "roso/grounding.hpp"
#include "roso/rng.hpp"
#include "support.hpp"

using namespace roso;

namespace {

std::string goal_query(const Scene& s)
{
    const auto& d = s.goal.pick;
    return d.color ? *d.color + " " + d.category : d.category;
}

Scene scene_for(TaskKind k, Split sp, std::uint64_t seed)
{
    TaskSpec t;
    t.kind = k;
    t.split = sp;
    return generate_scene(t, seed, test::catalog());
}

// Independent reference: collect coordinates, take extremes.
Rect brute_frame(const Mask& m)
{
    std::vector<int> us, vs;
    for (int v = 0; v < m.height(); ++v)
        for (int u = 0; u < m.width(); ++u)
            if (m.at(u, v)) {
                us.push_back(u);
                vs.push_back(v);
            }
    const auto [umin, umax] = std::minmax_element(us.begin(), us.end());
    const auto [vmin, vmax] = std::minmax_element(vs.begin(), vs.end());
    return {*umin, *vmin, *umax - *umin + 1, *vmax - *vmin + 1};
}

} // namespace

TEST_CASE("zero-noise detection reproduces the ground-truth instance mask")
{
    GroundingConfig cfg;
    cfg.detection_threshold = 0.5;
    for (TaskKind k : all_task_kinds())
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Scene s = scene_for(k, Split::Seen, seed);
            const auto dets = detect(render_topdown(s), goal_query(s), cfg, test::catalog());
            REQUIRE(!dets.empty());
            const Mask truth = instance_mask(s, s.goal_pick_index());
            CHECK(iou(dets.front().mask, truth) == 1.0);
            CHECK(dets.front().frame == frame_of(truth));
            CHECK(dets.front().label == goal_query(s));
        }
}

TEST_CASE("a threshold above one detects nothing")
{
    GroundingConfig cfg;
    cfg.detection_threshold = 1.01;
    const Scene s = scene_for(TaskKind::PutBlockInBowl, Split::Seen, 3);
    CHECK_THROWS_AS(detect(render_topdown(s), goal_query(s), cfg, test::catalog()), NoDetection);
}

TEST_CASE("raising the threshold only removes detections")
{
    const Scene s = scene_for(TaskKind::PackObject, Split::Seen, 5);
    const RgbdImage img = render_topdown(s);
    std::size_t previous = SIZE_MAX;
    for (double th : {0.0, 0.2, 0.35, 0.5, 0.7, 0.9}) {
        GroundingConfig cfg;
        cfg.detection_threshold = th;
        std::size_t n = 0;
        try {
            n = detect(img, goal_query(s), cfg, test::catalog()).size();
        } catch (const NoDetection&) {
        }
        CHECK(n <= previous);
        previous = n;
    }
}

TEST_CASE("forced misidentification returns the other object")
{
    Scene s = scene_for(TaskKind::PutBlockInBowl, Split::Seen, 1);
    const int goal = s.goal_pick_index();
    const int other = goal == 0 ? 1 : 0;
    s.objects = {s.objects[goal], s.objects[other]};
    GroundingConfig cfg;
    cfg.misidentify_noise = 1.0;
    cfg.detection_threshold = 0.0;
    const auto dets = detect(render_topdown(s), goal_query(s), cfg, test::catalog());
    REQUIRE(dets.size() == 2);
    CHECK(iou(dets.front().mask, instance_mask(s, 1)) == 1.0);
    CHECK(iou(dets.back().mask, instance_mask(s, 0)) == 1.0);
}

TEST_CASE("miss noise drops detections reproducibly (frozen count)")
{
    GroundingConfig cfg;
    cfg.miss_noise = 0.5;
    cfg.noise_seed = 77;
    int misses = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Scene s = scene_for(TaskKind::PutBlockInBowl, Split::Seen, seed);
        const RgbdImage img = render_topdown(s);
        bool first = false, second = false;
        try {
            detect(img, goal_query(s), cfg, test::catalog());
        } catch (const NoDetection&) {
            first = true;
        }
        try {
            detect(img, goal_query(s), cfg, test::catalog());
        } catch (const NoDetection&) {
            second = true;
        }
        CHECK(first == second);
        misses += first;
    }
    CHECK(misses == 20);
}

TEST_CASE("queries")
{
    const auto& cat = test::catalog();
    CHECK(parse_query("red block", cat) == Descriptor{"red", "block"});
    CHECK(parse_query("Spider-man figure", cat) == Descriptor{std::nullopt, "Spider-man figure"});
    CHECK(parse_query("brown box", cat) == Descriptor{"brown", "box"});
    CHECK_THROWS_AS(parse_query("chartreuse block", cat), LookupError);
    CHECK_THROWS_AS(parse_query("", cat), LookupError);
    GroundingConfig bad;
    bad.miss_noise = 1.5;
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("background segmentation")
{
    Scene empty = scene_for(TaskKind::PutBlockInBowl, Split::Seen, 2);
    const Scene full = empty;
    empty.objects.clear();
    const Mask all = segment_background(render_topdown(empty));
    CHECK(all.count() == static_cast<std::size_t>(kImageWidth * kImageHeight));

    const auto ids = instance_map(full);
    const auto covered = std::count_if(ids.begin(), ids.end(), [](int i) { return i >= 0; });
    CHECK(segment_background(render_topdown(full)).count() ==
          static_cast<std::size_t>(kImageWidth * kImageHeight - covered));
}

TEST_CASE("detected frames")
{
    Mask one(20, 10);
    one.set(7, 3);
    CHECK(frame_of(one) == Rect{7, 3, 1, 1});
    CHECK(frame_of(Mask(20, 10, true)) == Rect{0, 0, 20, 10});
    CHECK_THROWS_AS(frame_of(Mask(20, 10)), Error);

    Mask ell(30, 30);
    for (int v = 4; v < 25; ++v)
        ell.set(5, v);
    for (int u = 5; u < 18; ++u)
        ell.set(u, 24);
    CHECK(frame_of(ell) == brute_frame(ell));
    CHECK(frame_of(ell) == Rect{5, 4, 13, 21});

    Rng rng(404);
    for (int i = 0; i < 100; ++i) {
        const int w = rng.range(1, 40), h = rng.range(1, 40);
        Mask m(w, h);
        const double density = rng.uniform(0.001, 0.3);
        for (std::size_t j = 0; j < m.size(); ++j)
            m.set_index(j, rng.bernoulli(density));
        if (m.empty())
            m.set(rng.range(0, w - 1), rng.range(0, h - 1));
        CHECK(frame_of(m) == brute_frame(m));
    }
}

TEST_CASE("detections CSV")
{
    const Scene s = scene_for(TaskKind::PutBlockInBowl, Split::Seen, 4);
    const auto dets = detect(render_topdown(s), goal_query(s), GroundingConfig{}, test::catalog());
    const std::string csv = detections_csv(dets);
    CHECK(csv.rfind("label,confidence,x0,y0,width,height,mask_area\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(dets.size() + 1));
}
