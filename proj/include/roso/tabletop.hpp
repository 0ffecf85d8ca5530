#pragma once

// Deterministic 2.5-D tabletop: scene generation for the block-in-bowl and
// packing task families, orthographic RGB-D rendering, suction
// pick-and-place and reward scoring.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roso/geometry.hpp"
#include "roso/image.hpp"
#include "roso/vocabulary.hpp"

namespace roso {

enum class TaskKind { PutBlockInBowl, PackObject, PackObjectUnseenBackground, PackUnseenObjectUnseenBackground };

std::string_view to_string(TaskKind k);
TaskKind parse_task_kind(std::string_view s);
const std::vector<TaskKind>& all_task_kinds();

inline bool is_packing(TaskKind k) { return k != TaskKind::PutBlockInBowl; }

struct TaskSpec {
    TaskKind kind = TaskKind::PutBlockInBowl;
    Split split = Split::Seen;
    // Optional forced goal (colormap construction, tests).
    std::optional<std::string> pick_color;
    std::optional<std::string> place_color;
    std::optional<std::string> pick_object;
    int min_distractors = 2;
    int max_distractors = 4;

    // Objects drawn from the unseen packing vocabulary.
    bool unseen_objects() const
    {
        return split == Split::Unseen &&
               (kind == TaskKind::PackObject || kind == TaskKind::PackUnseenObjectUnseenBackground);
    }
    // Background replaced by a random non-training color.
    bool unseen_background() const
    {
        return split == Split::Unseen && (kind == TaskKind::PackObjectUnseenBackground ||
                                          kind == TaskKind::PackUnseenObjectUnseenBackground);
    }
};

/// What an instruction slot refers to: an optional color plus a category.
struct Descriptor {
    std::optional<std::string> color;
    std::string category;
    friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

struct Goal {
    Descriptor pick;
    Descriptor place;
    friend bool operator==(const Goal&, const Goal&) = default;
};

struct ObjectSpec {
    int id = 0;
    std::string category;
    std::optional<std::string> color; // palette name for fixtures
    Footprint footprint;
    Appearance appearance;
    Pose pose;
    double height = 0.0;
    double volume = 0.0;
    Split split = Split::Seen;

    bool contains(Vec2 world) const { return footprint.contains(pose, world); }
    bool matches(const Descriptor& d) const { return category == d.category && (!d.color || color == d.color); }
    friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct Scene {
    TaskKind task = TaskKind::PutBlockInBowl;
    Split split = Split::Seen;
    double width = kTableWidth;
    double height = kTableHeight;
    std::string background_name;
    Rgb background;
    std::vector<ObjectSpec> objects;
    Goal goal;
    std::uint64_t seed = 0;

    const ObjectSpec* find_object(int id) const;
    // Index into objects of the unique goal pick object / place receptacle.
    int goal_pick_index() const;  // throws ScoringError when absent
    int goal_place_index() const; // throws ScoringError when absent
    friend bool operator==(const Scene&, const Scene&) = default;
};

Scene generate_scene(const TaskSpec& task, std::uint64_t seed, const Catalog& catalog);

// Pixel-center <-> table coordinates.
Vec2 pixel_to_table(Pixel p);
Pixel table_to_pixel(Vec2 t);

RgbdImage render_topdown(const Scene& scene);
// Per-pixel index into scene.objects of the topmost object, -1 on bare table.
std::vector<int> instance_map(const Scene& scene);
Mask instance_mask(const Scene& scene, int object_index);

struct Action {
    Pixel pick;
    Pixel place;
    Vec2 pick_table() const { return pixel_to_table(pick); }
    Vec2 place_table() const { return pixel_to_table(place); }
    friend bool operator==(const Action&, const Action&) = default;
};

enum class ExecutionOutcome { Grasped, GraspMiss, Dropped };
std::string_view to_string(ExecutionOutcome o);

struct ExecutionConfig {
    double p_exec = 0.0; // probability a grasped object is dropped mid-transfer
};

struct ActionResult {
    Scene scene;
    ExecutionOutcome outcome = ExecutionOutcome::GraspMiss;
    int moved_index = -1;
};

// exec_seed drives the drop decision; the draw happens whether or not the
// grasp succeeds, so it depends only on the seed.
ActionResult apply_action(const Scene& scene, const Action& action, const ExecutionConfig& exec,
                          std::uint64_t exec_seed);

// Topmost object whose footprint strictly contains the table point, or -1.
int object_at(const Scene& scene, Vec2 world);

double score_put_block(const Scene& scene);
double score_packing(const Scene& scene);
double score(const Scene& scene);

std::string serialize_scene(const Scene& scene);
Scene parse_scene(std::string_view text);

} // namespace roso
