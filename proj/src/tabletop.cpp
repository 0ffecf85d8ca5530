#include "roso/tabletop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roso/error.hpp"
#include "roso/rng.hpp"
#include "roso/text.hpp"

namespace roso {

namespace {

constexpr double kGap = 2.0 / kPixelsPerUnit; // minimum clearance between footprints
constexpr int kPlacementTries = 2000;

const std::vector<std::pair<TaskKind, std::string_view>>& task_names()
{
    static const std::vector<std::pair<TaskKind, std::string_view>> names = {
        {TaskKind::PutBlockInBowl, "put-block-in-bowl"},
        {TaskKind::PackObject, "pack-object"},
        {TaskKind::PackObjectUnseenBackground, "pack-object-unseen-background"},
        {TaskKind::PackUnseenObjectUnseenBackground, "pack-unseen-object-unseen-background"},
    };
    return names;
}

class SceneBuilder {
public:
    SceneBuilder(Scene& scene, Rng& rng) : scene_(scene), rng_(rng) {}

    // Places obj at a random collision-free pose; rotate=false keeps theta 0.
    void place(ObjectSpec obj, bool rotate)
    {
        const double r = obj.footprint.bounding_radius();
        for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
            Pose p;
            p.theta = rotate ? rng_.uniform(0.0, 2.0 * std::numbers::pi) : 0.0;
            p.x = rng_.uniform(r, scene_.width - r);
            p.y = rng_.uniform(r, scene_.height - r);
            if (!fits(obj, p))
                continue;
            obj.pose = p;
            obj.id = static_cast<int>(scene_.objects.size());
            scene_.objects.push_back(std::move(obj));
            return;
        }
        throw GenerationError("could not place object without overlap: " + obj.category);
    }

private:
    bool fits(const ObjectSpec& obj, const Pose& p) const
    {
        double x0, y0, x1, y1;
        obj.footprint.world_bounds(p, x0, y0, x1, y1);
        if (x0 <= 0.0 || y0 <= 0.0 || x1 >= scene_.width || y1 >= scene_.height)
            return false;
        const double r = obj.footprint.bounding_radius();
        for (const auto& other : scene_.objects) {
            const double need = r + other.footprint.bounding_radius() + kGap;
            if (std::hypot(p.x - other.pose.x, p.y - other.pose.y) < need)
                return false;
        }
        return true;
    }

    Scene& scene_;
    Rng& rng_;
};

ObjectSpec make_fixture(const Catalog& cat, const std::string& category, const std::string& color)
{
    const auto& kind = cat.vocabulary.at(category);
    const auto& entry = cat.palette.at(color);
    ObjectSpec o;
    o.category = category;
    o.color = color;
    o.footprint = kind.footprint;
    o.appearance = kind.appearance.value_or(Appearance{entry.rgb, TextureKind::Plain, {}});
    if (!kind.appearance)
        o.appearance.base = entry.rgb;
    o.height = kind.height;
    o.volume = kind.footprint.area() * kind.height;
    o.split = cat.palette.is_seen_color(color) ? Split::Seen : Split::Unseen;
    return o;
}

ObjectSpec make_packing_object(const Catalog& cat, const std::string& category)
{
    const auto& kind = cat.vocabulary.at(category);
    ObjectSpec o;
    o.category = category;
    o.footprint = kind.footprint;
    o.appearance = *kind.appearance;
    o.height = kind.height;
    o.volume = kind.footprint.area() * kind.height;
    o.split = kind.cls == ObjectClass::Unseen ? Split::Unseen : Split::Seen;
    return o;
}

template <class T>
T take_random(std::vector<T>& pool, Rng& rng)
{
    const auto i = rng.below(pool.size());
    T v = std::move(pool[i]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    return v;
}

void generate_block_in_bowl(const TaskSpec& task, const Catalog& cat, Rng& rng, Scene& scene)
{
    const auto colors = cat.palette.split_colors(task.split);
    const std::string pick = task.pick_color.value_or(colors[rng.below(colors.size())]);
    const std::string place = task.place_color.value_or(colors[rng.below(colors.size())]);
    cat.palette.at(pick);
    cat.palette.at(place);
    scene.goal = {{pick, "block"}, {place, "bowl"}};

    const int k = rng.range(task.min_distractors, task.max_distractors);
    std::vector<std::string> block_pool, bowl_pool;
    for (const auto& c : colors) {
        if (c != pick)
            block_pool.push_back(c);
        if (c != place)
            bowl_pool.push_back(c);
    }

    SceneBuilder builder(scene, rng);
    builder.place(make_fixture(cat, "bowl", place), false);
    builder.place(make_fixture(cat, "block", pick), true);
    for (int i = 0; i < k; ++i) {
        const bool is_block = rng.bernoulli(0.5);
        auto& pool = is_block ? block_pool : bowl_pool;
        if (pool.empty())
            throw GenerationError("distractor colors exhausted for split " + std::string(to_string(task.split)));
        const auto color = take_random(pool, rng);
        builder.place(make_fixture(cat, is_block ? "block" : "bowl", color), is_block);
    }
}

void generate_packing(const TaskSpec& task, const Catalog& cat, Rng& rng, Scene& scene)
{
    const Split object_split = task.unseen_objects() ? Split::Unseen : Split::Seen;
    auto pool = cat.vocabulary.packing_objects(object_split);
    std::string goal;
    if (task.pick_object) {
        goal = *task.pick_object;
        cat.vocabulary.at(goal);
        std::erase(pool, goal);
    } else {
        goal = take_random(pool, rng);
    }
    scene.goal = {{std::nullopt, goal}, {"brown", "box"}};

    if (task.unseen_background()) {
        const auto bgs = cat.palette.backgrounds();
        scene.background_name = bgs[rng.below(bgs.size())];
        scene.background = cat.palette.at(scene.background_name).rgb;
    }

    const int k = rng.range(task.min_distractors, task.max_distractors);
    if (static_cast<std::size_t>(k) > pool.size())
        throw GenerationError("requested more distractors than the split vocabulary provides");

    SceneBuilder builder(scene, rng);
    builder.place(make_fixture(cat, "box", "brown"), false);
    builder.place(make_packing_object(cat, goal), true);
    for (int i = 0; i < k; ++i)
        builder.place(make_packing_object(cat, take_random(pool, rng)), true);
}

int topmost_at(const Scene& scene, Vec2 w)
{
    int best = -1;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& o = scene.objects[i];
        if (o.contains(w) && (best < 0 || o.height > scene.objects[best].height))
            best = static_cast<int>(i);
    }
    return best;
}

std::string shape_text(const Footprint& f)
{
    if (const auto* r = std::get_if<RectShape>(&f.shape()))
        return "rect " + text::format_double(r->width) + " " + text::format_double(r->height);
    if (const auto* d = std::get_if<DiscShape>(&f.shape()))
        return "disc " + text::format_double(d->radius);
    std::string s = "poly";
    for (const auto& v : std::get<PolygonShape>(f.shape()).vertices)
        s += " " + text::format_double(v.x) + "," + text::format_double(v.y);
    return s;
}

Footprint parse_shape_exact(const std::string& s)
{
    const auto w = text::split_ws(s);
    if (w.empty())
        throw DataError("empty shape");
    if (w[0] == "rect" && w.size() == 3)
        return Footprint(RectShape{text::parse_double(w[1]), text::parse_double(w[2])});
    if (w[0] == "disc" && w.size() == 2)
        return Footprint(DiscShape{text::parse_double(w[1])});
    if (w[0] == "poly") {
        PolygonShape p;
        for (std::size_t i = 1; i < w.size(); ++i) {
            const auto xy = text::split(w[i], ',');
            if (xy.size() != 2)
                throw DataError("bad vertex: " + w[i]);
            p.vertices.push_back({text::parse_double(xy[0]), text::parse_double(xy[1])});
        }
        // Already centered when serialized; keep vertices bit-exact.
        return Footprint(std::move(p));
    }
    throw DataError("bad shape: " + s);
}

Rgb parse_rgb_words(const std::string& s)
{
    const auto w = text::split_ws(s);
    if (w.size() != 3)
        throw DataError("expected r g b: " + s);
    auto ch = [](const std::string& x) { return static_cast<std::uint8_t>(std::clamp(text::parse_int(x), 0, 255)); };
    return {ch(w[0]), ch(w[1]), ch(w[2])};
}

std::string descriptor_text(const Descriptor& d)
{
    return (d.color ? *d.color : std::string("-")) + " | " + d.category;
}

Descriptor parse_descriptor(const std::vector<std::string>& f, std::size_t i)
{
    Descriptor d;
    if (f.at(i) != "-")
        d.color = f[i];
    d.category = f.at(i + 1);
    return d;
}

} // namespace

std::string_view to_string(TaskKind k)
{
    for (const auto& [kind, name] : task_names())
        if (kind == k)
            return name;
    return "?";
}

TaskKind parse_task_kind(std::string_view s)
{
    for (const auto& [kind, name] : task_names())
        if (name == s)
            return kind;
    throw DataError("unknown task: " + std::string(s));
}

const std::vector<TaskKind>& all_task_kinds()
{
    static const std::vector<TaskKind> kinds = {TaskKind::PutBlockInBowl, TaskKind::PackObject,
                                                TaskKind::PackObjectUnseenBackground,
                                                TaskKind::PackUnseenObjectUnseenBackground};
    return kinds;
}

std::string_view to_string(ExecutionOutcome o)
{
    switch (o) {
    case ExecutionOutcome::Grasped:
        return "grasped";
    case ExecutionOutcome::GraspMiss:
        return "grasp-miss";
    case ExecutionOutcome::Dropped:
        return "dropped";
    }
    return "?";
}

const ObjectSpec* Scene::find_object(int id) const
{
    for (const auto& o : objects)
        if (o.id == id)
            return &o;
    return nullptr;
}

int Scene::goal_pick_index() const
{
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (objects[i].matches(goal.pick))
            return static_cast<int>(i);
    throw ScoringError("goal pick object absent from scene");
}

int Scene::goal_place_index() const
{
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (objects[i].matches(goal.place))
            return static_cast<int>(i);
    throw ScoringError("goal receptacle absent from scene");
}

Scene generate_scene(const TaskSpec& task, std::uint64_t seed, const Catalog& catalog)
{
    if (task.min_distractors < 0 || task.max_distractors < task.min_distractors)
        throw GenerationError("bad distractor range");
    Rng rng(mix_seed(seed, "scene"));
    Scene scene;
    scene.task = task.kind;
    scene.split = task.split;
    scene.seed = seed;
    const auto& bg = catalog.palette.train_background();
    scene.background_name = bg.name;
    scene.background = bg.rgb;
    if (task.kind == TaskKind::PutBlockInBowl)
        generate_block_in_bowl(task, catalog, rng, scene);
    else
        generate_packing(task, catalog, rng, scene);
    return scene;
}

Vec2 pixel_to_table(Pixel p)
{
    return {(p.u + 0.5) / kPixelsPerUnit, (p.v + 0.5) / kPixelsPerUnit};
}

Pixel table_to_pixel(Vec2 t)
{
    return {static_cast<int>(std::floor(t.x * kPixelsPerUnit)), static_cast<int>(std::floor(t.y * kPixelsPerUnit))};
}

std::vector<int> instance_map(const Scene& scene)
{
    const int w = static_cast<int>(std::lround(scene.width * kPixelsPerUnit));
    const int h = static_cast<int>(std::lround(scene.height * kPixelsPerUnit));
    std::vector<int> ids(static_cast<std::size_t>(w) * h, -1);
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& o = scene.objects[i];
        double x0, y0, x1, y1;
        o.footprint.world_bounds(o.pose, x0, y0, x1, y1);
        const int u0 = std::max(0, static_cast<int>(std::floor(x0 * kPixelsPerUnit)) - 1);
        const int v0 = std::max(0, static_cast<int>(std::floor(y0 * kPixelsPerUnit)) - 1);
        const int u1 = std::min(w - 1, static_cast<int>(std::ceil(x1 * kPixelsPerUnit)) + 1);
        const int v1 = std::min(h - 1, static_cast<int>(std::ceil(y1 * kPixelsPerUnit)) + 1);
        for (int v = v0; v <= v1; ++v) {
            for (int u = u0; u <= u1; ++u) {
                if (!o.contains(pixel_to_table({u, v})))
                    continue;
                int& slot = ids[static_cast<std::size_t>(v) * w + u];
                if (slot < 0 || o.height > scene.objects[slot].height)
                    slot = static_cast<int>(i);
            }
        }
    }
    return ids;
}

Mask instance_mask(const Scene& scene, int object_index)
{
    const auto ids = instance_map(scene);
    const int w = static_cast<int>(std::lround(scene.width * kPixelsPerUnit));
    const int h = static_cast<int>(std::lround(scene.height * kPixelsPerUnit));
    Mask m(w, h);
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == object_index)
            m.set_index(i);
    return m;
}

RgbdImage render_topdown(const Scene& scene)
{
    const auto ids = instance_map(scene);
    const int w = static_cast<int>(std::lround(scene.width * kPixelsPerUnit));
    const int h = static_cast<int>(std::lround(scene.height * kPixelsPerUnit));
    RgbdImage img{RgbImage(w, h, scene.background), DepthMap(w, h, 0.0f)};
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const int id = ids[static_cast<std::size_t>(v) * w + u];
            if (id < 0)
                continue;
            const auto& o = scene.objects[id];
            img.rgb.set(u, v, o.appearance.at_column(u));
            img.depth.at(u, v) = static_cast<float>(o.height);
        }
    }
    return img;
}

int object_at(const Scene& scene, Vec2 world)
{
    return topmost_at(scene, world);
}

ActionResult apply_action(const Scene& scene, const Action& action, const ExecutionConfig& exec,
                          std::uint64_t exec_seed)
{
    Rng rng(mix_seed(exec_seed, "execution"));
    const bool drop = rng.bernoulli(exec.p_exec);
    const double t = rng.uniform(0.25, 0.75);
    const double jx = rng.uniform(-0.02, 0.02);
    const double jy = rng.uniform(-0.02, 0.02);

    ActionResult result{scene, ExecutionOutcome::GraspMiss, -1};
    const int idx = topmost_at(scene, action.pick_table());
    if (idx < 0)
        return result;

    auto& obj = result.scene.objects[idx];
    const Vec2 target = action.place_table();
    if (drop) {
        const Vec2 from{obj.pose.x, obj.pose.y};
        const Vec2 at = from + t * (target - from) + Vec2{jx, jy};
        obj.pose.x = std::clamp(at.x, 0.0, scene.width);
        obj.pose.y = std::clamp(at.y, 0.0, scene.height);
        result.outcome = ExecutionOutcome::Dropped;
    } else {
        obj.pose.x = target.x;
        obj.pose.y = target.y;
        result.outcome = ExecutionOutcome::Grasped;
    }
    result.moved_index = idx;
    return result;
}

double score_put_block(const Scene& scene)
{
    if (scene.task != TaskKind::PutBlockInBowl)
        throw ScoringError("score_put_block on a packing scene");
    const auto& block = scene.objects[scene.goal_pick_index()];
    const auto& bowl = scene.objects[scene.goal_place_index()];
    return bowl.contains({block.pose.x, block.pose.y}) ? 1.0 : 0.0;
}

double score_packing(const Scene& scene)
{
    if (!is_packing(scene.task))
        throw ScoringError("score_packing on a block-in-bowl scene");
    const auto& box = scene.objects[scene.goal_place_index()];
    double packed = 0.0, total = 0.0;
    for (const auto& o : scene.objects) {
        if (o.category != scene.goal.pick.category)
            continue;
        total += o.volume;
        if (box.contains({o.pose.x, o.pose.y}))
            packed += o.volume;
    }
    if (total <= 0.0)
        throw ScoringError("no goal-category object in scene");
    return packed / total;
}

double score(const Scene& scene)
{
    return scene.task == TaskKind::PutBlockInBowl ? score_put_block(scene) : score_packing(scene);
}

std::string serialize_scene(const Scene& scene)
{
    std::ostringstream out;
    out << "scene v1\n";
    out << "task " << to_string(scene.task) << "\n";
    out << "split " << to_string(scene.split) << "\n";
    out << "seed " << scene.seed << "\n";
    out << "bounds " << text::format_double(scene.width) << " " << text::format_double(scene.height) << "\n";
    out << "background " << scene.background_name << " | " << to_string(scene.background) << "\n";
    out << "goal_pick " << descriptor_text(scene.goal.pick) << "\n";
    out << "goal_place " << descriptor_text(scene.goal.place) << "\n";
    for (const auto& o : scene.objects) {
        const auto& a = o.appearance;
        out << "object " << o.id << " | " << o.category << " | " << (o.color ? *o.color : "-") << " | "
            << shape_text(o.footprint) << " | " << to_string(a.base) << " | "
            << (a.texture == TextureKind::Plain ? std::string("plain") : "stripes " + to_string(a.stripe)) << " | "
            << text::format_double(o.pose.x) << " " << text::format_double(o.pose.y) << " "
            << text::format_double(o.pose.theta) << " | " << text::format_double(o.height) << " | "
            << text::format_double(o.volume) << " | " << to_string(o.split) << "\n";
    }
    return out.str();
}

Scene parse_scene(std::string_view body)
{
    Scene s;
    const auto lines = text::split_lines(body);
    if (lines.empty() || text::trim(lines[0]) != "scene v1")
        throw DataError("scene: missing 'scene v1' header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = text::trim(lines[i]);
        if (line.empty())
            continue;
        const auto sp = line.find(' ');
        const std::string key(line.substr(0, sp));
        const std::string rest = sp == std::string_view::npos ? "" : std::string(text::trim(line.substr(sp + 1)));
        auto fields = text::split(rest, '|');
        for (auto& f : fields)
            f = std::string(text::trim(f));
        if (key == "task") {
            s.task = parse_task_kind(rest);
        } else if (key == "split") {
            s.split = parse_split(rest);
        } else if (key == "seed") {
            s.seed = text::parse_uint64(rest);
        } else if (key == "bounds") {
            const auto w = text::split_ws(rest);
            if (w.size() != 2)
                throw DataError("scene: bad bounds");
            s.width = text::parse_double(w[0]);
            s.height = text::parse_double(w[1]);
        } else if (key == "background") {
            if (fields.size() != 2)
                throw DataError("scene: bad background");
            s.background_name = fields[0];
            s.background = parse_rgb_words(fields[1]);
        } else if (key == "goal_pick" || key == "goal_place") {
            if (fields.size() != 2)
                throw DataError("scene: bad goal");
            (key == "goal_pick" ? s.goal.pick : s.goal.place) = parse_descriptor(fields, 0);
        } else if (key == "object") {
            if (fields.size() != 10)
                throw DataError("scene: object record needs 10 fields");
            ObjectSpec o;
            o.id = text::parse_int(fields[0]);
            o.category = fields[1];
            if (fields[2] != "-")
                o.color = fields[2];
            o.footprint = parse_shape_exact(fields[3]);
            o.appearance.base = parse_rgb_words(fields[4]);
            const auto tex = text::split_ws(fields[5]);
            if (!tex.empty() && tex[0] == "stripes" && tex.size() == 4) {
                o.appearance.texture = TextureKind::Stripes;
                o.appearance.stripe = parse_rgb_words(tex[1] + " " + tex[2] + " " + tex[3]);
            }
            const auto pose = text::split_ws(fields[6]);
            if (pose.size() != 3)
                throw DataError("scene: bad pose");
            o.pose = {text::parse_double(pose[0]), text::parse_double(pose[1]), text::parse_double(pose[2])};
            o.height = text::parse_double(fields[7]);
            o.volume = text::parse_double(fields[8]);
            o.split = parse_split(fields[9]);
            s.objects.push_back(std::move(o));
        } else {
            throw DataError("scene: unknown record '" + key + "'");
        }
    }
    return s;
}

} // namespace roso
