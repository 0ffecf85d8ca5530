#include "roso/pipeline.hpp"

#include <algorithm>
#include <map>

#include "roso/error.hpp"
#include "roso/imgmetrics.hpp"
#include "roso/rng.hpp"
#include "roso/text.hpp"

namespace roso {

namespace {

const std::vector<std::pair<FailureStage, std::string_view>>& stage_names()
{
    static const std::vector<std::pair<FailureStage, std::string_view>> names = {
        {FailureStage::Success, "success"},
        {FailureStage::MaskingMiss, "masking-miss"},
        {FailureStage::MaskingWrongObject, "masking-wrong-object"},
        {FailureStage::EditQuality, "edit-quality"},
        {FailureStage::AffordanceError, "affordance-error"},
        {FailureStage::ExecutionError, "execution-error"},
    };
    return names;
}

std::string_view slot_name(Slot s)
{
    return s == Slot::Pick ? "pick" : "place";
}

bool is_seen_object(const Catalog& catalog, const std::string& category)
{
    const auto* kind = catalog.vocabulary.find(category);
    return kind && kind->cls != ObjectClass::Unseen;
}

struct PlannedEdit {
    Slot slot;
    std::string query;
    EditTarget target;
};

std::vector<PlannedEdit> plan_edits(const Observation& obs, Method method, const RosoContext& ctx)
{
    const auto& catalog = ctx.env->catalog;
    const Instruction& in = obs.instruction;
    std::vector<PlannedEdit> plan;
    if (in.tmpl == Template::BlockInBowl) {
        const auto mapped = map_color_pair(ctx.colormap, in.pick_slot, in.place_slot, catalog.palette);
        // Place first: its replacement conditions the pick mapping.
        if (mapped.place != in.place_slot)
            plan.push_back({Slot::Place, in.place_slot + " bowl", {TargetKind::Color, mapped.place}});
        if (mapped.pick != in.pick_slot)
            plan.push_back({Slot::Pick, in.pick_slot + " block", {TargetKind::Color, mapped.pick}});
        return plan;
    }
    if (!is_seen_object(catalog, in.pick_slot)) {
        std::string replacement;
        if (method == Method::C) {
            replacement = ctx.quality_target;
        } else {
            const auto seen = seen_packing_instructions(catalog);
            replacement = map_semantic(*ctx.encoder, in, seen).pick_slot;
        }
        plan.push_back({Slot::Pick, in.pick_slot, {TargetKind::Category, replacement}});
    }
    return plan;
}

int majority_instance(const std::vector<int>& ids, const Mask& mask)
{
    std::map<int, std::size_t> counts;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.at_index(i))
            ++counts[ids[i]];
    int best = -1;
    std::size_t best_n = 0;
    for (const auto& [id, n] : counts)
        if (n > best_n)
            best = id, best_n = n;
    return best;
}

} // namespace

std::string_view to_string(Method m)
{
    return m == Method::A ? "A" : m == Method::B ? "B" : "C";
}

Method parse_method(std::string_view s)
{
    if (s == "A")
        return Method::A;
    if (s == "B")
        return Method::B;
    if (s == "C")
        return Method::C;
    throw DataError("unknown method: " + std::string(s));
}

std::string_view to_string(FailureStage s)
{
    for (const auto& [stage, name] : stage_names())
        if (stage == s)
            return name;
    return "?";
}

FailureStage parse_failure_stage(std::string_view s)
{
    for (const auto& [stage, name] : stage_names())
        if (name == s)
            return stage;
    throw DataError("unknown failure stage: " + std::string(s));
}

const std::vector<FailureStage>& all_failure_stages()
{
    static const std::vector<FailureStage> stages = [] {
        std::vector<FailureStage> v;
        for (const auto& p : stage_names())
            v.push_back(p.first);
        return v;
    }();
    return stages;
}

std::uint64_t episode_seed(std::uint64_t master_seed, TaskKind task, int index)
{
    return mix_seed(mix_seed(master_seed, to_string(task)), static_cast<std::uint64_t>(index));
}

Collection collect_unsuccessful(const PolicyModel& policy, const Environment& env, const TaskSpec& task,
                                int n_variations, std::uint64_t seed)
{
    if (n_variations < 1)
        throw Error("n_variations must be at least 1");
    Collection out;
    for (int i = 0; i < n_variations; ++i) {
        const std::uint64_t s = episode_seed(seed, task.kind, i);
        auto ep = run_episode(policy, env, task, s);
        out.baseline.push_back({s, ep.reward, ep.result.outcome});
        if (ep.reward != 1.0)
            out.dataset.episodes.push_back({task, s, std::move(ep.observation), ep.action, ep.reward});
    }
    return out;
}

RosoContext make_context(const PolicyModel& policy, const Environment& env, const RosoConfig& config,
                         int colormap_trials, std::uint64_t colormap_seed)
{
    RosoContext ctx;
    ctx.policy = &policy;
    ctx.env = &env;
    ctx.colormap = build_colormap(policy, env, colormap_trials, colormap_seed);
    ctx.encoder = std::make_shared<TrigramEncoder>();
    ctx.quality_target = rank_edit_quality(env.catalog.vocabulary.packing_objects(Split::Seen), env.catalog.vocabulary);
    ctx.config = config;
    return ctx;
}

RewriteRecord roso_step(const Observation& obs, Method method, const RosoContext& ctx)
{
    if (!ctx.policy || !ctx.env || !ctx.encoder)
        throw Error("incomplete rewrite context");
    const auto& catalog = ctx.env->catalog;
    RewriteRecord rec;
    rec.method = method;
    rec.synthetic = obs;

    const bool edit_background = obs.scene_ref.task.unseen_background();
    auto recolor = [&] {
        rec.synthetic.image = recolor_background(rec.synthetic.image, segment_background(rec.synthetic.image), catalog);
        rec.background_edited = true;
        rec.stage_status.push_back("background: recolored");
    };
    if (edit_background && ctx.config.order == EditOrder::BackgroundFirst)
        recolor();

    const EditMode mode = method == Method::A ? EditMode::WholeImage : EditMode::DetectedFrame;
    for (const auto& planned : plan_edits(obs, method, ctx)) {
        SlotEdit edit{planned.slot, planned.query, planned.target.token, std::nullopt, false, 0.0, false};
        GroundingConfig g = ctx.config.grounding;
        g.noise_seed = mix_seed(mix_seed(g.noise_seed, obs.scene_ref.seed), slot_name(planned.slot));
        try {
            edit.detection = detect(rec.synthetic.image, planned.query, g, catalog).front();
        } catch (const NoDetection&) {
            rec.edits.push_back(std::move(edit));
            rec.masking_miss = true;
            rec.synthetic = obs;
            rec.background_edited = false;
            rec.stage_status.push_back(std::string(slot_name(planned.slot)) + ": masking-miss");
            return rec;
        }
        int variability = 1;
        if (planned.target.kind == TargetKind::Category)
            variability = catalog.vocabulary.at(planned.target.token).variants;
        const EditRequest req{rec.synthetic.image,
                              edit.detection->mask,
                              mode,
                              planned.target,
                              variability,
                              mix_seed(obs.scene_ref.seed, "inpaint-" + std::string(slot_name(planned.slot)))};
        auto result = inpaint(req, ctx.config.fidelity, catalog);
        edit.degraded = result.degraded;
        // Pad the frame so the object's outline contributes; a flat fill
        // inside a rectangular frame has no gradient of its own.
        const Rect& f = edit.detection->frame;
        edit.sharpness = gradient_energy(result.image.rgb, {f.x0 - 2, f.y0 - 2, f.width + 4, f.height + 4});
        edit.poor_quality = edit.degraded || edit.sharpness < ctx.config.min_sharpness;
        rec.synthetic.image = std::move(result.image);
        rec.synthetic.instruction = rewrite_instruction(rec.synthetic.instruction, planned.slot, planned.target.token);
        rec.stage_status.push_back(std::string(slot_name(planned.slot)) + ": " + planned.query + " -> " +
                                   planned.target.token + (edit.degraded ? " (degraded)" : ""));
        rec.edits.push_back(std::move(edit));
    }

    if (edit_background && ctx.config.order == EditOrder::ObjectsFirst)
        recolor();
    if (rec.edits.empty() && !rec.background_edited)
        rec.stage_status.push_back("no edit");
    return rec;
}

FailureStage classify_failure(const RewriteRecord& record, const EpisodeResult& result, const Scene& ground_truth)
{
    if (result.reward == 1.0)
        return FailureStage::Success;
    if (record.masking_miss)
        return FailureStage::MaskingMiss;

    const int goal_pick = ground_truth.goal_pick_index();
    const int goal_place = ground_truth.goal_place_index();
    if (!record.edits.empty()) {
        const auto ids = instance_map(ground_truth);
        for (const auto& e : record.edits) {
            const int want = e.slot == Slot::Pick ? goal_pick : goal_place;
            if (e.detection && majority_instance(ids, e.detection->mask) != want)
                return FailureStage::MaskingWrongObject;
        }
    }
    for (const auto& e : record.edits)
        if (e.poor_quality)
            return FailureStage::EditQuality;
    const bool pick_ok = object_at(ground_truth, result.action.pick_table()) == goal_pick;
    const bool place_ok = ground_truth.objects[goal_place].contains(result.action.place_table());
    if (!pick_ok || !place_ok)
        return FailureStage::AffordanceError;
    return FailureStage::ExecutionError;
}

std::vector<RerunEntry> rerun(const UnsuccessfulDataset& dataset, Method method, const RosoContext& ctx)
{
    std::vector<RerunEntry> out;
    out.reserve(dataset.episodes.size());
    for (const auto& ep : dataset.episodes) {
        const Scene scene = generate_scene(ep.task, ep.seed, ctx.env->catalog);
        if (!(render_topdown(scene) == ep.observation.image))
            throw IntegrityError("regenerated scene does not match the stored observation (seed " +
                                 std::to_string(ep.seed) + ")");
        RerunEntry entry{&ep, roso_step(ep.observation, method, ctx), {}};
        entry.result.action = infer(*ctx.policy, entry.record.synthetic);
        const auto exec = execute(*ctx.env, scene, entry.result.action);
        entry.result.outcome = exec.outcome;
        entry.result.reward = score(exec.scene);
        entry.result.stage = classify_failure(entry.record, entry.result, scene);
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<TranscriptRow> transcript_rows(const std::vector<RerunEntry>& entries, Method method)
{
    std::vector<TranscriptRow> rows;
    for (const auto& e : entries)
        rows.push_back({std::string(to_string(e.episode->task.kind)), e.episode->seed, std::string(to_string(method)),
                        std::string(to_string(e.result.stage)), e.episode->reward, e.result.reward});
    return rows;
}

std::string transcript_csv(const std::vector<TranscriptRow>& rows)
{
    std::string out = "task,seed,method,stage,baseline_reward,roso_reward\n";
    for (const auto& r : rows)
        out += r.task + "," + std::to_string(r.seed) + "," + r.method + "," + r.stage + "," +
               text::format_double(r.baseline_reward) + "," + text::format_double(r.roso_reward) + "\n";
    return out;
}

std::vector<TranscriptRow> parse_transcript_csv(std::string_view body)
{
    std::vector<TranscriptRow> rows;
    const auto lines = text::split_lines(body);
    if (lines.empty() || lines[0] != "task,seed,method,stage,baseline_reward,roso_reward")
        throw DataError("transcript: bad header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != 6)
            throw DataError("transcript: line " + std::to_string(i + 1) + " needs 6 fields");
        rows.push_back({f[0], text::parse_uint64(f[1]), f[2], f[3], text::parse_double(f[4]), text::parse_double(f[5])});
    }
    return rows;
}

} // namespace roso
