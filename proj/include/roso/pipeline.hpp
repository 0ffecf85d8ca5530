#pragma once

// Observation rewriting on failed episodes: collect the unsuccessful set,
// rewrite each observation (detect, remap the instruction, inpaint), re-run
// the policy on the original scene and attribute every remaining failure
// to a pipeline stage.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roso/episode.hpp"
#include "roso/grounding.hpp"
#include "roso/inpaint.hpp"
#include "roso/instructmod.hpp"

namespace roso {

enum class Method { A, B, C };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);

enum class FailureStage { Success, MaskingMiss, MaskingWrongObject, EditQuality, AffordanceError, ExecutionError };
std::string_view to_string(FailureStage s);
FailureStage parse_failure_stage(std::string_view s);
const std::vector<FailureStage>& all_failure_stages();

enum class EditOrder { BackgroundFirst, ObjectsFirst };

struct UnsuccessfulEpisode {
    TaskSpec task;
    std::uint64_t seed = 0;
    Observation observation;
    Action action;
    double reward = 0.0;
};

struct UnsuccessfulDataset {
    std::vector<UnsuccessfulEpisode> episodes;
};

struct BaselineRow {
    std::uint64_t seed = 0;
    double reward = 0.0;
    ExecutionOutcome outcome = ExecutionOutcome::GraspMiss;
};

struct Collection {
    UnsuccessfulDataset dataset;
    std::vector<BaselineRow> baseline; // every episode, in run order
};

std::uint64_t episode_seed(std::uint64_t master_seed, TaskKind task, int index);

Collection collect_unsuccessful(const PolicyModel& policy, const Environment& env, const TaskSpec& task,
                                int n_variations, std::uint64_t seed);

struct RosoConfig {
    GroundingConfig grounding;
    FidelityModel fidelity;
    EditOrder order = EditOrder::BackgroundFirst;
    double min_sharpness = 1e-4; // edited frames below this gradient energy count as poor edits
};

/// Everything a rewrite needs besides the observation.
struct RosoContext {
    const PolicyModel* policy = nullptr;
    const Environment* env = nullptr;
    ColorMap colormap;
    std::shared_ptr<const TextEncoder> encoder;
    std::string quality_target; // method C's single object target
    RosoConfig config;
};

// Colormap built from the policy, trigram encoder, declared-alignment target.
RosoContext make_context(const PolicyModel& policy, const Environment& env, const RosoConfig& config,
                         int colormap_trials, std::uint64_t colormap_seed);

struct SlotEdit {
    Slot slot = Slot::Pick;
    std::string query;
    std::string replacement;
    std::optional<DetectionResult> detection;
    bool degraded = false;
    double sharpness = 0.0;
    bool poor_quality = false; // degraded, or sharpness under RosoConfig::min_sharpness
};

struct RewriteRecord {
    Method method = Method::C;
    bool background_edited = false;
    std::vector<SlotEdit> edits;
    bool masking_miss = false;
    Observation synthetic;
    std::vector<std::string> stage_status;
};

RewriteRecord roso_step(const Observation& obs, Method method, const RosoContext& ctx);

struct EpisodeResult {
    Action action;
    ExecutionOutcome outcome = ExecutionOutcome::GraspMiss;
    double reward = 0.0;
    FailureStage stage = FailureStage::Success;
};

struct RerunEntry {
    const UnsuccessfulEpisode* episode = nullptr;
    RewriteRecord record;
    EpisodeResult result;
};

// Throws IntegrityError when a regenerated scene does not reproduce the
// stored observation.
std::vector<RerunEntry> rerun(const UnsuccessfulDataset& dataset, Method method, const RosoContext& ctx);

FailureStage classify_failure(const RewriteRecord& record, const EpisodeResult& result, const Scene& ground_truth);

struct TranscriptRow {
    std::string task;
    std::uint64_t seed = 0;
    std::string method;
    std::string stage;
    double baseline_reward = 0.0;
    double roso_reward = 0.0;
};

std::vector<TranscriptRow> transcript_rows(const std::vector<RerunEntry>& entries, Method method);
std::string transcript_csv(const std::vector<TranscriptRow>& rows);
std::vector<TranscriptRow> parse_transcript_csv(std::string_view text);

} // namespace roso
