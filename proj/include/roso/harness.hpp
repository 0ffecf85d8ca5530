#pragma once

// Experiment configuration, report tables and plots.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roso/pipeline.hpp"

namespace roso {

// (failed_baseline - failed_roso) / failed_baseline; nullopt when there
// were no baseline failures.
std::optional<double> recovery_rate(int failed_baseline, int failed_roso);
// Whole percent, rounded half-up, e.g. "28%"; "n/a" when undefined.
std::string recovery_percent(int failed_baseline, int failed_roso);

struct ExperimentConfig {
    std::vector<TaskKind> tasks = all_task_kinds();
    std::vector<Split> splits = {Split::Seen, Split::Unseen};
    std::vector<Method> methods = {Method::A, Method::B, Method::C};
    int n_variations = 100;
    std::uint64_t master_seed = 1;
    int colormap_trials = 10;
    PolicyConfig policy;
    ExecutionConfig exec{0.05};
    RosoConfig roso;
    std::filesystem::path output_dir;

    ExperimentConfig();
    void validate() const; // throws DataError
};

// Rewrite context for an experiment: colormap built from the policy with
// a seed derived from the master seed.
std::uint64_t colormap_seed(const ExperimentConfig& config);
RosoContext experiment_context(const PolicyModel& policy, const Environment& env, const ExperimentConfig& config);

// "key = value" lines; '#' starts a comment. Keys:
//   experiment.tasks, experiment.splits, experiment.methods (comma lists),
//   experiment.n_variations, experiment.seed, colormap.trials,
//   policy.match_tolerance, policy.fallback_seed, execution.p_exec,
//   grounding.detection_threshold, grounding.miss_noise,
//   grounding.misidentify_noise, grounding.noise_seed,
//   fidelity.min_frame_pixels, fidelity.degradation_strength,
//   inpaint.order (background-first | objects-first),
//   pipeline.min_sharpness, output.dir
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct BaselineRecord {
    std::string task;
    std::string split;
    std::uint64_t seed = 0;
    double reward = 0.0;
    std::string outcome;
};

std::string baseline_csv(const std::vector<BaselineRecord>& rows);
std::vector<BaselineRecord> parse_baseline_csv(std::string_view text);

struct Table1Row {
    std::string task;
    int seen_failed = 0;
    int unseen_failed = 0;
    int roso_failed = 0;
    std::string recovery;
};

struct MethodRow {
    std::string task;
    std::string method;
    int unsuccessful = 0;
    int recovered = 0;
    std::string recovery;
};

struct StageRow {
    std::string task;
    std::string method;
    std::string stage;
    int count = 0;
};

struct Report {
    std::vector<Table1Row> table1;
    std::vector<MethodRow> methods;
    std::vector<StageRow> stages;
    std::string table1_method;
};

// Rebuilds every report number from the two transcripts. The failed-runs
// table uses method C when present, else the last method seen.
Report report_from_transcripts(const std::vector<BaselineRecord>& baseline, const std::vector<TranscriptRow>& rows);

std::string table1_csv(const Report& r);
std::string methods_csv(const Report& r);
std::string stages_csv(const Report& r);
std::string summary_text(const Report& r);

struct ExperimentOutput {
    std::vector<BaselineRecord> baseline;
    std::vector<TranscriptRow> transcript;
    ColorMap colormap;
    Report report;
};

// Runs the protocol and, when output_dir is set, writes baseline.csv,
// transcript.csv, table1.csv, methods.csv, stages.csv, colormap.csv,
// summary.txt, colormap.png and semantic_heatmap.png. The CSVs are
// rewritten after every task so partial results survive a failure.
ExperimentOutput run_experiment(const ExperimentConfig& config);

void plot_colormap(const ColorMap& cm, const std::filesystem::path& path);
void plot_semantic_heatmap(const TextEncoder& encoder, const std::vector<Instruction>& unseen,
                           const std::vector<Instruction>& seen, const std::filesystem::path& path);

struct MetricRow {
    std::string category;
    double mse = 0.0;
    double ssim = 0.0;
    double fid_lite = 0.0;
    double success = 0.0;
};

struct CorrelationRow {
    std::string metric;
    std::optional<double> r; // nullopt: zero variance
};

double pearson(const std::vector<double>& x, const std::vector<double>& y); // NaN on zero variance
std::vector<CorrelationRow> correlation_report(const std::vector<MetricRow>& rows);
std::string metrics_csv(const std::vector<MetricRow>& rows);
std::string correlation_csv(const std::vector<CorrelationRow>& rows);

// Measures each candidate's edit quality and its method-C recovery on the
// dataset when used as the single replacement target.
std::vector<MetricRow> measure_candidates(const RosoContext& ctx, const UnsuccessfulDataset& dataset,
                                          const std::vector<std::string>& candidates, int samples,
                                          std::uint64_t seed);

void write_text(const std::filesystem::path& path, std::string_view body);

} // namespace roso
