// Command-line front end: simulate, collect, rerun, colormap, report, metrics.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "roso/error.hpp"
#include "roso/harness.hpp"
#include "roso/png.hpp"
#include "roso/text.hpp"

namespace fs = std::filesystem;
using namespace roso;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> variations;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "Experiment config file (key = value)");
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--variations", c.variations, "Episodes per task and split");
}

ExperimentConfig resolve(const Common& c)
{
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed)
        cfg.master_seed = *c.seed;
    if (!c.out.empty())
        cfg.output_dir = c.out;
    if (c.variations)
        cfg.n_variations = *c.variations;
    cfg.validate();
    return cfg;
}

fs::path ensure_dir(const ExperimentConfig& cfg)
{
    const fs::path dir = cfg.output_dir.empty() ? fs::path(".") : cfg.output_dir;
    fs::create_directories(dir);
    return dir;
}

TaskSpec make_task(const std::string& task, const std::string& split)
{
    TaskSpec t;
    t.kind = parse_task_kind(task);
    t.split = parse_split(split);
    return t;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Observation-rewriting tabletop benchmark"};
    app.require_subcommand(1);

    Common common;
    std::string task = "put-block-in-bowl", split = "unseen", method = "C";
    int trials = 10, samples = 4;
    std::string candidates;

    auto* simulate = app.add_subcommand("simulate", "Render one episode and dump PNGs");
    add_common(simulate, common);
    simulate->add_option("--task", task);
    simulate->add_option("--split", split);

    auto* collect = app.add_subcommand("collect", "Run baseline episodes and keep the failures");
    add_common(collect, common);
    collect->add_option("--task", task);
    collect->add_option("--split", split);

    auto* rerun_cmd = app.add_subcommand("rerun", "Rewrite failed unseen episodes and re-execute");
    add_common(rerun_cmd, common);
    rerun_cmd->add_option("--task", task);
    rerun_cmd->add_option("--method", method)->check(CLI::IsMember({"A", "B", "C"}));

    auto* colormap = app.add_subcommand("colormap", "Build the pick x place color success map");
    add_common(colormap, common);
    colormap->add_option("--trials", trials, "Episodes per cell")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Run the full experiment and write all reports");
    add_common(report, common);

    auto* metrics = app.add_subcommand("metrics", "Edit-quality metrics and their correlation with success");
    add_common(metrics, common);
    metrics->add_option("--task", task);
    metrics->add_option("--samples", samples, "Renders per candidate")->check(CLI::Range(2, 1000));
    metrics->add_option("--candidates", candidates, "Comma-separated seen objects (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    ExperimentConfig cfg;
    try {
        cfg = resolve(common);
        if (simulate->parsed() || collect->parsed())
            make_task(task, split);
        if (rerun_cmd->parsed() || metrics->parsed())
            parse_task_kind(task);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        Environment env{Catalog::load(), cfg.exec};
        const PolicyModel policy = build_policy(env.catalog, cfg.policy);

        if (simulate->parsed()) {
            const fs::path dir = ensure_dir(cfg);
            const TaskSpec t = make_task(task, split);
            const auto ep = run_episode(policy, env, t, cfg.master_seed);
            png::write_file(dir / "rgb.png", png::encode_rgb8(ep.observation.image.rgb));
            png::write_file(dir / "depth.png", png::encode_gray16(ep.observation.image.depth, 1000.0));
            write_text(dir / "scene.txt", serialize_scene(ep.scene));
            write_text(dir / "instruction.txt", ep.observation.instruction.raw + "\n");
            std::cout << "instruction: " << ep.observation.instruction.raw << "\n"
                      << "pick: " << ep.action.pick.u << " " << ep.action.pick.v << "\n"
                      << "place: " << ep.action.place.u << " " << ep.action.place.v << "\n"
                      << "outcome: " << to_string(ep.result.outcome) << "\n"
                      << "reward: " << text::format_double(ep.reward) << "\n";
        } else if (collect->parsed()) {
            const fs::path dir = ensure_dir(cfg);
            const TaskSpec t = make_task(task, split);
            const auto c = collect_unsuccessful(policy, env, t, cfg.n_variations, cfg.master_seed);
            std::vector<BaselineRecord> rows;
            for (const auto& b : c.baseline)
                rows.push_back({task, split, b.seed, b.reward, std::string(to_string(b.outcome))});
            write_text(dir / "baseline.csv", baseline_csv(rows));
            std::cout << "failed " << c.dataset.episodes.size() << " of " << c.baseline.size() << "\n";
        } else if (rerun_cmd->parsed()) {
            const fs::path dir = ensure_dir(cfg);
            const TaskSpec t = make_task(task, "unseen");
            const auto c = collect_unsuccessful(policy, env, t, cfg.n_variations, cfg.master_seed);
            const auto ctx = experiment_context(policy, env, cfg);
            const Method m = parse_method(method);
            const auto rows = transcript_rows(rerun(c.dataset, m, ctx), m);
            write_text(dir / "transcript.csv", transcript_csv(rows));
            int recovered = 0;
            for (const auto& r : rows)
                recovered += r.roso_reward == 1.0;
            const int failed = static_cast<int>(rows.size());
            std::cout << "unsuccessful " << failed << ", recovered " << recovered << " ("
                      << recovery_percent(failed, failed - recovered) << ")\n";
        } else if (colormap->parsed()) {
            const fs::path dir = ensure_dir(cfg);
            const auto cm = build_colormap(policy, env, trials, colormap_seed(cfg));
            write_text(dir / "colormap.csv", colormap_csv(cm));
            plot_colormap(cm, dir / "colormap.png");
            std::cout << colormap_csv(cm);
        } else if (report->parsed()) {
            if (cfg.output_dir.empty())
                cfg.output_dir = ".";
            const auto out = run_experiment(cfg);
            std::cout << summary_text(out.report);
        } else if (metrics->parsed()) {
            const fs::path dir = ensure_dir(cfg);
            std::vector<std::string> names = env.catalog.vocabulary.packing_objects(Split::Seen);
            if (!candidates.empty()) {
                names.clear();
                for (const auto& c : text::split(candidates, ','))
                    names.emplace_back(text::trim(c));
            }
            const TaskSpec t = make_task(task, "unseen");
            const auto c = collect_unsuccessful(policy, env, t, cfg.n_variations, cfg.master_seed);
            const auto ctx = experiment_context(policy, env, cfg);
            const auto rows = measure_candidates(ctx, c.dataset, names, samples, cfg.master_seed);
            write_text(dir / "metrics.csv", metrics_csv(rows));
            std::cout << metrics_csv(rows);
            if (rows.size() >= 3) {
                const auto corr = correlation_csv(correlation_report(rows));
                write_text(dir / "correlation.csv", corr);
                std::cout << "\n" << corr;
            }
        }
    } catch (const DataError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
