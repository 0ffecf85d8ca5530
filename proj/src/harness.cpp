#include "roso/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "roso/error.hpp"
#include "roso/imgmetrics.hpp"
#include "roso/plot.hpp"
#include "roso/png.hpp"
#include "roso/rng.hpp"
#include "roso/text.hpp"

namespace roso {

namespace {

template <class T, class F>
std::vector<T> parse_list(const std::string& value, F parse_one)
{
    std::vector<T> out;
    for (const auto& part : text::split(value, ',')) {
        const auto item = text::trim(part);
        if (!item.empty())
            out.push_back(parse_one(item));
    }
    if (out.empty())
        throw DataError("empty list: " + value);
    return out;
}

double parse_probability(const std::string& v, const std::string& key)
{
    const double p = text::parse_double(v);
    if (p < 0.0 || p > 1.0)
        throw DataError(key + " must lie in [0,1]");
    return p;
}

std::string split_name(Split s)
{
    return std::string(to_string(s));
}

std::string pad(const std::string& s, std::size_t n)
{
    return s.size() >= n ? s : s + std::string(n - s.size(), ' ');
}

} // namespace

std::optional<double> recovery_rate(int failed_baseline, int failed_roso)
{
    if (failed_baseline <= 0)
        return std::nullopt;
    if (failed_roso < 0 || failed_roso > failed_baseline)
        throw Error("recovery rate: failed_roso must lie in [0, failed_baseline]");
    return static_cast<double>(failed_baseline - failed_roso) / failed_baseline;
}

std::string recovery_percent(int failed_baseline, int failed_roso)
{
    if (!recovery_rate(failed_baseline, failed_roso))
        return "n/a";
    // Integer half-up: floor((200 * recovered + failed) / (2 * failed)).
    const long long recovered = failed_baseline - failed_roso;
    const long long pct = (200LL * recovered + failed_baseline) / (2LL * failed_baseline);
    return std::to_string(pct) + "%";
}

ExperimentConfig::ExperimentConfig()
{
    roso.grounding.miss_noise = 0.05;
    roso.grounding.misidentify_noise = 0.05;
}

void ExperimentConfig::validate() const
{
    if (n_variations < 1)
        throw DataError("experiment.n_variations must be at least 1");
    if (colormap_trials < 1)
        throw DataError("colormap.trials must be at least 1");
    if (tasks.empty() || methods.empty() || splits.empty())
        throw DataError("tasks, splits and methods must be non-empty");
    if (exec.p_exec < 0.0 || exec.p_exec > 1.0)
        throw DataError("execution.p_exec must lie in [0,1]");
    if (!(policy.match_tolerance > 0.0))
        throw DataError("policy.match_tolerance must be positive");
    if (roso.fidelity.min_frame_pixels <= 0 || roso.fidelity.degradation_strength < 0.0)
        throw DataError("invalid fidelity model");
    roso.grounding.validate();
}

std::uint64_t colormap_seed(const ExperimentConfig& config)
{
    return mix_seed(config.master_seed, "colormap");
}

RosoContext experiment_context(const PolicyModel& policy, const Environment& env, const ExperimentConfig& config)
{
    return make_context(policy, env, config.roso, config.colormap_trials, colormap_seed(config));
}

ExperimentConfig parse_config(std::string_view body)
{
    ExperimentConfig c;
    const auto lines = text::split_lines(body);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DataError("config line " + std::to_string(i + 1) + ": expected key = value");
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        if (key == "experiment.tasks")
            c.tasks = parse_list<TaskKind>(value, [](std::string_view s) { return parse_task_kind(s); });
        else if (key == "experiment.splits")
            c.splits = parse_list<Split>(value, [](std::string_view s) { return parse_split(s); });
        else if (key == "experiment.methods")
            c.methods = parse_list<Method>(value, [](std::string_view s) { return parse_method(s); });
        else if (key == "experiment.n_variations")
            c.n_variations = text::parse_int(value);
        else if (key == "experiment.seed")
            c.master_seed = text::parse_uint64(value);
        else if (key == "colormap.trials")
            c.colormap_trials = text::parse_int(value);
        else if (key == "policy.match_tolerance")
            c.policy.match_tolerance = text::parse_double(value);
        else if (key == "policy.fallback_seed")
            c.policy.fallback_seed = text::parse_uint64(value);
        else if (key == "execution.p_exec")
            c.exec.p_exec = parse_probability(value, key);
        else if (key == "grounding.detection_threshold")
            c.roso.grounding.detection_threshold = text::parse_double(value);
        else if (key == "grounding.miss_noise")
            c.roso.grounding.miss_noise = parse_probability(value, key);
        else if (key == "grounding.misidentify_noise")
            c.roso.grounding.misidentify_noise = parse_probability(value, key);
        else if (key == "grounding.noise_seed")
            c.roso.grounding.noise_seed = text::parse_uint64(value);
        else if (key == "fidelity.min_frame_pixels")
            c.roso.fidelity.min_frame_pixels = text::parse_int(value);
        else if (key == "fidelity.degradation_strength")
            c.roso.fidelity.degradation_strength = text::parse_double(value);
        else if (key == "inpaint.order") {
            if (value == "background-first")
                c.roso.order = EditOrder::BackgroundFirst;
            else if (value == "objects-first")
                c.roso.order = EditOrder::ObjectsFirst;
            else
                throw DataError("inpaint.order must be background-first or objects-first");
        } else if (key == "pipeline.min_sharpness")
            c.roso.min_sharpness = text::parse_double(value);
        else if (key == "output.dir")
            c.output_dir = value;
        else
            throw DataError("unknown config key: " + key);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DataError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string baseline_csv(const std::vector<BaselineRecord>& rows)
{
    std::string out = "task,split,seed,reward,outcome\n";
    for (const auto& r : rows)
        out += r.task + "," + r.split + "," + std::to_string(r.seed) + "," + text::format_double(r.reward) + "," +
               r.outcome + "\n";
    return out;
}

std::vector<BaselineRecord> parse_baseline_csv(std::string_view body)
{
    std::vector<BaselineRecord> rows;
    const auto lines = text::split_lines(body);
    if (lines.empty() || lines[0] != "task,split,seed,reward,outcome")
        throw DataError("baseline: bad header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != 5)
            throw DataError("baseline: line " + std::to_string(i + 1) + " needs 5 fields");
        rows.push_back({f[0], f[1], text::parse_uint64(f[2]), text::parse_double(f[3]), f[4]});
    }
    return rows;
}

Report report_from_transcripts(const std::vector<BaselineRecord>& baseline, const std::vector<TranscriptRow>& rows)
{
    Report rep;
    std::vector<std::string> tasks, methods;
    auto note = [](std::vector<std::string>& v, const std::string& x) {
        if (std::find(v.begin(), v.end(), x) == v.end())
            v.push_back(x);
    };
    for (const auto& b : baseline)
        note(tasks, b.task);
    for (const auto& r : rows) {
        note(tasks, r.task);
        note(methods, r.method);
    }
    rep.table1_method = std::find(methods.begin(), methods.end(), "C") != methods.end() ? "C"
                        : methods.empty()                                             ? ""
                                                                                      : methods.back();

    for (const auto& task : tasks) {
        Table1Row t{task, 0, 0, 0, "n/a"};
        for (const auto& b : baseline) {
            if (b.task != task || b.reward == 1.0)
                continue;
            (b.split == "seen" ? t.seen_failed : t.unseen_failed) += 1;
        }
        for (const auto& method : methods) {
            MethodRow m{task, method, 0, 0, "n/a"};
            std::map<std::string, int> stage_counts;
            for (const auto& r : rows) {
                if (r.task != task || r.method != method)
                    continue;
                ++m.unsuccessful;
                m.recovered += r.roso_reward == 1.0;
                ++stage_counts[r.stage];
            }
            m.recovery = recovery_percent(m.unsuccessful, m.unsuccessful - m.recovered);
            if (method == rep.table1_method)
                t.roso_failed = t.unseen_failed - m.recovered;
            rep.methods.push_back(m);
            for (const auto stage : all_failure_stages()) {
                const std::string name(to_string(stage));
                rep.stages.push_back({task, method, name, stage_counts.count(name) ? stage_counts[name] : 0});
            }
        }
        if (rep.table1_method.empty())
            t.roso_failed = t.unseen_failed;
        t.recovery = recovery_percent(t.unseen_failed, t.roso_failed);
        rep.table1.push_back(t);
    }
    return rep;
}

std::string table1_csv(const Report& r)
{
    std::string out = "task,seen_failed,unseen_failed,roso_failed,recovery\n";
    for (const auto& t : r.table1)
        out += t.task + "," + std::to_string(t.seen_failed) + "," + std::to_string(t.unseen_failed) + "," +
               std::to_string(t.roso_failed) + "," + t.recovery + "\n";
    return out;
}

std::string methods_csv(const Report& r)
{
    std::string out = "task,method,unsuccessful,recovered,recovery\n";
    for (const auto& m : r.methods)
        out += m.task + "," + m.method + "," + std::to_string(m.unsuccessful) + "," + std::to_string(m.recovered) +
               "," + m.recovery + "\n";
    return out;
}

std::string stages_csv(const Report& r)
{
    // ratio: share of the method's remaining failures (success rows excluded).
    std::map<std::pair<std::string, std::string>, int> failures;
    for (const auto& s : r.stages)
        if (s.stage != "success")
            failures[{s.task, s.method}] += s.count;
    std::string out = "task,method,stage,count,ratio\n";
    for (const auto& s : r.stages) {
        std::string ratio = "n/a";
        const int total = failures[{s.task, s.method}];
        if (s.stage != "success" && total > 0)
            ratio = text::format_fixed(static_cast<double>(s.count) / total, 4);
        out += s.task + "," + s.method + "," + s.stage + "," + std::to_string(s.count) + "," + ratio + "\n";
    }
    return out;
}

std::string summary_text(const Report& r)
{
    std::ostringstream out;
    out << "Failed runs per task (rewrite method " << (r.table1_method.empty() ? "-" : r.table1_method) << ")\n";
    out << pad("task", 38) << pad("seen", 8) << pad("unseen", 8) << pad("rewritten", 11) << "recovery\n";
    for (const auto& t : r.table1)
        out << pad(t.task, 38) << pad(std::to_string(t.seen_failed), 8) << pad(std::to_string(t.unseen_failed), 8)
            << pad(std::to_string(t.roso_failed), 11) << t.recovery << "\n";
    out << "\nRecovery per editing method\n";
    out << pad("task", 38) << pad("method", 8) << pad("failed", 8) << pad("recovered", 11) << "recovery\n";
    for (const auto& m : r.methods)
        out << pad(m.task, 38) << pad(m.method, 8) << pad(std::to_string(m.unsuccessful), 8)
            << pad(std::to_string(m.recovered), 11) << m.recovery << "\n";
    out << "\nRemaining failures by stage\n";
    for (const auto& s : r.stages)
        if (s.stage != "success" && s.count > 0)
            out << pad(s.task, 38) << pad(s.method, 8) << pad(s.stage, 22) << s.count << "\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view body)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !f.write(body.data(), static_cast<std::streamsize>(body.size())))
        throw IoError("cannot write " + path.string());
}

ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const bool write = !config.output_dir.empty();
    if (write) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec)
            throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
    }
    Environment env{Catalog::load(), config.exec};
    const PolicyModel policy = build_policy(env.catalog, config.policy);
    const RosoContext ctx = experiment_context(policy, env, config);

    ExperimentOutput out;
    out.colormap = ctx.colormap;
    auto flush = [&] {
        out.report = report_from_transcripts(out.baseline, out.transcript);
        if (!write)
            return;
        const auto& dir = config.output_dir;
        write_text(dir / "baseline.csv", baseline_csv(out.baseline));
        write_text(dir / "transcript.csv", transcript_csv(out.transcript));
        write_text(dir / "table1.csv", table1_csv(out.report));
        write_text(dir / "methods.csv", methods_csv(out.report));
        write_text(dir / "stages.csv", stages_csv(out.report));
        write_text(dir / "summary.txt", summary_text(out.report));
    };

    for (const auto task_kind : config.tasks) {
        const std::string task_name(to_string(task_kind));
        for (const auto split : config.splits) {
            TaskSpec task;
            task.kind = task_kind;
            task.split = split;
            auto collected = collect_unsuccessful(policy, env, task, config.n_variations, config.master_seed);
            for (const auto& b : collected.baseline)
                out.baseline.push_back({task_name, split_name(split), b.seed, b.reward, std::string(to_string(b.outcome))});
            if (split != Split::Unseen || collected.dataset.episodes.empty())
                continue;
            for (const auto method : config.methods) {
                const auto rows = transcript_rows(rerun(collected.dataset, method, ctx), method);
                out.transcript.insert(out.transcript.end(), rows.begin(), rows.end());
            }
        }
        flush();
    }
    flush();
    if (write) {
        write_text(config.output_dir / "colormap.csv", colormap_csv(ctx.colormap));
        plot_colormap(ctx.colormap, config.output_dir / "colormap.png");
        std::vector<Instruction> unseen;
        for (const auto& o : env.catalog.vocabulary.packing_objects(Split::Unseen))
            unseen.push_back(make_instruction(Template::PackObject, o, "brown box"));
        plot_semantic_heatmap(*ctx.encoder, unseen, seen_packing_instructions(env.catalog),
                              config.output_dir / "semantic_heatmap.png");
    }
    return out;
}

void plot_colormap(const ColorMap& cm, const std::filesystem::path& path)
{
    const plot::Heatmap h{cm.picks, cm.places, cm.success, 24};
    png::write_file(path, png::encode_rgb8(plot::render_heatmap(h)));
}

void plot_semantic_heatmap(const TextEncoder& encoder, const std::vector<Instruction>& unseen,
                           const std::vector<Instruction>& seen, const std::filesystem::path& path)
{
    if (unseen.empty() || seen.empty())
        throw Error("semantic heatmap needs non-empty instruction sets");
    plot::Heatmap h;
    h.cell = 12;
    for (const auto& s : seen)
        h.col_labels.push_back(s.pick_slot);
    std::vector<std::vector<double>> seen_vecs;
    for (const auto& s : seen)
        seen_vecs.push_back(encoder.embed(s.raw));
    for (const auto& u : unseen) {
        h.row_labels.push_back(u.pick_slot);
        const auto q = encoder.embed(u.raw);
        for (const auto& s : seen_vecs)
            h.values.push_back(inner_product(q, s));
    }
    png::write_file(path, png::encode_rgb8(plot::render_heatmap(h)));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.empty())
        throw Error("pearson: columns must have equal, non-zero length");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

std::vector<CorrelationRow> correlation_report(const std::vector<MetricRow>& rows)
{
    if (rows.size() < 3)
        throw Error("correlation report needs at least three candidates");
    std::vector<double> mse_col, ssim_col, fid_col, success;
    for (const auto& r : rows) {
        mse_col.push_back(r.mse);
        ssim_col.push_back(r.ssim);
        fid_col.push_back(r.fid_lite);
        success.push_back(r.success);
    }
    std::vector<CorrelationRow> out;
    for (const auto& [name, col] : {std::pair{"mse", &mse_col}, {"ssim", &ssim_col}, {"fid_lite", &fid_col}}) {
        const double r = pearson(*col, success);
        out.push_back({name, std::isnan(r) ? std::nullopt : std::optional<double>(r)});
    }
    return out;
}

std::string metrics_csv(const std::vector<MetricRow>& rows)
{
    std::string out = "category,mse,ssim,fid_lite,success_rate\n";
    for (const auto& r : rows)
        out += r.category + "," + text::format_fixed(r.mse, 6) + "," + text::format_fixed(r.ssim, 6) + "," +
               text::format_fixed(r.fid_lite, 6) + "," + text::format_fixed(r.success, 4) + "\n";
    return out;
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows)
{
    std::string out = "metric,pearson_r\n";
    for (const auto& r : rows)
        out += r.metric + "," + (r.r ? text::format_fixed(*r.r, 6) : std::string("undefined")) + "\n";
    return out;
}

std::vector<MetricRow> measure_candidates(const RosoContext& ctx, const UnsuccessfulDataset& dataset,
                                          const std::vector<std::string>& candidates, int samples,
                                          std::uint64_t seed)
{
    std::vector<MetricRow> out;
    for (const auto& c : candidates) {
        const auto q = measure_edit_quality(c, ctx.env->catalog, samples, seed);
        RosoContext local = ctx;
        local.quality_target = c;
        double success = 0.0;
        if (!dataset.episodes.empty()) {
            int ok = 0;
            for (const auto& e : rerun(dataset, Method::C, local))
                ok += e.result.reward == 1.0;
            success = static_cast<double>(ok) / static_cast<double>(dataset.episodes.size());
        }
        out.push_back({c, q.mse, q.ssim, q.fid_lite, success});
    }
    return out;
}

} // namespace roso
