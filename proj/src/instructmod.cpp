#include "roso/instructmod.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "roso/error.hpp"
#include "roso/grounding.hpp"
#include "roso/imgmetrics.hpp"
#include "roso/inpaint.hpp"
#include "roso/rng.hpp"
#include "roso/text.hpp"

namespace roso {

namespace {

int index_of(const std::vector<std::string>& v, std::string_view x)
{
    const auto it = std::find(v.begin(), v.end(), x);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

void normalize(std::vector<double>& v)
{
    double n2 = 0.0;
    for (double x : v)
        n2 += x * x;
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw EncodingError("cannot normalize a zero or non-finite embedding");
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v)
        x *= inv;
}

// Best row for column c; first maximum wins.
int best_row(const ColorMap& cm, int c)
{
    int best = 0;
    for (int r = 1; r < static_cast<int>(cm.picks.size()); ++r)
        if (cm.at(r, c) > cm.at(best, c))
            best = r;
    return best;
}

} // namespace

int ColorMap::row(std::string_view pick) const
{
    return index_of(picks, pick);
}

int ColorMap::col(std::string_view place) const
{
    return index_of(places, place);
}

ColorMap build_colormap(const PolicyModel& policy, const Environment& env, const std::vector<std::string>& seen_picks,
                        const std::vector<std::string>& all_places, int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw Error("colormap needs at least one trial per cell");
    ColorMap cm{seen_picks, all_places, std::vector<double>(seen_picks.size() * all_places.size(), 0.0), trials};
    for (std::size_t r = 0; r < seen_picks.size(); ++r) {
        for (std::size_t c = 0; c < all_places.size(); ++c) {
            TaskSpec task;
            task.pick_color = seen_picks[r];
            task.place_color = all_places[c];
            const std::uint64_t cell = mix_seed(seed, seen_picks[r] + "/" + all_places[c]);
            int ok = 0;
            for (int t = 0; t < trials; ++t)
                ok += run_episode(policy, env, task, mix_seed(cell, static_cast<std::uint64_t>(t))).reward == 1.0;
            cm.at(static_cast<int>(r), static_cast<int>(c)) = static_cast<double>(ok) / trials;
        }
    }
    return cm;
}

ColorMap build_colormap(const PolicyModel& policy, const Environment& env, int trials, std::uint64_t seed)
{
    return build_colormap(policy, env, env.catalog.palette.split_colors(Split::Seen),
                          env.catalog.palette.object_colors(), trials, seed);
}

std::string colormap_csv(const ColorMap& cm)
{
    std::string out = "pick\\place";
    for (const auto& p : cm.places)
        out += "," + p;
    out += "\n";
    for (std::size_t r = 0; r < cm.picks.size(); ++r) {
        out += cm.picks[r];
        for (std::size_t c = 0; c < cm.places.size(); ++c)
            out += "," + text::format_double(cm.at(static_cast<int>(r), static_cast<int>(c)));
        out += "\n";
    }
    return out;
}

ColorMap parse_colormap_csv(std::string_view body)
{
    ColorMap cm;
    const auto lines = text::split_lines(body);
    if (lines.empty())
        throw DataError("colormap: empty file");
    auto header = text::split(lines[0], ',');
    if (header.empty() || header[0] != "pick\\place")
        throw DataError("colormap: bad header");
    cm.places.assign(header.begin() + 1, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty())
            continue;
        const auto cells = text::split(lines[i], ',');
        if (cells.size() != cm.places.size() + 1)
            throw DataError("colormap: ragged row " + std::to_string(i + 1));
        cm.picks.push_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const double v = text::parse_double(cells[c]);
            if (v < 0.0 || v > 1.0)
                throw DataError("colormap: rate outside [0,1]");
            cm.success.push_back(v);
        }
    }
    return cm;
}

std::string map_color(const ColorMap& cm, std::string_view /*pick*/, std::string_view place)
{
    const int c = cm.col(place);
    if (c < 0)
        throw LookupError("colormap has no column for place color: " + std::string(place));
    if (cm.picks.empty())
        throw LookupError("colormap has no rows");
    return cm.picks[best_row(cm, c)];
}

ColorPair map_color_pair(const ColorMap& cm, std::string_view pick, std::string_view place, const Palette& palette)
{
    ColorPair out{std::string(pick), std::string(place)};
    if (!palette.is_seen_color(place)) {
        const int r = cm.row(pick);
        int best = -1;
        double best_score = 0.0;
        for (int c = 0; c < static_cast<int>(cm.places.size()); ++c) {
            if (!palette.is_seen_color(cm.places[c]))
                continue;
            double s = 0.0;
            if (r >= 0) {
                s = cm.at(r, c);
            } else {
                for (int rr = 0; rr < static_cast<int>(cm.picks.size()); ++rr)
                    s += cm.at(rr, c);
                s /= static_cast<double>(cm.picks.size());
            }
            if (best < 0 || s > best_score)
                best = c, best_score = s;
        }
        if (best < 0)
            throw LookupError("colormap has no seen place column");
        out.place = cm.places[best];
    }
    if (!palette.is_seen_color(pick))
        out.pick = map_color(cm, pick, out.place);
    return out;
}

TrigramEncoder::TrigramEncoder(int dimension) : dimension_(dimension)
{
    if (dimension < 1)
        throw EncodingError("encoder dimension must be positive");
}

std::vector<double> TrigramEncoder::embed(std::string_view text) const
{
    if (text.empty())
        throw EncodingError("cannot embed empty text");
    const std::string padded = " " + std::string(text) + " ";
    std::vector<double> v(static_cast<std::size_t>(dimension_), 0.0);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
        v[hash_string(std::string_view(padded).substr(i, 3)) % static_cast<std::uint64_t>(dimension_)] += 1.0;
    normalize(v);
    return v;
}

TableEncoder TableEncoder::load(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

TableEncoder TableEncoder::parse(std::string_view body)
{
    TableEncoder t;
    const auto lines = text::split_lines(body);
    if (lines.empty())
        throw DataError("embedding table: empty file");
    t.dimension_ = text::parse_int(text::trim(lines[0]));
    if (t.dimension_ < 1)
        throw DataError("embedding table: dimension must be positive");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto tab = lines[i].find('\t');
        if (tab == std::string::npos)
            throw DataError("embedding table: line " + std::to_string(i + 1) + " has no tab");
        const auto words = text::split_ws(std::string_view(lines[i]).substr(tab + 1));
        if (static_cast<int>(words.size()) != t.dimension_)
            throw DataError("embedding table: line " + std::to_string(i + 1) + " has the wrong dimension");
        std::vector<double> v;
        v.reserve(words.size());
        for (const auto& w : words)
            v.push_back(text::parse_double(w));
        normalize(v);
        t.entries_[lines[i].substr(0, tab)] = std::move(v);
    }
    return t;
}

std::vector<double> TableEncoder::embed(std::string_view text) const
{
    const auto it = entries_.find(text);
    if (it == entries_.end())
        throw EncodingError("embedding table has no entry for: " + std::string(text));
    return it->second;
}

double inner_product(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw EncodingError("embedding dimensions differ");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

Instruction map_semantic(const TextEncoder& encoder, const Instruction& instruction,
                         const std::vector<Instruction>& seen_instructions)
{
    if (seen_instructions.empty())
        throw LookupError("no seen instructions to map onto");
    const auto q = encoder.embed(instruction.raw);
    const Instruction* best = nullptr;
    double best_score = 0.0;
    for (const auto& s : seen_instructions) {
        const double score = inner_product(q, encoder.embed(s.raw));
        if (!best || score > best_score || (score == best_score && s.raw < best->raw))
            best = &s, best_score = score;
    }
    return *best;
}

std::vector<Instruction> seen_packing_instructions(const Catalog& catalog)
{
    std::vector<Instruction> out;
    for (const auto& o : catalog.vocabulary.packing_objects(Split::Seen))
        out.push_back(make_instruction(Template::PackObject, o, "brown box"));
    return out;
}

std::string rank_edit_quality(const std::vector<std::string>& candidates, const Vocabulary& vocabulary)
{
    if (candidates.empty())
        throw LookupError("no edit-quality candidates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (vocabulary.at(candidates[i]).alignment > vocabulary.at(candidates[best]).alignment)
            best = i;
    vocabulary.at(candidates[best]);
    return candidates[best];
}

EditQuality measure_edit_quality(const std::string& category, const Catalog& catalog, int samples,
                                 std::uint64_t seed)
{
    if (samples < 2)
        throw MetricError("edit quality needs at least two samples");
    EditQuality q{category, 0.0, 0.0, 0.0};
    std::vector<RgbImage> trained, edited;
    TaskSpec task;
    task.kind = TaskKind::PackObject;
    task.pick_object = category;
    for (int s = 0; s < samples; ++s) {
        const std::uint64_t scene_seed = mix_seed(mix_seed(seed, category), static_cast<std::uint64_t>(s));
        const Scene scene = generate_scene(task, scene_seed, catalog);
        const RgbdImage image = render_topdown(scene);
        const Mask mask = instance_mask(scene, scene.goal_pick_index());
        const Rect frame = frame_of(mask);
        const EditRequest req{image, mask, EditMode::DetectedFrame, {TargetKind::Category, category}, 1, scene_seed};
        const auto result = inpaint(req, {}, catalog);
        trained.push_back(crop(image.rgb, frame));
        edited.push_back(crop(result.image.rgb, frame));
        const int window = std::min({8, frame.width, frame.height});
        q.mse += mse(trained.back(), edited.back());
        q.ssim += ssim(trained.back(), edited.back(), window);
    }
    q.mse /= samples;
    q.ssim /= samples;
    q.fid_lite = fid_lite(trained, edited);
    return q;
}

std::string rank_edit_quality_measured(const std::vector<std::string>& candidates, const Catalog& catalog,
                                       int samples, std::uint64_t seed)
{
    if (candidates.empty())
        throw LookupError("no edit-quality candidates");
    std::size_t best = 0;
    double best_fid = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double f = measure_edit_quality(candidates[i], catalog, samples, seed).fid_lite;
        if (i == 0 || f < best_fid)
            best = i, best_fid = f;
    }
    return candidates[best];
}

} // namespace roso
