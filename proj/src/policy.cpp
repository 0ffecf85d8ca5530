#include "roso/policy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "roso/error.hpp"
#include "roso/kernels.hpp"
#include "roso/rng.hpp"

namespace roso {

namespace {

struct LabPlanes {
    std::vector<float> L, a, b;
};

std::uint32_t pack(Rgb c)
{
    return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
}

LabPlanes to_lab_planes(const RgbImage& img)
{
    const std::size_t n = img.size();
    LabPlanes p{std::vector<float>(n), std::vector<float>(n), std::vector<float>(n)};
    std::unordered_map<std::uint32_t, Lab> cache;
    for (std::size_t i = 0; i < n; ++i) {
        const Rgb c{img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]};
        auto [it, fresh] = cache.try_emplace(pack(c));
        if (fresh)
            it->second = srgb_to_lab(c);
        p.L[i] = static_cast<float>(it->second.L);
        p.a[i] = static_cast<float>(it->second.a);
        p.b[i] = static_cast<float>(it->second.b);
    }
    return p;
}

// 3x3 mean, clipped at the border.
std::vector<float> box3(const std::vector<float>& x, int w, int h)
{
    std::vector<float> out(x.size());
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            float s = 0.0f;
            int n = 0;
            for (int dv = -1; dv <= 1; ++dv) {
                const int vv = v + dv;
                if (vv < 0 || vv >= h)
                    continue;
                for (int du = -1; du <= 1; ++du) {
                    const int uu = u + du;
                    if (uu < 0 || uu >= w)
                        continue;
                    s += x[static_cast<std::size_t>(vv) * w + uu];
                    ++n;
                }
            }
            out[static_cast<std::size_t>(v) * w + u] = s / static_cast<float>(n);
        }
    }
    return out;
}

AffordanceMap noise_map(const PolicyModel& model, int w, int h, const std::string& token)
{
    AffordanceMap m{w, h, std::vector<float>(static_cast<std::size_t>(w) * h)};
    const std::uint64_t base = mix_seed(model.fallback_seed, token);
    const double amp = model.config.noise_amplitude;
    for (std::size_t i = 0; i < m.scores.size(); ++i)
        m.scores[i] = static_cast<float>(amp * unit_from_bits(mix_seed(base, i)));
    return m;
}

std::uint64_t image_hash(const RgbImage& img)
{
    return hash_string({reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size()});
}

std::vector<float> penalty_field(const PolicyModel& model, const RgbImage& img)
{
    const auto& cfg = model.config;
    const int w = img.width, h = img.height;
    std::vector<float> field(static_cast<std::size_t>(w) * h, 0.0f);
    Rng rng(mix_seed(model.fallback_seed ^ image_hash(img), "background-penalty"));
    const double inv2s2 = 1.0 / (2.0 * cfg.penalty_sigma * cfg.penalty_sigma);
    for (int k = 0; k < cfg.penalty_blobs; ++k) {
        const double cu = rng.uniform(0.0, w);
        const double cv = rng.uniform(0.0, h);
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                const double du = u + 0.5 - cu, dv = v + 0.5 - cv;
                field[static_cast<std::size_t>(v) * w + u] +=
                    static_cast<float>(cfg.penalty_amplitude * std::exp(-(du * du + dv * dv) * inv2s2));
            }
        }
    }
    return field;
}

struct Target {
    Lab lab;
    int window = 1;
    bool flat = false;
};

// Nullopt when some token of the descriptor has no prototype.
std::optional<Target> resolve(const PolicyModel& model, const Descriptor& d)
{
    const auto t = model.object_templates.find(d.category);
    if (t == model.object_templates.end())
        return std::nullopt;
    Target out{t->second.lab, t->second.window, t->second.flat};
    if (d.color) {
        const auto c = model.color_prototypes.find(*d.color);
        if (c == model.color_prototypes.end())
            return std::nullopt;
        out.lab = c->second;
    }
    return out;
}

std::string token_text(const Descriptor& d)
{
    return d.color ? *d.color + " " + d.category : d.category;
}

int window_for(const Footprint& f)
{
    return std::max(3, static_cast<int>(std::lround(std::sqrt(f.area()) * kPixelsPerUnit)));
}

} // namespace

Pixel AffordanceMap::argmax() const
{
    if (scores.empty())
        throw InferenceError("empty affordance map");
    const std::size_t i = kernels::argmax(scores);
    return {static_cast<int>(i % width), static_cast<int>(i / width)};
}

SeenVocabulary seen_vocabulary(const Catalog& catalog)
{
    return {catalog.palette.split_colors(Split::Seen), catalog.vocabulary.packing_objects(Split::Seen)};
}

PolicyModel build_policy(const SeenVocabulary& seen, const Catalog& catalog, const PolicyConfig& config)
{
    if (!(config.match_tolerance > 0.0))
        throw BuildError("match tolerance must be positive");
    PolicyModel m;
    m.config = config;
    m.match_tolerance = config.match_tolerance;
    m.fallback_seed = config.fallback_seed;
    m.background_prototype = catalog.palette.train_background().lab;

    std::set<std::string> tokens;
    for (const auto& c : seen.colors) {
        if (!tokens.insert(c).second)
            throw BuildError("duplicate token: " + c);
        const auto* e = catalog.palette.find(c);
        if (!e)
            throw BuildError("token missing from palette: " + c);
        m.color_prototypes[c] = e->lab;
    }
    for (const auto& kind : catalog.vocabulary.kinds()) {
        if (kind.cls != ObjectClass::Fixture)
            continue;
        const Lab lab = kind.appearance ? kind.appearance->mean_lab() : Lab{};
        m.object_templates[kind.name] = {lab, window_for(kind.footprint), kind.height <= kFlatHeight};
    }
    for (const auto& o : seen.objects) {
        if (!tokens.insert(o).second)
            throw BuildError("duplicate token: " + o);
        const auto* kind = catalog.vocabulary.find(o);
        if (!kind || !kind->appearance)
            throw BuildError("token missing from vocabulary: " + o);
        m.object_templates[o] = {kind->appearance->mean_lab(), window_for(kind->footprint),
                                 kind->height <= kFlatHeight};
    }
    return m;
}

PolicyModel build_policy(const Catalog& catalog, const PolicyConfig& config)
{
    return build_policy(seen_vocabulary(catalog), catalog, config);
}

bool background_shifted(const PolicyModel& model, const RgbdImage& image)
{
    double L = 0, a = 0, b = 0;
    std::size_t n = 0;
    std::unordered_map<std::uint32_t, Lab> cache;
    for (int v = 0; v < image.height(); ++v) {
        for (int u = 0; u < image.width(); ++u) {
            if (image.depth.at(u, v) != 0.0f)
                continue;
            const Rgb c = image.rgb.at(u, v);
            auto [it, fresh] = cache.try_emplace(pack(c));
            if (fresh)
                it->second = srgb_to_lab(c);
            L += it->second.L;
            a += it->second.a;
            b += it->second.b;
            ++n;
        }
    }
    if (n == 0)
        return false;
    const Lab mean{L / n, a / n, b / n};
    return delta_e(mean, model.background_prototype) > model.match_tolerance;
}

AffordanceMap affordance(const PolicyModel& model, const RgbdImage& image, const Descriptor& target)
{
    const int w = image.width(), h = image.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const auto resolved = resolve(model, target);
    if (!resolved)
        return noise_map(model, w, h, token_text(target));

    const LabPlanes raw = to_lab_planes(image.rgb);
    const auto L = box3(raw.L, w, h), A = box3(raw.a, w, h), B = box3(raw.b, w, h);
    std::vector<float> sim(n);
    kernels::lab_similarity(L, A, B, static_cast<float>(resolved->lab.L), static_cast<float>(resolved->lab.a),
                            static_cast<float>(resolved->lab.b), static_cast<float>(model.match_tolerance), sim);

    // Integral image of the match mask.
    std::vector<std::uint32_t> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    std::vector<std::uint8_t> match(n);
    for (int v = 0; v < h; ++v) {
        std::uint32_t row = 0;
        for (int u = 0; u < w; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * w + u;
            const float d = image.depth.values[i];
            const bool depth_ok = d > 0.0f && ((d <= kFlatHeight) == resolved->flat);
            match[i] = sim[i] > 0.0f && depth_ok;
            row += match[i];
            integral[static_cast<std::size_t>(v + 1) * (w + 1) + u + 1] =
                integral[static_cast<std::size_t>(v) * (w + 1) + u + 1] + row;
        }
    }

    AffordanceMap map{w, h, std::vector<float>(n, 0.0f)};
    const int s = resolved->window;
    const float inv_area = 1.0f / static_cast<float>(s * s);
    for (int v = 0; v < h; ++v) {
        const int v0 = std::max(0, v - s / 2), v1 = std::min(h, v - s / 2 + s);
        for (int u = 0; u < w; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * w + u;
            if (!match[i])
                continue;
            const int u0 = std::max(0, u - s / 2), u1 = std::min(w, u - s / 2 + s);
            const auto at = [&](int x, int y) { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };
            const std::uint32_t count = at(u1, v1) - at(u0, v1) - at(u1, v0) + at(u0, v0);
            map.scores[i] = sim[i] * (static_cast<float>(count) * inv_area);
        }
    }

    if (background_shifted(model, image)) {
        const auto field = penalty_field(model, image.rgb);
        kernels::axpby(static_cast<float>(model.config.penalty_keep), map.scores, 1.0f, field, map.scores);
    }
    return map;
}

AffordanceMap pick_affordance(const PolicyModel& model, const Observation& obs)
{
    return affordance(model, obs.image, pick_descriptor(obs.instruction));
}

AffordanceMap place_affordance(const PolicyModel& model, const Observation& obs)
{
    return affordance(model, obs.image, place_descriptor(obs.instruction));
}

Action infer(const PolicyModel& model, const Observation& obs)
{
    const auto instr = parse_instruction(obs.instruction.raw);
    return {affordance(model, obs.image, pick_descriptor(instr)).argmax(),
            affordance(model, obs.image, place_descriptor(instr)).argmax()};
}

} // namespace roso
