#include "roso/grounding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "roso/error.hpp"
#include "roso/rng.hpp"
#include "roso/text.hpp"

namespace roso {

namespace {

double ratio(double x, double y)
{
    const double hi = std::max(x, y);
    return hi > 0.0 ? std::min(x, y) / hi : 0.0;
}

double appearance_score(const Lab& x, const Lab& y)
{
    return std::max(0.0, 1.0 - delta_e(x, y) / 100.0);
}

std::uint64_t image_hash(const RgbdImage& img)
{
    return hash_string({reinterpret_cast<const char*>(img.rgb.pixels.data()), img.rgb.pixels.size()});
}

} // namespace

void GroundingConfig::validate() const
{
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(miss_noise) || !prob(misidentify_noise))
        throw DataError("grounding noise probabilities must lie in [0,1]");
    if (!(detection_threshold >= 0.0))
        throw DataError("detection threshold must be non-negative");
}

std::vector<Component> components(const RgbdImage& image)
{
    const int w = image.width(), h = image.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<Component> out;
    std::vector<std::size_t> stack;
    std::unordered_map<std::uint32_t, Lab> cache;
    for (std::size_t seed = 0; seed < label.size(); ++seed) {
        if (label[seed] >= 0 || image.depth.values[seed] <= 0.0f)
            continue;
        const int id = static_cast<int>(out.size());
        Component c{Mask(w, h), {}, {}, 0, 0.0};
        int u0 = w, v0 = h, u1 = -1, v1 = -1;
        double L = 0, a = 0, b = 0;
        label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int u = static_cast<int>(i % w), v = static_cast<int>(i / w);
            c.mask.set_index(i);
            ++c.area;
            c.max_depth = std::max(c.max_depth, static_cast<double>(image.depth.values[i]));
            u0 = std::min(u0, u), u1 = std::max(u1, u), v0 = std::min(v0, v), v1 = std::max(v1, v);
            const Rgb px = image.rgb.at(u, v);
            const std::uint32_t key = (std::uint32_t{px.r} << 16) | (std::uint32_t{px.g} << 8) | px.b;
            auto [it, fresh] = cache.try_emplace(key);
            if (fresh)
                it->second = srgb_to_lab(px);
            L += it->second.L, a += it->second.a, b += it->second.b;

            const int nu[4] = {u - 1, u + 1, u, u};
            const int nv[4] = {v, v, v - 1, v + 1};
            for (int k = 0; k < 4; ++k) {
                if (nu[k] < 0 || nu[k] >= w || nv[k] < 0 || nv[k] >= h)
                    continue;
                const std::size_t j = static_cast<std::size_t>(nv[k]) * w + nu[k];
                if (label[j] < 0 && image.depth.values[j] > 0.0f) {
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
        const double n = static_cast<double>(c.area);
        c.mean_lab = {L / n, a / n, b / n};
        c.frame = {u0, v0, u1 - u0 + 1, v1 - v0 + 1};
        out.push_back(std::move(c));
    }
    return out;
}

Descriptor parse_query(std::string_view query, const Catalog& catalog)
{
    const std::string q(text::trim(query));
    if (q.empty())
        throw LookupError("empty grounding query");
    if (catalog.vocabulary.find(q))
        return {std::nullopt, q};
    const auto sp = q.find(' ');
    if (sp != std::string::npos) {
        const std::string color = q.substr(0, sp);
        const std::string category(text::trim(std::string_view(q).substr(sp + 1)));
        if (catalog.palette.find(color) && catalog.vocabulary.find(category))
            return {color, category};
    }
    throw LookupError("grounding query names no known object: " + q);
}

double query_confidence(const Component& c, const Descriptor& query, const Catalog& catalog)
{
    const auto& kind = catalog.vocabulary.at(query.category);
    const double expected_area = kind.footprint.area() * kPixelsPerUnit * kPixelsPerUnit;
    const double area = ratio(static_cast<double>(c.area), expected_area);
    const double height = ratio(c.max_depth, kind.height);
    double conf;
    if (query.color)
        conf = 0.5 * appearance_score(c.mean_lab, catalog.palette.at(*query.color).lab) + 0.25 * area + 0.25 * height;
    else if (kind.cls != ObjectClass::Fixture && kind.appearance)
        conf = 0.4 * appearance_score(c.mean_lab, kind.appearance->mean_lab()) + 0.3 * area + 0.3 * height;
    else
        conf = 0.5 * area + 0.5 * height;
    return std::clamp(conf, 0.0, 1.0);
}

std::vector<DetectionResult> detect(const RgbdImage& image, std::string_view query, const GroundingConfig& config,
                                    const Catalog& catalog)
{
    config.validate();
    const Descriptor d = parse_query(query, catalog);
    const auto comps = components(image);

    std::vector<DetectionResult> ranked;
    ranked.reserve(comps.size());
    for (const auto& c : comps)
        ranked.push_back({c.mask, c.frame, query_confidence(c, d, catalog), std::string(text::trim(query))});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.confidence > y.confidence; });

    // Noise draws happen unconditionally so the stream depends only on the
    // seed, the query and the image.
    Rng rng(mix_seed(mix_seed(config.noise_seed, query), image_hash(image)));
    if (rng.bernoulli(config.misidentify_noise) && ranked.size() >= 2) {
        std::swap(ranked[0].mask, ranked[1].mask);
        std::swap(ranked[0].frame, ranked[1].frame);
    }

    std::vector<DetectionResult> out;
    for (auto& r : ranked) {
        if (r.confidence < config.detection_threshold)
            continue;
        if (rng.bernoulli(config.miss_noise))
            continue;
        out.push_back(std::move(r));
    }
    if (out.empty())
        throw NoDetection("no detection for '" + std::string(query) + "'");
    return out;
}

Mask segment_background(const RgbdImage& image)
{
    Mask m(image.width(), image.height());
    for (std::size_t i = 0; i < image.depth.values.size(); ++i)
        if (image.depth.values[i] == 0.0f)
            m.set_index(i);
    return m;
}

Rect frame_of(const Mask& mask)
{
    int u0 = mask.width(), v0 = mask.height(), u1 = -1, v1 = -1;
    for (int v = 0; v < mask.height(); ++v) {
        for (int u = 0; u < mask.width(); ++u) {
            if (!mask.at(u, v))
                continue;
            u0 = std::min(u0, u), u1 = std::max(u1, u);
            v0 = std::min(v0, v), v1 = std::max(v1, v);
        }
    }
    if (u1 < 0)
        throw Error("frame_of: empty mask");
    return {u0, v0, u1 - u0 + 1, v1 - v0 + 1};
}

std::string detections_csv(const std::vector<DetectionResult>& detections)
{
    std::string out = "label,confidence,x0,y0,width,height,mask_area\n";
    for (const auto& d : detections) {
        out += d.label + "," + text::format_fixed(d.confidence, 6) + "," + std::to_string(d.frame.x0) + "," +
               std::to_string(d.frame.y0) + "," + std::to_string(d.frame.width) + "," +
               std::to_string(d.frame.height) + "," + std::to_string(d.mask.count()) + "\n";
    }
    return out;
}

} // namespace roso
