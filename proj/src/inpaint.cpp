#include "roso/inpaint.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "roso/error.hpp"
#include "roso/grounding.hpp"
#include "roso/png.hpp"
#include "roso/rng.hpp"

namespace roso {

namespace {

constexpr double kMisalignmentScale = 60.0; // Lab units at alignment 0
constexpr double kVariantStep = 12.0;

// Deterministic unit direction in Lab space.
std::array<double, 3> direction(std::string_view key)
{
    Rng rng(mix_seed(0x1ab0ffULL, key));
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(1.0 - z * z);
    return {z, r * std::cos(phi), r * std::sin(phi)};
}

Rgb shifted(Rgb c, const std::array<double, 3>& d, double amount)
{
    const Lab l = srgb_to_lab(c);
    return lab_to_srgb({l.L + amount * d[0], l.a + amount * d[1], l.b + amount * d[2]});
}

Rgb nudge(Rgb c, Rgb avoid)
{
    if (!(c == avoid))
        return c;
    c.r = static_cast<std::uint8_t>(c.r < 255 ? c.r + 1 : c.r - 1);
    return c;
}

// Most frequent color among depth-0 pixels; the image's own background.
std::optional<Rgb> background_color(const RgbdImage& img)
{
    std::map<std::uint32_t, std::size_t> counts;
    for (int v = 0; v < img.height(); ++v)
        for (int u = 0; u < img.width(); ++u)
            if (img.depth.at(u, v) == 0.0f) {
                const Rgb c = img.rgb.at(u, v);
                ++counts[(std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b];
            }
    if (counts.empty())
        return std::nullopt;
    const auto best = std::max_element(counts.begin(), counts.end(),
                                       [](const auto& x, const auto& y) { return x.second < y.second; });
    const std::uint32_t k = best->first;
    return Rgb{static_cast<std::uint8_t>(k >> 16), static_cast<std::uint8_t>(k >> 8), static_cast<std::uint8_t>(k)};
}

std::array<double, 3> global_mean(const RgbImage& img)
{
    std::array<double, 3> s{0, 0, 0};
    for (std::size_t i = 0; i < img.size(); ++i)
        for (int c = 0; c < 3; ++c)
            s[c] += img.pixels[3 * i + c];
    for (auto& x : s)
        x /= static_cast<double>(img.size());
    return s;
}

// Blur, then pull toward the image mean; applied inside the mask only.
void degrade(RgbImage& img, const Mask& mask, double strength, Rng& rng, std::optional<Rgb> avoid)
{
    const RgbImage src = img;
    const auto mean = global_mean(src);
    const double t = std::min(1.0, strength * rng.uniform(0.5, 0.7));
    const int w = img.width, h = img.height;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (!mask.at(u, v))
                continue;
            std::array<double, 3> acc{0, 0, 0};
            int n = 0;
            for (int dv = -2; dv <= 2; ++dv) {
                for (int du = -2; du <= 2; ++du) {
                    const int uu = u + du, vv = v + dv;
                    if (uu < 0 || uu >= w || vv < 0 || vv >= h)
                        continue;
                    const Rgb c = src.at(uu, vv);
                    acc[0] += c.r, acc[1] += c.g, acc[2] += c.b;
                    ++n;
                }
            }
            std::array<std::uint8_t, 3> out{};
            for (int c = 0; c < 3; ++c) {
                const double blurred = acc[c] / n;
                out[c] = static_cast<std::uint8_t>(std::clamp(std::lround((1.0 - t) * blurred + t * mean[c]), 0L, 255L));
            }
            Rgb px{out[0], out[1], out[2]};
            if (avoid)
                px = nudge(px, *avoid);
            img.set(u, v, px);
        }
    }
}

} // namespace

std::string_view to_string(EditMode m)
{
    return m == EditMode::WholeImage ? "whole-image" : "detected-frame";
}

Appearance target_appearance(const EditTarget& target, int variant, const Catalog& catalog)
{
    Appearance app;
    double misalignment = 0.0;
    if (target.kind == TargetKind::Category) {
        const auto* kind = catalog.vocabulary.find(target.token);
        if (!kind || !kind->appearance)
            throw EditError("no appearance template for target: " + target.token);
        app = *kind->appearance;
        misalignment = (1.0 - kind->alignment) * kMisalignmentScale;
    } else {
        const auto* entry = catalog.palette.find(target.token);
        if (!entry)
            throw EditError("unknown target color: " + target.token);
        app = {entry->rgb, TextureKind::Plain, {}};
    }
    auto apply = [&](const std::array<double, 3>& d, double amount) {
        if (amount == 0.0)
            return;
        app.base = shifted(app.base, d, amount);
        if (app.texture == TextureKind::Stripes)
            app.stripe = shifted(app.stripe, d, amount);
    };
    apply(direction(target.token), misalignment);
    if (variant > 0)
        apply(direction(target.token + "#variant"), kVariantStep * variant);
    return app;
}

EditResult inpaint(const EditRequest& req, const FidelityModel& fidelity, const Catalog& catalog)
{
    if (req.variability < 1)
        throw EditError("variability must be at least 1");
    if (fidelity.min_frame_pixels <= 0 || fidelity.degradation_strength < 0.0)
        throw EditError("invalid fidelity model");
    if (req.mask.width() != req.image.width() || req.mask.height() != req.image.height())
        throw EditError("mask and image sizes differ");
    const bool background = req.target.kind == TargetKind::Background;
    if (req.mask.empty()) {
        if (!background)
            throw EditError("empty mask for an object edit");
        return {req.image, false, 0};
    }

    Rng rng(mix_seed(req.seed, "inpaint"));
    const int variant = req.variability > 1 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(req.variability))) : 0;
    const Appearance app = target_appearance(req.target, variant, catalog);
    const Rect frame = frame_of(req.mask);
    const int phase = req.mode == EditMode::DetectedFrame ? frame.x0 : 0;
    const auto avoid = background ? std::nullopt : background_color(req.image);

    EditResult out{req.image, false, variant};
    for (int v = frame.y0; v < frame.y0 + frame.height; ++v) {
        for (int u = frame.x0; u < frame.x0 + frame.width; ++u) {
            if (!req.mask.at(u, v))
                continue;
            Rgb c = app.at_column(u - phase);
            if (avoid)
                c = nudge(c, *avoid);
            out.image.rgb.set(u, v, c);
        }
    }

    if (!background && req.mode == EditMode::WholeImage && frame.area() < fidelity.min_frame_pixels &&
        fidelity.degradation_strength > 0.0) {
        degrade(out.image.rgb, req.mask, fidelity.degradation_strength, rng, avoid);
        out.degraded = true;
    }
    return out;
}

RgbdImage recolor_background(const RgbdImage& image, const Mask& background_mask, Rgb target)
{
    RgbdImage out = image;
    for (std::size_t i = 0; i < background_mask.size(); ++i) {
        if (!background_mask.at_index(i))
            continue;
        out.rgb.pixels[3 * i] = target.r;
        out.rgb.pixels[3 * i + 1] = target.g;
        out.rgb.pixels[3 * i + 2] = target.b;
    }
    return out;
}

RgbdImage recolor_background(const RgbdImage& image, const Mask& background_mask, const Catalog& catalog)
{
    return recolor_background(image, background_mask, catalog.palette.train_background().rgb);
}

std::string edit_sidecar(const EditRequest& req, const EditResult& result)
{
    static constexpr std::string_view kinds[] = {"color", "category", "background"};
    std::string s;
    s += "mode " + std::string(to_string(req.mode)) + "\n";
    s += "target " + std::string(kinds[static_cast<int>(req.target.kind)]) + " " + req.target.token + "\n";
    s += "seed " + std::to_string(req.seed) + "\n";
    s += "variant " + std::to_string(result.variant) + " of " + std::to_string(req.variability) + "\n";
    s += std::string("degraded ") + (result.degraded ? "yes" : "no") + "\n";
    return s;
}

void save_edit(const std::filesystem::path& prefix, const EditRequest& req, const EditResult& result)
{
    png::write_file(prefix.string() + "_rgb.png", png::encode_rgb8(result.image.rgb));
    png::write_file(prefix.string() + "_depth.png", png::encode_gray16(result.image.depth, 1000.0));
    const auto side = edit_sidecar(req, result);
    png::write_file(prefix.string() + "_edit.txt",
                    {reinterpret_cast<const std::uint8_t*>(side.data()), side.size()});
}

} // namespace roso
