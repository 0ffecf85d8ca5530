#pragma once

// Procedural stand-in for mask-constrained inpainting. The masked region is
// re-rendered as the target's appearance; everything else, including the
// whole depth map, passes through untouched.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "roso/image.hpp"
#include "roso/vocabulary.hpp"

namespace roso {

enum class EditMode { WholeImage, DetectedFrame };
std::string_view to_string(EditMode m);

enum class TargetKind { Color, Category, Background };

struct EditTarget {
    TargetKind kind = TargetKind::Color;
    std::string token; // palette color name or category
};

struct EditRequest {
    RgbdImage image;
    Mask mask;
    EditMode mode = EditMode::DetectedFrame;
    EditTarget target;
    int variability = 1;
    std::uint64_t seed = 0;
};

struct FidelityModel {
    int min_frame_pixels = 900;
    double degradation_strength = 1.0;
};

struct EditResult {
    RgbdImage image;
    bool degraded = false;
    int variant = 0;
};

// Appearance the target is rendered with: alignment offset for categories,
// plus the variant shift.
Appearance target_appearance(const EditTarget& target, int variant, const Catalog& catalog);

EditResult inpaint(const EditRequest& req, const FidelityModel& fidelity, const Catalog& catalog);

RgbdImage recolor_background(const RgbdImage& image, const Mask& background_mask, Rgb target);
RgbdImage recolor_background(const RgbdImage& image, const Mask& background_mask, const Catalog& catalog);

// "key value" lines: mode, target, seed, variant, degraded.
std::string edit_sidecar(const EditRequest& req, const EditResult& result);
void save_edit(const std::filesystem::path& prefix, const EditRequest& req, const EditResult& result);

} // namespace roso
