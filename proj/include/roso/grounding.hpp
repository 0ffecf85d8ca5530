#pragma once

// Prompt-grounded detection over depth-separated connected components.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "roso/image.hpp"
#include "roso/tabletop.hpp"
#include "roso/vocabulary.hpp"

namespace roso {

struct GroundingConfig {
    double detection_threshold = 0.35;
    double miss_noise = 0.0;
    double misidentify_noise = 0.0;
    std::uint64_t noise_seed = 0;

    void validate() const; // throws DataError
};

struct DetectionResult {
    Mask mask;
    Rect frame;
    double confidence = 0.0;
    std::string label;
};

/// A 4-connected region of non-zero depth.
struct Component {
    Mask mask;
    Rect frame;
    Lab mean_lab;
    std::size_t area = 0;
    double max_depth = 0.0;
};

std::vector<Component> components(const RgbdImage& image);

// "<color> <category>" or "<category>". Throws LookupError for tokens the
// catalog does not know.
Descriptor parse_query(std::string_view query, const Catalog& catalog);

double query_confidence(const Component& c, const Descriptor& query, const Catalog& catalog);

// Sorted by confidence, descending. Throws NoDetection when nothing clears
// the threshold (or every detection was dropped by the miss noise).
std::vector<DetectionResult> detect(const RgbdImage& image, std::string_view query, const GroundingConfig& config,
                                    const Catalog& catalog);

Mask segment_background(const RgbdImage& image);

Rect frame_of(const Mask& mask); // throws Error on an empty mask

// label,confidence,x0,y0,width,height,mask_area
std::string detections_csv(const std::vector<DetectionResult>& detections);

} // namespace roso
