#pragma once

// Baseline language-conditioned pick/place policy. It knows only the seen
// vocabulary: prototypes for the seen colors and appearance templates for
// the seen objects. Tokens without a prototype produce a seeded
// low-amplitude noise map, and a background far from the training color
// adds a penalty field.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roso/observation.hpp"
#include "roso/vocabulary.hpp"

namespace roso {

struct PolicyConfig {
    double match_tolerance = 20.0; // CIELAB units
    std::uint64_t fallback_seed = 0x0b5e55edULL;
    double noise_amplitude = 0.05;
    int penalty_blobs = 3;
    double penalty_amplitude = 1.5;
    double penalty_sigma = 12.0; // pixels
    double penalty_keep = 0.5;   // weight of the clean score under the penalty
};

struct ObjectTemplate {
    Lab lab;     // mean appearance
    int window;  // side of the square shape window, pixels
    bool flat;   // receptacle-like (depth at or below kFlatHeight)
};

struct SeenVocabulary {
    std::vector<std::string> colors;
    std::vector<std::string> objects;
};

struct PolicyModel {
    std::map<std::string, Lab> color_prototypes;
    std::map<std::string, ObjectTemplate> object_templates; // seen objects and fixtures
    Lab background_prototype;
    double match_tolerance = 20.0;
    std::uint64_t fallback_seed = 0;
    PolicyConfig config;
};

struct AffordanceMap {
    int width = 0;
    int height = 0;
    std::vector<float> scores;

    float at(int u, int v) const { return scores[static_cast<std::size_t>(v) * width + u]; }
    Pixel argmax() const; // first maximum in row-major order
};

SeenVocabulary seen_vocabulary(const Catalog& catalog);

PolicyModel build_policy(const SeenVocabulary& seen, const Catalog& catalog, const PolicyConfig& config = {});
PolicyModel build_policy(const Catalog& catalog, const PolicyConfig& config = {});

AffordanceMap pick_affordance(const PolicyModel& model, const Observation& obs);
AffordanceMap place_affordance(const PolicyModel& model, const Observation& obs);
AffordanceMap affordance(const PolicyModel& model, const RgbdImage& image, const Descriptor& target);

Action infer(const PolicyModel& model, const Observation& obs);

// True when the background differs from the training prototype by more
// than the match tolerance.
bool background_shifted(const PolicyModel& model, const RgbdImage& image);

} // namespace roso
