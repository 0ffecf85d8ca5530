#pragma once

#include <cstdint>

#include "roso/image.hpp"
#include "roso/instruction.hpp"
#include "roso/tabletop.hpp"

namespace roso {

/// Enough to regenerate the live scene for re-execution.
struct SceneRef {
    TaskSpec task;
    std::uint64_t seed = 0;
};

struct Observation {
    RgbdImage image;
    Instruction instruction;
    SceneRef scene_ref;
};

Observation observe(const Scene& scene, const TaskSpec& task);

} // namespace roso
