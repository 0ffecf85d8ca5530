#pragma once

#include <cstdint>

#include "roso/observation.hpp"
#include "roso/policy.hpp"
#include "roso/tabletop.hpp"

namespace roso {

struct Environment {
    Catalog catalog;
    ExecutionConfig exec{0.05};
};

struct EpisodeOutcome {
    Scene scene; // initial state
    Observation observation;
    Action action;
    ActionResult result;
    double reward = 0.0;
};

// Seed of the execution-noise stream for an episode.
std::uint64_t execution_seed(std::uint64_t episode_seed);

EpisodeOutcome run_episode(const PolicyModel& policy, const Environment& env, const TaskSpec& task,
                           std::uint64_t seed);

// Executes an action chosen from some (possibly synthetic) observation on
// the given live scene.
ActionResult execute(const Environment& env, const Scene& scene, const Action& action);

} // namespace roso
