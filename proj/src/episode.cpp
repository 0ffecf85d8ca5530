#include "roso/episode.hpp"

#include "roso/rng.hpp"

namespace roso {

std::uint64_t execution_seed(std::uint64_t episode_seed)
{
    return mix_seed(episode_seed, "execution-stream");
}

ActionResult execute(const Environment& env, const Scene& scene, const Action& action)
{
    return apply_action(scene, action, env.exec, execution_seed(scene.seed));
}

EpisodeOutcome run_episode(const PolicyModel& policy, const Environment& env, const TaskSpec& task,
                           std::uint64_t seed)
{
    EpisodeOutcome out;
    out.scene = generate_scene(task, seed, env.catalog);
    out.observation = observe(out.scene, task);
    out.action = infer(policy, out.observation);
    out.result = execute(env, out.scene, out.action);
    out.reward = score(out.result.scene);
    return out;
}

} // namespace roso
