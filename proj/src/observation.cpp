#include "roso/observation.hpp"

namespace roso {

Observation observe(const Scene& scene, const TaskSpec& task)
{
    return {render_topdown(scene), instruction_for(scene), {task, scene.seed}};
}

} // namespace roso
