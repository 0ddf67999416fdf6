#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hazcrowd {

/// Names accepted by preset_json.
std::vector<std::string> preset_names();

/// Scenario document for a named preset. Agent personalities are left as
/// "random" so they follow the run seed. Throws std::invalid_argument for an
/// unknown name.
///
///   persistent-concurrent, transient-concurrent,
///   persistent-staggered, transient-staggered   40 agents, two hazards, open field
///   office      four rooms off a corridor, 50 agents, bombs at step 8, fire at step 64
///   crossroad   50 pedestrians, car bombs at steps 16 and 24
///   head-on     two agents swapping places 20 m apart
std::string preset_json(std::string_view name);

} // namespace hazcrowd
