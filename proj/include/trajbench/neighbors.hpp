#pragma once

#include <map>
#include <string>
#include <vector>

#include "trajbench/dataset.hpp"
#include "trajbench/windows.hpp"

namespace trajbench {

// Builds the neighbor context of a window from its scene. Eligibility follows
// the variant: History neighbors must be observed at all 8 observed frames
// (through the anchor timestep), Future neighbors at the anchor frame and the
// 12 frames after it. Eligible neighbors are ordered by distance to the
// target at the anchor frame, ascending; at most 12 are kept and missing
// slots stay zero-filled.
NeighborContext extract_neighbors(const TrajectoryWindow& window,
                                  const Scene& scene, NeighborVariant variant);

// Attaches contexts to every window in place, resolving each window's scene
// by name. Throws ConfigError for windows whose scene is missing.
void attach_neighbor_contexts(std::vector<TrajectoryWindow>& windows,
                              const std::map<std::string, const Scene*>& scenes,
                              NeighborVariant variant);

std::map<std::string, const Scene*> scenes_by_name(
    const std::vector<Scene>& scenes);

}  // namespace trajbench
