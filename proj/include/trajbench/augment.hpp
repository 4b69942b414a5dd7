#pragma once

#include <cstdint>
#include <vector>

#include "trajbench/rng.hpp"
#include "trajbench/windows.hpp"

namespace trajbench {

// Rotates every position of the window about its anchor (equivalently, every
// displacement of its relative representation) and any attached neighbor
// context about the anchor-relative origin.
TrajectoryWindow rotated_about_anchor(const TrajectoryWindow& window,
                                      double radians);

// Replaces each training sample with one rotated copy; angles are drawn from
// a zero-mean Gaussian with the given sigma in degrees. Angles are used
// verbatim, not wrapped. The set size is unchanged; one gaussian draw is
// consumed per window, in order.
void augment_rotations(std::vector<TrajectoryWindow>& windows,
                       double sigma_deg, Rng& rng);

std::vector<TrajectoryWindow> augment_rotations(
    std::vector<TrajectoryWindow> windows, double sigma_deg,
    std::uint64_t seed);

}  // namespace trajbench
