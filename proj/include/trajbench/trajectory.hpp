#pragma once

#include <span>
#include <vector>

#include "trajbench/geometry.hpp"

namespace trajbench {

// Observations are spaced 0.4 s apart (8 observed steps = 3.2 s, 12 predicted
// steps = 4.8 s). The timestep is metadata only; every model works
// per-timestep.
inline constexpr double kTimestepSeconds = 0.4;
inline constexpr int kObservedSteps = 8;
inline constexpr int kPredictionSteps = 12;
inline constexpr int kMinWindowLength = 10;
inline constexpr int kMaxWindowLength = kObservedSteps + kPredictionSteps;

using DisplacementSequence = std::vector<Displacement>;

// Differences a position sequence into its relative displacements.
// Output length is input length - 1; throws InsufficientLengthError below 2.
DisplacementSequence positions_to_displacements(
    std::span<const Position> positions);

// Accumulates displacements from an anchor: out[0] = anchor + seq[0],
// out[k] = out[k-1] + seq[k]. Inverse of positions_to_displacements.
std::vector<Position> displacements_to_positions(
    const Position& anchor, std::span<const Displacement> seq);

}  // namespace trajbench
