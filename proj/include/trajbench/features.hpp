#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

#include "trajbench/windows.hpp"

namespace trajbench {

enum class Representation { kAbsolute, kRelative };

const char* to_string(Representation r);
Representation representation_from_string(const std::string& s);

// How a window is turned into a flat model input.
//
// Layout, oldest to newest:
//   relative:  [dx, dy] per history displacement (history_steps of the 7,
//              counted back from the anchor), then neighbor features;
//   absolute:  [x, y] per observed position (all 8), then neighbor features.
// Neighbor features are the 12 slots in context order, each slot's positions
// flattened [x, y] chronologically; absent slots contribute zeros.
struct FeatureSpec {
  Representation representation = Representation::kRelative;
  NeighborVariant neighbors = NeighborVariant::kBasic;
  int history_steps = kObservedSteps - 1;  // displacements; relative only
};

int neighbor_feature_dim(NeighborVariant v);
int feature_dim(const FeatureSpec& spec);

// Validates the spec itself (history deprivation requires the relative
// representation). Throws ConfigError.
void validate(const FeatureSpec& spec);

Eigen::RowVectorXd build_features(const TrajectoryWindow& window,
                                  const FeatureSpec& spec);

// The 24-component training target: the window's 12 future displacements,
// flattened [dx, dy] per step. Requires a full-length window.
Eigen::RowVectorXd build_target(const TrajectoryWindow& window);

Eigen::MatrixXd build_feature_matrix(std::span<const TrajectoryWindow> windows,
                                     const FeatureSpec& spec);
Eigen::MatrixXd build_target_matrix(std::span<const TrajectoryWindow> windows);

// Reshapes a 24-component model output into 12 displacement steps.
DisplacementSequence output_to_displacements(const Eigen::RowVectorXd& output);

}  // namespace trajbench
