#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajbench/windows.hpp"

namespace trajbench {

// Leave-one-out split description: all windows of the test scene form the
// test set; the remaining windows are shuffled with the seed and divided into
// a validation fraction and a training remainder.
struct SplitPlan {
  std::string test_scene;
  std::vector<std::string> train_scenes;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct SplitWindows {
  SplitPlan plan;
  std::vector<TrajectoryWindow> train;
  std::vector<TrajectoryWindow> validation;
  std::vector<TrajectoryWindow> test;
};

// Splits pre-sliced windows (which may already carry neighbor contexts).
// Throws ConfigError when the test scene is absent or fewer than two distinct
// scenes are present.
SplitWindows make_split(std::span<const TrajectoryWindow> windows,
                        const std::string& test_scene, std::uint64_t seed,
                        double validation_fraction = 0.1);

// Convenience overload that slices the scenes first.
SplitWindows make_split(const std::vector<Scene>& scenes,
                        const std::string& test_scene, std::uint64_t seed,
                        double validation_fraction = 0.1);

}  // namespace trajbench
