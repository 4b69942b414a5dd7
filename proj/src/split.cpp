#include "trajbench/split.hpp"

#include <algorithm>
#include <set>

#include "trajbench/errors.hpp"
#include "trajbench/rng.hpp"

namespace trajbench {

SplitWindows make_split(std::span<const TrajectoryWindow> windows,
                        const std::string& test_scene, std::uint64_t seed,
                        double validation_fraction) {
  std::set<std::string> scene_names;
  for (const TrajectoryWindow& w : windows) scene_names.insert(w.scene);
  if (scene_names.size() < 2) {
    throw ConfigError("make_split needs windows from at least 2 scenes, got " +
                      std::to_string(scene_names.size()));
  }
  if (!scene_names.contains(test_scene)) {
    throw ConfigError("unknown test scene '" + test_scene + "'");
  }
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw ConfigError("validation fraction must be in [0, 1)");
  }

  SplitWindows split;
  split.plan.test_scene = test_scene;
  split.plan.validation_fraction = validation_fraction;
  split.plan.seed = seed;
  for (const std::string& name : scene_names) {
    if (name != test_scene) split.plan.train_scenes.push_back(name);
  }

  std::vector<TrajectoryWindow> pool;
  for (const TrajectoryWindow& w : windows) {
    if (w.scene == test_scene) {
      split.test.push_back(w);
    } else {
      pool.push_back(w);
    }
  }

  Rng rng(seed);
  const std::vector<std::size_t> order = shuffled_indices(pool.size(), rng);
  const std::size_t n_validation = static_cast<std::size_t>(
      static_cast<double>(pool.size()) * validation_fraction);
  split.validation.reserve(n_validation);
  split.train.reserve(pool.size() - n_validation);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& bucket = i < n_validation ? split.validation : split.train;
    bucket.push_back(std::move(pool[order[i]]));
  }
  return split;
}

SplitWindows make_split(const std::vector<Scene>& scenes,
                        const std::string& test_scene, std::uint64_t seed,
                        double validation_fraction) {
  std::vector<TrajectoryWindow> windows;
  for (const Scene& scene : scenes) {
    auto sliced = slice_windows(scene);
    windows.insert(windows.end(), std::make_move_iterator(sliced.begin()),
                   std::make_move_iterator(sliced.end()));
  }
  return make_split(windows, test_scene, seed, validation_fraction);
}

}  // namespace trajbench
