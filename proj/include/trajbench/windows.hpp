#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajbench/dataset.hpp"
#include "trajbench/trajectory.hpp"

namespace trajbench {

enum class NeighborVariant { kBasic, kHistory, kFuture };

const char* to_string(NeighborVariant v);
NeighborVariant neighbor_variant_from_string(const std::string& s);

inline int positions_per_slot(NeighborVariant v) {
  return v == NeighborVariant::kFuture ? kPredictionSteps : kObservedSteps;
}

// The 12 closest co-present pedestrians, ordered by distance to the target at
// the anchor timestep, coordinates relative to the target's anchor position.
// Missing slots are zero-filled. History slots carry the 8 observed-frame
// positions, Future slots the 12 ground-truth future positions.
struct NeighborContext {
  static constexpr int kSlots = 12;

  struct Slot {
    bool present = false;
    std::vector<Position> relative_positions;  // empty when absent
  };

  NeighborVariant variant = NeighborVariant::kHistory;
  std::vector<Slot> slots = std::vector<Slot>(kSlots);

  int positions_per_slot() const { return trajbench::positions_per_slot(variant); }
};

// One sliced benchmark sample: 8 observed positions followed by 2..12
// ground-truth future positions of a single pedestrian.
struct TrajectoryWindow {
  std::string scene;
  std::int64_t pedestrian_id = 0;
  std::int64_t start_frame = 0;
  std::int64_t frame_stride = 1;
  int observed_count = kObservedSteps;
  std::vector<Position> positions;  // observed + future, length 10..20
  std::optional<NeighborContext> neighbors;

  std::int64_t frame_at(int i) const {
    return start_frame + static_cast<std::int64_t>(i) * frame_stride;
  }
  std::int64_t anchor_frame() const { return frame_at(observed_count - 1); }
  const Position& anchor() const {
    return positions[static_cast<std::size_t>(observed_count - 1)];
  }
  std::span<const Position> observed() const {
    return {positions.data(), static_cast<std::size_t>(observed_count)};
  }
  std::span<const Position> future() const {
    return {positions.data() + observed_count,
            positions.size() - static_cast<std::size_t>(observed_count)};
  }
  int future_length() const {
    return static_cast<int>(positions.size()) - observed_count;
  }
};

// Slides a step-1 window over a trajectory: every start index yields a window
// of length min(20, remaining); windows shorter than 10 are rejected.
std::vector<TrajectoryWindow> slice_windows(const Trajectory& trajectory,
                                            const std::string& scene_name);
std::vector<TrajectoryWindow> slice_windows(const Scene& scene);

// Relative-motion view of a window: differenced observed positions (7
// displacements), differenced last-observed+future positions (one per future
// step), and the anchor needed to map predictions back to world coordinates.
struct RelativeWindow {
  DisplacementSequence history;
  DisplacementSequence target;
  Position anchor;
};

RelativeWindow to_relative(const TrajectoryWindow& window);

// Line-oriented interchange format for debugging and cross-implementation
// diffing: scene, pedestrian id, anchor frame, frame stride, observed count,
// total count, then the flattened coordinates.
void write_windows(const std::filesystem::path& path,
                   std::span<const TrajectoryWindow> windows);
std::vector<TrajectoryWindow> read_windows(const std::filesystem::path& path);

}  // namespace trajbench
