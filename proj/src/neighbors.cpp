#include "trajbench/neighbors.hpp"

#include <algorithm>

#include "trajbench/errors.hpp"

namespace trajbench {

NeighborContext extract_neighbors(const TrajectoryWindow& window,
                                  const Scene& scene,
                                  NeighborVariant variant) {
  if (variant == NeighborVariant::kBasic) {
    throw ConfigError("extract_neighbors: basic variant has no neighbors");
  }
  NeighborContext context;
  context.variant = variant;

  const std::int64_t anchor_frame = window.anchor_frame();
  const std::int64_t stride = window.frame_stride;
  const Position anchor = window.anchor();

  // Frames a neighbor must fully cover; partial trajectories are excluded.
  std::vector<std::int64_t> required;
  if (variant == NeighborVariant::kHistory) {
    for (int i = 0; i < kObservedSteps; ++i) required.push_back(window.frame_at(i));
  } else {
    required.push_back(anchor_frame);  // needed for distance ordering
    for (int i = 1; i <= kPredictionSteps; ++i) {
      required.push_back(anchor_frame + stride * i);
    }
  }

  struct Candidate {
    double distance;
    std::int64_t id;
    std::vector<Position> relative;
  };
  std::vector<Candidate> candidates;

  for (const auto& [ped, track] : scene.tracks) {
    if (ped == window.pedestrian_id) continue;
    std::vector<Position> absolute;
    absolute.reserve(required.size());
    bool eligible = true;
    for (const std::int64_t frame : required) {
      const auto pos = scene.position_at(ped, frame);
      if (!pos) {
        eligible = false;
        break;
      }
      absolute.push_back(*pos);
    }
    if (!eligible) continue;

    Candidate c;
    c.id = ped;
    if (variant == NeighborVariant::kHistory) {
      c.distance = distance(absolute.back(), anchor);  // last required = t
      for (const Position& p : absolute) {
        c.relative.push_back(Position{p.x - anchor.x, p.y - anchor.y});
      }
    } else {
      c.distance = distance(absolute.front(), anchor);  // first required = t
      // Skip the anchor-frame entry; slots carry the 12 future positions.
      for (std::size_t i = 1; i < absolute.size(); ++i) {
        c.relative.push_back(
            Position{absolute[i].x - anchor.x, absolute[i].y - anchor.y});
      }
    }
    candidates.push_back(std::move(c));
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.id < b.id;
            });

  const std::size_t n =
      std::min<std::size_t>(candidates.size(), NeighborContext::kSlots);
  for (std::size_t i = 0; i < n; ++i) {
    context.slots[i].present = true;
    context.slots[i].relative_positions = std::move(candidates[i].relative);
  }
  return context;
}

void attach_neighbor_contexts(
    std::vector<TrajectoryWindow>& windows,
    const std::map<std::string, const Scene*>& scenes,
    NeighborVariant variant) {
  for (TrajectoryWindow& w : windows) {
    const auto it = scenes.find(w.scene);
    if (it == scenes.end()) {
      throw ConfigError("attach_neighbor_contexts: no scene named '" +
                        w.scene + "'");
    }
    w.neighbors = extract_neighbors(w, *it->second, variant);
  }
}

std::map<std::string, const Scene*> scenes_by_name(
    const std::vector<Scene>& scenes) {
  std::map<std::string, const Scene*> out;
  for (const Scene& s : scenes) out.emplace(s.name, &s);
  return out;
}

}  // namespace trajbench
