#include "trajbench/augment.hpp"

namespace trajbench {

TrajectoryWindow rotated_about_anchor(const TrajectoryWindow& window,
                                      double radians) {
  TrajectoryWindow out = window;
  const Position center = window.anchor();
  for (Position& p : out.positions) {
    p = rotated_about(p, center, radians);
  }
  if (out.neighbors) {
    for (NeighborContext::Slot& slot : out.neighbors->slots) {
      for (Position& p : slot.relative_positions) {
        // Neighbor coordinates are already anchor-relative.
        p = rotated_about(p, Position{0.0, 0.0}, radians);
      }
    }
  }
  return out;
}

void augment_rotations(std::vector<TrajectoryWindow>& windows,
                       double sigma_deg, Rng& rng) {
  for (TrajectoryWindow& w : windows) {
    const double angle = gaussian(rng) * sigma_deg * kDegreesToRadians;
    w = rotated_about_anchor(w, angle);
  }
}

std::vector<TrajectoryWindow> augment_rotations(
    std::vector<TrajectoryWindow> windows, double sigma_deg,
    std::uint64_t seed) {
  Rng rng(seed);
  augment_rotations(windows, sigma_deg, rng);
  return windows;
}

}  // namespace trajbench
