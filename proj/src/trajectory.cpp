#include "trajbench/trajectory.hpp"

#include "trajbench/errors.hpp"

namespace trajbench {

DisplacementSequence positions_to_displacements(
    std::span<const Position> positions) {
  if (positions.size() < 2) {
    throw InsufficientLengthError(
        "positions_to_displacements: need at least 2 positions, got " +
        std::to_string(positions.size()));
  }
  DisplacementSequence out;
  out.reserve(positions.size() - 1);
  for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
    out.push_back(positions[k + 1] - positions[k]);
  }
  return out;
}

std::vector<Position> displacements_to_positions(
    const Position& anchor, std::span<const Displacement> seq) {
  std::vector<Position> out;
  out.reserve(seq.size());
  Position current = anchor;
  for (const Displacement& d : seq) {
    current = current + d;
    out.push_back(current);
  }
  return out;
}

}  // namespace trajbench
