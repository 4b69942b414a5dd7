#pragma once

#include <span>
#include <vector>

#include "trajbench/geometry.hpp"

namespace trajbench {

// Average L2 distance between corresponding predicted and ground-truth
// positions. The prediction may be longer than the ground truth (it is
// truncated); it must not be shorter. Throws InsufficientLengthError on an
// empty ground truth or a too-short prediction.
double ade(std::span<const Position> predicted,
           std::span<const Position> ground_truth);

// L2 distance at the last available ground-truth step.
double fde(std::span<const Position> predicted,
           std::span<const Position> ground_truth);

struct ErrorPair {
  double ade = 0.0;
  double fde = 0.0;
};

// Best-of-k evaluation: ADE and FDE are minimized over the samples
// independently. Throws ConfigError on an empty sample list.
ErrorPair min_over_k(std::span<const std::vector<Position>> samples,
                     std::span<const Position> ground_truth);

}  // namespace trajbench
