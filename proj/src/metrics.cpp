#include "trajbench/metrics.hpp"

#include <algorithm>
#include <string>

#include "trajbench/errors.hpp"

namespace trajbench {

namespace {

void check_lengths(std::span<const Position> predicted,
                   std::span<const Position> ground_truth) {
  if (ground_truth.empty()) {
    throw InsufficientLengthError("metric: empty ground truth");
  }
  if (predicted.size() < ground_truth.size()) {
    throw InsufficientLengthError(
        "metric: prediction shorter than ground truth (" +
        std::to_string(predicted.size()) + " < " +
        std::to_string(ground_truth.size()) + ")");
  }
}

}  // namespace

double ade(std::span<const Position> predicted,
           std::span<const Position> ground_truth) {
  check_lengths(predicted, ground_truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    sum += distance(predicted[i], ground_truth[i]);
  }
  return sum / static_cast<double>(ground_truth.size());
}

double fde(std::span<const Position> predicted,
           std::span<const Position> ground_truth) {
  check_lengths(predicted, ground_truth);
  const std::size_t last = ground_truth.size() - 1;
  return distance(predicted[last], ground_truth[last]);
}

ErrorPair min_over_k(std::span<const std::vector<Position>> samples,
                     std::span<const Position> ground_truth) {
  if (samples.empty()) {
    throw ConfigError("min_over_k: no samples");
  }
  ErrorPair best{ade(samples[0], ground_truth), fde(samples[0], ground_truth)};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    best.ade = std::min(best.ade, ade(samples[i], ground_truth));
    best.fde = std::min(best.fde, fde(samples[i], ground_truth));
  }
  return best;
}

}  // namespace trajbench
