#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "trajbench/benchmark.hpp"

namespace trajbench {

// How much a trained model leans on scene-specific cues: the same
// architecture evaluated under three input treatments. "basic" feeds raw
// coordinates, "relative" removes absolute location, "rotations" additionally
// destroys dominant heading directions through rotation augmentation.
struct PriorsResult {
  ModelKind kind = ModelKind::kFeedForward;
  std::vector<std::pair<std::string, EvalReport>> representations;
};

PriorsResult environmental_prior_experiment(const ModelSpec& base,
                                            std::span<const Scene> scenes,
                                            const ProtocolConfig& protocol);

// Per-timestep input sensitivity of a trained network: gradients of the
// summed absolute outputs with respect to the inputs, taken per window; each
// history step contributes the Euclidean norm of its (x, y) gradient pair.
// Returns the raw per-step sums over all windows, oldest step first.
std::vector<double> gradient_attribution(
    const Network& net, std::span<const TrajectoryWindow> windows,
    const FeatureSpec& spec);

// Shares that sum to one (all-zero input stays all-zero).
std::vector<double> normalized_shares(std::span<const double> sums);

struct AttributionResult {
  ModelKind kind = ModelKind::kFeedForward;
  // one share per history step, oldest first, summed over every test window
  // of every fold and normalized to 1
  std::vector<double> shares;
};

AttributionResult attribution_experiment(const ModelSpec& base,
                                         std::span<const Scene> scenes,
                                         const ProtocolConfig& protocol);

// Pearson correlation; NaN when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

// Correlation between history displacement steps across windows, one matrix
// per coordinate. Entry (i, j) correlates step i with step j, oldest first.
struct CorrelationResult {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  std::size_t window_count = 0;
};

CorrelationResult history_correlation(std::span<const TrajectoryWindow> windows);
CorrelationResult correlation_experiment(std::span<const Scene> scenes);

// Benchmark quality as the visible history shrinks from the full 7
// displacements down to 1.
struct DeprivationRow {
  int history_steps = 0;
  double avg_ade = 0.0;
  double avg_fde = 0.0;
};

struct DeprivationResult {
  ModelKind kind = ModelKind::kFeedForward;
  std::vector<DeprivationRow> rows;  // history_steps ascending, 1..7
  double ade_stddev = 0.0;           // sample stddev across the rows
  double fde_stddev = 0.0;
};

DeprivationResult history_deprivation_experiment(const ModelSpec& base,
                                                 std::span<const Scene> scenes,
                                                 const ProtocolConfig& protocol);

// Benchmark quality with neighbor positions appended to the input: none,
// their observed history, or their ground-truth future.
struct NeighborRow {
  NeighborVariant variant = NeighborVariant::kBasic;
  double avg_ade = 0.0;
  double avg_fde = 0.0;
};

struct NeighborResult {
  ModelKind kind = ModelKind::kFeedForward;
  std::vector<NeighborRow> rows;  // basic, history, future
};

NeighborResult neighbor_experiment(const ModelSpec& base,
                                   std::span<const Scene> scenes,
                                   const ProtocolConfig& protocol);

}  // namespace trajbench
