#include "trajbench/features.hpp"

#include <stdexcept>

#include "trajbench/errors.hpp"
#include "trajbench/trajectory.hpp"

namespace trajbench {

const char* to_string(Representation r) {
  switch (r) {
    case Representation::kAbsolute:
      return "absolute";
    case Representation::kRelative:
      return "relative";
  }
  throw std::logic_error("unknown representation");
}

Representation representation_from_string(const std::string& s) {
  if (s == "absolute") return Representation::kAbsolute;
  if (s == "relative") return Representation::kRelative;
  throw ConfigError("unknown representation: " + s);
}

int neighbor_feature_dim(NeighborVariant v) {
  if (v == NeighborVariant::kBasic) return 0;
  return NeighborContext::kSlots * 2 * positions_per_slot(v);
}

int feature_dim(const FeatureSpec& spec) {
  const int self = spec.representation == Representation::kAbsolute
                       ? 2 * kObservedSteps
                       : 2 * spec.history_steps;
  return self + neighbor_feature_dim(spec.neighbors);
}

void validate(const FeatureSpec& spec) {
  if (spec.history_steps < 1 || spec.history_steps > kObservedSteps - 1) {
    throw ConfigError("history_steps must be in [1, " +
                      std::to_string(kObservedSteps - 1) + "], got " +
                      std::to_string(spec.history_steps));
  }
  if (spec.representation == Representation::kAbsolute &&
      spec.history_steps != kObservedSteps - 1) {
    throw ConfigError(
        "shortened history requires the relative representation");
  }
}

namespace {

void append_neighbor_features(const TrajectoryWindow& window,
                              const FeatureSpec& spec, Eigen::RowVectorXd& out,
                              int offset) {
  if (spec.neighbors == NeighborVariant::kBasic) return;
  if (!window.neighbors.has_value()) {
    throw ConfigError("window for scene " + window.scene +
                      " has no neighbor context");
  }
  const NeighborContext& ctx = *window.neighbors;
  if (ctx.variant != spec.neighbors) {
    throw ConfigError("window neighbor variant " +
                      std::string(to_string(ctx.variant)) +
                      " does not match requested " +
                      std::string(to_string(spec.neighbors)));
  }
  const int per_slot = positions_per_slot(spec.neighbors);
  for (int s = 0; s < NeighborContext::kSlots; ++s) {
    const NeighborContext::Slot& slot = ctx.slots[static_cast<size_t>(s)];
    if (!slot.present) continue;  // zeros already in place
    if (static_cast<int>(slot.relative_positions.size()) != per_slot) {
      throw ShapeError("neighbor slot holds " +
                       std::to_string(slot.relative_positions.size()) +
                       " positions, expected " + std::to_string(per_slot));
    }
    for (int t = 0; t < per_slot; ++t) {
      out(offset + (s * per_slot + t) * 2 + 0) =
          slot.relative_positions[static_cast<size_t>(t)].x;
      out(offset + (s * per_slot + t) * 2 + 1) =
          slot.relative_positions[static_cast<size_t>(t)].y;
    }
  }
}

}  // namespace

Eigen::RowVectorXd build_features(const TrajectoryWindow& window,
                                  const FeatureSpec& spec) {
  validate(spec);
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(feature_dim(spec));
  int offset = 0;
  if (spec.representation == Representation::kAbsolute) {
    const auto obs = window.observed();
    for (int t = 0; t < kObservedSteps; ++t) {
      out(2 * t + 0) = obs[static_cast<size_t>(t)].x;
      out(2 * t + 1) = obs[static_cast<size_t>(t)].y;
    }
    offset = 2 * kObservedSteps;
  } else {
    const auto obs = window.observed();
    // Most recent `history_steps` displacements, kept in chronological order.
    const int skip = (kObservedSteps - 1) - spec.history_steps;
    for (int t = 0; t < spec.history_steps; ++t) {
      const int i = skip + t;
      const Displacement d =
          obs[static_cast<size_t>(i + 1)] - obs[static_cast<size_t>(i)];
      out(2 * t + 0) = d.dx;
      out(2 * t + 1) = d.dy;
    }
    offset = 2 * spec.history_steps;
  }
  append_neighbor_features(window, spec, out, offset);
  return out;
}

Eigen::RowVectorXd build_target(const TrajectoryWindow& window) {
  if (window.future_length() != kPredictionSteps) {
    throw InsufficientLengthError(
        "target requires " + std::to_string(kPredictionSteps) +
        " future steps, window has " + std::to_string(window.future_length()));
  }
  Eigen::RowVectorXd out(2 * kPredictionSteps);
  Position prev = window.anchor();
  const auto fut = window.future();
  for (int t = 0; t < kPredictionSteps; ++t) {
    const Displacement d = fut[static_cast<size_t>(t)] - prev;
    out(2 * t + 0) = d.dx;
    out(2 * t + 1) = d.dy;
    prev = fut[static_cast<size_t>(t)];
  }
  return out;
}

Eigen::MatrixXd build_feature_matrix(std::span<const TrajectoryWindow> windows,
                                     const FeatureSpec& spec) {
  validate(spec);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(windows.size()),
                      feature_dim(spec));
  for (size_t i = 0; i < windows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = build_features(windows[i], spec);
  }
  return out;
}

Eigen::MatrixXd build_target_matrix(
    std::span<const TrajectoryWindow> windows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(windows.size()),
                      2 * kPredictionSteps);
  for (size_t i = 0; i < windows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = build_target(windows[i]);
  }
  return out;
}

DisplacementSequence output_to_displacements(const Eigen::RowVectorXd& output) {
  if (output.size() != 2 * kPredictionSteps) {
    throw ShapeError("model output has " + std::to_string(output.size()) +
                     " components, expected " +
                     std::to_string(2 * kPredictionSteps));
  }
  DisplacementSequence seq(kPredictionSteps);
  for (int t = 0; t < kPredictionSteps; ++t) {
    seq[static_cast<size_t>(t)] = Displacement{output(2 * t), output(2 * t + 1)};
  }
  return seq;
}

}  // namespace trajbench
