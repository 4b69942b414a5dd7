#pragma once

#include <filesystem>
#include <span>

#include <Eigen/Core>

#include "trajbench/features.hpp"
#include "trajbench/rng.hpp"
#include "trajbench/trajectory.hpp"
#include "trajbench/windows.hpp"

namespace trajbench {

// Repeats the most recent observed displacement for `horizon` steps.
DisplacementSequence cvm_predict(std::span<const Position> observed,
                                 int horizon);

// Constant velocity with one angular perturbation per sample: the last
// displacement is rotated by an angle drawn from N(0, sigma_deg^2) and then
// repeated. Speed is preserved exactly. Returns k sequences; consumes exactly
// k Gaussian draws from `rng` in sample order.
std::vector<DisplacementSequence> cvm_sampled_predict(
    std::span<const Position> observed, int horizon, int k, double sigma_deg,
    Rng& rng);

// Extrapolates the last velocity and the last change of velocity:
// step i (0-based) moves by v + (i + 1) * a.
DisplacementSequence const_acc_predict(std::span<const Position> observed,
                                       int horizon);

// Ordinary least squares from window features to the 24-component target,
// fit for all targets jointly. A bias column is implicit.
struct LinRegModel {
  FeatureSpec features;
  Eigen::MatrixXd weights;      // feature_dim x 24
  Eigen::RowVectorXd intercept; // 1 x 24
  bool rank_deficient = false;
  Eigen::Index rank = 0;

  Eigen::RowVectorXd predict_features(const Eigen::RowVectorXd& x) const;
  DisplacementSequence predict(const TrajectoryWindow& window) const;
};

// Throws ConfigError when there are fewer rows than feature_dim + 1. On a
// rank-deficient design the minimum-norm solution is returned and flagged.
LinRegModel linreg_fit(std::span<const TrajectoryWindow> windows,
                       const FeatureSpec& spec);
LinRegModel linreg_fit_matrices(const Eigen::MatrixXd& features,
                                const Eigen::MatrixXd& targets,
                                const FeatureSpec& spec);

void save_linreg(const LinRegModel& model, const std::filesystem::path& path);
LinRegModel load_linreg(const std::filesystem::path& path);

}  // namespace trajbench
