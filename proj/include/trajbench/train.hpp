#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "trajbench/features.hpp"
#include "trajbench/nets.hpp"
#include "trajbench/windows.hpp"

namespace trajbench {

struct TrainConfig {
  double learning_rate = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 64;
  int epochs = 35;
  bool augment_rotations = false;
  double rotation_sigma_deg = 180.0;
  FeatureSpec features;
  std::uint64_t seed = 0;
};

// Adam with bias correction. Optimizer state is created lazily on the first
// step and keyed to parameter shapes.
class AdamOptimizer {
 public:
  AdamOptimizer(double learning_rate, double beta1, double beta2,
                double epsilon);
  explicit AdamOptimizer(const TrainConfig& config)
      : AdamOptimizer(config.learning_rate, config.beta1, config.beta2,
                      config.epsilon) {}

  // Applies one update in place. Throws NumericsError when a gradient is
  // not finite.
  void step(std::vector<Param>& params,
            const std::vector<Eigen::MatrixXd>& grads);

  long steps_taken() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Eigen::MatrixXd> m_, v_;
};

struct TrainResult {
  std::vector<double> train_loss;       // mean batch loss per epoch
  std::vector<double> validation_loss;  // full-set loss per epoch; NaN if none
};

// Trains in place. Only full-length windows participate; shortened ones are
// ignored. Consumes randomness from a generator seeded with config.seed in a
// fixed order: parameter init, then augmentation draws, then one shuffle per
// epoch. Throws ConfigError when no full-length training window exists or
// the network input width does not match the feature layout.
TrainResult train(Network& net, std::span<const TrajectoryWindow> training,
                  std::span<const TrajectoryWindow> validation,
                  const TrainConfig& config);

double mse_loss(const Network& net, const Eigen::MatrixXd& features,
                const Eigen::MatrixXd& targets);

struct Checkpoint {
  std::unique_ptr<Network> net;
  FeatureSpec features;
  TrainConfig config;
};

void save_checkpoint(const Network& net, const TrainConfig& config,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace trajbench
