#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "trajbench/baselines.hpp"
#include "trajbench/dataset.hpp"
#include "trajbench/metrics.hpp"
#include "trajbench/split.hpp"
#include "trajbench/train.hpp"
#include "trajbench/windows.hpp"

namespace trajbench {

enum class ModelKind {
  kConstantVelocity,
  kConstantVelocitySampled,
  kConstantAcceleration,
  kLinear,
  kFeedForward,
  kRecurrent,
};

const char* to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::kConstantVelocity;
  std::string label;             // row name in reports; defaults to the kind
  FeatureSpec features;          // linear and neural models
  TrainConfig train;             // neural models; features/seed set per fold
  int sample_count = 20;         // sampled constant velocity
  double sample_sigma_deg = 25.0;

  bool is_neural() const {
    return kind == ModelKind::kFeedForward || kind == ModelKind::kRecurrent;
  }
  bool uses_features() const {
    return is_neural() || kind == ModelKind::kLinear;
  }
  std::string display_label() const {
    return label.empty() ? to_string(kind) : label;
  }
};

struct ProtocolConfig {
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  // Folds to run; empty means one fold per scene, in scene order.
  std::vector<std::string> test_scenes;
  int workers = 1;
};

struct SceneResult {
  std::string scene;
  double ade = 0.0;
  double fde = 0.0;
  std::size_t window_count = 0;
};

struct EvalReport {
  ModelSpec model;
  std::vector<SceneResult> scenes;
  double avg_ade = 0.0;  // unweighted mean over scenes
  double avg_fde = 0.0;
};

// Windows for all scenes, sliced once, neighbor contexts attached when the
// variant needs them.
std::vector<TrajectoryWindow> protocol_windows(std::span<const Scene> scenes,
                                               NeighborVariant variant);

// Deterministic per-fold seed; every model sees the identical split for a
// given protocol seed and test scene.
std::uint64_t fold_seed(const ProtocolConfig& protocol,
                        const std::string& test_scene);

SplitWindows fold_split(std::span<const TrajectoryWindow> windows,
                        const std::string& test_scene,
                        const ProtocolConfig& protocol);

// Builds the (untrained) network an eval of this model instantiates.
// Throws ConfigError for non-neural kinds.
std::unique_ptr<Network> make_model_network(const ModelSpec& model);

// Trains the model's network on one fold. The returned network is ready for
// prediction; `result` (when non-null) receives the loss curves.
std::unique_ptr<Network> train_fold_network(const ModelSpec& model,
                                            const SplitWindows& split,
                                            std::uint64_t seed,
                                            TrainResult* result = nullptr);

// Mean ADE/FDE of one model over one set of windows. For trained models pass
// the fold's network or linear fit. Sampling models consume `rng` window by
// window, in order.
ErrorPair evaluate_windows(const ModelSpec& model,
                           std::span<const TrajectoryWindow> windows,
                           const Network* net, const LinRegModel* linear,
                           Rng* rng);

// Leave-one-out evaluation of one model over all requested folds.
EvalReport evaluate_model(const ModelSpec& model, std::span<const Scene> scenes,
                          const ProtocolConfig& protocol);

std::vector<EvalReport> run_benchmark(std::span<const ModelSpec> models,
                                      std::span<const Scene> scenes,
                                      const ProtocolConfig& protocol);

// The six models reported by the toolkit under their usual settings.
std::vector<ModelSpec> standard_models();

}  // namespace trajbench
