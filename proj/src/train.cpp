#include "trajbench/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "trajbench/augment.hpp"
#include "trajbench/errors.hpp"

namespace trajbench {

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2,
                             double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  if (learning_rate <= 0) throw ConfigError("learning rate must be positive");
  if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (epsilon <= 0) throw ConfigError("adam epsilon must be positive");
}

void AdamOptimizer::step(std::vector<Param>& params,
                         const std::vector<Eigen::MatrixXd>& grads) {
  if (grads.size() != params.size()) {
    throw ShapeError("got " + std::to_string(grads.size()) +
                     " gradients for " + std::to_string(params.size()) +
                     " parameters");
  }
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Param& p : params) {
      m_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    const Eigen::MatrixXd& g = grads[i];
    Param& p = params[i];
    if (g.rows() != p.value.rows() || g.cols() != p.value.cols()) {
      throw ShapeError("gradient shape mismatch for parameter '" + p.name +
                       "'");
    }
    if (!g.allFinite()) {
      throw NumericsError("non-finite gradient for parameter '" + p.name +
                          "' at step " + std::to_string(t_));
    }
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    p.value.array() -= lr_ * (m_[i].array() / c1) /
                       ((v_[i].array() / c2).sqrt() + eps_);
  }
}

namespace {

std::vector<TrajectoryWindow> full_windows(
    std::span<const TrajectoryWindow> windows) {
  std::vector<TrajectoryWindow> out;
  out.reserve(windows.size());
  for (const TrajectoryWindow& w : windows) {
    if (w.future_length() == kPredictionSteps) out.push_back(w);
  }
  return out;
}

}  // namespace

double mse_loss(const Network& net, const Eigen::MatrixXd& features,
                const Eigen::MatrixXd& targets) {
  const Eigen::MatrixXd out = net.predict(features);
  if (out.rows() != targets.rows() || out.cols() != targets.cols()) {
    throw ShapeError("prediction and target shapes differ");
  }
  return (out - targets).array().square().sum() /
         static_cast<double>(targets.size());
}

TrainResult train(Network& net, std::span<const TrajectoryWindow> training,
                  std::span<const TrajectoryWindow> validation,
                  const TrainConfig& config) {
  validate(config.features);
  if (config.batch_size < 1) throw ConfigError("batch size must be positive");
  if (config.epochs < 0) throw ConfigError("epoch count must be nonnegative");
  if (feature_dim(config.features) != net.input_dim()) {
    throw ConfigError("feature layout is " +
                      std::to_string(feature_dim(config.features)) +
                      " wide but the network expects " +
                      std::to_string(net.input_dim()));
  }

  std::vector<TrajectoryWindow> samples = full_windows(training);
  if (samples.empty()) {
    throw ConfigError("no full-length training window available");
  }

  Rng rng(config.seed);
  net.init_params(rng);
  if (config.augment_rotations) {
    augment_rotations(samples, config.rotation_sigma_deg, rng);
  }

  const Eigen::MatrixXd features =
      build_feature_matrix(samples, config.features);
  const Eigen::MatrixXd targets = build_target_matrix(samples);

  const std::vector<TrajectoryWindow> val_samples = full_windows(validation);
  Eigen::MatrixXd val_features, val_targets;
  if (!val_samples.empty()) {
    val_features = build_feature_matrix(val_samples, config.features);
    val_targets = build_target_matrix(val_samples);
  }

  AdamOptimizer optimizer(config);
  TrainResult result;
  const Eigen::Index n = features.rows();
  const Eigen::Index batch = config.batch_size;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<size_t> order =
        shuffled_indices(static_cast<size_t>(n), rng);
    double loss_sum = 0.0;
    Eigen::Index batches = 0;
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index count = std::min(batch, n - start);
      Eigen::MatrixXd bx(count, features.cols());
      Eigen::MatrixXd by(count, targets.cols());
      for (Eigen::Index i = 0; i < count; ++i) {
        const auto src =
            static_cast<Eigen::Index>(order[static_cast<size_t>(start + i)]);
        bx.row(i) = features.row(src);
        by.row(i) = targets.row(src);
      }
      Tape tape;
      std::vector<Var> param_vars;
      const Var out = net.forward(tape, tape.input(std::move(bx)), &param_vars);
      const Var loss = tape.mse(out, tape.constant(std::move(by)));
      tape.backward(loss);
      std::vector<Eigen::MatrixXd> grads;
      grads.reserve(param_vars.size());
      for (const Var v : param_vars) grads.push_back(tape.grad(v));
      optimizer.step(net.params(), grads);
      loss_sum += tape.value(loss)(0, 0);
      ++batches;
    }
    result.train_loss.push_back(loss_sum / static_cast<double>(batches));
    result.validation_loss.push_back(
        val_samples.empty()
            ? std::numeric_limits<double>::quiet_NaN()
            : mse_loss(net, val_features, val_targets));
  }
  return result;
}

namespace {

constexpr char kCheckpointFormat[] = "trajbench-net v1";

nlohmann::json features_to_json(const FeatureSpec& spec) {
  return {{"representation", to_string(spec.representation)},
          {"neighbors", to_string(spec.neighbors)},
          {"history_steps", spec.history_steps}};
}

FeatureSpec features_from_json(const nlohmann::json& j) {
  FeatureSpec spec;
  spec.representation =
      representation_from_string(j.at("representation").get<std::string>());
  spec.neighbors =
      neighbor_variant_from_string(j.at("neighbors").get<std::string>());
  spec.history_steps = j.at("history_steps").get<int>();
  return spec;
}

}  // namespace

void save_checkpoint(const Network& net, const TrainConfig& config,
                     const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["architecture"] = net.architecture();
  j["features"] = features_to_json(config.features);
  j["train"] = {{"learning_rate", config.learning_rate},
                {"beta1", config.beta1},
                {"beta2", config.beta2},
                {"epsilon", config.epsilon},
                {"batch_size", config.batch_size},
                {"epochs", config.epochs},
                {"augment_rotations", config.augment_rotations},
                {"rotation_sigma_deg", config.rotation_sigma_deg},
                {"seed", config.seed}};
  j["params"] = params_to_json(net);
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw ParseError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) {
      throw ParseError(path.string() + ": unrecognized checkpoint format");
    }
    Checkpoint ckpt;
    ckpt.net = make_network(j.at("architecture"));
    params_from_json(*ckpt.net, j.at("params"));
    ckpt.features = features_from_json(j.at("features"));
    const nlohmann::json& t = j.at("train");
    ckpt.config.learning_rate = t.at("learning_rate").get<double>();
    ckpt.config.beta1 = t.at("beta1").get<double>();
    ckpt.config.beta2 = t.at("beta2").get<double>();
    ckpt.config.epsilon = t.at("epsilon").get<double>();
    ckpt.config.batch_size = t.at("batch_size").get<int>();
    ckpt.config.epochs = t.at("epochs").get<int>();
    ckpt.config.augment_rotations = t.at("augment_rotations").get<bool>();
    ckpt.config.rotation_sigma_deg = t.at("rotation_sigma_deg").get<double>();
    ckpt.config.seed = t.at("seed").get<std::uint64_t>();
    ckpt.config.features = ckpt.features;
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace trajbench
