#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "trajbench/autodiff.hpp"
#include "trajbench/rng.hpp"
#include "trajbench/trajectory.hpp"

namespace trajbench {

struct Param {
  std::string name;
  Eigen::MatrixXd value;
  // Fan-in used for initialization; 0 marks a bias, which starts at zero.
  Eigen::Index fan_in = 0;
};

// A displacement-sequence regressor: rows of features in, rows of 24
// components (12 steps, [dx, dy] each) out.
class Network {
 public:
  virtual ~Network() = default;

  virtual int input_dim() const = 0;
  int output_dim() const { return 2 * kPredictionSteps; }
  virtual std::string kind() const = 0;

  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }
  size_t param_count() const;

  // Weights are drawn uniformly from ±1/sqrt(fan_in), entry by entry in
  // row-major order, parameters in params() order; biases stay zero.
  void init_params(Rng& rng);

  // Builds the forward graph for a batch (one window per row). Every
  // parameter is pushed onto the tape first, in params() order; when
  // `param_vars` is given those handles are recorded there so callers can
  // read gradients back.
  virtual Var forward(Tape& tape, Var input,
                      std::vector<Var>* param_vars = nullptr) const = 0;

  Eigen::MatrixXd predict(const Eigen::MatrixXd& inputs) const;

  // Architecture description with enough detail to rebuild the object.
  virtual nlohmann::json architecture() const = 0;

 protected:
  std::vector<Var> push_params(Tape& tape,
                               std::vector<Var>* param_vars) const;
  void add_weight(const std::string& name, Eigen::Index rows,
                  Eigen::Index cols);
  void add_bias(const std::string& name, Eigen::Index cols);

  std::vector<Param> params_;
};

// Fully connected: input -> 60 relu -> 30 relu -> 24 linear.
class FFNetwork final : public Network {
 public:
  static constexpr int kHidden1 = 60;
  static constexpr int kHidden2 = 30;

  explicit FFNetwork(int input_dim);

  int input_dim() const override { return input_dim_; }
  std::string kind() const override { return "ff"; }
  Var forward(Tape& tape, Var input,
              std::vector<Var>* param_vars = nullptr) const override;
  nlohmann::json architecture() const override;

 private:
  int input_dim_;
};

// Recurrent encoder over the coordinate sequence followed by an MLP decoder.
// Each 2-component step is linearly embedded, then folded into a 64-wide
// state by a single-gate cell:
//   z = sigmoid(e Wz + h Uz + bz)
//   c = tanh(e Wc + h Uc + bc)
//   h' = h + z (c - h)
// The decoder sees the final state, with any neighbor features appended.
class REDNetwork final : public Network {
 public:
  static constexpr int kEmbedDim = 16;
  static constexpr int kStateDim = 64;
  static constexpr int kDecoderHidden = 60;

  REDNetwork(int sequence_steps, int neighbor_dim);

  int input_dim() const override {
    return 2 * sequence_steps_ + neighbor_dim_;
  }
  int sequence_steps() const { return sequence_steps_; }
  int neighbor_dim() const { return neighbor_dim_; }
  std::string kind() const override { return "red"; }
  Var forward(Tape& tape, Var input,
              std::vector<Var>* param_vars = nullptr) const override;
  nlohmann::json architecture() const override;

 private:
  int sequence_steps_;
  int neighbor_dim_;
};

// Rebuilds a network from its architecture() description (parameters are
// left at their defaults). Throws ConfigError on an unknown kind.
std::unique_ptr<Network> make_network(const nlohmann::json& architecture);

nlohmann::json params_to_json(const Network& net);
void params_from_json(Network& net, const nlohmann::json& j);

}  // namespace trajbench
