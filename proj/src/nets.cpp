#include "trajbench/nets.hpp"

#include <cmath>

#include "trajbench/errors.hpp"

namespace trajbench {

size_t Network::param_count() const {
  size_t n = 0;
  for (const Param& p : params_) n += static_cast<size_t>(p.value.size());
  return n;
}

void Network::init_params(Rng& rng) {
  for (Param& p : params_) {
    if (p.fan_in == 0) {
      p.value.setZero();
      continue;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.fan_in));
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
        p.value(r, c) = uniform_in(rng, -bound, bound);
      }
    }
  }
}

Eigen::MatrixXd Network::predict(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != input_dim()) {
    throw ShapeError("network expects " + std::to_string(input_dim()) +
                     " input columns, got " + std::to_string(inputs.cols()));
  }
  Tape tape;
  const Var out = forward(tape, tape.input(inputs));
  return tape.value(out);
}

std::vector<Var> Network::push_params(Tape& tape,
                                      std::vector<Var>* param_vars) const {
  std::vector<Var> vars;
  vars.reserve(params_.size());
  for (const Param& p : params_) vars.push_back(tape.input(p.value));
  if (param_vars != nullptr) *param_vars = vars;
  return vars;
}

void Network::add_weight(const std::string& name, Eigen::Index rows,
                         Eigen::Index cols) {
  params_.push_back(Param{name, Eigen::MatrixXd::Zero(rows, cols), rows});
}

void Network::add_bias(const std::string& name, Eigen::Index cols) {
  params_.push_back(Param{name, Eigen::MatrixXd::Zero(1, cols), 0});
}

FFNetwork::FFNetwork(int input_dim) : input_dim_(input_dim) {
  if (input_dim < 1) throw ConfigError("input_dim must be positive");
  add_weight("w1", input_dim, kHidden1);
  add_bias("b1", kHidden1);
  add_weight("w2", kHidden1, kHidden2);
  add_bias("b2", kHidden2);
  add_weight("w3", kHidden2, output_dim());
  add_bias("b3", output_dim());
}

Var FFNetwork::forward(Tape& tape, Var input,
                       std::vector<Var>* param_vars) const {
  const std::vector<Var> p = push_params(tape, param_vars);
  Var h = tape.relu(tape.add_row_broadcast(tape.matmul(input, p[0]), p[1]));
  h = tape.relu(tape.add_row_broadcast(tape.matmul(h, p[2]), p[3]));
  return tape.add_row_broadcast(tape.matmul(h, p[4]), p[5]);
}

nlohmann::json FFNetwork::architecture() const {
  return {{"kind", "ff"}, {"input_dim", input_dim_}};
}

namespace {
// Parameter order inside REDNetwork::params().
enum RedParam {
  kWe, kBe, kWz, kUz, kBz, kWc, kUc, kBc, kWd1, kBd1, kWd2, kBd2,
};
}  // namespace

REDNetwork::REDNetwork(int sequence_steps, int neighbor_dim)
    : sequence_steps_(sequence_steps), neighbor_dim_(neighbor_dim) {
  if (sequence_steps < 1) throw ConfigError("sequence_steps must be positive");
  if (neighbor_dim < 0) throw ConfigError("neighbor_dim must be nonnegative");
  add_weight("we", 2, kEmbedDim);
  add_bias("be", kEmbedDim);
  add_weight("wz", kEmbedDim, kStateDim);
  add_weight("uz", kStateDim, kStateDim);
  add_bias("bz", kStateDim);
  add_weight("wc", kEmbedDim, kStateDim);
  add_weight("uc", kStateDim, kStateDim);
  add_bias("bc", kStateDim);
  add_weight("wd1", kStateDim + neighbor_dim, kDecoderHidden);
  add_bias("bd1", kDecoderHidden);
  add_weight("wd2", kDecoderHidden, output_dim());
  add_bias("bd2", output_dim());
}

Var REDNetwork::forward(Tape& tape, Var input,
                        std::vector<Var>* param_vars) const {
  const std::vector<Var> p = push_params(tape, param_vars);
  const Eigen::Index rows = tape.value(input).rows();
  Var h = tape.constant(Eigen::MatrixXd::Zero(rows, kStateDim));
  for (int t = 0; t < sequence_steps_; ++t) {
    const Var step = tape.slice_cols(input, 2 * t, 2);
    const Var e =
        tape.add_row_broadcast(tape.matmul(step, p[kWe]), p[kBe]);
    const Var z = tape.sigmoid(tape.add_row_broadcast(
        tape.add(tape.matmul(e, p[kWz]), tape.matmul(h, p[kUz])), p[kBz]));
    const Var c = tape.tanh(tape.add_row_broadcast(
        tape.add(tape.matmul(e, p[kWc]), tape.matmul(h, p[kUc])), p[kBc]));
    h = tape.add(h, tape.mul(z, tape.sub(c, h)));
  }
  Var dec_in = h;
  if (neighbor_dim_ > 0) {
    dec_in = tape.concat_cols(
        h, tape.slice_cols(input, 2 * sequence_steps_, neighbor_dim_));
  }
  const Var hidden = tape.relu(
      tape.add_row_broadcast(tape.matmul(dec_in, p[kWd1]), p[kBd1]));
  return tape.add_row_broadcast(tape.matmul(hidden, p[kWd2]), p[kBd2]);
}

nlohmann::json REDNetwork::architecture() const {
  return {{"kind", "red"},
          {"sequence_steps", sequence_steps_},
          {"neighbor_dim", neighbor_dim_}};
}

std::unique_ptr<Network> make_network(const nlohmann::json& architecture) {
  const std::string kind = architecture.at("kind").get<std::string>();
  if (kind == "ff") {
    return std::make_unique<FFNetwork>(
        architecture.at("input_dim").get<int>());
  }
  if (kind == "red") {
    return std::make_unique<REDNetwork>(
        architecture.at("sequence_steps").get<int>(),
        architecture.at("neighbor_dim").get<int>());
  }
  throw ConfigError("unknown network kind: " + kind);
}

nlohmann::json params_to_json(const Network& net) {
  nlohmann::json out = nlohmann::json::array();
  for (const Param& p : net.params()) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
        data.push_back(p.value(r, c));
      }
    }
    out.push_back({{"name", p.name},
                   {"rows", p.value.rows()},
                   {"cols", p.value.cols()},
                   {"data", std::move(data)}});
  }
  return out;
}

void params_from_json(Network& net, const nlohmann::json& j) {
  if (!j.is_array() || j.size() != net.params().size()) {
    throw ParseError("parameter list does not match network layout");
  }
  for (size_t i = 0; i < net.params().size(); ++i) {
    Param& p = net.params()[i];
    const nlohmann::json& entry = j[i];
    if (entry.at("name").get<std::string>() != p.name ||
        entry.at("rows").get<Eigen::Index>() != p.value.rows() ||
        entry.at("cols").get<Eigen::Index>() != p.value.cols()) {
      throw ParseError("parameter '" + p.name + "' does not match checkpoint");
    }
    const nlohmann::json& data = entry.at("data");
    if (data.size() != static_cast<size_t>(p.value.size())) {
      throw ParseError("parameter '" + p.name + "' has wrong element count");
    }
    size_t k = 0;
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
        p.value(r, c) = data[k++].get<double>();
      }
    }
  }
}

}  // namespace trajbench
