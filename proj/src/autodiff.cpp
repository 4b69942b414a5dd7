#include "trajbench/autodiff.hpp"

#include <string>
#include <utility>

namespace trajbench {

namespace {

std::string shape_of(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shapes " + shape_of(a) + " and " +
                     shape_of(b) + " differ");
  }
}

}  // namespace

Var Tape::push(Eigen::MatrixXd value, std::function<void()> backward) {
  Node n;
  n.value = std::move(value);
  n.grad = Eigen::MatrixXd::Zero(n.value.rows(), n.value.cols());
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

Tape::Node& Tape::node(Var v) {
  check_owned(v);
  return nodes_[v.index];
}

const Tape::Node& Tape::node(Var v) const {
  check_owned(v);
  return nodes_[v.index];
}

void Tape::check_owned(Var v) const {
  if (v.tape != this || v.index >= nodes_.size()) {
    throw ShapeError("variable does not belong to this tape");
  }
}

Var Tape::input(Eigen::MatrixXd value) { return push(std::move(value), {}); }

Var Tape::constant(Eigen::MatrixXd value) { return push(std::move(value), {}); }

Var Tape::matmul(Var a, Var b) {
  const Eigen::MatrixXd& va = node(a).value;
  const Eigen::MatrixXd& vb = node(b).value;
  if (va.cols() != vb.rows()) {
    throw ShapeError("matmul: " + shape_of(va) + " times " + shape_of(vb));
  }
  Var out = push(va * vb, {});
  nodes_[out.index].backward = [this, a, b, out] {
    const Eigen::MatrixXd& g = nodes_[out.index].grad;
    nodes_[a.index].grad.noalias() += g * nodes_[b.index].value.transpose();
    nodes_[b.index].grad.noalias() += nodes_[a.index].value.transpose() * g;
  };
  return out;
}

Var Tape::add(Var a, Var b) {
  require_same_shape(node(a).value, node(b).value, "add");
  Var out = push(node(a).value + node(b).value, {});
  nodes_[out.index].backward = [this, a, b, out] {
    nodes_[a.index].grad += nodes_[out.index].grad;
    nodes_[b.index].grad += nodes_[out.index].grad;
  };
  return out;
}

Var Tape::sub(Var a, Var b) {
  require_same_shape(node(a).value, node(b).value, "sub");
  Var out = push(node(a).value - node(b).value, {});
  nodes_[out.index].backward = [this, a, b, out] {
    nodes_[a.index].grad += nodes_[out.index].grad;
    nodes_[b.index].grad -= nodes_[out.index].grad;
  };
  return out;
}

Var Tape::mul(Var a, Var b) {
  require_same_shape(node(a).value, node(b).value, "mul");
  Var out = push(node(a).value.cwiseProduct(node(b).value), {});
  nodes_[out.index].backward = [this, a, b, out] {
    const Eigen::MatrixXd& g = nodes_[out.index].grad;
    nodes_[a.index].grad += g.cwiseProduct(nodes_[b.index].value);
    nodes_[b.index].grad += g.cwiseProduct(nodes_[a.index].value);
  };
  return out;
}

Var Tape::add_row_broadcast(Var a, Var bias) {
  const Eigen::MatrixXd& va = node(a).value;
  const Eigen::MatrixXd& vb = node(bias).value;
  if (vb.rows() != 1 || vb.cols() != va.cols()) {
    throw ShapeError("add_row_broadcast: " + shape_of(va) + " plus " +
                     shape_of(vb));
  }
  Eigen::MatrixXd value = va;
  value.rowwise() += vb.row(0);
  Var out = push(std::move(value), {});
  nodes_[out.index].backward = [this, a, bias, out] {
    const Eigen::MatrixXd& g = nodes_[out.index].grad;
    nodes_[a.index].grad += g;
    nodes_[bias.index].grad += g.colwise().sum();
  };
  return out;
}

Var Tape::relu(Var a) {
  Var out = push(node(a).value.cwiseMax(0.0), {});
  nodes_[out.index].backward = [this, a, out] {
    const Eigen::MatrixXd& x = nodes_[a.index].value;
    nodes_[a.index].grad +=
        nodes_[out.index].grad.cwiseProduct((x.array() > 0.0).cast<double>().matrix());
  };
  return out;
}

Var Tape::sigmoid(Var a) {
  Eigen::MatrixXd s =
      (1.0 / (1.0 + (-node(a).value.array()).exp())).matrix();
  Var out = push(std::move(s), {});
  nodes_[out.index].backward = [this, a, out] {
    const Eigen::ArrayXXd s = nodes_[out.index].value.array();
    nodes_[a.index].grad +=
        (nodes_[out.index].grad.array() * s * (1.0 - s)).matrix();
  };
  return out;
}

Var Tape::tanh(Var a) {
  Var out = push(node(a).value.array().tanh().matrix(), {});
  nodes_[out.index].backward = [this, a, out] {
    const Eigen::ArrayXXd t = nodes_[out.index].value.array();
    nodes_[a.index].grad +=
        (nodes_[out.index].grad.array() * (1.0 - t * t)).matrix();
  };
  return out;
}

Var Tape::concat_cols(Var a, Var b) {
  const Eigen::MatrixXd& va = node(a).value;
  const Eigen::MatrixXd& vb = node(b).value;
  if (va.rows() != vb.rows()) {
    throw ShapeError("concat_cols: " + shape_of(va) + " with " + shape_of(vb));
  }
  Eigen::MatrixXd value(va.rows(), va.cols() + vb.cols());
  value << va, vb;
  Var out = push(std::move(value), {});
  nodes_[out.index].backward = [this, a, b, out] {
    const Eigen::MatrixXd& g = nodes_[out.index].grad;
    const Eigen::Index ca = nodes_[a.index].value.cols();
    nodes_[a.index].grad += g.leftCols(ca);
    nodes_[b.index].grad += g.rightCols(g.cols() - ca);
  };
  return out;
}

Var Tape::slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  const Eigen::MatrixXd& va = node(a).value;
  if (start < 0 || count < 0 || start + count > va.cols()) {
    throw ShapeError("slice_cols: [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of " +
                     std::to_string(va.cols()) + " columns");
  }
  Var out = push(va.middleCols(start, count), {});
  nodes_[out.index].backward = [this, a, out, start, count] {
    nodes_[a.index].grad.middleCols(start, count) += nodes_[out.index].grad;
  };
  return out;
}

Var Tape::sum_abs(Var a) {
  Eigen::MatrixXd value(1, 1);
  value(0, 0) = node(a).value.array().abs().sum();
  Var out = push(std::move(value), {});
  nodes_[out.index].backward = [this, a, out] {
    const double g = nodes_[out.index].grad(0, 0);
    const Eigen::ArrayXXd x = nodes_[a.index].value.array();
    nodes_[a.index].grad +=
        (g * ((x > 0.0).cast<double>() - (x < 0.0).cast<double>())).matrix();
  };
  return out;
}

Var Tape::mse(Var prediction, Var target) {
  require_same_shape(node(prediction).value, node(target).value, "mse");
  const Eigen::MatrixXd diff = node(prediction).value - node(target).value;
  const double n = static_cast<double>(diff.size());
  Eigen::MatrixXd value(1, 1);
  value(0, 0) = diff.array().square().sum() / n;
  Var out = push(std::move(value), {});
  nodes_[out.index].backward = [this, prediction, target, out, n] {
    const double g = nodes_[out.index].grad(0, 0);
    const Eigen::MatrixXd scaled =
        (2.0 * g / n) *
        (nodes_[prediction.index].value - nodes_[target.index].value);
    nodes_[prediction.index].grad += scaled;
    nodes_[target.index].grad -= scaled;
  };
  return out;
}

const Eigen::MatrixXd& Tape::value(Var v) const { return node(v).value; }

const Eigen::MatrixXd& Tape::grad(Var v) const { return node(v).grad; }

void Tape::backward(Var scalar) {
  Node& seed = node(scalar);
  if (seed.value.rows() != 1 || seed.value.cols() != 1) {
    throw ShapeError("backward expects a 1x1 value, got " +
                     shape_of(seed.value));
  }
  seed.grad(0, 0) += 1.0;
  for (size_t i = scalar.index + 1; i-- > 0;) {
    if (nodes_[i].backward) nodes_[i].backward();
  }
}

void Tape::reset() { nodes_.clear(); }

}  // namespace trajbench
