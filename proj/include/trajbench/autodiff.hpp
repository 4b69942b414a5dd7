#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "trajbench/errors.hpp"

namespace trajbench {

class Tape;

// Handle to a node on a tape. Cheap to copy; valid until the tape is reset.
struct Var {
  Tape* tape = nullptr;
  size_t index = 0;
};

// Reverse-mode automatic differentiation over dense matrices. Operations
// record themselves on the tape; backward() replays their adjoints in
// reverse creation order.
class Tape {
 public:
  Var input(Eigen::MatrixXd value);
  // Same as input but excluded from gradient bookkeeping consumers care
  // about; gradients still flow through it.
  Var constant(Eigen::MatrixXd value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise
  // rows of `a` plus the single-row `bias`
  Var add_row_broadcast(Var a, Var bias);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var concat_cols(Var a, Var b);
  Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
  // sum of absolute values of all entries; the subgradient at zero is zero
  Var sum_abs(Var a);
  // mean over every entry of the squared difference
  Var mse(Var prediction, Var target);

  const Eigen::MatrixXd& value(Var v) const;
  const Eigen::MatrixXd& grad(Var v) const;

  // Seeds `scalar` (which must be 1x1) with gradient 1 and accumulates
  // gradients for every node.
  void backward(Var scalar);

  // Drops all nodes; outstanding Vars become invalid.
  void reset();

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    std::function<void()> backward;
  };

  Var push(Eigen::MatrixXd value, std::function<void()> backward);
  Node& node(Var v);
  const Node& node(Var v) const;
  void check_owned(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace trajbench
