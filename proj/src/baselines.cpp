#include "trajbench/baselines.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/QR>

#include "trajbench/errors.hpp"
#include "trajbench/geometry.hpp"

namespace trajbench {

namespace {

Displacement last_displacement(std::span<const Position> observed) {
  if (observed.size() < 2) {
    throw InsufficientHistoryError(
        "constant velocity needs at least 2 observed positions, got " +
        std::to_string(observed.size()));
  }
  return observed[observed.size() - 1] - observed[observed.size() - 2];
}

void check_horizon(int horizon) {
  if (horizon < 1) {
    throw ConfigError("prediction horizon must be positive, got " +
                      std::to_string(horizon));
  }
}

}  // namespace

DisplacementSequence cvm_predict(std::span<const Position> observed,
                                 int horizon) {
  check_horizon(horizon);
  const Displacement v = last_displacement(observed);
  return DisplacementSequence(static_cast<size_t>(horizon), v);
}

std::vector<DisplacementSequence> cvm_sampled_predict(
    std::span<const Position> observed, int horizon, int k, double sigma_deg,
    Rng& rng) {
  check_horizon(horizon);
  if (k < 1) throw ConfigError("sample count must be positive");
  const Displacement v = last_displacement(observed);
  std::vector<DisplacementSequence> samples;
  samples.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double angle = gaussian(rng) * sigma_deg * kDegreesToRadians;
    samples.emplace_back(static_cast<size_t>(horizon), rotated(v, angle));
  }
  return samples;
}

DisplacementSequence const_acc_predict(std::span<const Position> observed,
                                       int horizon) {
  check_horizon(horizon);
  if (observed.size() < 3) {
    throw InsufficientHistoryError(
        "constant acceleration needs at least 3 observed positions, got " +
        std::to_string(observed.size()));
  }
  const size_t n = observed.size();
  const Displacement v = observed[n - 1] - observed[n - 2];
  const Displacement v_prev = observed[n - 2] - observed[n - 3];
  const Displacement a = v - v_prev;
  DisplacementSequence out(static_cast<size_t>(horizon));
  for (int i = 0; i < horizon; ++i) {
    out[static_cast<size_t>(i)] = v + static_cast<double>(i + 1) * a;
  }
  return out;
}

Eigen::RowVectorXd LinRegModel::predict_features(
    const Eigen::RowVectorXd& x) const {
  if (x.size() != weights.rows()) {
    throw ShapeError("feature vector has " + std::to_string(x.size()) +
                     " components, model expects " +
                     std::to_string(weights.rows()));
  }
  return x * weights + intercept;
}

DisplacementSequence LinRegModel::predict(
    const TrajectoryWindow& window) const {
  return output_to_displacements(
      predict_features(build_features(window, features)));
}

LinRegModel linreg_fit_matrices(const Eigen::MatrixXd& features,
                                const Eigen::MatrixXd& targets,
                                const FeatureSpec& spec) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (targets.rows() != n) {
    throw ShapeError("feature and target row counts differ");
  }
  if (n < d + 1) {
    throw ConfigError("least squares needs at least " + std::to_string(d + 1) +
                      " samples for " + std::to_string(d) +
                      " features, got " + std::to_string(n));
  }
  Eigen::MatrixXd design(n, d + 1);
  design.leftCols(d) = features;
  design.col(d).setOnes();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::MatrixXd solution = cod.solve(targets);

  LinRegModel model;
  model.features = spec;
  model.weights = solution.topRows(d);
  model.intercept = solution.row(d);
  model.rank = cod.rank();
  model.rank_deficient = cod.rank() < d + 1;
  return model;
}

LinRegModel linreg_fit(std::span<const TrajectoryWindow> windows,
                       const FeatureSpec& spec) {
  std::vector<TrajectoryWindow> full;
  full.reserve(windows.size());
  for (const TrajectoryWindow& w : windows) {
    if (w.future_length() == kPredictionSteps) full.push_back(w);
  }
  return linreg_fit_matrices(build_feature_matrix(full, spec),
                             build_target_matrix(full), spec);
}

namespace {

constexpr char kLinRegMagic[] = "trajbench-linreg v1";

void write_value(std::ostream& os, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

double read_value(std::istream& is, const std::filesystem::path& path) {
  std::string token;
  if (!(is >> token)) {
    throw ParseError(path.string() + ": truncated model file");
  }
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ParseError(path.string() + ": bad numeric token '" + token + "'");
  }
  return v;
}

}  // namespace

void save_linreg(const LinRegModel& model, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os << kLinRegMagic << "\n";
  os << to_string(model.features.representation) << " "
     << to_string(model.features.neighbors) << " "
     << model.features.history_steps << "\n";
  os << model.weights.rows() << " " << model.weights.cols() << " "
     << (model.rank_deficient ? 1 : 0) << " " << model.rank << "\n";
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) {
      if (c > 0) os << ' ';
      write_value(os, model.weights(r, c));
    }
    os << '\n';
  }
  for (Eigen::Index c = 0; c < model.intercept.size(); ++c) {
    if (c > 0) os << ' ';
    write_value(os, model.intercept(c));
  }
  os << '\n';
  if (!os) throw ParseError("failed writing " + path.string());
}

LinRegModel load_linreg(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  std::string magic;
  std::getline(is, magic);
  if (magic != kLinRegMagic) {
    throw ParseError(path.string() + ": unrecognized model header '" + magic +
                     "'");
  }
  LinRegModel model;
  std::string repr, variant;
  int history = 0;
  if (!(is >> repr >> variant >> history)) {
    throw ParseError(path.string() + ": truncated feature description");
  }
  model.features.representation = representation_from_string(repr);
  model.features.neighbors = neighbor_variant_from_string(variant);
  model.features.history_steps = history;
  Eigen::Index rows = 0, cols = 0;
  int deficient = 0;
  Eigen::Index rank = 0;
  if (!(is >> rows >> cols >> deficient >> rank) || rows < 0 || cols < 1) {
    throw ParseError(path.string() + ": bad shape line");
  }
  model.rank_deficient = deficient != 0;
  model.rank = rank;
  model.weights.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      model.weights(r, c) = read_value(is, path);
    }
  }
  model.intercept.resize(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    model.intercept(c) = read_value(is, path);
  }
  return model;
}

}  // namespace trajbench
