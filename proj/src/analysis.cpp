#include "trajbench/analysis.hpp"

#include <cmath>
#include <limits>

#include "trajbench/errors.hpp"

namespace trajbench {

namespace {

ModelSpec with_features(const ModelSpec& base, const FeatureSpec& features,
                        bool augment, const std::string& label_suffix) {
  ModelSpec spec = base;
  spec.features = features;
  spec.train.augment_rotations = augment;
  spec.label = base.display_label() + "/" + label_suffix;
  return spec;
}

FeatureSpec rotations_features(const ModelSpec& base) {
  FeatureSpec f = base.features;
  f.representation = Representation::kRelative;
  f.neighbors = NeighborVariant::kBasic;
  f.history_steps = kObservedSteps - 1;
  return f;
}

}  // namespace

PriorsResult environmental_prior_experiment(const ModelSpec& base,
                                            std::span<const Scene> scenes,
                                            const ProtocolConfig& protocol) {
  if (!base.is_neural()) {
    throw ConfigError("prior analysis applies to trained networks");
  }
  FeatureSpec absolute = rotations_features(base);
  absolute.representation = Representation::kAbsolute;
  FeatureSpec relative = rotations_features(base);

  PriorsResult result;
  result.kind = base.kind;
  result.representations.emplace_back(
      "basic", evaluate_model(with_features(base, absolute, false, "basic"),
                              scenes, protocol));
  result.representations.emplace_back(
      "relative",
      evaluate_model(with_features(base, relative, false, "relative"), scenes,
                     protocol));
  result.representations.emplace_back(
      "rotations",
      evaluate_model(with_features(base, relative, true, "rotations"), scenes,
                     protocol));
  return result;
}

std::vector<double> gradient_attribution(
    const Network& net, std::span<const TrajectoryWindow> windows,
    const FeatureSpec& spec) {
  validate(spec);
  if (windows.empty()) throw ConfigError("no windows for attribution");
  if (feature_dim(spec) != net.input_dim()) {
    throw ConfigError("feature layout does not match the network input");
  }
  const int steps = spec.representation == Representation::kAbsolute
                        ? kObservedSteps
                        : spec.history_steps;
  Tape tape;
  const Var input = tape.input(build_feature_matrix(windows, spec));
  const Var output = net.forward(tape, input);
  tape.backward(tape.sum_abs(output));
  const Eigen::MatrixXd& grad = tape.grad(input);

  std::vector<double> sums(static_cast<size_t>(steps), 0.0);
  for (Eigen::Index r = 0; r < grad.rows(); ++r) {
    for (int t = 0; t < steps; ++t) {
      sums[static_cast<size_t>(t)] +=
          std::hypot(grad(r, 2 * t), grad(r, 2 * t + 1));
    }
  }
  return sums;
}

std::vector<double> normalized_shares(std::span<const double> sums) {
  double total = 0.0;
  for (const double s : sums) total += s;
  std::vector<double> shares(sums.begin(), sums.end());
  if (total > 0.0) {
    for (double& s : shares) s /= total;
  }
  return shares;
}

AttributionResult attribution_experiment(const ModelSpec& base,
                                         std::span<const Scene> scenes,
                                         const ProtocolConfig& protocol) {
  if (!base.is_neural()) {
    throw ConfigError("attribution applies to trained networks");
  }
  const FeatureSpec features = rotations_features(base);
  const ModelSpec model = with_features(base, features, true, "rotations");
  const std::vector<TrajectoryWindow> windows =
      protocol_windows(scenes, NeighborVariant::kBasic);

  std::vector<double> sums(static_cast<size_t>(features.history_steps), 0.0);
  std::vector<std::string> folds;
  if (protocol.test_scenes.empty()) {
    for (const Scene& s : scenes) folds.push_back(s.name);
  } else {
    folds = protocol.test_scenes;
  }
  for (const std::string& test_scene : folds) {
    const SplitWindows split = fold_split(windows, test_scene, protocol);
    const std::unique_ptr<Network> net = train_fold_network(
        model, split,
        derive_seed(fold_seed(protocol, test_scene), model.display_label()));
    const std::vector<double> fold_sums =
        gradient_attribution(*net, split.test, features);
    for (size_t i = 0; i < sums.size(); ++i) sums[i] += fold_sums[i];
  }

  AttributionResult result;
  result.kind = base.kind;
  result.shares = normalized_shares(sums);
  return result;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("correlation needs equally long series");
  }
  if (a.size() < 2) {
    throw ConfigError("correlation needs at least two points");
  }
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return cov / std::sqrt(var_a * var_b);
}

CorrelationResult history_correlation(
    std::span<const TrajectoryWindow> windows) {
  if (windows.size() < 2) {
    throw ConfigError("correlation needs at least two windows");
  }
  const int steps = kObservedSteps - 1;
  std::vector<std::vector<double>> dx(static_cast<size_t>(steps));
  std::vector<std::vector<double>> dy(static_cast<size_t>(steps));
  for (const TrajectoryWindow& w : windows) {
    const auto obs = w.observed();
    for (int t = 0; t < steps; ++t) {
      const Displacement d =
          obs[static_cast<size_t>(t + 1)] - obs[static_cast<size_t>(t)];
      dx[static_cast<size_t>(t)].push_back(d.dx);
      dy[static_cast<size_t>(t)].push_back(d.dy);
    }
  }
  CorrelationResult result;
  result.window_count = windows.size();
  result.x.resize(steps, steps);
  result.y.resize(steps, steps);
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      result.x(i, j) = pearson(dx[static_cast<size_t>(i)],
                               dx[static_cast<size_t>(j)]);
      result.y(i, j) = pearson(dy[static_cast<size_t>(i)],
                               dy[static_cast<size_t>(j)]);
    }
  }
  return result;
}

CorrelationResult correlation_experiment(std::span<const Scene> scenes) {
  return history_correlation(
      protocol_windows(scenes, NeighborVariant::kBasic));
}

namespace {

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

DeprivationResult history_deprivation_experiment(
    const ModelSpec& base, std::span<const Scene> scenes,
    const ProtocolConfig& protocol) {
  if (!base.is_neural()) {
    throw ConfigError("history deprivation applies to trained networks");
  }
  DeprivationResult result;
  result.kind = base.kind;
  std::vector<double> ades, fdes;
  for (int h = 1; h <= kObservedSteps - 1; ++h) {
    FeatureSpec features = rotations_features(base);
    features.history_steps = h;
    const ModelSpec model = with_features(base, features, true,
                                          "history" + std::to_string(h));
    const EvalReport report = evaluate_model(model, scenes, protocol);
    result.rows.push_back(DeprivationRow{h, report.avg_ade, report.avg_fde});
    ades.push_back(report.avg_ade);
    fdes.push_back(report.avg_fde);
  }
  result.ade_stddev = sample_stddev(ades);
  result.fde_stddev = sample_stddev(fdes);
  return result;
}

NeighborResult neighbor_experiment(const ModelSpec& base,
                                   std::span<const Scene> scenes,
                                   const ProtocolConfig& protocol) {
  if (!base.is_neural()) {
    throw ConfigError("neighbor analysis applies to trained networks");
  }
  NeighborResult result;
  result.kind = base.kind;
  for (const NeighborVariant v :
       {NeighborVariant::kBasic, NeighborVariant::kHistory,
        NeighborVariant::kFuture}) {
    FeatureSpec features = rotations_features(base);
    features.neighbors = v;
    const ModelSpec model =
        with_features(base, features, true, std::string(to_string(v)));
    const EvalReport report = evaluate_model(model, scenes, protocol);
    result.rows.push_back(NeighborRow{v, report.avg_ade, report.avg_fde});
  }
  return result;
}

}  // namespace trajbench
