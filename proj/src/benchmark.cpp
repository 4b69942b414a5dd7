#include "trajbench/benchmark.hpp"

#include <atomic>
#include <exception>
#include <iterator>
#include <map>
#include <stdexcept>
#include <thread>

#include "trajbench/errors.hpp"
#include "trajbench/neighbors.hpp"

namespace trajbench {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::kConstantVelocity:
      return "cvm";
    case ModelKind::kConstantVelocitySampled:
      return "cvm_s";
    case ModelKind::kConstantAcceleration:
      return "const_acc";
    case ModelKind::kLinear:
      return "lin";
    case ModelKind::kFeedForward:
      return "ff";
    case ModelKind::kRecurrent:
      return "red";
  }
  throw std::logic_error("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "cvm") return ModelKind::kConstantVelocity;
  if (s == "cvm_s") return ModelKind::kConstantVelocitySampled;
  if (s == "const_acc") return ModelKind::kConstantAcceleration;
  if (s == "lin") return ModelKind::kLinear;
  if (s == "ff") return ModelKind::kFeedForward;
  if (s == "red") return ModelKind::kRecurrent;
  throw ConfigError("unknown model kind: " + s);
}

std::vector<TrajectoryWindow> protocol_windows(std::span<const Scene> scenes,
                                               NeighborVariant variant) {
  std::vector<TrajectoryWindow> out;
  for (const Scene& scene : scenes) {
    std::vector<TrajectoryWindow> ws = slice_windows(scene);
    out.insert(out.end(), std::make_move_iterator(ws.begin()),
               std::make_move_iterator(ws.end()));
  }
  if (variant != NeighborVariant::kBasic) {
    std::map<std::string, const Scene*> by_name;
    for (const Scene& scene : scenes) by_name[scene.name] = &scene;
    attach_neighbor_contexts(out, by_name, variant);
  }
  return out;
}

std::uint64_t fold_seed(const ProtocolConfig& protocol,
                        const std::string& test_scene) {
  return derive_seed(protocol.seed, test_scene);
}

SplitWindows fold_split(std::span<const TrajectoryWindow> windows,
                        const std::string& test_scene,
                        const ProtocolConfig& protocol) {
  return make_split(windows, test_scene, fold_seed(protocol, test_scene),
                    protocol.validation_fraction);
}

std::unique_ptr<Network> make_model_network(const ModelSpec& model) {
  switch (model.kind) {
    case ModelKind::kFeedForward:
      return std::make_unique<FFNetwork>(feature_dim(model.features));
    case ModelKind::kRecurrent: {
      const int steps = model.features.representation == Representation::kAbsolute
                            ? kObservedSteps
                            : model.features.history_steps;
      return std::make_unique<REDNetwork>(
          steps, neighbor_feature_dim(model.features.neighbors));
    }
    default:
      throw ConfigError(std::string("model kind ") + to_string(model.kind) +
                        " has no network");
  }
}

std::unique_ptr<Network> train_fold_network(const ModelSpec& model,
                                            const SplitWindows& split,
                                            std::uint64_t seed,
                                            TrainResult* result) {
  std::unique_ptr<Network> net = make_model_network(model);
  TrainConfig config = model.train;
  config.features = model.features;
  config.seed = seed;
  TrainResult r = train(*net, split.train, split.validation, config);
  if (result != nullptr) *result = std::move(r);
  return net;
}

namespace {

ErrorPair window_errors(const TrajectoryWindow& window,
                        const DisplacementSequence& prediction) {
  const std::vector<Position> predicted =
      displacements_to_positions(window.anchor(), prediction);
  return ErrorPair{ade(predicted, window.future()),
                   fde(predicted, window.future())};
}

ErrorPair sampled_window_errors(const TrajectoryWindow& window,
                                const ModelSpec& model, Rng& rng) {
  const std::vector<DisplacementSequence> sequences = cvm_sampled_predict(
      window.observed(), kPredictionSteps, model.sample_count,
      model.sample_sigma_deg, rng);
  std::vector<std::vector<Position>> samples;
  samples.reserve(sequences.size());
  for (const DisplacementSequence& seq : sequences) {
    samples.push_back(displacements_to_positions(window.anchor(), seq));
  }
  return min_over_k(samples, window.future());
}

}  // namespace

ErrorPair evaluate_windows(const ModelSpec& model,
                           std::span<const TrajectoryWindow> windows,
                           const Network* net, const LinRegModel* linear,
                           Rng* rng) {
  if (windows.empty()) throw ConfigError("no windows to evaluate");
  double ade_sum = 0.0;
  double fde_sum = 0.0;
  if (model.is_neural()) {
    if (net == nullptr) {
      throw ConfigError("neural evaluation needs a trained network");
    }
    const Eigen::MatrixXd outputs =
        net->predict(build_feature_matrix(windows, model.features));
    for (size_t i = 0; i < windows.size(); ++i) {
      const ErrorPair ep = window_errors(
          windows[i], output_to_displacements(
                          outputs.row(static_cast<Eigen::Index>(i))));
      ade_sum += ep.ade;
      fde_sum += ep.fde;
    }
  } else {
    for (const TrajectoryWindow& w : windows) {
      ErrorPair ep;
      switch (model.kind) {
        case ModelKind::kConstantVelocity:
          ep = window_errors(w, cvm_predict(w.observed(), kPredictionSteps));
          break;
        case ModelKind::kConstantAcceleration:
          ep = window_errors(w,
                             const_acc_predict(w.observed(), kPredictionSteps));
          break;
        case ModelKind::kLinear:
          if (linear == nullptr) {
            throw ConfigError("linear evaluation needs a fitted model");
          }
          ep = window_errors(w, linear->predict(w));
          break;
        case ModelKind::kConstantVelocitySampled:
          if (rng == nullptr) {
            throw ConfigError("sampled evaluation needs a generator");
          }
          ep = sampled_window_errors(w, model, *rng);
          break;
        default:
          throw ConfigError("unhandled model kind");
      }
      ade_sum += ep.ade;
      fde_sum += ep.fde;
    }
  }
  const double n = static_cast<double>(windows.size());
  return ErrorPair{ade_sum / n, fde_sum / n};
}

namespace {

std::vector<std::string> fold_scenes(std::span<const Scene> scenes,
                                     const ProtocolConfig& protocol) {
  if (!protocol.test_scenes.empty()) return protocol.test_scenes;
  std::vector<std::string> names;
  names.reserve(scenes.size());
  for (const Scene& s : scenes) names.push_back(s.name);
  return names;
}

SceneResult run_fold(const ModelSpec& model,
                     std::span<const TrajectoryWindow> windows,
                     const std::string& test_scene,
                     const ProtocolConfig& protocol) {
  const SplitWindows split = fold_split(windows, test_scene, protocol);
  const std::uint64_t fseed = fold_seed(protocol, test_scene);
  ErrorPair errors;
  if (model.is_neural()) {
    const std::unique_ptr<Network> net = train_fold_network(
        model, split, derive_seed(fseed, model.display_label()));
    errors = evaluate_windows(model, split.test, net.get(), nullptr, nullptr);
  } else if (model.kind == ModelKind::kLinear) {
    const LinRegModel linear = linreg_fit(split.train, model.features);
    errors = evaluate_windows(model, split.test, nullptr, &linear, nullptr);
  } else if (model.kind == ModelKind::kConstantVelocitySampled) {
    Rng rng(derive_seed(fseed, model.display_label() + "/samples"));
    errors = evaluate_windows(model, split.test, nullptr, nullptr, &rng);
  } else {
    errors = evaluate_windows(model, split.test, nullptr, nullptr, nullptr);
  }
  return SceneResult{test_scene, errors.ade, errors.fde, split.test.size()};
}

}  // namespace

EvalReport evaluate_model(const ModelSpec& model, std::span<const Scene> scenes,
                          const ProtocolConfig& protocol) {
  if (model.uses_features()) validate(model.features);
  const std::vector<TrajectoryWindow> windows = protocol_windows(
      scenes, model.uses_features() ? model.features.neighbors
                                    : NeighborVariant::kBasic);
  const std::vector<std::string> folds = fold_scenes(scenes, protocol);
  if (folds.empty()) throw ConfigError("no folds requested");

  EvalReport report;
  report.model = model;
  report.scenes.resize(folds.size());

  const int workers =
      std::max(1, std::min<int>(protocol.workers,
                                static_cast<int>(folds.size())));
  if (workers == 1) {
    for (size_t i = 0; i < folds.size(); ++i) {
      report.scenes[i] = run_fold(model, windows, folds[i], protocol);
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(folds.size());
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < folds.size();
             i = next.fetch_add(1)) {
          try {
            report.scenes[i] = run_fold(model, windows, folds[i], protocol);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const SceneResult& s : report.scenes) {
    report.avg_ade += s.ade;
    report.avg_fde += s.fde;
  }
  report.avg_ade /= static_cast<double>(report.scenes.size());
  report.avg_fde /= static_cast<double>(report.scenes.size());
  return report;
}

std::vector<EvalReport> run_benchmark(std::span<const ModelSpec> models,
                                      std::span<const Scene> scenes,
                                      const ProtocolConfig& protocol) {
  if (models.empty()) throw ConfigError("no models requested");
  std::vector<EvalReport> reports;
  reports.reserve(models.size());
  for (const ModelSpec& m : models) {
    reports.push_back(evaluate_model(m, scenes, protocol));
  }
  return reports;
}

std::vector<ModelSpec> standard_models() {
  std::vector<ModelSpec> models(6);

  models[0].kind = ModelKind::kConstantVelocity;
  models[1].kind = ModelKind::kConstantVelocitySampled;
  models[2].kind = ModelKind::kConstantAcceleration;

  models[3].kind = ModelKind::kLinear;
  models[3].features.representation = Representation::kAbsolute;

  models[4].kind = ModelKind::kFeedForward;
  models[4].features.representation = Representation::kAbsolute;

  models[5].kind = ModelKind::kRecurrent;
  models[5].features.representation = Representation::kAbsolute;

  for (ModelSpec& m : models) m.label = to_string(m.kind);
  return models;
}

}  // namespace trajbench
