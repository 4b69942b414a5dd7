#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trajbench/analysis.hpp"
#include "trajbench/benchmark.hpp"
#include "trajbench/dataset.hpp"
#include "trajbench/errors.hpp"
#include "trajbench/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trajbench;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string manifest_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::vector<std::string> model_names;
  std::vector<std::string> test_scenes;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json config;
  try {
    is >> config;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!config.is_object()) throw ConfigError(path + ": config must be an object");
  return config;
}

ModelSpec standard_model(ModelKind kind) {
  for (ModelSpec& m : standard_models()) {
    if (m.kind == kind) return m;
  }
  throw ConfigError("no standard settings for this model kind");
}

ModelSpec model_from_json(const json& entry) {
  if (!entry.is_object() || !entry.contains("kind")) {
    throw ConfigError("each model entry needs a \"kind\"");
  }
  ModelSpec spec =
      standard_model(model_kind_from_string(entry.at("kind").get<std::string>()));
  try {
    if (entry.contains("label")) spec.label = entry.at("label").get<std::string>();
    if (entry.contains("representation")) {
      spec.features.representation = representation_from_string(
          entry.at("representation").get<std::string>());
    }
    if (entry.contains("neighbors")) {
      spec.features.neighbors =
          neighbor_variant_from_string(entry.at("neighbors").get<std::string>());
    }
    if (entry.contains("history_steps")) {
      spec.features.history_steps = entry.at("history_steps").get<int>();
    }
    if (entry.contains("augment_rotations")) {
      spec.train.augment_rotations = entry.at("augment_rotations").get<bool>();
    }
    if (entry.contains("rotation_sigma_deg")) {
      spec.train.rotation_sigma_deg =
          entry.at("rotation_sigma_deg").get<double>();
    }
    if (entry.contains("learning_rate")) {
      spec.train.learning_rate = entry.at("learning_rate").get<double>();
    }
    if (entry.contains("batch_size")) {
      spec.train.batch_size = entry.at("batch_size").get<int>();
    }
    if (entry.contains("epochs")) spec.train.epochs = entry.at("epochs").get<int>();
    if (entry.contains("k")) spec.sample_count = entry.at("k").get<int>();
    if (entry.contains("sigma_deg")) {
      spec.sample_sigma_deg = entry.at("sigma_deg").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model entry: ") + e.what());
  }
  return spec;
}

json model_to_json(const ModelSpec& spec) {
  json entry = {{"kind", to_string(spec.kind)},
                {"label", spec.display_label()}};
  if (spec.uses_features()) {
    entry["representation"] = to_string(spec.features.representation);
    entry["neighbors"] = to_string(spec.features.neighbors);
    entry["history_steps"] = spec.features.history_steps;
  }
  if (spec.is_neural()) {
    entry["augment_rotations"] = spec.train.augment_rotations;
    entry["rotation_sigma_deg"] = spec.train.rotation_sigma_deg;
    entry["learning_rate"] = spec.train.learning_rate;
    entry["batch_size"] = spec.train.batch_size;
    entry["epochs"] = spec.train.epochs;
  }
  if (spec.kind == ModelKind::kConstantVelocitySampled) {
    entry["k"] = spec.sample_count;
    entry["sigma_deg"] = spec.sample_sigma_deg;
  }
  return entry;
}

struct EffectiveSetup {
  std::string manifest_path;
  std::vector<Scene> scenes;
  std::vector<ModelSpec> models;
  ProtocolConfig protocol;
  json config_models;  // as configured, for kind lookups
};

EffectiveSetup resolve_setup(const CommonOptions& opts, bool need_models) {
  const json config = load_config(opts.config_path);

  EffectiveSetup setup;
  setup.manifest_path = opts.manifest_path;
  if (setup.manifest_path.empty() && config.contains("manifest")) {
    setup.manifest_path = config.at("manifest").get<std::string>();
    // Relative manifest locations in a config file are taken relative to it.
    const fs::path p(setup.manifest_path);
    if (p.is_relative() && !opts.config_path.empty()) {
      setup.manifest_path =
          (fs::path(opts.config_path).parent_path() / p).string();
    }
  }
  if (setup.manifest_path.empty()) {
    throw ConfigError("no manifest given (use --manifest or the config file)");
  }
  setup.scenes = load_scenes(load_manifest(setup.manifest_path));

  setup.protocol.seed =
      opts.seed.value_or(config.value<std::uint64_t>("seed", 0));
  setup.protocol.validation_fraction =
      config.value<double>("validation_fraction", 0.1);
  setup.protocol.workers = opts.workers.value_or(config.value<int>("workers", 1));
  if (setup.protocol.workers < 1) {
    throw ConfigError("workers must be at least 1");
  }
  setup.protocol.test_scenes = opts.test_scenes;
  if (setup.protocol.test_scenes.empty() && config.contains("test_scenes")) {
    setup.protocol.test_scenes =
        config.at("test_scenes").get<std::vector<std::string>>();
  }

  setup.config_models = config.value("models", json::array());
  if (!setup.config_models.is_array()) {
    throw ConfigError("\"models\" must be an array");
  }

  if (need_models) {
    if (!opts.model_names.empty()) {
      for (const std::string& name : opts.model_names) {
        const ModelKind kind = model_kind_from_string(name);
        bool found = false;
        for (const json& entry : setup.config_models) {
          if (entry.is_object() && entry.contains("kind") &&
              entry.at("kind").get<std::string>() == name) {
            setup.models.push_back(model_from_json(entry));
            found = true;
            break;
          }
        }
        if (!found) setup.models.push_back(standard_model(kind));
      }
    } else if (config.contains("models")) {
      for (const json& entry : setup.config_models) {
        setup.models.push_back(model_from_json(entry));
      }
    } else {
      setup.models = standard_models();
    }
    if (setup.models.empty()) {
      throw ConfigError("the model list is empty; nothing to evaluate");
    }
  }
  return setup;
}

json effective_config(const std::string& command, const EffectiveSetup& setup,
                      const std::vector<ModelSpec>& models,
                      const std::string& experiment = "") {
  json models_json = json::array();
  for (const ModelSpec& m : models) models_json.push_back(model_to_json(m));
  json config = {{"command", command},
                 {"manifest", setup.manifest_path},
                 {"seed", setup.protocol.seed},
                 {"validation_fraction", setup.protocol.validation_fraction},
                 {"workers", setup.protocol.workers},
                 {"test_scenes", setup.protocol.test_scenes},
                 {"models", std::move(models_json)}};
  if (!experiment.empty()) config["experiment"] = experiment;
  return config;
}

void write_metadata(const fs::path& dir, const json& config,
                    std::uint64_t hash) {
  json metadata = {{"config", config}, {"config_hash", hash_string(hash)}};
  std::ofstream os(dir / "metadata.json");
  if (!os) {
    throw ParseError("cannot write " + (dir / "metadata.json").string());
  }
  os << metadata.dump(2) << "\n";
}

int run_convert(const std::vector<std::string>& assignments,
                const std::string& output_dir, const std::string& column_order,
                const std::string& delimiter) {
  FormatSpec format = FormatSpec::from_column_order(column_order);
  if (delimiter == "comma") {
    format.delimiter = Delimiter::kComma;
  } else if (delimiter != "whitespace") {
    throw ConfigError("delimiter must be 'whitespace' or 'comma'");
  }

  const fs::path dir(output_dir);
  fs::create_directories(dir);
  Manifest manifest;
  std::map<std::string, bool> seen;
  for (const std::string& assignment : assignments) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
      throw ConfigError("expected NAME=PATH, got '" + assignment + "'");
    }
    const std::string name = assignment.substr(0, eq);
    const std::string path = assignment.substr(eq + 1);
    if (seen[name]) throw ConfigError("duplicate scene name '" + name + "'");
    seen[name] = true;
    const Scene scene = load_scene(path, name, format);
    const std::string filename = name + ".txt";
    write_canonical(dir / filename, scene);
    manifest.scenes.push_back({name, filename});
  }
  save_manifest(dir / "manifest.json", manifest);
  std::cout << "converted " << manifest.scenes.size() << " scene(s) into "
            << dir.string() << "\n";
  return 0;
}

int run_evaluate(const CommonOptions& opts) {
  const EffectiveSetup setup = resolve_setup(opts, true);
  const json config = effective_config("evaluate", setup, setup.models);
  const std::uint64_t hash = config_hash_of(config);
  const ReportContext ctx{setup.protocol.seed, hash};

  const std::vector<EvalReport> reports =
      run_benchmark(setup.models, setup.scenes, setup.protocol);

  const fs::path dir(opts.output_dir);
  fs::create_directories(dir);
  write_eval_csv(dir / "results.csv", reports, ctx);
  write_eval_markdown(dir / "results.md", reports, ctx);
  write_eval_json(dir / "results.json", reports, ctx);
  write_metadata(dir, config, hash);
  std::cout << eval_markdown(reports, ctx);
  return 0;
}

int run_analyze(const CommonOptions& opts, const std::string& experiment) {
  CommonOptions with_models = opts;
  if (with_models.model_names.empty()) {
    with_models.model_names = {"ff", "red"};
  }
  const bool needs_models = experiment != "correlation";
  const EffectiveSetup setup = resolve_setup(with_models, needs_models);
  for (const ModelSpec& m : setup.models) {
    if (!m.is_neural()) {
      throw ConfigError("analysis experiments run on ff or red models");
    }
  }
  const json config =
      effective_config("analyze", setup, setup.models, experiment);
  const std::uint64_t hash = config_hash_of(config);
  const ReportContext ctx{setup.protocol.seed, hash};

  const fs::path dir(opts.output_dir);
  fs::create_directories(dir);

  if (experiment == "priors") {
    std::vector<PriorsResult> results;
    for (const ModelSpec& m : setup.models) {
      results.push_back(
          environmental_prior_experiment(m, setup.scenes, setup.protocol));
    }
    write_priors_csv(dir / "priors.csv", results, ctx);
  } else if (experiment == "attribution") {
    std::vector<AttributionResult> results;
    for (const ModelSpec& m : setup.models) {
      results.push_back(
          attribution_experiment(m, setup.scenes, setup.protocol));
    }
    write_attribution_csv(dir / "attribution.csv", results, ctx);
  } else if (experiment == "correlation") {
    write_correlation_csv(dir / "correlation.csv",
                          correlation_experiment(setup.scenes), ctx);
  } else if (experiment == "deprivation") {
    std::vector<DeprivationResult> results;
    for (const ModelSpec& m : setup.models) {
      results.push_back(
          history_deprivation_experiment(m, setup.scenes, setup.protocol));
    }
    write_deprivation_csv(dir / "deprivation.csv", results, ctx);
  } else if (experiment == "neighbors") {
    std::vector<NeighborResult> results;
    for (const ModelSpec& m : setup.models) {
      results.push_back(neighbor_experiment(m, setup.scenes, setup.protocol));
    }
    write_neighbors_csv(dir / "neighbors.csv", results, ctx);
  } else {
    throw ConfigError("unknown experiment: " + experiment);
  }
  write_metadata(dir, config, hash);
  std::cout << "wrote " << experiment << " results to " << dir.string()
            << "\n";
  return 0;
}

int run_report(const std::vector<std::string>& inputs,
               const std::string& output) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  write_consolidated(output, paths);
  std::cout << "consolidated " << paths.size() << " report(s) into " << output
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pedestrian trajectory prediction benchmark: constant-velocity and "
      "learned baselines under a leave-one-scene-out protocol"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand(
      "convert", "Normalize raw annotation tables into canonical scene files");
  std::vector<std::string> assignments;
  std::string convert_out = ".";
  std::string column_order = "frame,id,x,y";
  std::string delimiter = "whitespace";
  convert->add_option("scenes", assignments, "Scene assignments, NAME=PATH")
      ->required();
  convert->add_option("--output-dir", convert_out, "Directory for canonical files");
  convert->add_option("--column-order", column_order,
                      "Input column order, e.g. frame,id,y,x");
  convert->add_option("--delimiter", delimiter, "whitespace or comma");

  // shared options builder
  const auto add_common = [](CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--manifest", opts.manifest_path, "Scene manifest");
    cmd->add_option("--output-dir", opts.output_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Protocol seed");
    cmd->add_option("--workers", opts.workers, "Parallel fold workers");
    cmd->add_option("--model", opts.model_names,
                    "Model to run (repeatable): cvm, cvm_s, const_acc, lin, "
                    "ff, red");
    cmd->add_option("--test-scene", opts.test_scenes,
                    "Restrict folds to these test scenes (repeatable)");
  };

  auto* evaluate =
      app.add_subcommand("evaluate", "Run the leave-one-scene-out benchmark");
  CommonOptions eval_opts;
  add_common(evaluate, eval_opts);

  auto* analyze = app.add_subcommand("analyze", "Run one analysis experiment");
  CommonOptions analyze_opts;
  std::string experiment;
  analyze
      ->add_option("experiment", experiment,
                   "priors, attribution, correlation, deprivation, neighbors")
      ->required()
      ->check(CLI::IsMember({"priors", "attribution", "correlation",
                             "deprivation", "neighbors"}));
  add_common(analyze, analyze_opts);

  auto* report =
      app.add_subcommand("report", "Merge evaluation CSVs from separate runs");
  std::vector<std::string> report_inputs;
  std::string report_output;
  report->add_option("inputs", report_inputs, "Evaluation CSV files")
      ->required();
  report->add_option("--output", report_output, "Merged CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (convert->parsed()) {
      return run_convert(assignments, convert_out, column_order, delimiter);
    }
    if (evaluate->parsed()) return run_evaluate(eval_opts);
    if (analyze->parsed()) return run_analyze(analyze_opts, experiment);
    if (report->parsed()) return run_report(report_inputs, report_output);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
