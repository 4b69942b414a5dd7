#include "trajbench/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "trajbench/errors.hpp"

namespace trajbench {

namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw ParseError("failed writing " + path.string());
}

}  // namespace

std::uint64_t config_hash_of(const nlohmann::json& config) {
  return fnv1a64(config.dump());
}

std::string hash_string(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

constexpr char kEvalHeader[] =
    "model,scene,metric,value,windows,representation,augmentation,variant,k,"
    "sigma_deg,seed,config_hash";

struct ModelColumns {
  std::string representation;
  std::string augmentation;
  std::string variant;
  std::string k;
  std::string sigma;
};

ModelColumns model_columns(const ModelSpec& model) {
  ModelColumns c;
  if (model.uses_features()) {
    c.representation = to_string(model.features.representation);
    c.variant = to_string(model.features.neighbors);
  }
  if (model.is_neural()) {
    c.augmentation = model.train.augment_rotations ? "rotations" : "none";
  }
  if (model.kind == ModelKind::kConstantVelocitySampled) {
    c.k = std::to_string(model.sample_count);
    c.sigma = general(model.sample_sigma_deg);
  }
  return c;
}

void append_eval_row(std::string& out, const std::string& model,
                     const std::string& scene, const char* metric,
                     double value, std::size_t windows, const ModelColumns& c,
                     const ReportContext& ctx) {
  out += model;
  out += ',';
  out += scene;
  out += ',';
  out += metric;
  out += ',';
  out += fixed6(value);
  out += ',';
  out += std::to_string(windows);
  out += ',';
  out += c.representation;
  out += ',';
  out += c.augmentation;
  out += ',';
  out += c.variant;
  out += ',';
  out += c.k;
  out += ',';
  out += c.sigma;
  out += ',';
  out += std::to_string(ctx.seed);
  out += ',';
  out += hash_string(ctx.config_hash);
  out += '\n';
}

}  // namespace

std::string eval_csv(std::span<const EvalReport> reports,
                     const ReportContext& ctx) {
  std::string out = kEvalHeader;
  out += '\n';
  for (const EvalReport& report : reports) {
    const ModelColumns cols = model_columns(report.model);
    const std::string label = report.model.display_label();
    std::size_t total = 0;
    for (const SceneResult& s : report.scenes) {
      append_eval_row(out, label, s.scene, "ade", s.ade, s.window_count, cols,
                      ctx);
      append_eval_row(out, label, s.scene, "fde", s.fde, s.window_count, cols,
                      ctx);
      total += s.window_count;
    }
    append_eval_row(out, label, "AVG", "ade", report.avg_ade, total, cols, ctx);
    append_eval_row(out, label, "AVG", "fde", report.avg_fde, total, cols, ctx);
  }
  return out;
}

void write_eval_csv(const std::filesystem::path& path,
                    std::span<const EvalReport> reports,
                    const ReportContext& ctx) {
  write_text(path, eval_csv(reports, ctx));
}

std::string eval_markdown(std::span<const EvalReport> reports,
                          const ReportContext& ctx) {
  std::string out = "# Benchmark results\n\n";
  if (reports.empty()) return out + "No results.\n";

  out += "| model |";
  for (const SceneResult& s : reports.front().scenes) {
    out += " " + s.scene + " |";
  }
  out += " AVG |\n|---|";
  for (size_t i = 0; i <= reports.front().scenes.size(); ++i) out += "---|";
  out += "\n";
  for (const EvalReport& report : reports) {
    out += "| " + report.model.display_label() + " |";
    for (const SceneResult& s : report.scenes) {
      out += " " + fixed2(s.ade) + " / " + fixed2(s.fde) + " |";
    }
    out += " " + fixed2(report.avg_ade) + " / " + fixed2(report.avg_fde) +
           " |\n";
  }
  out += "\nEach cell is ADE / FDE in meters over the 12-step horizon ";
  out += "(0.4 s per step). Scene columns are leave-one-out folds: the model ";
  out += "is fitted on the remaining scenes and scored on the named one. AVG ";
  out += "is the unweighted mean over scenes.\n";
  for (const EvalReport& report : reports) {
    if (report.model.kind == ModelKind::kConstantVelocitySampled) {
      out += "\n" + report.model.display_label() + ": best-of-" +
             std::to_string(report.model.sample_count) +
             " samples with angular noise sigma " +
             general(report.model.sample_sigma_deg) +
             " deg; ADE and FDE take the minimum independently.\n";
    }
  }
  out += "\nseed " + std::to_string(ctx.seed) + ", config " +
         hash_string(ctx.config_hash) + ".\n";
  return out;
}

void write_eval_markdown(const std::filesystem::path& path,
                         std::span<const EvalReport> reports,
                         const ReportContext& ctx) {
  write_text(path, eval_markdown(reports, ctx));
}

nlohmann::json eval_json(std::span<const EvalReport> reports,
                         const ReportContext& ctx) {
  nlohmann::json out;
  out["seed"] = ctx.seed;
  out["config_hash"] = hash_string(ctx.config_hash);
  nlohmann::json results = nlohmann::json::array();
  for (const EvalReport& report : reports) {
    nlohmann::json scenes = nlohmann::json::array();
    for (const SceneResult& s : report.scenes) {
      scenes.push_back({{"scene", s.scene},
                        {"ade", s.ade},
                        {"fde", s.fde},
                        {"windows", s.window_count}});
    }
    nlohmann::json model = {{"kind", to_string(report.model.kind)},
                            {"label", report.model.display_label()}};
    if (report.model.uses_features()) {
      model["representation"] =
          to_string(report.model.features.representation);
      model["neighbors"] = to_string(report.model.features.neighbors);
      model["history_steps"] = report.model.features.history_steps;
    }
    if (report.model.is_neural()) {
      model["augment_rotations"] = report.model.train.augment_rotations;
    }
    if (report.model.kind == ModelKind::kConstantVelocitySampled) {
      model["k"] = report.model.sample_count;
      model["sigma_deg"] = report.model.sample_sigma_deg;
    }
    results.push_back({{"model", std::move(model)},
                       {"scenes", std::move(scenes)},
                       {"avg_ade", report.avg_ade},
                       {"avg_fde", report.avg_fde}});
  }
  out["results"] = std::move(results);
  return out;
}

void write_eval_json(const std::filesystem::path& path,
                     std::span<const EvalReport> reports,
                     const ReportContext& ctx) {
  write_text(path, eval_json(reports, ctx).dump(2) + "\n");
}

namespace {

std::string context_suffix(const ReportContext& ctx) {
  return std::to_string(ctx.seed) + "," + hash_string(ctx.config_hash);
}

}  // namespace

void write_priors_csv(const std::filesystem::path& path,
                      std::span<const PriorsResult> results,
                      const ReportContext& ctx) {
  std::string out = "model,representation,scene,metric,value,seed,config_hash\n";
  for (const PriorsResult& result : results) {
    for (const auto& [name, report] : result.representations) {
      for (const SceneResult& s : report.scenes) {
        out += std::string(to_string(result.kind)) + "," + name + "," +
               s.scene + ",ade," + fixed6(s.ade) + "," + context_suffix(ctx) +
               "\n";
        out += std::string(to_string(result.kind)) + "," + name + "," +
               s.scene + ",fde," + fixed6(s.fde) + "," + context_suffix(ctx) +
               "\n";
      }
      out += std::string(to_string(result.kind)) + "," + name + ",AVG,ade," +
             fixed6(report.avg_ade) + "," + context_suffix(ctx) + "\n";
      out += std::string(to_string(result.kind)) + "," + name + ",AVG,fde," +
             fixed6(report.avg_fde) + "," + context_suffix(ctx) + "\n";
    }
  }
  write_text(path, out);
}

void write_attribution_csv(const std::filesystem::path& path,
                           std::span<const AttributionResult> results,
                           const ReportContext& ctx) {
  std::string out = "model,step,share,seed,config_hash\n";
  for (const AttributionResult& result : results) {
    for (size_t i = 0; i < result.shares.size(); ++i) {
      out += std::string(to_string(result.kind)) + "," +
             std::to_string(i + 1) + "," + fixed6(result.shares[i]) + "," +
             context_suffix(ctx) + "\n";
    }
  }
  write_text(path, out);
}

void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationResult& result,
                           const ReportContext& ctx) {
  std::string out = "component,step_i,step_j,value,seed,config_hash\n";
  for (const char* component : {"x", "y"}) {
    const Eigen::MatrixXd& m =
        component == std::string("x") ? result.x : result.y;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out += std::string(component) + "," + std::to_string(i + 1) + "," +
               std::to_string(j + 1) + "," + fixed6(m(i, j)) + "," +
               context_suffix(ctx) + "\n";
      }
    }
  }
  write_text(path, out);
}

void write_deprivation_csv(const std::filesystem::path& path,
                           std::span<const DeprivationResult> results,
                           const ReportContext& ctx) {
  std::string out = "model,history_steps,metric,value,seed,config_hash\n";
  for (const DeprivationResult& result : results) {
    for (const DeprivationRow& row : result.rows) {
      out += std::string(to_string(result.kind)) + "," +
             std::to_string(row.history_steps) + ",ade," +
             fixed6(row.avg_ade) + "," + context_suffix(ctx) + "\n";
      out += std::string(to_string(result.kind)) + "," +
             std::to_string(row.history_steps) + ",fde," +
             fixed6(row.avg_fde) + "," + context_suffix(ctx) + "\n";
    }
    out += std::string(to_string(result.kind)) + ",stddev,ade," +
           fixed6(result.ade_stddev) + "," + context_suffix(ctx) + "\n";
    out += std::string(to_string(result.kind)) + ",stddev,fde," +
           fixed6(result.fde_stddev) + "," + context_suffix(ctx) + "\n";
  }
  write_text(path, out);
}

void write_neighbors_csv(const std::filesystem::path& path,
                         std::span<const NeighborResult> results,
                         const ReportContext& ctx) {
  std::string out = "model,variant,metric,value,seed,config_hash\n";
  for (const NeighborResult& result : results) {
    for (const NeighborRow& row : result.rows) {
      out += std::string(to_string(result.kind)) + "," +
             to_string(row.variant) + ",ade," + fixed6(row.avg_ade) + "," +
             context_suffix(ctx) + "\n";
      out += std::string(to_string(result.kind)) + "," +
             to_string(row.variant) + ",fde," + fixed6(row.avg_fde) + "," +
             context_suffix(ctx) + "\n";
    }
  }
  write_text(path, out);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct EvalRow {
  std::vector<std::string> fields;
  std::string source;
};

double parse_metric_value(const std::string& s, const std::string& source) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source + ": bad metric value '" + s + "'");
  }
}

}  // namespace

std::string consolidate_eval_csvs(
    std::span<const std::filesystem::path> inputs) {
  if (inputs.empty()) throw ConfigError("no input reports to consolidate");
  // key: model, scene, metric
  std::map<std::array<std::string, 3>, EvalRow> cells;
  for (const std::filesystem::path& path : inputs) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) {
      throw ParseError(path.string() + ": empty report");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kEvalHeader) {
      throw ParseError(path.string() + ": unexpected header '" + line + "'");
    }
    size_t line_no = 1;
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields = split_csv_line(line);
      if (fields.size() != 12) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": expected 12 fields, got " +
                         std::to_string(fields.size()));
      }
      parse_metric_value(fields[3],
                         path.string() + ":" + std::to_string(line_no));
      const std::array<std::string, 3> key{fields[0], fields[1], fields[2]};
      const auto it = cells.find(key);
      if (it == cells.end()) {
        cells.emplace(key, EvalRow{std::move(fields), path.string()});
      } else if (it->second.fields[3] != fields[3]) {
        throw ValidationError(
            "conflicting values for " + key[0] + "/" + key[1] + "/" + key[2] +
            ": " + it->second.fields[3] + " (" + it->second.source + ") vs " +
            fields[3] + " (" + path.string() + ")");
      }
    }
  }

  // Cross-check AVG cells against the scene cells they summarize.
  std::map<std::pair<std::string, std::string>, std::vector<double>>
      scene_values;
  for (const auto& [key, row] : cells) {
    if (key[1] == "AVG") continue;
    scene_values[{key[0], key[2]}].push_back(
        parse_metric_value(row.fields[3], row.source));
  }
  for (const auto& [key, row] : cells) {
    if (key[1] != "AVG") continue;
    const auto it = scene_values.find({key[0], key[2]});
    if (it == scene_values.end()) continue;
    double mean = 0.0;
    for (const double v : it->second) mean += v;
    mean /= static_cast<double>(it->second.size());
    const double reported = parse_metric_value(row.fields[3], row.source);
    if (std::abs(mean - reported) > 2e-6) {
      throw ValidationError("AVG row for " + key[0] + "/" + key[2] + " is " +
                            row.fields[3] + " but its scene rows average to " +
                            fixed6(mean) + " (" + row.source + ")");
    }
  }

  std::string out = kEvalHeader;
  out += '\n';
  // Scene rows first (sorted), AVG rows per model last.
  for (const auto& [key, row] : cells) {
    if (key[1] == "AVG") continue;
    for (size_t i = 0; i < row.fields.size(); ++i) {
      if (i > 0) out += ',';
      out += row.fields[i];
    }
    out += '\n';
  }
  for (const auto& [key, row] : cells) {
    if (key[1] != "AVG") continue;
    for (size_t i = 0; i < row.fields.size(); ++i) {
      if (i > 0) out += ',';
      out += row.fields[i];
    }
    out += '\n';
  }
  return out;
}

void write_consolidated(const std::filesystem::path& out,
                        std::span<const std::filesystem::path> inputs) {
  write_text(out, consolidate_eval_csvs(inputs));
}

}  // namespace trajbench
