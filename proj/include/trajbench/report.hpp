#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "trajbench/analysis.hpp"
#include "trajbench/benchmark.hpp"

namespace trajbench {

// Carried into every artifact so independent runs can be compared and merged
// safely. The hash fingerprints the effective configuration.
struct ReportContext {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

// FNV-1a over the canonical (key-sorted) JSON dump.
std::uint64_t config_hash_of(const nlohmann::json& config);
std::string hash_string(std::uint64_t hash);

// Long-form CSV, one row per (model, scene, metric) plus AVG rows. Metric
// values use fixed 6-decimal formatting; reruns with equal inputs are
// byte-identical.
std::string eval_csv(std::span<const EvalReport> reports,
                     const ReportContext& ctx);
void write_eval_csv(const std::filesystem::path& path,
                    std::span<const EvalReport> reports,
                    const ReportContext& ctx);

// Markdown table: one model per row, scenes plus AVG as columns, each cell
// "ADE / FDE".
std::string eval_markdown(std::span<const EvalReport> reports,
                          const ReportContext& ctx);
void write_eval_markdown(const std::filesystem::path& path,
                         std::span<const EvalReport> reports,
                         const ReportContext& ctx);

nlohmann::json eval_json(std::span<const EvalReport> reports,
                         const ReportContext& ctx);
void write_eval_json(const std::filesystem::path& path,
                     std::span<const EvalReport> reports,
                     const ReportContext& ctx);

void write_priors_csv(const std::filesystem::path& path,
                      std::span<const PriorsResult> results,
                      const ReportContext& ctx);
void write_attribution_csv(const std::filesystem::path& path,
                           std::span<const AttributionResult> results,
                           const ReportContext& ctx);
void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationResult& result,
                           const ReportContext& ctx);
void write_deprivation_csv(const std::filesystem::path& path,
                           std::span<const DeprivationResult> results,
                           const ReportContext& ctx);
void write_neighbors_csv(const std::filesystem::path& path,
                         std::span<const NeighborResult> results,
                         const ReportContext& ctx);

// Merges evaluation CSVs from independent runs. Identical duplicate rows
// collapse; rows that disagree on the same (model, scene, metric) cell raise
// ValidationError naming both files. Merged AVG rows are recomputed and
// cross-checked against any present in the inputs.
std::string consolidate_eval_csvs(
    std::span<const std::filesystem::path> inputs);
void write_consolidated(const std::filesystem::path& out,
                        std::span<const std::filesystem::path> inputs);

}  // namespace trajbench
