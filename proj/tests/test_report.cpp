#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "support/synthetic.hpp"
#include "trajbench/errors.hpp"
#include "trajbench/report.hpp"

using namespace trajbench;
using testsupport::TempDir;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return text;
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

EvalReport sample_report(ModelKind kind, const std::string& label,
                         double base) {
  EvalReport report;
  report.model.kind = kind;
  report.model.label = label;
  report.scenes.push_back(SceneResult{"alpha", base, 2 * base, 10});
  report.scenes.push_back(SceneResult{"beta", base / 2, base, 6});
  report.avg_ade = (base + base / 2) / 2;
  report.avg_fde = (2 * base + base) / 2;
  return report;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

constexpr char kHeader[] =
    "model,scene,metric,value,windows,representation,augmentation,variant,k,"
    "sigma_deg,seed,config_hash";

}  // namespace

TEST_CASE("config hashes are stable and order independent") {
  const nlohmann::json a = nlohmann::json::parse(R"({"x": 1, "y": [2, 3]})");
  const nlohmann::json b = nlohmann::json::parse(R"({"y": [2, 3], "x": 1})");
  const nlohmann::json c = nlohmann::json::parse(R"({"x": 1, "y": [2, 4]})");
  CHECK(config_hash_of(a) == config_hash_of(b));
  CHECK(config_hash_of(a) != config_hash_of(c));

  CHECK(hash_string(0xabcULL) == "0000000000000abc");
  CHECK(hash_string(0xDEADBEEFDEADBEEFULL) == "deadbeefdeadbeef");
  CHECK(hash_string(0) == "0000000000000000");
}

TEST_CASE("evaluation csv layout") {
  std::vector<EvalReport> reports;
  reports.push_back(sample_report(ModelKind::kConstantVelocity, "cvm", 0.5));
  EvalReport sampled =
      sample_report(ModelKind::kConstantVelocitySampled, "cvm_s", 0.3);
  sampled.model.sample_count = 20;
  sampled.model.sample_sigma_deg = 25.0;
  reports.push_back(sampled);
  EvalReport ff = sample_report(ModelKind::kFeedForward, "ff", 0.4);
  reports.push_back(ff);

  const ReportContext ctx{7, 0xdeadbeefULL};
  const std::string csv = eval_csv(reports, ctx);

  CHECK(csv.substr(0, csv.find('\n')) == kHeader);
  CHECK(contains(csv, "cvm,alpha,ade,0.500000,10,,,,,,7,00000000deadbeef\n"));
  CHECK(contains(csv, "cvm,alpha,fde,1.000000,10,,,,,,7,00000000deadbeef\n"));
  CHECK(contains(csv, "cvm,beta,ade,0.250000,6,,,,,,7,00000000deadbeef\n"));
  CHECK(contains(csv, "cvm,AVG,ade,0.375000,16,,,,,,7,00000000deadbeef\n"));
  CHECK(contains(csv, "cvm_s,alpha,ade,0.300000,10,,,,20,25,7,"));
  CHECK(contains(csv, "ff,AVG,fde,0.600000,16,relative,none,basic,,,7,"));

  CHECK(eval_csv(reports, ctx) == csv);
}

TEST_CASE("evaluation markdown layout") {
  std::vector<EvalReport> reports;
  reports.push_back(sample_report(ModelKind::kConstantVelocity, "cvm", 0.5));
  EvalReport sampled =
      sample_report(ModelKind::kConstantVelocitySampled, "cvm_s", 0.3);
  reports.push_back(sampled);

  const ReportContext ctx{3, 1};
  const std::string md = eval_markdown(reports, ctx);
  CHECK(contains(md, "| model | alpha | beta | AVG |"));
  CHECK(contains(md, "| cvm | 0.50 / 1.00 | 0.25 / 0.50 | 0.38 / 0.75 |"));
  CHECK(contains(md, "best-of-20 samples"));
  CHECK(contains(md, "seed 3, config 0000000000000001."));
}

TEST_CASE("evaluation json carries the numbers unrounded") {
  std::vector<EvalReport> reports;
  reports.push_back(sample_report(ModelKind::kLinear, "lin", 0.125));
  const ReportContext ctx{5, 9};
  const nlohmann::json j = eval_json(reports, ctx);
  CHECK(j.at("seed").get<std::uint64_t>() == 5);
  CHECK(j.at("results").size() == 1);
  const nlohmann::json& r = j.at("results")[0];
  CHECK(r.at("model").at("label").get<std::string>() == "lin");
  CHECK(r.at("model").at("kind").get<std::string>() == "lin");
  CHECK(r.at("scenes")[0].at("ade").get<double>() == 0.125);
  CHECK(r.at("avg_fde").get<double>() == 0.1875);
}

TEST_CASE("analysis csv writers emit one row per value") {
  TempDir dir;
  const ReportContext ctx{2, 0xabc};

  PriorsResult priors;
  priors.kind = ModelKind::kFeedForward;
  priors.representations.emplace_back(
      "basic", sample_report(ModelKind::kFeedForward, "ff/basic", 0.5));
  write_priors_csv(dir.path() / "priors.csv", std::vector{priors}, ctx);
  const std::string priors_text = slurp(dir.path() / "priors.csv");
  CHECK(contains(priors_text,
                 "model,representation,scene,metric,value,seed,config_hash\n"));
  CHECK(contains(priors_text, "ff,basic,alpha,ade,0.500000,2,0000000000000abc\n"));
  CHECK(contains(priors_text, "ff,basic,AVG,fde,0.750000,2,0000000000000abc\n"));

  AttributionResult attribution;
  attribution.kind = ModelKind::kRecurrent;
  attribution.shares = {0.25, 0.75};
  write_attribution_csv(dir.path() / "attribution.csv",
                        std::vector{attribution}, ctx);
  const std::string attribution_text = slurp(dir.path() / "attribution.csv");
  CHECK(contains(attribution_text, "model,step,share,seed,config_hash\n"));
  CHECK(contains(attribution_text, "red,1,0.250000,2,"));
  CHECK(contains(attribution_text, "red,2,0.750000,2,"));

  CorrelationResult correlation;
  correlation.x = Eigen::MatrixXd::Constant(2, 2, 1.0);
  correlation.y = Eigen::MatrixXd::Constant(2, 2, -1.0);
  correlation.window_count = 5;
  write_correlation_csv(dir.path() / "correlation.csv", correlation, ctx);
  const std::string correlation_text = slurp(dir.path() / "correlation.csv");
  CHECK(contains(correlation_text, "component,step_i,step_j,value,seed,config_hash\n"));
  CHECK(contains(correlation_text, "x,1,2,1.000000,2,"));
  CHECK(contains(correlation_text, "y,2,1,-1.000000,2,"));

  DeprivationResult deprivation;
  deprivation.kind = ModelKind::kFeedForward;
  deprivation.rows = {DeprivationRow{1, 0.5, 1.0}, DeprivationRow{2, 0.4, 0.9}};
  deprivation.ade_stddev = 0.0707;
  deprivation.fde_stddev = 0.0707;
  write_deprivation_csv(dir.path() / "deprivation.csv",
                        std::vector{deprivation}, ctx);
  const std::string deprivation_text = slurp(dir.path() / "deprivation.csv");
  CHECK(contains(deprivation_text, "model,history_steps,metric,value,seed,config_hash\n"));
  CHECK(contains(deprivation_text, "ff,1,ade,0.500000,2,"));
  CHECK(contains(deprivation_text, "ff,stddev,ade,0.070700,2,"));

  NeighborResult neighbors;
  neighbors.kind = ModelKind::kFeedForward;
  neighbors.rows = {NeighborRow{NeighborVariant::kBasic, 0.4, 0.8},
                    NeighborRow{NeighborVariant::kHistory, 0.5, 0.9}};
  write_neighbors_csv(dir.path() / "neighbors.csv", std::vector{neighbors},
                      ctx);
  const std::string neighbors_text = slurp(dir.path() / "neighbors.csv");
  CHECK(contains(neighbors_text, "model,variant,metric,value,seed,config_hash\n"));
  CHECK(contains(neighbors_text, "ff,basic,ade,0.400000,2,"));
  CHECK(contains(neighbors_text, "ff,history,fde,0.900000,2,"));
}

TEST_CASE("consolidation merges disjoint reports") {
  TempDir dir;
  const ReportContext ctx{1, 2};
  write_eval_csv(dir.path() / "a.csv",
                 std::vector{sample_report(ModelKind::kConstantVelocity, "cvm",
                                           0.5)},
                 ctx);
  write_eval_csv(dir.path() / "b.csv",
                 std::vector{sample_report(ModelKind::kLinear, "lin", 0.25)},
                 ctx);

  const std::vector<std::filesystem::path> inputs{dir.path() / "a.csv",
                                                  dir.path() / "b.csv"};
  const std::string merged = consolidate_eval_csvs(inputs);
  CHECK(contains(merged, "cvm,alpha,ade,0.500000,"));
  CHECK(contains(merged, "lin,beta,fde,0.250000,"));
  CHECK(contains(merged, "cvm,AVG,ade,0.375000,"));
  CHECK(contains(merged, "lin,AVG,ade,0.187500,"));

  // merging is idempotent: feeding the output back reproduces it
  write_consolidated(dir.path() / "merged.csv", inputs);
  const std::vector<std::filesystem::path> again{dir.path() / "merged.csv"};
  CHECK(consolidate_eval_csvs(again) == merged);

  // duplicated identical rows collapse
  const std::vector<std::filesystem::path> doubled{dir.path() / "a.csv",
                                                   dir.path() / "a.csv"};
  const std::string collapsed = consolidate_eval_csvs(doubled);
  CHECK(collapsed.find("cvm,alpha,ade") ==
        collapsed.rfind("cvm,alpha,ade"));
}

TEST_CASE("consolidation rejects disagreeing and malformed reports") {
  TempDir dir;
  const std::string header = std::string(kHeader) + "\n";

  spill(dir.path() / "one.csv",
        header + "cvm,alpha,ade,0.500000,10,,,,,,7,00000000deadbeef\n");
  spill(dir.path() / "two.csv",
        header + "cvm,alpha,ade,0.600000,10,,,,,,7,00000000deadbeef\n");
  const std::vector<std::filesystem::path> conflict{dir.path() / "one.csv",
                                                    dir.path() / "two.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(conflict), ValidationError);
  try {
    consolidate_eval_csvs(conflict);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(contains(what, "one.csv"));
    CHECK(contains(what, "two.csv"));
    CHECK(contains(what, "0.500000"));
    CHECK(contains(what, "0.600000"));
  }

  spill(dir.path() / "bad_avg.csv",
        header + "cvm,alpha,ade,0.500000,10,,,,,,7,00000000deadbeef\n" +
            "cvm,AVG,ade,0.600000,10,,,,,,7,00000000deadbeef\n");
  const std::vector<std::filesystem::path> bad_avg{dir.path() / "bad_avg.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(bad_avg), ValidationError);

  spill(dir.path() / "bad_header.csv", "model,scene\ncvm,alpha\n");
  const std::vector<std::filesystem::path> bad_header{dir.path() /
                                                      "bad_header.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(bad_header), ParseError);

  spill(dir.path() / "short_row.csv", header + "cvm,alpha,ade,0.5\n");
  const std::vector<std::filesystem::path> short_row{dir.path() /
                                                     "short_row.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(short_row), ParseError);

  spill(dir.path() / "bad_value.csv",
        header + "cvm,alpha,ade,oops,10,,,,,,7,00000000deadbeef\n");
  const std::vector<std::filesystem::path> bad_value{dir.path() /
                                                     "bad_value.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(bad_value), ParseError);

  CHECK_THROWS_AS(consolidate_eval_csvs({}), ConfigError);
  const std::vector<std::filesystem::path> missing{dir.path() / "nope.csv"};
  CHECK_THROWS_AS(consolidate_eval_csvs(missing), ParseError);
}
