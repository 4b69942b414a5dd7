#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "support/synthetic.hpp"
#include "trajbench/dataset.hpp"

namespace fs = std::filesystem;
using namespace trajbench;
using testsupport::SyntheticOptions;
using testsupport::TempDir;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

RunResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path capture = scratch / "cli_output.txt";
  const std::string command = std::string("\"") + TRAJBENCH_CLI_PATH + "\" " +
                              args + " > \"" + capture.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  REQUIRE(status != -1);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.output = slurp(capture);
  return result;
}

// Canonical scene files plus a manifest for three small synthetic scenes.
fs::path write_dataset(const fs::path& dir) {
  SyntheticOptions opt;
  opt.pedestrians = 10;
  opt.min_steps = 21;
  opt.max_steps = 24;
  opt.seed = 9;
  const std::vector<Scene> scenes =
      testsupport::make_synthetic_scenes({"alpha", "beta", "gamma"}, opt);
  Manifest manifest;
  for (const Scene& scene : scenes) {
    const std::string filename = scene.name + ".txt";
    write_canonical(dir / filename, scene);
    manifest.scenes.push_back({scene.name, filename});
  }
  save_manifest(dir / "manifest.json", manifest);
  return dir / "manifest.json";
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("help exits cleanly") {
  TempDir dir;
  CHECK(run_cli("--help", dir.path()).exit_code == 0);
  CHECK(run_cli("evaluate --help", dir.path()).exit_code == 0);
}

TEST_CASE("convert normalizes different layouts to identical canonical files") {
  TempDir dir;
  spill(dir.path() / "plain.txt",
        "10 1 1.5 -2.25\n"
        "12 1 2.5 -2\n"
        "10 2 0.125 4\n"
        "12 2 0.25 4.5\n");
  spill(dir.path() / "shuffled.csv",
        "1,10,-2.25,1.5\n"
        "1,12,-2,2.5\n"
        "2,10,4,0.125\n"
        "2,12,4.5,0.25\n");

  const fs::path out_a = dir.path() / "a";
  const fs::path out_b = dir.path() / "b";
  const RunResult a = run_cli(
      "convert walk=" + (dir.path() / "plain.txt").string() +
          " --output-dir " + quoted(out_a),
      dir.path());
  CHECK(a.exit_code == 0);
  const RunResult b = run_cli(
      "convert walk=" + (dir.path() / "shuffled.csv").string() +
          " --output-dir " + quoted(out_b) +
          " --column-order id,frame,y,x --delimiter comma",
      dir.path());
  CHECK(b.exit_code == 0);

  CHECK(fs::exists(out_a / "manifest.json"));
  CHECK(fs::exists(out_a / "walk.txt"));
  CHECK(slurp(out_a / "walk.txt") == slurp(out_b / "walk.txt"));

  // converting a canonical file is a byte-level no-op
  const fs::path out_c = dir.path() / "c";
  const RunResult c = run_cli(
      "convert walk=" + (out_a / "walk.txt").string() + " --output-dir " +
          quoted(out_c),
      dir.path());
  CHECK(c.exit_code == 0);
  CHECK(slurp(out_c / "walk.txt") == slurp(out_a / "walk.txt"));
}

TEST_CASE("convert rejects malformed requests") {
  TempDir dir;
  spill(dir.path() / "scene.txt", "1 1 0.0 0.0\n");
  const std::string path = (dir.path() / "scene.txt").string();
  CHECK(run_cli("convert noequalsign", dir.path()).exit_code == 2);
  CHECK(run_cli("convert =path", dir.path()).exit_code == 2);
  CHECK(run_cli("convert a=" + path + " a=" + path, dir.path()).exit_code == 2);
  CHECK(run_cli("convert a=" + path + " --delimiter tabs", dir.path())
            .exit_code == 2);
  CHECK(run_cli("convert a=" + path + " --column-order frame,id,x",
                dir.path())
            .exit_code == 2);
  CHECK(run_cli("convert a=" + (dir.path() / "absent.txt").string(),
                dir.path())
            .exit_code == 1);
}

TEST_CASE("evaluate writes reproducible artifacts") {
  TempDir dir;
  write_dataset(dir.path());
  spill(dir.path() / "config.json", R"({
  "manifest": "manifest.json",
  "seed": 5,
  "models": [
    {"kind": "cvm"},
    {"kind": "cvm_s", "k": 3},
    {"kind": "lin"}
  ]
})");

  const std::string base = "evaluate --config " +
                           (dir.path() / "config.json").string() +
                           " --output-dir ";
  const RunResult first =
      run_cli(base + quoted(dir.path() / "run1"), dir.path());
  CHECK(first.exit_code == 0);
  CHECK(first.output.find("| model |") != std::string::npos);

  for (const char* name :
       {"results.csv", "results.md", "results.json", "metadata.json"}) {
    CHECK(fs::exists(dir.path() / "run1" / name));
  }

  const RunResult second =
      run_cli(base + quoted(dir.path() / "run2"), dir.path());
  CHECK(second.exit_code == 0);
  CHECK(slurp(dir.path() / "run1" / "results.csv") ==
        slurp(dir.path() / "run2" / "results.csv"));
  CHECK(slurp(dir.path() / "run1" / "results.json") ==
        slurp(dir.path() / "run2" / "results.json"));

  const nlohmann::json metadata =
      nlohmann::json::parse(slurp(dir.path() / "run1" / "metadata.json"));
  const std::string hash = metadata.at("config_hash").get<std::string>();
  CHECK(hash.size() == 16);
  CHECK(slurp(dir.path() / "run1" / "results.csv").find(hash) !=
        std::string::npos);

  const std::string csv = slurp(dir.path() / "run1" / "results.csv");
  for (const char* row :
       {"cvm,alpha,", "cvm,beta,", "cvm,gamma,", "cvm,AVG,", "cvm_s,AVG,",
        "lin,AVG,"}) {
    CHECK(csv.find(row) != std::string::npos);
  }
}

TEST_CASE("fold parallelism changes no numbers") {
  TempDir dir;
  const fs::path manifest = write_dataset(dir.path());
  const std::string base = "evaluate --manifest " + manifest.string() +
                           " --model cvm_s --model lin --seed 3 --output-dir ";
  const RunResult serial = run_cli(
      base + quoted(dir.path() / "serial") + " --workers 1", dir.path());
  const RunResult threaded = run_cli(
      base + quoted(dir.path() / "threaded") + " --workers 3", dir.path());
  REQUIRE(serial.exit_code == 0);
  REQUIRE(threaded.exit_code == 0);

  // the worker count is part of the fingerprint, so compare the numbers
  nlohmann::json a =
      nlohmann::json::parse(slurp(dir.path() / "serial" / "results.json"));
  nlohmann::json b =
      nlohmann::json::parse(slurp(dir.path() / "threaded" / "results.json"));
  a.erase("config_hash");
  b.erase("config_hash");
  CHECK(a == b);
}

TEST_CASE("evaluate honors model and fold restrictions") {
  TempDir dir;
  const fs::path manifest = write_dataset(dir.path());
  const RunResult result = run_cli(
      "evaluate --manifest " + manifest.string() +
          " --model cvm --test-scene alpha --output-dir " +
          quoted(dir.path() / "out"),
      dir.path());
  CHECK(result.exit_code == 0);
  const std::string csv = slurp(dir.path() / "out" / "results.csv");
  CHECK(csv.find("cvm,alpha,ade,") != std::string::npos);
  CHECK(csv.find("cvm,beta,") == std::string::npos);
  CHECK(csv.find("cvm_s,") == std::string::npos);
}

TEST_CASE("evaluate trains networks end to end") {
  TempDir dir;
  write_dataset(dir.path());
  spill(dir.path() / "config.json", R"({
  "manifest": "manifest.json",
  "seed": 2,
  "test_scenes": ["beta"],
  "models": [{"kind": "ff", "epochs": 1}, {"kind": "red", "epochs": 1}]
})");
  const RunResult result = run_cli(
      "evaluate --config " + (dir.path() / "config.json").string() +
          " --output-dir " + quoted(dir.path() / "out"),
      dir.path());
  CHECK(result.exit_code == 0);
  const std::string csv = slurp(dir.path() / "out" / "results.csv");
  CHECK(csv.find("ff,beta,ade,") != std::string::npos);
  CHECK(csv.find("ff,AVG,fde,") != std::string::npos);
  CHECK(csv.find("red,beta,ade,") != std::string::npos);
  CHECK(csv.find("red,AVG,fde,") != std::string::npos);
}

TEST_CASE("analyze correlation is deterministic") {
  TempDir dir;
  const fs::path manifest = write_dataset(dir.path());
  const std::string base = "analyze correlation --manifest " +
                           manifest.string() + " --output-dir ";
  CHECK(run_cli(base + quoted(dir.path() / "c1"), dir.path()).exit_code == 0);
  CHECK(run_cli(base + quoted(dir.path() / "c2"), dir.path()).exit_code == 0);
  const std::string csv = slurp(dir.path() / "c1" / "correlation.csv");
  CHECK(csv == slurp(dir.path() / "c2" / "correlation.csv"));
  CHECK(csv.find("component,step_i,step_j,value,seed,config_hash") == 0);
  CHECK(csv.find("x,7,7,") != std::string::npos);
  CHECK(fs::exists(dir.path() / "c1" / "metadata.json"));
}

TEST_CASE("analyze attribution uses configured training settings") {
  TempDir dir;
  write_dataset(dir.path());
  spill(dir.path() / "config.json", R"({
  "manifest": "manifest.json",
  "seed": 4,
  "models": [{"kind": "ff", "epochs": 2}]
})");
  const RunResult result = run_cli(
      "analyze attribution --config " + (dir.path() / "config.json").string() +
          " --model ff --output-dir " + quoted(dir.path() / "out"),
      dir.path());
  CHECK(result.exit_code == 0);
  const std::string csv = slurp(dir.path() / "out" / "attribution.csv");
  CHECK(csv.find("model,step,share,seed,config_hash") == 0);
  for (int step = 1; step <= 7; ++step) {
    CHECK(csv.find("ff," + std::to_string(step) + ",") != std::string::npos);
  }
}

TEST_CASE("report merges disjoint runs and rejects conflicts") {
  TempDir dir;
  const std::string header =
      "model,scene,metric,value,windows,representation,augmentation,variant,"
      "k,sigma_deg,seed,config_hash\n";
  spill(dir.path() / "one.csv",
        header + "cvm,alpha,ade,0.500000,10,,,,,,1,0000000000000001\n");
  spill(dir.path() / "two.csv",
        header + "lin,alpha,ade,0.600000,10,relative,,basic,,,1,0000000000000001\n");
  spill(dir.path() / "clash.csv",
        header + "cvm,alpha,ade,0.999000,10,,,,,,1,0000000000000001\n");

  const fs::path merged = dir.path() / "merged.csv";
  const RunResult ok = run_cli(
      "report " + (dir.path() / "one.csv").string() + " " +
          (dir.path() / "two.csv").string() + " --output " + quoted(merged),
      dir.path());
  CHECK(ok.exit_code == 0);
  const std::string text = slurp(merged);
  CHECK(text.find("cvm,alpha,ade,0.500000") != std::string::npos);
  CHECK(text.find("lin,alpha,ade,0.600000") != std::string::npos);

  const RunResult clash = run_cli(
      "report " + (dir.path() / "one.csv").string() + " " +
          (dir.path() / "clash.csv").string() + " --output " +
          quoted(dir.path() / "clash_out.csv"),
      dir.path());
  CHECK(clash.exit_code == 1);
  CHECK(clash.output.find("conflicting") != std::string::npos);

  CHECK(run_cli("report --output " + quoted(merged), dir.path()).exit_code ==
        2);
}

TEST_CASE("failure modes map to stable exit codes") {
  TempDir dir;
  const fs::path manifest = write_dataset(dir.path());

  CHECK(run_cli("evaluate --no-such-flag", dir.path()).exit_code == 2);
  CHECK(run_cli("evaluate", dir.path()).exit_code == 2);  // no manifest
  CHECK(run_cli("evaluate --manifest " + manifest.string() + " --model bogus",
                dir.path())
            .exit_code == 2);
  CHECK(run_cli("analyze nonsense --manifest " + manifest.string(), dir.path())
            .exit_code == 2);
  CHECK(run_cli("evaluate --manifest " +
                    (dir.path() / "no-manifest.json").string(),
                dir.path())
            .exit_code == 1);

  spill(dir.path() / "broken.json", "{oops");
  CHECK(run_cli("evaluate --config " + (dir.path() / "broken.json").string(),
                dir.path())
            .exit_code == 2);

  spill(dir.path() / "empty_models.json",
        R"({"manifest": "manifest.json", "models": []})");
  CHECK(run_cli("evaluate --config " +
                    (dir.path() / "empty_models.json").string(),
                dir.path())
            .exit_code == 2);

  CHECK(run_cli("evaluate --manifest " + manifest.string() +
                    " --model cvm --workers 0",
                dir.path())
            .exit_code == 2);
  CHECK(run_cli("evaluate --manifest " + manifest.string() +
                    " --model cvm --test-scene venus",
                dir.path())
            .exit_code == 2);
}
