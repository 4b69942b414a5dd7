#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/synthetic.hpp"
#include "trajbench/dataset.hpp"
#include "trajbench/errors.hpp"
#include "trajbench/rng.hpp"

using namespace trajbench;
using trajbench::testsupport::TempDir;

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("load_scene groups by pedestrian and sorts by frame") {
  TempDir tmp;
  const auto file = tmp.path() / "scene.txt";
  write_file(file,
             "20 1 2.0 3.0\n"
             "10 1 1.0 1.5\n"
             "10 2 -4.0 0.25\n"
             "\n"
             "30 1 3.0 4.5\n");
  const Scene scene = load_scene(file, "demo");
  CHECK(scene.name == "demo");
  REQUIRE(scene.tracks.size() == 2);
  const SceneTrack& t1 = scene.tracks.at(1);
  REQUIRE(t1.frames.size() == 3);
  CHECK(t1.frames == std::vector<std::int64_t>{10, 20, 30});
  CHECK(t1.positions[0].x == 1.0);
  CHECK(t1.positions[1].y == 3.0);
  CHECK(scene.tracks.at(2).positions[0].x == -4.0);
}

TEST_CASE("position_at finds exact frames only") {
  TempDir tmp;
  const auto file = tmp.path() / "scene.txt";
  write_file(file, "10 7 1.0 2.0\n20 7 3.0 4.0\n");
  const Scene scene = load_scene(file, "demo");
  const auto hit = scene.position_at(7, 20);
  REQUIRE(hit.has_value());
  CHECK(hit->x == 3.0);
  CHECK_FALSE(scene.position_at(7, 15).has_value());
  CHECK_FALSE(scene.position_at(8, 10).has_value());
}

TEST_CASE("column order and comma delimiter") {
  TempDir tmp;
  const auto file = tmp.path() / "scene.csv";
  write_file(file, "1,100,2.5,-1.5\n1,110,3.0,-1.0\n");
  FormatSpec format = FormatSpec::from_column_order("id,frame,y,x");
  format.delimiter = Delimiter::kComma;
  const Scene scene = load_scene(file, "demo", format);
  const SceneTrack& track = scene.tracks.at(1);
  CHECK(track.frames == std::vector<std::int64_t>{100, 110});
  CHECK(track.positions[0].x == -1.5);
  CHECK(track.positions[0].y == 2.5);
}

TEST_CASE("from_column_order rejects non-permutations") {
  CHECK_THROWS_AS(FormatSpec::from_column_order("frame,id,x"), ConfigError);
  CHECK_THROWS_AS(FormatSpec::from_column_order("frame,id,x,x"), ConfigError);
  CHECK_THROWS_AS(FormatSpec::from_column_order("frame,id,x,z"), ConfigError);
  CHECK_NOTHROW(FormatSpec::from_column_order("y,x,id,frame"));
}

TEST_CASE("parse errors carry the file location") {
  TempDir tmp;
  const auto file = tmp.path() / "bad.txt";

  SUBCASE("wrong field count") {
    write_file(file, "10 1 1.0\n");
    CHECK_THROWS_AS(load_scene(file, "bad"), ParseError);
  }
  SUBCASE("non-numeric field") {
    write_file(file, "10 1 abc 1.0\n");
    CHECK_THROWS_AS(load_scene(file, "bad"), ParseError);
  }
  SUBCASE("fractional frame") {
    write_file(file, "10.5 1 1.0 1.0\n");
    CHECK_THROWS_AS(load_scene(file, "bad"), ParseError);
  }
  SUBCASE("line number in message") {
    write_file(file, "10 1 1.0 1.0\nbroken line\n");
    try {
      load_scene(file, "bad");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
}

TEST_CASE("validation errors") {
  TempDir tmp;
  const auto file = tmp.path() / "bad.txt";
  SUBCASE("non-finite coordinate") {
    write_file(file, "10 1 nan 1.0\n");
    CHECK_THROWS_AS(load_scene(file, "bad"), ValidationError);
  }
  SUBCASE("duplicate frame for one pedestrian") {
    write_file(file, "10 1 1.0 1.0\n10 1 2.0 2.0\n");
    CHECK_THROWS_AS(load_scene(file, "bad"), ValidationError);
  }
}

TEST_CASE("write_canonical round-trips exactly and is idempotent") {
  TempDir tmp;
  Rng rng(21);
  Scene scene;
  scene.name = "demo";
  for (int p = 1; p <= 20; ++p) {
    SceneTrack track;
    for (int t = 0; t < 25; ++t) {
      track.frames.push_back(t * 10);
      track.positions.push_back(
          Position{uniform_in(rng, -100.0, 100.0) * 0.015625 +
                       uniform_in(rng, -1.0, 1.0),
                   gaussian(rng) * 3.7});
    }
    scene.tracks.emplace(p, std::move(track));
  }
  const auto first = tmp.path() / "a.txt";
  write_canonical(first, scene);
  const Scene loaded = load_scene(first, "demo");
  REQUIRE(loaded.tracks.size() == scene.tracks.size());
  for (const auto& [id, track] : scene.tracks) {
    const SceneTrack& other = loaded.tracks.at(id);
    REQUIRE(other.frames == track.frames);
    for (size_t i = 0; i < track.positions.size(); ++i) {
      CHECK(other.positions[i].x == track.positions[i].x);
      CHECK(other.positions[i].y == track.positions[i].y);
    }
  }
  const auto second = tmp.path() / "b.txt";
  write_canonical(second, loaded);
  CHECK(read_file(first) == read_file(second));
}

TEST_CASE("manifest round trip with relative resolution") {
  TempDir tmp;
  const auto sub = tmp.path() / "nested";
  std::filesystem::create_directories(sub);
  write_file(sub / "a.txt", "10 1 1.0 2.0\n20 1 2.0 3.0\n");

  Manifest manifest;
  manifest.scenes.push_back({"alpha", "a.txt"});
  save_manifest(sub / "manifest.json", manifest);

  const Manifest loaded = load_manifest(sub / "manifest.json");
  REQUIRE(loaded.scenes.size() == 1);
  CHECK(loaded.scenes[0].name == "alpha");

  const std::vector<Scene> scenes = load_scenes(loaded);
  REQUIRE(scenes.size() == 1);
  CHECK(scenes[0].name == "alpha");
  CHECK(scenes[0].tracks.at(1).frames.size() == 2);
}

TEST_CASE("load_manifest rejects malformed files") {
  TempDir tmp;
  const auto file = tmp.path() / "manifest.json";
  write_file(file, "{ not json");
  CHECK_THROWS_AS(load_manifest(file), ParseError);
  CHECK_THROWS_AS(load_manifest(tmp.path() / "missing.json"), ParseError);
}

TEST_CASE("infer_frame_stride picks the most common delta") {
  Scene scene;
  scene.name = "s";
  SceneTrack a;
  a.frames = {0, 10, 20, 30, 45};
  a.positions.resize(5);
  scene.tracks.emplace(1, a);
  CHECK(infer_frame_stride(scene) == 10);

  SUBCASE("smallest delta wins ties") {
    Scene tie;
    SceneTrack t;
    t.frames = {0, 5, 15};  // deltas 5 and 10, one each
    t.positions.resize(3);
    tie.tracks.emplace(1, t);
    CHECK(infer_frame_stride(tie) == 5);
  }
  SUBCASE("empty scene defaults to one") {
    Scene empty;
    CHECK(infer_frame_stride(empty) == 1);
  }
}

TEST_CASE("contiguous_trajectories split on gaps") {
  Scene scene;
  scene.name = "s";
  SceneTrack a;
  for (const std::int64_t f : {0, 10, 20, 40, 50}) {
    a.frames.push_back(f);
    a.positions.push_back(Position{static_cast<double>(f), 0.0});
  }
  scene.tracks.emplace(3, a);
  const auto trajectories = contiguous_trajectories(scene);
  REQUIRE(trajectories.size() == 2);
  CHECK(trajectories[0].pedestrian_id == 3);
  CHECK(trajectories[0].start_frame == 0);
  CHECK(trajectories[0].frame_stride == 10);
  CHECK(trajectories[0].positions.size() == 3);
  CHECK(trajectories[1].start_frame == 40);
  CHECK(trajectories[1].positions.size() == 2);
}

TEST_CASE("synthetic scenes look sane") {
  testsupport::SyntheticOptions options;
  options.pedestrians = 10;
  options.seed = 5;
  const Scene scene = testsupport::make_synthetic_scene("syn", options);
  CHECK(scene.tracks.size() == 10);
  for (const auto& [id, track] : scene.tracks) {
    CHECK(track.frames.size() >= 12);
    CHECK(track.frames.size() == track.positions.size());
  }
  // regenerating with the same seed is identical
  const Scene again = testsupport::make_synthetic_scene("syn", options);
  CHECK(again.tracks.at(1).positions[3].x ==
        scene.tracks.at(1).positions[3].x);
}
