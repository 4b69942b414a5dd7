#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajbench/geometry.hpp"

namespace trajbench {

// Observations of one pedestrian, sorted by frame index.
struct SceneTrack {
  std::vector<std::int64_t> frames;
  std::vector<Position> positions;
};

// All pedestrian tracks of one recording, in world coordinates at the fixed
// 0.4 s timestep.
struct Scene {
  std::string name;
  std::map<std::int64_t, SceneTrack> tracks;  // pedestrian id -> observations

  // Position of a pedestrian at an exact frame, if observed.
  std::optional<Position> position_at(std::int64_t pedestrian_id,
                                      std::int64_t frame) const;
};

enum class Delimiter { kWhitespace, kComma };

// Column layout of an annotation file. Canonical order is frame, id, x, y.
struct FormatSpec {
  int frame_column = 0;
  int id_column = 1;
  int x_column = 2;
  int y_column = 3;
  Delimiter delimiter = Delimiter::kWhitespace;

  // Parses an order string such as "frame,id,y,x". Throws ConfigError on
  // anything but a permutation of the four field names.
  static FormatSpec from_column_order(const std::string& order);
};

// Reads an annotation file into a scene. Records are grouped by pedestrian id
// and sorted by frame. Throws ParseError (with line number) on malformed
// lines and ValidationError on non-finite coordinates or duplicate frames.
Scene load_scene(const std::filesystem::path& path, const std::string& name,
                 const FormatSpec& format = {});

// Writes the canonical 4-column whitespace-delimited form (frame id x y, one
// observation per line, shortest round-trip float formatting). Lossless and
// idempotent.
void write_canonical(const std::filesystem::path& path, const Scene& scene);

// Maps scene names to annotation file paths. Relative paths are resolved
// against the manifest's own directory.
struct Manifest {
  struct Entry {
    std::string name;
    std::filesystem::path path;
  };
  std::vector<Entry> scenes;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Manifest& m);
std::vector<Scene> load_scenes(const Manifest& manifest);

// One gap-free stretch of a pedestrian's track. Consecutive positions are one
// timestep apart; a missing frame splits a track into separate trajectories.
struct Trajectory {
  std::int64_t pedestrian_id = 0;
  std::int64_t start_frame = 0;
  std::int64_t frame_stride = 1;
  std::vector<Position> positions;
};

// The base frame spacing of a scene: the most frequent positive delta between
// consecutive observations of the same pedestrian (smallest wins ties).
std::int64_t infer_frame_stride(const Scene& scene);

std::vector<Trajectory> contiguous_trajectories(const Scene& scene);

}  // namespace trajbench
