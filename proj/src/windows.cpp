#include "trajbench/windows.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trajbench/errors.hpp"

namespace trajbench {

const char* to_string(NeighborVariant v) {
  switch (v) {
    case NeighborVariant::kBasic:
      return "basic";
    case NeighborVariant::kHistory:
      return "history";
    case NeighborVariant::kFuture:
      return "future";
  }
  return "?";
}

NeighborVariant neighbor_variant_from_string(const std::string& s) {
  if (s == "basic") return NeighborVariant::kBasic;
  if (s == "history") return NeighborVariant::kHistory;
  if (s == "future") return NeighborVariant::kFuture;
  throw ConfigError("unknown neighbor variant '" + s +
                    "' (expected basic|history|future)");
}

std::vector<TrajectoryWindow> slice_windows(const Trajectory& trajectory,
                                            const std::string& scene_name) {
  std::vector<TrajectoryWindow> out;
  const int length = static_cast<int>(trajectory.positions.size());
  for (int start = 0; start < length; ++start) {
    const int window_length = std::min(kMaxWindowLength, length - start);
    if (window_length < kMinWindowLength) break;
    TrajectoryWindow w;
    w.scene = scene_name;
    w.pedestrian_id = trajectory.pedestrian_id;
    w.start_frame =
        trajectory.start_frame + trajectory.frame_stride * start;
    w.frame_stride = trajectory.frame_stride;
    w.observed_count = kObservedSteps;
    w.positions.assign(
        trajectory.positions.begin() + start,
        trajectory.positions.begin() + start + window_length);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<TrajectoryWindow> slice_windows(const Scene& scene) {
  std::vector<TrajectoryWindow> out;
  for (const Trajectory& traj : contiguous_trajectories(scene)) {
    auto windows = slice_windows(traj, scene.name);
    out.insert(out.end(), std::make_move_iterator(windows.begin()),
               std::make_move_iterator(windows.end()));
  }
  return out;
}

RelativeWindow to_relative(const TrajectoryWindow& window) {
  RelativeWindow rel;
  rel.history = positions_to_displacements(window.observed());
  rel.anchor = window.anchor();
  // Target displacements start from the anchor so predictions accumulate
  // straight onto the future positions.
  std::vector<Position> tail;
  tail.reserve(1 + window.future().size());
  tail.push_back(rel.anchor);
  tail.insert(tail.end(), window.future().begin(), window.future().end());
  rel.target = positions_to_displacements(tail);
  return rel;
}

namespace {

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_windows(const std::filesystem::path& path,
                   std::span<const TrajectoryWindow> windows) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write window file: " + path.string());
  }
  for (const TrajectoryWindow& w : windows) {
    out << w.scene << ' ' << w.pedestrian_id << ' ' << w.anchor_frame() << ' '
        << w.frame_stride << ' ' << w.observed_count << ' '
        << w.positions.size();
    for (const Position& p : w.positions) {
      out << ' ' << format_shortest(p.x) << ' ' << format_shortest(p.y);
    }
    out << '\n';
  }
}

std::vector<TrajectoryWindow> read_windows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open window file: " + path.string());
  }
  std::vector<TrajectoryWindow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    TrajectoryWindow w;
    std::int64_t anchor_frame = 0;
    std::size_t total = 0;
    if (!(fields >> w.scene >> w.pedestrian_id >> anchor_frame >>
          w.frame_stride >> w.observed_count >> total)) {
      throw ParseError(path.filename().string() + ":" +
                       std::to_string(line_no) + ": malformed window header");
    }
    w.start_frame =
        anchor_frame - w.frame_stride * (w.observed_count - 1);
    w.positions.resize(total);
    for (Position& p : w.positions) {
      if (!(fields >> p.x >> p.y)) {
        throw ParseError(path.filename().string() + ":" +
                         std::to_string(line_no) +
                         ": truncated coordinate list");
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace trajbench
