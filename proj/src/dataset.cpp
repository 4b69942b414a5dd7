#include "trajbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trajbench/errors.hpp"

namespace trajbench {

namespace {

std::vector<std::string> split_fields(const std::string& line, Delimiter d) {
  std::vector<std::string> fields;
  if (d == Delimiter::kComma) {
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
  } else {
    std::istringstream in(line);
    std::string field;
    while (in >> field) fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used])))
      ++used;
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": not a number: '" + s + "'");
  }
}

std::int64_t parse_integral(const std::string& s, const std::string& context) {
  const double v = parse_double(s, context);
  const double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9) {
    throw ParseError(context + ": expected an integral value, got '" + s + "'");
  }
  return static_cast<std::int64_t>(r);
}

// Shortest decimal representation that round-trips the exact double.
std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::optional<Position> Scene::position_at(std::int64_t pedestrian_id,
                                           std::int64_t frame) const {
  const auto it = tracks.find(pedestrian_id);
  if (it == tracks.end()) return std::nullopt;
  const auto& fr = it->second.frames;
  const auto pos = std::lower_bound(fr.begin(), fr.end(), frame);
  if (pos == fr.end() || *pos != frame) return std::nullopt;
  return it->second.positions[static_cast<std::size_t>(pos - fr.begin())];
}

FormatSpec FormatSpec::from_column_order(const std::string& order) {
  FormatSpec spec;
  const std::vector<std::string> names = split_fields(
      [&] {
        std::string s = order;
        std::replace(s.begin(), s.end(), ',', ' ');
        return s;
      }(),
      Delimiter::kWhitespace);
  if (names.size() != 4) {
    throw ConfigError("column order must list 4 fields, got '" + order + "'");
  }
  int seen = 0;
  for (int i = 0; i < 4; ++i) {
    if (names[i] == "frame") {
      spec.frame_column = i;
    } else if (names[i] == "id") {
      spec.id_column = i;
    } else if (names[i] == "x") {
      spec.x_column = i;
    } else if (names[i] == "y") {
      spec.y_column = i;
    } else {
      throw ConfigError("unknown column name '" + names[i] + "'");
    }
    ++seen;
  }
  if (spec.frame_column == spec.id_column || spec.x_column == spec.y_column ||
      spec.frame_column + spec.id_column + spec.x_column + spec.y_column != 6 ||
      seen != 4) {
    throw ConfigError("column order must be a permutation of frame,id,x,y: '" +
                      order + "'");
  }
  return spec;
}

Scene load_scene(const std::filesystem::path& path, const std::string& name,
                 const FormatSpec& format) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open annotation file: " + path.string());
  }
  Scene scene;
  scene.name = name;

  struct Obs {
    std::int64_t frame;
    Position pos;
  };
  std::map<std::int64_t, std::vector<Obs>> by_pedestrian;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line, format.delimiter);
    if (fields.empty()) continue;  // blank line
    const std::string context =
        path.filename().string() + ":" + std::to_string(line_no);
    if (fields.size() != 4) {
      throw ParseError(context + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    Obs obs;
    obs.frame = parse_integral(fields[static_cast<std::size_t>(format.frame_column)],
                               context);
    const std::int64_t ped =
        parse_integral(fields[static_cast<std::size_t>(format.id_column)], context);
    obs.pos.x = parse_double(fields[static_cast<std::size_t>(format.x_column)], context);
    obs.pos.y = parse_double(fields[static_cast<std::size_t>(format.y_column)], context);
    if (!is_finite(obs.pos)) {
      throw ValidationError(context + ": non-finite coordinate for pedestrian " +
                            std::to_string(ped));
    }
    by_pedestrian[ped].push_back(obs);
  }

  for (auto& [ped, observations] : by_pedestrian) {
    std::stable_sort(observations.begin(), observations.end(),
                     [](const Obs& a, const Obs& b) { return a.frame < b.frame; });
    SceneTrack track;
    track.frames.reserve(observations.size());
    track.positions.reserve(observations.size());
    for (const Obs& obs : observations) {
      if (!track.frames.empty() && track.frames.back() == obs.frame) {
        throw ValidationError(path.filename().string() +
                              ": duplicate observation of pedestrian " +
                              std::to_string(ped) + " at frame " +
                              std::to_string(obs.frame));
      }
      track.frames.push_back(obs.frame);
      track.positions.push_back(obs.pos);
    }
    scene.tracks.emplace(ped, std::move(track));
  }
  return scene;
}

void write_canonical(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write canonical file: " + path.string());
  }
  // Stable record order: by pedestrian id, then frame.
  for (const auto& [ped, track] : scene.tracks) {
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
      out << track.frames[i] << ' ' << ped << ' '
          << format_shortest(track.positions[i].x) << ' '
          << format_shortest(track.positions[i].y) << '\n';
    }
  }
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open manifest: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  if (!j.contains("scenes") || !j["scenes"].is_array()) {
    throw ConfigError("manifest " + path.string() +
                      ": missing 'scenes' array");
  }
  Manifest m;
  const auto base = path.parent_path();
  for (const auto& entry : j["scenes"]) {
    if (!entry.contains("name") || !entry.contains("path")) {
      throw ConfigError("manifest " + path.string() +
                        ": scene entries need 'name' and 'path'");
    }
    std::filesystem::path p = entry["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    m.scenes.push_back({entry["name"].get<std::string>(), p});
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  nlohmann::json j;
  j["scenes"] = nlohmann::json::array();
  for (const auto& entry : m.scenes) {
    j["scenes"].push_back(
        {{"name", entry.name}, {"path", entry.path.string()}});
  }
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write manifest: " + path.string());
  }
  out << j.dump(2) << '\n';
}

std::vector<Scene> load_scenes(const Manifest& manifest) {
  std::vector<Scene> scenes;
  scenes.reserve(manifest.scenes.size());
  for (const auto& entry : manifest.scenes) {
    scenes.push_back(load_scene(entry.path, entry.name));
  }
  return scenes;
}

std::int64_t infer_frame_stride(const Scene& scene) {
  std::map<std::int64_t, std::size_t> delta_counts;
  for (const auto& [ped, track] : scene.tracks) {
    for (std::size_t i = 0; i + 1 < track.frames.size(); ++i) {
      const std::int64_t delta = track.frames[i + 1] - track.frames[i];
      if (delta > 0) ++delta_counts[delta];
    }
  }
  if (delta_counts.empty()) return 1;
  std::int64_t best = 0;
  std::size_t best_count = 0;
  for (const auto& [delta, count] : delta_counts) {
    if (count > best_count) {  // map order breaks ties toward smaller delta
      best = delta;
      best_count = count;
    }
  }
  return best;
}

std::vector<Trajectory> contiguous_trajectories(const Scene& scene) {
  const std::int64_t stride = infer_frame_stride(scene);
  std::vector<Trajectory> out;
  for (const auto& [ped, track] : scene.tracks) {
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= track.frames.size(); ++i) {
      const bool gap = i == track.frames.size() ||
                       track.frames[i] - track.frames[i - 1] != stride;
      if (!gap) continue;
      Trajectory traj;
      traj.pedestrian_id = ped;
      traj.start_frame = track.frames[begin];
      traj.frame_stride = stride;
      traj.positions.assign(track.positions.begin() + static_cast<std::ptrdiff_t>(begin),
                            track.positions.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(traj));
      begin = i;
    }
  }
  return out;
}

}  // namespace trajbench
