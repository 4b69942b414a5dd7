#pragma once

#include <cmath>
#include <numbers>

namespace trajbench {

// World-frame position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
};

// Relative motion between two consecutive timesteps, in meters per timestep.
struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

inline Displacement operator-(const Position& a, const Position& b) {
  return {a.x - b.x, a.y - b.y};
}

inline Position operator+(const Position& p, const Displacement& d) {
  return {p.x + d.dx, p.y + d.dy};
}

inline Displacement operator+(const Displacement& a, const Displacement& b) {
  return {a.dx + b.dx, a.dy + b.dy};
}

inline Displacement operator-(const Displacement& a, const Displacement& b) {
  return {a.dx - b.dx, a.dy - b.dy};
}

inline Displacement operator*(double s, const Displacement& d) {
  return {s * d.dx, s * d.dy};
}

inline double norm(const Displacement& d) { return std::hypot(d.dx, d.dy); }

inline double distance(const Position& a, const Position& b) {
  return norm(a - b);
}

inline bool is_finite(const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

inline constexpr double kDegreesToRadians = std::numbers::pi / 180.0;

// Counter-clockwise rotation about the origin.
inline Displacement rotated(const Displacement& d, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * d.dx - s * d.dy, s * d.dx + c * d.dy};
}

inline Position rotated_about(const Position& p, const Position& center,
                              double radians) {
  return center + rotated(p - center, radians);
}

}  // namespace trajbench
