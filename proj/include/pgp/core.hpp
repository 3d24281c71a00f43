#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pgp {

using Vec2 = Eigen::Vector2d;

/// Shared body radius for every agent in the benchmark (meters).
/// Two agents collide when their center distance drops below 2 * kAgentRadius.
inline constexpr double kAgentRadius = 0.3;

/// Thrown when a caller violates a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

/// Normalize an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

inline double deg2rad(double deg) { return deg * M_PI / 180.0; }

inline double square(double x) { return x * x; }

struct Segment {
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
};

/// Euclidean distance from a point to a line segment.
inline double point_segment_distance(const Vec2& p, const Segment& s) {
  const Vec2 ab = s.b - s.a;
  const double len_sq = ab.squaredNorm();
  if (len_sq <= 0.0) return (p - s.a).norm();
  const double t = std::clamp((p - s.a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (s.a + t * ab)).norm();
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace pgp
