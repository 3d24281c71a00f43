#pragma once

#include <vector>

#include "pgp/core.hpp"
#include "pgp/prediction.hpp"

namespace pgp {

/// Fan-out search-space parameters of the gap planner.
struct PgpConfig {
  double horizon_T = 8.0;  // seconds
  double rate = 4.0;       // Hz
  double v_max = 1.0;      // m/s, also the sampling speed of candidates
  std::vector<double> fan_angles = default_fan_angles();  // radians
  double d_turned = 2.5;   // meters, length of the first (turned-away) segment
  std::vector<double> outside_fractions{0.0, 0.9};
  double turn_slowdown_threshold = deg2rad(30.0);
  double max_turn_rate = 1.0;  // rad/s

  int horizon_steps() const { return static_cast<int>(std::lround(horizon_T * rate)); }
  double dt() const { return 1.0 / rate; }

  /// [-80, -64, ..., 64, 80] degrees.
  static std::vector<double> default_fan_angles();
};

using Polyline = std::vector<Vec2>;

/// One fan path with the angle it was generated from.
struct FanPath {
  double fan_angle = 0.0;
  Polyline polyline;
};

/// One timed candidate: per-step positions sampled along a fan path at the
/// planning rate, with the turn-in slowdown applied.
struct CandidateTrajectory {
  double fan_angle = 0.0;
  std::vector<Vec2> positions;
  std::vector<double> speeds;        // speed during step i -> i+1, in [0, v_max]
  std::vector<double> headings;      // radians
  std::vector<Vec2> heading_dirs;    // unit motion direction per step
  Vec2 goal_point{0.0, 0.0};         // the projected planner goal
};

/// Point on the ray from the ego toward the map goal at distance
/// min(horizon_T * v_max, distance to the map goal).
Vec2 pgp_goal(const AgentState& ego, const Vec2& map_goal, const PgpConfig& config);

/// Three-segment fan paths around the straight line to `goal`, deduplicated
/// by traced geometry (the straight path appears once).
std::vector<FanPath> build_paths(const Vec2& ego_position, const Vec2& goal,
                                 const PgpConfig& config);

/// Samples a fan path into a timed trajectory. Speed is v_max except during
/// the initial turn-in (half speed while turning more than the threshold, for
/// ceil(turn_angle / max_turn_rate / dt) steps); a path shorter than the
/// horizon is held at its endpoint with speed 0.
CandidateTrajectory path_to_trajectory(const FanPath& path, double ego_heading,
                                       const PgpConfig& config);

/// pgp_goal + build_paths + path_to_trajectory for every path.
std::vector<CandidateTrajectory> build_candidates(const AgentState& ego,
                                                  const Vec2& map_goal,
                                                  const PgpConfig& config);

}  // namespace pgp
