#include "pgp/candidate_trajectories.hpp"

#include <algorithm>
#include <cmath>

namespace pgp {
namespace {

constexpr double kTinyLength = 1e-12;
constexpr double kDedupTol = 1e-9;

// Collapses zero-length segments and interior vertices that continue straight
// ahead. Reversal vertices (the path doubling back on itself) are kept.
Polyline normalized_polyline(const Polyline& pl) {
  Polyline pts;
  pts.reserve(pl.size());
  for (const Vec2& p : pl) {
    if (pts.empty() || (p - pts.back()).norm() > kTinyLength) pts.push_back(p);
  }
  if (pts.size() < 3) return pts;
  Polyline out;
  out.reserve(pts.size());
  out.push_back(pts.front());
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Vec2 a = pts[i] - out.back();
    const Vec2 b = pts[i + 1] - pts[i];
    const bool straight =
        std::abs(cross2(a, b)) <= kTinyLength * a.norm() * b.norm() && a.dot(b) >= 0.0;
    if (!straight) out.push_back(pts[i]);
  }
  out.push_back(pts.back());
  return out;
}

bool same_polyline(const Polyline& a, const Polyline& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] - b[i]).norm() > kDedupTol) return false;
  }
  return true;
}

}  // namespace

std::vector<double> PgpConfig::default_fan_angles() {
  std::vector<double> angles;
  angles.reserve(11);
  for (int k = 5; k >= 1; --k) angles.push_back(-deg2rad(16.0 * k));
  angles.push_back(0.0);
  for (int k = 1; k <= 5; ++k) angles.push_back(deg2rad(16.0 * k));
  return angles;
}

Vec2 pgp_goal(const AgentState& ego, const Vec2& map_goal, const PgpConfig& config) {
  const Vec2 delta = map_goal - ego.position;
  const double dist = delta.norm();
  require(dist > kTinyLength, "ego position and map goal must not coincide");
  const double d = std::min(config.horizon_T * config.v_max, dist);
  return ego.position + (d / dist) * delta;
}

std::vector<FanPath> build_paths(const Vec2& ego_position, const Vec2& goal,
                                 const PgpConfig& config) {
  std::vector<FanPath> paths;
  const Vec2 delta = goal - ego_position;
  const double dist = delta.norm();
  require(dist > kTinyLength, "ego position and planner goal must not coincide");
  const Vec2 dir = delta / dist;
  std::vector<Polyline> seen;
  for (double alpha : config.fan_angles) {
    // cos is even and the sine magnitude is shared between +alpha and -alpha,
    // so mirrored fan angles produce bit-mirrored geometry.
    const double c = std::cos(std::abs(alpha));
    const double s = (alpha < 0.0 ? -1.0 : 1.0) * std::sin(std::abs(alpha));
    const Vec2 turned(c * dir.x() - s * dir.y(), s * dir.x() + c * dir.y());
    const Vec2 p_out = ego_position + config.d_turned * turned;
    for (double f : config.outside_fractions) {
      const Vec2 p_mid = p_out + f * (goal - p_out).norm() * dir;
      Polyline norm = normalized_polyline({ego_position, p_out, p_mid, goal});
      bool duplicate = false;
      for (const Polyline& other : seen) {
        if (same_polyline(norm, other)) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      paths.push_back({alpha, std::move(norm)});
      seen.push_back(paths.back().polyline);
    }
  }
  return paths;
}

CandidateTrajectory path_to_trajectory(const FanPath& path, double ego_heading,
                                       const PgpConfig& config) {
  require(!path.polyline.empty(), "fan path must have at least one vertex");
  const int n = config.horizon_steps();
  const double dt = config.dt();

  CandidateTrajectory traj;
  traj.fan_angle = path.fan_angle;
  traj.positions.reserve(n);
  traj.speeds.reserve(n);
  traj.headings.reserve(n);
  traj.heading_dirs.reserve(n);

  const Polyline& pl = path.polyline;
  std::vector<double> seg_len(pl.size() > 1 ? pl.size() - 1 : 0);
  for (std::size_t j = 0; j + 1 < pl.size(); ++j) seg_len[j] = (pl[j + 1] - pl[j]).norm();

  int slowdown_steps = 0;
  Vec2 fallback_dir(std::cos(ego_heading), std::sin(ego_heading));
  if (!seg_len.empty() && seg_len[0] > kTinyLength) {
    const Vec2 first_dir = (pl[1] - pl[0]) / seg_len[0];
    const double turn =
        std::abs(wrap_angle(std::atan2(first_dir.y(), first_dir.x()) - ego_heading));
    if (turn > config.turn_slowdown_threshold) {
      slowdown_steps = static_cast<int>(std::ceil(turn / config.max_turn_rate / dt));
    }
    fallback_dir = first_dir;
  }

  std::size_t seg = 0;
  double offset = 0.0;  // distance already covered on segment `seg`
  auto point_at = [&]() -> Vec2 {
    if (seg >= seg_len.size()) return pl.back();
    return pl[seg] + (offset / seg_len[seg]) * (pl[seg + 1] - pl[seg]);
  };

  for (int i = 0; i < n; ++i) {
    const Vec2 start = point_at();
    traj.positions.push_back(start);
    const double want = (i < slowdown_steps ? 0.5 : 1.0) * config.v_max * dt;
    double ds = want;
    while (ds > 0.0 && seg < seg_len.size()) {
      const double remain = seg_len[seg] - offset;
      if (ds >= remain) {
        ds -= remain;
        ++seg;
        offset = 0.0;
      } else {
        offset += ds;
        ds = 0.0;
      }
    }
    const Vec2 end = point_at();
    const double moved = want - ds;
    traj.speeds.push_back(moved / dt);
    const double chord = (end - start).norm();
    if (chord > kTinyLength) fallback_dir = (end - start) / chord;
    traj.heading_dirs.push_back(fallback_dir);
    traj.headings.push_back(std::atan2(fallback_dir.y(), fallback_dir.x()));
  }
  return traj;
}

std::vector<CandidateTrajectory> build_candidates(const AgentState& ego,
                                                  const Vec2& map_goal,
                                                  const PgpConfig& config) {
  const Vec2 goal = pgp_goal(ego, map_goal, config);
  std::vector<CandidateTrajectory> out;
  for (const FanPath& path : build_paths(ego.position, goal, config)) {
    out.push_back(path_to_trajectory(path, ego.heading, config));
    out.back().goal_point = goal;
  }
  return out;
}

}  // namespace pgp
