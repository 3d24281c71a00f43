#include "pgp/cca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

namespace pgp {
namespace {

constexpr double kTiny = 1e-9;
constexpr double kLpEpsilon = 1e-5;

double lerp_sample(double lo, double hi, int i, int n) {
  return n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
}

struct HalfPlane {
  Vec2 point{0.0, 0.0};
  Vec2 direction{0.0, 0.0};  // feasible side is to the left
};

// Optimizes along lines[line_no] inside the speed circle, subject to all
// earlier half-planes.
bool linear_program1(const std::vector<HalfPlane>& lines, std::size_t line_no,
                     double radius, const Vec2& opt_velocity, bool direction_opt,
                     Vec2& result) {
  const double dot = lines[line_no].point.dot(lines[line_no].direction);
  const double discriminant =
      square(dot) + square(radius) - lines[line_no].point.squaredNorm();
  if (discriminant < 0.0) return false;  // circle does not reach this line
  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dot - sqrt_disc;
  double t_right = -dot + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = cross2(lines[line_no].direction, lines[i].direction);
    const double numerator =
        cross2(lines[i].direction, lines[line_no].point - lines[i].point);
    if (std::abs(denominator) <= kLpEpsilon) {
      if (numerator < 0.0) return false;  // parallel and fully infeasible
      continue;
    }
    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) return false;
  }

  if (direction_opt) {
    if (opt_velocity.dot(lines[line_no].direction) > 0.0) {
      result = lines[line_no].point + t_right * lines[line_no].direction;
    } else {
      result = lines[line_no].point + t_left * lines[line_no].direction;
    }
  } else {
    const double t = lines[line_no].direction.dot(opt_velocity - lines[line_no].point);
    result = lines[line_no].point + std::clamp(t, t_left, t_right) * lines[line_no].direction;
  }
  return true;
}

// Sequentially satisfies the half-planes, keeping the result closest to
// opt_velocity (or farthest along it when direction_opt). Returns the index
// of the first unsatisfiable line, or lines.size() on success.
std::size_t linear_program2(const std::vector<HalfPlane>& lines, double radius,
                            const Vec2& opt_velocity, bool direction_opt,
                            Vec2& result) {
  if (direction_opt) {
    result = opt_velocity * radius;  // opt_velocity is a unit direction here
  } else if (opt_velocity.squaredNorm() > square(radius)) {
    result = opt_velocity.normalized() * radius;
  } else {
    result = opt_velocity;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (cross2(lines[i].direction, lines[i].point - result) > 0.0) {
      const Vec2 saved = result;
      if (!linear_program1(lines, i, radius, opt_velocity, direction_opt, result)) {
        result = saved;
        return i;
      }
    }
  }
  return lines.size();
}

// Infeasible case: minimize the largest constraint violation by optimizing
// perpendicular to each violated line against the projected constraints.
void linear_program3(const std::vector<HalfPlane>& lines, std::size_t begin_line,
                     double radius, Vec2& result) {
  double distance = 0.0;
  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (cross2(lines[i].direction, lines[i].point - result) <= distance) continue;
    std::vector<HalfPlane> proj_lines;
    for (std::size_t j = 0; j < i; ++j) {
      HalfPlane line;
      const double determinant = cross2(lines[i].direction, lines[j].direction);
      if (std::abs(determinant) <= kLpEpsilon) {
        if (lines[i].direction.dot(lines[j].direction) > 0.0) continue;
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point =
            lines[i].point +
            (cross2(lines[j].direction, lines[i].point - lines[j].point) / determinant) *
                lines[i].direction;
      }
      line.direction = (lines[j].direction - lines[i].direction).normalized();
      proj_lines.push_back(line);
    }
    const Vec2 saved = result;
    if (linear_program2(proj_lines, radius,
                        Vec2(-lines[i].direction.y(), lines[i].direction.x()), true,
                        result) < proj_lines.size()) {
      result = saved;
    }
    distance = cross2(lines[i].direction, lines[i].point - result);
  }
}

}  // namespace

VelocityCommand dwa_step(const AgentState& ego, std::span<const AgentState> others,
                         const Vec2& goal, const VelocityCommand& previous,
                         const DwaParams& params) {
  const int steps = params.rollout_steps();
  const double dt = params.dt;
  const double v_lo =
      std::clamp(previous.linear_speed - params.accel_max * dt, params.v_min, params.v_max);
  const double v_hi =
      std::clamp(previous.linear_speed + params.accel_max * dt, params.v_min, params.v_max);
  const double w_lo = std::clamp(previous.yaw_rate - params.yaw_accel_max * dt,
                                 -params.yaw_rate_max, params.yaw_rate_max);
  const double w_hi = std::clamp(previous.yaw_rate + params.yaw_accel_max * dt,
                                 -params.yaw_rate_max, params.yaw_rate_max);

  // An even sample count over a zero-straddling window would never contain
  // yaw rate 0, so straight driving could not stabilize; snap the sample
  // nearest to zero onto it.
  std::vector<double> yaw_values(params.yaw_samples);
  for (int i = 0; i < params.yaw_samples; ++i) {
    yaw_values[i] = lerp_sample(w_lo, w_hi, i, params.yaw_samples);
  }
  if (w_lo < 0.0 && w_hi > 0.0) {
    int nearest = 0;
    for (int i = 1; i < params.yaw_samples; ++i) {
      if (std::abs(yaw_values[i]) < std::abs(yaw_values[nearest])) nearest = i;
    }
    yaw_values[nearest] = 0.0;
  }

  double best_score = -std::numeric_limits<double>::infinity();
  VelocityCommand best;
  int best_survival = -1;  // first collision step of the degraded fallback
  VelocityCommand degraded;

  for (int iv = 0; iv < params.speed_samples; ++iv) {
    const double v = lerp_sample(v_lo, v_hi, iv, params.speed_samples);
    for (int iw = 0; iw < params.yaw_samples; ++iw) {
      const double w = yaw_values[iw];

      double heading = ego.heading;
      Vec2 pos = ego.position;
      double min_clearance = std::numeric_limits<double>::infinity();
      int first_collision = 0;
      for (int s = 1; s <= steps && first_collision == 0; ++s) {
        heading += w * dt;
        pos += v * dt * Vec2(std::cos(heading), std::sin(heading));
        const double t = s * dt;
        for (const AgentState& other : others) {
          if (other.id == ego.id) continue;
          const Vec2 other_pos = other.position + t * other.velocity;
          const double clearance =
              (pos - other_pos).norm() - (ego.radius + other.radius);
          min_clearance = std::min(min_clearance, clearance);
          if (clearance < 0.0) {
            first_collision = s;
            break;
          }
        }
      }

      VelocityCommand cmd;
      cmd.linear_speed = v;
      cmd.yaw_rate = w;
      if (first_collision > 0) {
        // Boxed in: buy the most time before the earliest predicted contact.
        // Among equal delays prefer the slowest, straightest command so the
        // agent brakes in place instead of orbiting.
        bool better;
        if (first_collision != best_survival) {
          better = first_collision > best_survival;
        } else if (v != degraded.linear_speed) {
          better = v < degraded.linear_speed;
        } else if (std::abs(w) != std::abs(degraded.yaw_rate)) {
          better = std::abs(w) < std::abs(degraded.yaw_rate);
        } else {
          better = w < degraded.yaw_rate;
        }
        if (better) {
          best_survival = first_collision;
          degraded = cmd;
        }
        continue;
      }

      const Vec2 to_goal = goal - pos;
      double heading_score = 1.0;
      if (to_goal.norm() > kTiny) {
        const double bearing = std::atan2(to_goal.y(), to_goal.x());
        heading_score = 1.0 - std::abs(wrap_angle(bearing - heading)) / M_PI;
      }
      const double speed_score = params.v_max > 0.0 ? v / params.v_max : 0.0;
      const double clearance_score =
          std::clamp(min_clearance, 0.0, params.clearance_cap) / params.clearance_cap;
      const double score = params.heading_weight * heading_score +
                           params.speed_weight * speed_score +
                           params.clearance_weight * clearance_score;
      if (score > best_score) {
        best_score = score;
        best = cmd;
      }
    }
  }

  if (best_score == -std::numeric_limits<double>::infinity()) return degraded;
  return best;
}

VelocityCommand orca_step(const AgentState& ego, std::span<const AgentState> others,
                          const Vec2& goal, const OrcaParams& params) {
  struct Neighbor {
    double dist_sq;
    int id;
    const AgentState* agent;
  };
  std::vector<Neighbor> neighbors;
  for (const AgentState& other : others) {
    if (other.id == ego.id) continue;
    const double d2 = (other.position - ego.position).squaredNorm();
    if (d2 < square(params.neighbor_dist)) neighbors.push_back({d2, other.id, &other});
  }
  std::sort(neighbors.begin(), neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    return std::tie(a.dist_sq, a.id) < std::tie(b.dist_sq, b.id);
  });
  if (static_cast<int>(neighbors.size()) > params.max_neighbors) {
    neighbors.resize(params.max_neighbors);
  }

  std::vector<HalfPlane> lines;
  lines.reserve(neighbors.size());
  const double inv_horizon = 1.0 / params.time_horizon;
  for (const Neighbor& nb : neighbors) {
    const AgentState& other = *nb.agent;
    const Vec2 rel_pos = other.position - ego.position;
    const Vec2 rel_vel = ego.velocity - other.velocity;
    const double dist_sq = rel_pos.squaredNorm();
    const double combined = ego.radius + other.radius;
    const double combined_sq = square(combined);

    HalfPlane line;
    Vec2 u;
    if (dist_sq > combined_sq) {
      // Velocity-obstacle cone truncated at the horizon; project the relative
      // velocity on the cutoff circle or on a leg, whichever is closer.
      const Vec2 w = rel_vel - inv_horizon * rel_pos;
      const double w_len_sq = w.squaredNorm();
      const double dot1 = w.dot(rel_pos);
      if (dot1 < 0.0 && square(dot1) > combined_sq * w_len_sq) {
        const double w_len = std::sqrt(w_len_sq);
        const Vec2 unit_w = w / w_len;
        line.direction = Vec2(unit_w.y(), -unit_w.x());
        u = (combined * inv_horizon - w_len) * unit_w;
      } else {
        const double leg = std::sqrt(dist_sq - combined_sq);
        if (cross2(rel_pos, w) > 0.0) {
          line.direction = Vec2(rel_pos.x() * leg - rel_pos.y() * combined,
                                rel_pos.x() * combined + rel_pos.y() * leg) /
                           dist_sq;
        } else {
          line.direction = -Vec2(rel_pos.x() * leg + rel_pos.y() * combined,
                                 -rel_pos.x() * combined + rel_pos.y() * leg) /
                           dist_sq;
        }
        u = rel_vel.dot(line.direction) * line.direction - rel_vel;
      }
    } else {
      // Already overlapping: push apart within one control period.
      const double inv_time_step = 1.0 / params.dt;
      const Vec2 w = rel_vel - inv_time_step * rel_pos;
      const double w_len = w.norm();
      const Vec2 unit_w = w_len > kTiny ? Vec2(w / w_len) : Vec2(1.0, 0.0);
      line.direction = Vec2(unit_w.y(), -unit_w.x());
      u = (combined * inv_time_step - w_len) * unit_w;
    }
    line.point = ego.velocity + 0.5 * u;  // split the avoidance effort evenly
    lines.push_back(line);
  }

  Vec2 pref = Vec2::Zero();
  const Vec2 to_goal = goal - ego.position;
  const double goal_dist = to_goal.norm();
  if (goal_dist > kTiny) {
    pref = (params.v_max / goal_dist) * to_goal;
    if (!lines.empty()) {
      // Deterministic right-hand nudge so perfectly symmetric encounters
      // resolve the same way every run.
      pref += params.side_bias * params.v_max * Vec2(to_goal.y(), -to_goal.x()) / goal_dist;
    }
  }

  Vec2 new_velocity = Vec2::Zero();
  const std::size_t fail = linear_program2(lines, params.v_max, pref, false, new_velocity);
  if (fail < lines.size()) linear_program3(lines, fail, params.v_max, new_velocity);

  VelocityCommand cmd;
  cmd.holonomic = true;
  cmd.velocity = new_velocity;
  cmd.linear_speed = new_velocity.norm();
  return cmd;
}

VelocityCommand sf_step(const AgentState& ego, std::span<const AgentState> others,
                        const Vec2& goal, const SfParams& params, double dt) {
  const Vec2 force = goal_force(ego, goal, params) + social_force(ego, others, params);
  Vec2 v = ego.velocity + dt * force;
  const double speed = v.norm();
  if (speed > params.v_max) v *= params.v_max / speed;
  VelocityCommand cmd;
  cmd.holonomic = true;
  cmd.velocity = v;
  cmd.linear_speed = v.norm();
  return cmd;
}

}  // namespace pgp
