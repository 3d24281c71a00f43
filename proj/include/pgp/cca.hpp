#pragma once

#include <span>

#include "pgp/core.hpp"
#include "pgp/prediction.hpp"
#include "pgp/social_force.hpp"

namespace pgp {

/// Output of one controller tick. DWA steers a unicycle via linear_speed and
/// yaw_rate; ORCA and SF are holonomic and fill velocity instead.
struct VelocityCommand {
  double linear_speed = 0.0;  // m/s
  double yaw_rate = 0.0;      // rad/s
  Vec2 velocity{0.0, 0.0};    // m/s
  bool holonomic = false;
};

struct DwaParams {
  double t_plan = 2.0;          // seconds of rollout
  double dt = 0.25;             // rollout and window step
  double v_min = 0.0;
  double v_max = 1.0;
  double yaw_rate_max = 1.0;    // rad/s
  double yaw_accel_max = 1.5;   // rad/s^2
  double accel_max = 1.5;       // m/s^2
  int speed_samples = 10;
  int yaw_samples = 10;
  double heading_weight = 0.6;
  double speed_weight = 0.2;
  double clearance_weight = 0.2;
  double clearance_cap = 2.0;   // meters; clearance beyond this scores 1

  int rollout_steps() const { return static_cast<int>(std::lround(t_plan / dt)); }
};

struct OrcaParams {
  double time_horizon = 2.5;   // seconds
  double dt = 0.25;            // seconds, responsibility window when overlapping
  double v_max = 1.0;
  double neighbor_dist = 4.0;  // meters
  int max_neighbors = 5;
  double side_bias = 1e-3;     // fraction of v_max nudging symmetric ties right
};

/// Dynamic-window search over (speed, yaw rate) pairs reachable from
/// `previous` under the acceleration limits. Arcs are rolled out against the
/// other agents' constant-velocity predictions; colliding arcs are discarded
/// and the survivor with the best heading/speed/clearance score wins. If every
/// arc collides, the command with the latest first collision is returned.
VelocityCommand dwa_step(const AgentState& ego, std::span<const AgentState> others,
                         const Vec2& goal, const VelocityCommand& previous,
                         const DwaParams& params);

/// Reciprocal velocity-obstacle avoidance against the nearest neighbors:
/// each neighbor contributes a half-plane constraint splitting the avoidance
/// effort evenly, and the feasible velocity closest to the preferred one is
/// returned (with the standard relaxation when the constraints are
/// infeasible).
VelocityCommand orca_step(const AgentState& ego, std::span<const AgentState> others,
                          const Vec2& goal, const OrcaParams& params);

/// One explicit-Euler force step of the shared pedestrian model, capped at
/// v_max.
VelocityCommand sf_step(const AgentState& ego, std::span<const AgentState> others,
                        const Vec2& goal, const SfParams& params, double dt);

}  // namespace pgp
