#pragma once

#include <span>
#include <vector>

#include "pgp/core.hpp"
#include "pgp/risk_model.hpp"

namespace pgp {

/// One agent at one simulation instant.
struct AgentState {
  int id = -1;
  Vec2 position{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
  double heading = 0.0;  // radians in (-pi, pi]
  double radius = kAgentRadius;
  Vec2 goal{0.0, 0.0};
  int group_id = -1;  // -1: not in a group

  double speed() const { return velocity.norm(); }
};

/// Controls how positional uncertainty grows along a prediction.
/// sigma_max = min(cap_multiplier * sigma0, sigma0 + cap_speed_gain * max speed);
/// sigma_i   = min(sigma_max, sigma_{i-1} + per_step_gain * v_i).
struct SigmaGrowthParams {
  double sigma0 = 0.1666;
  double cap_multiplier = 3.0;  // dimensionless
  double cap_speed_gain = 0.4;  // seconds
  double per_step_gain = 0.015; // seconds (sigma meters per step per m/s)
};

/// positions[i] = start + velocity * i * dt for i in [0, horizon_steps).
std::vector<Vec2> predict_constant_velocity(const AgentState& state,
                                            int horizon_steps, double dt);

/// Non-decreasing sigma sequence for a per-step speed profile, one entry per
/// speed. Standing agents keep sigma0 forever.
std::vector<double> sigma_schedule(std::span<const double> speed_profile,
                                   const SigmaGrowthParams& params);

/// Constant-velocity prediction with sigma growth for every agent, in input
/// order. Each agent's observed speed is held constant over the horizon.
std::vector<GaussianPrediction> predict_all(std::span<const AgentState> states,
                                            int horizon_steps, double dt,
                                            const SigmaGrowthParams& params);

}  // namespace pgp
