#include "pgp/prediction.hpp"

#include <algorithm>

namespace pgp {

std::vector<Vec2> predict_constant_velocity(const AgentState& state,
                                            int horizon_steps, double dt) {
  require(horizon_steps >= 1, "predict_constant_velocity: horizon_steps must be >= 1");
  require(dt > 0.0, "predict_constant_velocity: dt must be positive");
  std::vector<Vec2> positions(horizon_steps);
  for (int i = 0; i < horizon_steps; ++i)
    positions[i] = state.position + state.velocity * (i * dt);
  return positions;
}

std::vector<double> sigma_schedule(std::span<const double> speed_profile,
                                   const SigmaGrowthParams& params) {
  require(params.sigma0 > 0.0, "sigma_schedule: sigma0 must be positive");
  std::vector<double> sigmas;
  sigmas.reserve(speed_profile.size());
  if (speed_profile.empty()) return sigmas;

  double v_peak = 0.0;
  for (double v : speed_profile) {
    require(v >= 0.0, "sigma_schedule: speeds must be non-negative");
    v_peak = std::max(v_peak, v);
  }
  const double sigma_max = std::min(params.cap_multiplier * params.sigma0,
                                    params.sigma0 + params.cap_speed_gain * v_peak);

  double sigma = params.sigma0;
  sigmas.push_back(sigma);
  for (std::size_t i = 1; i < speed_profile.size(); ++i) {
    sigma = std::min(sigma_max, sigma + params.per_step_gain * speed_profile[i]);
    sigmas.push_back(sigma);
  }
  return sigmas;
}

std::vector<GaussianPrediction> predict_all(std::span<const AgentState> states,
                                            int horizon_steps, double dt,
                                            const SigmaGrowthParams& params) {
  std::vector<GaussianPrediction> predictions;
  predictions.reserve(states.size());
  for (const AgentState& state : states) {
    GaussianPrediction p;
    p.agent_id = state.id;
    p.dt = dt;
    p.sigma0 = params.sigma0;
    p.positions = predict_constant_velocity(state, horizon_steps, dt);
    const std::vector<double> speeds(horizon_steps, state.speed());
    p.sigmas = sigma_schedule(speeds, params);
    predictions.push_back(std::move(p));
  }
  return predictions;
}

}  // namespace pgp
