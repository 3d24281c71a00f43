#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "pgp/core.hpp"

namespace pgp {

/// Per-step predicted mean position and standard deviation of one agent.
/// The location at step i is modeled as an isotropic 2D Gaussian with mean
/// positions[i] and standard deviation sigmas[i].
struct GaussianPrediction {
  std::vector<Vec2> positions;
  std::vector<double> sigmas;
  double sigma0 = 0.0;
  double dt = 0.0;
  int agent_id = -1;

  int steps() const { return static_cast<int>(positions.size()); }

  /// Enforces the type invariants; throws ContractViolation on breach.
  void validate() const;
};

struct RiskParams {
  /// Per-step rate of unforeseen events, in [0, 1). Makes survival decay
  /// exponentially even in empty space. Default picked so that a risk-free
  /// 32-step horizon retains roughly 0.73 survival.
  double p_escape = 0.01;
};

struct StaticObstacle {
  std::vector<Segment> segments;

  bool empty() const { return segments.empty(); }
  double min_distance(const Vec2& p) const;
};

/// Probability of reaching each step without a collision or escape event.
struct SurvivalProfile {
  std::vector<double> p_surv;          // p_surv[0] == 1
  std::vector<double> per_step_rates;  // summed event rates, for diagnostics
};

/// Probability that ego and one other agent occupy the same space at `step`,
/// normalized so that coincident means with initial sigmas give 1.
double pairwise_collision_prob(const GaussianPrediction& ego,
                               const GaussianPrediction& other, int step);

/// Cooperativity discount tau in (0, 1]: the product of both agents'
/// initial-to-current sigma ratios. Shrinks as either agent gains room to evade.
double cooperative_factor(const GaussianPrediction& ego,
                          const GaussianPrediction& other, int step);

double cooperative_collision_prob(const GaussianPrediction& ego,
                                  const GaussianPrediction& other, int step);

/// Collision probability against the nearest static segment, using a 1D
/// Gaussian on the lateral distance. Empty obstacle set gives 0.
double static_collision_prob(const Vec2& ego_position, double ego_sigma,
                             const StaticObstacle& obstacles);

/// Integrates per-step event rates into a survival profile:
/// p_surv[i] = prod_{j<i} exp(-(sum_k coop(j,k) + static(j) + p_escape)).
/// coop_probs is steps x agents; static_probs has one entry per step.
SurvivalProfile survival_analysis(const Eigen::MatrixXd& coop_probs,
                                  const Eigen::VectorXd& static_probs,
                                  const RiskParams& params);

/// Gauss error function via its Taylor series, deterministic for a given
/// build; absolute error below 2e-8 (arguments past 4 saturate to +/-1).
double erf_series(double z);

/// Number of probability values clamped back into [0, 1] since the last
/// reset. Floating-point overshoot diagnostics.
std::uint64_t clamp_event_count();
void reset_clamp_event_count();

}  // namespace pgp
