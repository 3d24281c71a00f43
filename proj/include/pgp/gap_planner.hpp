#pragma once

#include <vector>

#include "pgp/candidate_trajectories.hpp"
#include "pgp/core.hpp"
#include "pgp/prediction.hpp"
#include "pgp/risk_model.hpp"

namespace pgp {

/// How far ahead the downstream short-horizon planner looks; the subgoal is
/// placed at cca_v_max * cca_horizon from the ego.
struct SubgoalSpec {
  double cca_v_max = 1.0;   // m/s
  double cca_horizon = 2.0; // seconds

  double distance() const { return cca_v_max * cca_horizon; }
};

struct CandidateEvaluation {
  CandidateTrajectory trajectory;
  SurvivalProfile survival;
  double expected_utility = 0.0;
};

struct EvaluationResult {
  std::vector<CandidateEvaluation> per_candidate;
  int best_index = -1;
  Vec2 subgoal{0.0, 0.0};
};

/// (speed/v_max) * (cos(heading_error)+1)/2, in [0, 1].
double step_utility(double speed, double heading_error, double v_max);

/// Survival-weighted sum of per-step utilities. The heading error at step i
/// is measured between the trajectory heading and the direction from
/// positions[i] to the trajectory's goal point.
double expected_utility(const CandidateTrajectory& traj, const SurvivalProfile& survival,
                        double v_max);

/// Full planning pass: build candidates, predict the other agents, score every
/// candidate by survival-weighted expected utility, pick the argmax and derive
/// the subgoal handed to the short-horizon planner.
EvaluationResult plan(const AgentState& ego, std::span<const AgentState> others,
                      const StaticObstacle& obstacles, const Vec2& map_goal,
                      const PgpConfig& config, const SigmaGrowthParams& sigma_params,
                      const RiskParams& risk_params, const SubgoalSpec& subgoal_spec);

}  // namespace pgp
