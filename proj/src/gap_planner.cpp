#include "pgp/gap_planner.hpp"

#include <cmath>

namespace pgp {
namespace {

double utility_from_cos(double speed, double cos_beta, double v_max) {
  return (speed / v_max) * (cos_beta + 1.0) * 0.5;
}

// cos of the angle between the trajectory heading and the straight direction
// to the goal point. When the step sits on the goal the direction is
// undefined; the speed there is zero so the utility vanishes either way.
double cos_heading_error(const CandidateTrajectory& traj, int i) {
  const Vec2 to_goal = traj.goal_point - traj.positions[i];
  const double dist = to_goal.norm();
  if (dist < 1e-12) return 1.0;
  return traj.heading_dirs[i].dot(to_goal) / dist;
}

}  // namespace

double step_utility(double speed, double heading_error, double v_max) {
  require(v_max > 0.0, "v_max must be positive");
  require(speed >= 0.0 && speed <= v_max, "speed must lie in [0, v_max]");
  return utility_from_cos(speed, std::cos(heading_error), v_max);
}

double expected_utility(const CandidateTrajectory& traj, const SurvivalProfile& survival,
                        double v_max) {
  const std::size_t n = traj.positions.size();
  require(survival.p_surv.size() == n && traj.speeds.size() == n &&
              traj.heading_dirs.size() == n,
          "trajectory and survival profile must share the horizon length");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (traj.speeds[i] <= 0.0) continue;
    total += survival.p_surv[i] *
             utility_from_cos(traj.speeds[i], cos_heading_error(traj, static_cast<int>(i)),
                              v_max);
  }
  return total;
}

EvaluationResult plan(const AgentState& ego, std::span<const AgentState> others,
                      const StaticObstacle& obstacles, const Vec2& map_goal,
                      const PgpConfig& config, const SigmaGrowthParams& sigma_params,
                      const RiskParams& risk_params, const SubgoalSpec& subgoal_spec) {
  const int n = config.horizon_steps();
  const double dt = config.dt();

  std::vector<CandidateTrajectory> candidates = build_candidates(ego, map_goal, config);
  require(!candidates.empty(), "candidate set must not be empty");

  const std::vector<GaussianPrediction> predictions =
      predict_all(others, n, dt, sigma_params);
  const int k = static_cast<int>(predictions.size());

  EvaluationResult result;
  result.per_candidate.reserve(candidates.size());

  Eigen::MatrixXd coop(n, k);
  Eigen::VectorXd static_probs(n);
  for (CandidateTrajectory& cand : candidates) {
    GaussianPrediction ego_pred;
    ego_pred.positions = cand.positions;
    ego_pred.sigmas = sigma_schedule(cand.speeds, sigma_params);
    ego_pred.sigma0 = sigma_params.sigma0;
    ego_pred.dt = dt;
    ego_pred.agent_id = ego.id;

    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        coop(i, j) = cooperative_collision_prob(ego_pred, predictions[j], i);
      }
      static_probs(i) =
          static_collision_prob(ego_pred.positions[i], ego_pred.sigmas[i], obstacles);
    }

    CandidateEvaluation eval;
    eval.survival = survival_analysis(coop, static_probs, risk_params);
    eval.expected_utility = expected_utility(cand, eval.survival, config.v_max);
    eval.trajectory = std::move(cand);
    result.per_candidate.push_back(std::move(eval));
  }

  // Argmax with deterministic tie-breaking: straighter wins, then the
  // left (negative angle) side.
  int best = 0;
  for (int i = 1; i < static_cast<int>(result.per_candidate.size()); ++i) {
    const CandidateEvaluation& a = result.per_candidate[i];
    const CandidateEvaluation& b = result.per_candidate[best];
    if (a.expected_utility > b.expected_utility) {
      best = i;
    } else if (a.expected_utility == b.expected_utility) {
      const double aa = std::abs(a.trajectory.fan_angle);
      const double ab = std::abs(b.trajectory.fan_angle);
      if (aa < ab || (aa == ab && a.trajectory.fan_angle < b.trajectory.fan_angle)) {
        best = i;
      }
    }
  }
  result.best_index = best;

  const Vec2 to_map_goal = map_goal - ego.position;
  const double d_subgoal = subgoal_spec.distance();
  if (to_map_goal.norm() <= d_subgoal) {
    result.subgoal = map_goal;
  } else {
    const CandidateTrajectory& chosen = result.per_candidate[best].trajectory;
    Vec2 dir = to_map_goal.normalized();
    for (std::size_t i = 0; i < chosen.speeds.size(); ++i) {
      if (chosen.speeds[i] > 0.0) {
        dir = chosen.heading_dirs[i];
        break;
      }
    }
    result.subgoal = ego.position + d_subgoal * dir;
  }
  return result;
}

}  // namespace pgp
