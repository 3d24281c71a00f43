#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgp/cca.hpp"
#include "pgp/candidate_trajectories.hpp"
#include "pgp/core.hpp"
#include "pgp/gap_planner.hpp"
#include "pgp/prediction.hpp"
#include "pgp/risk_model.hpp"
#include "pgp/rng.hpp"
#include "pgp/social_force.hpp"

namespace pgp {

enum class CcaKind { kDwa, kOrca, kSf };

/// One of the six evaluated agent stacks: a short-horizon controller with or
/// without the gap planner feeding it subgoals.
struct PlannerStack {
  CcaKind cca = CcaKind::kSf;
  bool with_pgp = false;
};

/// "dwa", "orca", "sf", "pgp_dwa", "pgp_orca", "pgp_sf".
std::string planner_name(const PlannerStack& stack);
PlannerStack parse_planner(const std::string& name);
std::vector<PlannerStack> all_planner_stacks();

struct ScenarioConfig {
  double stage_side = 10.0;    // meters, square stage
  double density = 0.5;        // other agents per square meter
  int max_group_size = 4;
  double desired_speed = 1.0;  // crowd walking speed, m/s
  std::uint64_t seed = 0;
  PlannerStack planner;
  double sim_dt = 0.1;    // seconds
  double timeout = 60.0;  // seconds
  StaticObstacle obstacles;

  double arrival_radius = 0.5;          // meters, goal acceptance for everyone
  double moving_speed_threshold = 0.1;  // m/s, below it the ego is "standing"
  double svr_threshold = 1.0;           // meters, space-violation distance
  double spawn_jitter = 0.5;            // std dev of member offsets, meters
  double min_separation = 2.0 * kAgentRadius;
  double pgp_period = 0.25;             // seconds between gap-planner runs
  double sf_subgoal_horizon = 2.0;      // seconds; SF has no native plan horizon

  PgpConfig pgp;
  SigmaGrowthParams sigma_growth;
  RiskParams risk;
  SfParams sf;
  GroupForceParams group_forces;
  DwaParams dwa;
  OrcaParams orca;

  /// Throws ContractViolation naming the offending field.
  void validate() const;
};

struct StepRecord {
  double time = 0.0;
  std::vector<AgentState> agents;  // [0] is the ego
  bool has_subgoal = false;
  Vec2 subgoal{0.0, 0.0};
  bool moving = false;
  bool colliding = false;   // another agent closer than the combined radii
  bool violating = false;   // another agent closer than svr_threshold
  double ego_social_force = 0.0;
};

enum class Outcome { kReached, kTimeout };

struct RunRecord {
  ScenarioConfig config;
  Vec2 ego_goal{0.0, 0.0};
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::kTimeout;
  double time_to_target = 0.0;  // timeout value when not reached
};

struct World {
  double time = 0.0;
  long tick = 0;
  AgentState ego;
  Vec2 ego_goal{0.0, 0.0};
  std::vector<AgentState> others;
  std::vector<std::vector<int>> groups;  // indices into others
  CounterRng rng{0};
};

/// Places round(density * area) crowd agents in groups with shared spawn and
/// goal centers, plus the ego crossing mid-left to mid-right.
World spawn_scenario(const ScenarioConfig& config);

/// Advances every crowd agent one pedestrian-model step and the ego under its
/// command, then resamples goals for groups that arrived.
void step_world(World& world, const ScenarioConfig& config,
                const VelocityCommand& ego_command);

/// Full closed-loop run of one scenario under the configured planner stack.
RunRecord run_scenario(const ScenarioConfig& config);

}  // namespace pgp
