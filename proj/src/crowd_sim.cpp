#include "pgp/crowd_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace pgp {
namespace {

constexpr int kCenterAttempts = 100;
constexpr int kMemberAttempts = 100;

Vec2 clamp_to_stage(const Vec2& p, double side) {
  return Vec2(std::clamp(p.x(), 0.0, side), std::clamp(p.y(), 0.0, side));
}

bool inside_stage(const Vec2& p, double side) {
  return p.x() >= 0.0 && p.x() <= side && p.y() >= 0.0 && p.y() <= side;
}

void check(bool ok, const char* field, const char* what) {
  if (!ok) throw ContractViolation(std::string(field) + ": " + what);
}

SubgoalSpec subgoal_spec_for(const ScenarioConfig& config) {
  switch (config.planner.cca) {
    case CcaKind::kDwa:
      return {config.dwa.v_max, config.dwa.t_plan};
    case CcaKind::kOrca:
      return {config.orca.v_max, config.orca.time_horizon};
    case CcaKind::kSf:
    default:
      return {config.sf.v_max, config.sf_subgoal_horizon};
  }
}

StepRecord snapshot(const World& world, const ScenarioConfig& config, bool has_subgoal,
                    const Vec2& subgoal) {
  StepRecord row;
  row.time = world.time;
  row.agents.reserve(1 + world.others.size());
  row.agents.push_back(world.ego);
  row.agents.insert(row.agents.end(), world.others.begin(), world.others.end());
  row.has_subgoal = has_subgoal;
  row.subgoal = subgoal;
  row.moving = world.ego.speed() > config.moving_speed_threshold;
  for (const AgentState& other : world.others) {
    const double d = (other.position - world.ego.position).norm();
    if (d < world.ego.radius + other.radius) row.colliding = true;
    if (d < config.svr_threshold) row.violating = true;
  }
  row.ego_social_force = social_force(world.ego, world.others, config.sf).norm();
  return row;
}

}  // namespace

std::string planner_name(const PlannerStack& stack) {
  std::string base;
  switch (stack.cca) {
    case CcaKind::kDwa: base = "dwa"; break;
    case CcaKind::kOrca: base = "orca"; break;
    case CcaKind::kSf: base = "sf"; break;
  }
  return stack.with_pgp ? "pgp_" + base : base;
}

PlannerStack parse_planner(const std::string& name) {
  for (const PlannerStack& stack : all_planner_stacks()) {
    if (planner_name(stack) == name) return stack;
  }
  throw ContractViolation("planner: unknown name '" + name +
                          "' (expected dwa|orca|sf|pgp_dwa|pgp_orca|pgp_sf)");
}

std::vector<PlannerStack> all_planner_stacks() {
  std::vector<PlannerStack> stacks;
  for (bool with_pgp : {false, true}) {
    for (CcaKind cca : {CcaKind::kDwa, CcaKind::kOrca, CcaKind::kSf}) {
      stacks.push_back({cca, with_pgp});
    }
  }
  return stacks;
}

void ScenarioConfig::validate() const {
  check(stage_side > 0.0, "stage_side", "must be positive");
  check(density >= 0.0, "density", "must be non-negative");
  check(max_group_size >= 1, "max_group_size", "must be at least 1");
  check(desired_speed > 0.0, "desired_speed", "must be positive");
  check(sim_dt > 0.0, "sim_dt", "must be positive");
  check(timeout > 0.0, "timeout", "must be positive");
  check(arrival_radius > 0.0, "arrival_radius", "must be positive");
  check(moving_speed_threshold >= 0.0, "moving_speed_threshold", "must be non-negative");
  check(svr_threshold > 0.0, "svr_threshold", "must be positive");
  check(spawn_jitter >= 0.0, "spawn_jitter", "must be non-negative");
  check(min_separation >= 0.0, "min_separation", "must be non-negative");
  check(pgp_period > 0.0, "pgp_period", "must be positive");
  check(sf_subgoal_horizon > 0.0, "sf_subgoal_horizon", "must be positive");
  check(pgp.horizon_T > 0.0, "pgp.horizon_T", "must be positive");
  check(pgp.rate > 0.0, "pgp.rate", "must be positive");
  check(pgp.v_max > 0.0, "pgp.v_max", "must be positive");
  check(pgp.d_turned > 0.0, "pgp.d_turned", "must be positive");
  check(!pgp.fan_angles.empty(), "pgp.fan_angles", "must not be empty");
  for (double f : pgp.outside_fractions) {
    check(f >= 0.0 && f < 1.0, "pgp.outside_fractions", "must lie in [0, 1)");
  }
  check(pgp.max_turn_rate > 0.0, "pgp.max_turn_rate", "must be positive");
  check(sigma_growth.sigma0 > 0.0, "sigma_growth.sigma0", "must be positive");
  check(risk.p_escape >= 0.0 && risk.p_escape < 1.0, "risk.p_escape",
        "must lie in [0, 1)");
  check(sf.v_max > 0.0, "sf.v_max", "must be positive");
  check(sf.relaxation_time > 0.0, "sf.relaxation_time", "must be positive");
  check(dwa.v_max > 0.0, "dwa.v_max", "must be positive");
  check(dwa.t_plan > 0.0, "dwa.t_plan", "must be positive");
  check(dwa.dt > 0.0, "dwa.dt", "must be positive");
  check(dwa.speed_samples >= 1, "dwa.speed_samples", "must be at least 1");
  check(dwa.yaw_samples >= 1, "dwa.yaw_samples", "must be at least 1");
  check(orca.time_horizon > 0.0, "orca.time_horizon", "must be positive");
  check(orca.dt > 0.0, "orca.dt", "must be positive");
  check(orca.v_max > 0.0, "orca.v_max", "must be positive");
  check(orca.neighbor_dist > 0.0, "orca.neighbor_dist", "must be positive");
  check(orca.max_neighbors >= 1, "orca.max_neighbors", "must be at least 1");
}

World spawn_scenario(const ScenarioConfig& config) {
  config.validate();
  const double side = config.stage_side;

  World world;
  world.rng = CounterRng(config.seed);
  world.ego.id = 0;
  world.ego.position = Vec2(0.0, side / 2.0);
  world.ego.velocity = Vec2::Zero();
  world.ego.heading = 0.0;
  world.ego.goal = Vec2(side, side / 2.0);
  world.ego_goal = world.ego.goal;

  const int n = static_cast<int>(std::lround(config.density * side * side));
  std::vector<int> sizes;
  for (int total = 0; total < n;) {
    const int s =
        std::min(world.rng.uniform_int(1, config.max_group_size), n - total);
    sizes.push_back(s);
    total += s;
  }

  auto too_close = [&](const Vec2& p, const std::vector<AgentState>& pending) {
    if ((p - world.ego.position).norm() < config.min_separation) return true;
    for (const AgentState& a : world.others) {
      if ((p - a.position).norm() < config.min_separation) return true;
    }
    for (const AgentState& a : pending) {
      if ((p - a.position).norm() < config.min_separation) return true;
    }
    return false;
  };

  int next_id = 1;
  for (std::size_t gi = 0; gi < sizes.size(); ++gi) {
    const int size = sizes[gi];
    bool placed = false;
    for (int ca = 0; ca < kCenterAttempts && !placed; ++ca) {
      const Vec2 center(world.rng.uniform(0.0, side), world.rng.uniform(0.0, side));
      std::vector<AgentState> pending;
      bool ok = true;
      for (int m = 0; m < size && ok; ++m) {
        ok = false;
        for (int attempt = 0; attempt < kMemberAttempts; ++attempt) {
          const Vec2 pos = center + config.spawn_jitter *
                                        Vec2(world.rng.gaussian(), world.rng.gaussian());
          if (!inside_stage(pos, side) || too_close(pos, pending)) continue;
          AgentState a;
          a.position = pos;
          a.group_id = static_cast<int>(gi);
          pending.push_back(a);
          ok = true;
          break;
        }
      }
      if (!ok) continue;

      const Vec2 goal_center(world.rng.uniform(0.0, side), world.rng.uniform(0.0, side));
      std::vector<int> group;
      for (AgentState& a : pending) {
        a.id = next_id++;
        a.goal = clamp_to_stage(
            goal_center + config.spawn_jitter *
                              Vec2(world.rng.gaussian(), world.rng.gaussian()),
            side);
        const Vec2 to_goal = a.goal - a.position;
        if (to_goal.norm() > 1e-9) a.heading = std::atan2(to_goal.y(), to_goal.x());
        group.push_back(static_cast<int>(world.others.size()));
        world.others.push_back(a);
      }
      world.groups.push_back(std::move(group));
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("spawn_scenario: could not place a group of " +
                               std::to_string(size) + " agents (seed " +
                               std::to_string(config.seed) + ", density " +
                               std::to_string(config.density) + ")");
    }
  }
  return world;
}

void step_world(World& world, const ScenarioConfig& config,
                const VelocityCommand& ego_command) {
  const double dt = config.sim_dt;
  const double side = config.stage_side;
  const int n = static_cast<int>(world.others.size());

  SfParams crowd_sf = config.sf;
  crowd_sf.v_max = config.desired_speed;

  std::vector<Vec2> forces(n, Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    const AgentState& a = world.others[i];
    Vec2 f = goal_force(a, a.goal, crowd_sf);
    for (int j = 0; j < n; ++j) {
      if (j != i) f += interaction_force(a, world.others[j], crowd_sf);
    }
    f += interaction_force(a, world.ego, crowd_sf);
    forces[i] = f;
  }
  for (const std::vector<int>& group : world.groups) {
    add_group_forces(world.others, group, config.group_forces, forces);
  }

  for (int i = 0; i < n; ++i) {
    AgentState& a = world.others[i];
    Vec2 v = a.velocity + dt * forces[i];
    const double speed = v.norm();
    if (speed > config.desired_speed) v *= config.desired_speed / speed;
    a.velocity = v;
    a.position = clamp_to_stage(a.position + dt * v, side);
    if (v.norm() > 1e-9) a.heading = std::atan2(v.y(), v.x());
  }

  AgentState& ego = world.ego;
  if (ego_command.holonomic) {
    ego.velocity = ego_command.velocity;
  } else {
    ego.heading = wrap_angle(ego.heading + ego_command.yaw_rate * dt);
    ego.velocity =
        ego_command.linear_speed * Vec2(std::cos(ego.heading), std::sin(ego.heading));
  }
  ego.position = clamp_to_stage(ego.position + dt * ego.velocity, side);
  if (ego_command.holonomic && ego.velocity.norm() > 1e-9) {
    ego.heading = std::atan2(ego.velocity.y(), ego.velocity.x());
  }

  // A group that reached its goal picks a fresh one, together.
  for (const std::vector<int>& group : world.groups) {
    bool arrived = false;
    for (int idx : group) {
      const AgentState& a = world.others[idx];
      if ((a.position - a.goal).norm() <= config.arrival_radius) {
        arrived = true;
        break;
      }
    }
    if (!arrived) continue;
    const Vec2 center(world.rng.uniform(0.0, side), world.rng.uniform(0.0, side));
    for (int idx : group) {
      world.others[idx].goal = clamp_to_stage(
          center + config.spawn_jitter * Vec2(world.rng.gaussian(), world.rng.gaussian()),
          side);
    }
  }

  world.tick += 1;
  world.time = world.tick * dt;
}

RunRecord run_scenario(const ScenarioConfig& config) {
  World world = spawn_scenario(config);

  RunRecord record;
  record.config = config;
  record.ego_goal = world.ego_goal;

  const bool with_pgp = config.planner.with_pgp;
  const SubgoalSpec sub_spec = subgoal_spec_for(config);
  VelocityCommand dwa_prev;
  Vec2 subgoal = world.ego_goal;
  double next_plan = 0.0;

  record.steps.push_back(snapshot(world, config, false, subgoal));
  record.outcome = Outcome::kTimeout;
  record.time_to_target = config.timeout;

  if ((world.ego.position - world.ego_goal).norm() <= config.arrival_radius) {
    record.outcome = Outcome::kReached;
    record.time_to_target = 0.0;
    return record;
  }

  while (world.time + 1e-9 < config.timeout) {
    if (with_pgp && world.time >= next_plan - 1e-9) {
      const EvaluationResult eval =
          plan(world.ego, world.others, config.obstacles, world.ego_goal, config.pgp,
               config.sigma_growth, config.risk, sub_spec);
      subgoal = eval.subgoal;
      next_plan += config.pgp_period;
    }
    const Vec2 cca_goal = with_pgp ? subgoal : world.ego_goal;

    VelocityCommand cmd;
    switch (config.planner.cca) {
      case CcaKind::kDwa:
        cmd = dwa_step(world.ego, world.others, cca_goal, dwa_prev, config.dwa);
        dwa_prev = cmd;
        break;
      case CcaKind::kOrca:
        cmd = orca_step(world.ego, world.others, cca_goal, config.orca);
        break;
      case CcaKind::kSf:
        cmd = sf_step(world.ego, world.others, cca_goal, config.sf, config.sim_dt);
        break;
    }

    step_world(world, config, cmd);
    record.steps.push_back(snapshot(world, config, with_pgp, subgoal));

    if ((world.ego.position - world.ego_goal).norm() <= config.arrival_radius) {
      record.outcome = Outcome::kReached;
      record.time_to_target = world.time;
      break;
    }
  }
  return record;
}

}  // namespace pgp
