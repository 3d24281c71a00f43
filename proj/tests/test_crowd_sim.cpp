#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "pgp/crowd_sim.hpp"
#include "pgp/social_force.hpp"
#include "support.hpp"

using namespace pgp;
using pgp::test::make_agent;

namespace {

ScenarioConfig base_config(double density, std::uint64_t seed, const char* planner) {
  ScenarioConfig c;
  c.density = density;
  c.seed = seed;
  c.planner = parse_planner(planner);
  return c;
}

}  // namespace

TEST_CASE("planner names round-trip and enumerate all six stacks") {
  const auto stacks = all_planner_stacks();
  REQUIRE(stacks.size() == 6);
  std::set<std::string> names;
  for (const PlannerStack& s : stacks) {
    const std::string name = planner_name(s);
    names.insert(name);
    const PlannerStack parsed = parse_planner(name);
    CHECK(parsed.cca == s.cca);
    CHECK(parsed.with_pgp == s.with_pgp);
  }
  CHECK(names == std::set<std::string>{"dwa", "orca", "sf", "pgp_dwa", "pgp_orca",
                                       "pgp_sf"});
  CHECK_THROWS_AS((void)parse_planner("vfh"), ContractViolation);
}

TEST_CASE("spawn scales the crowd with density and partitions it into groups") {
  const World one = spawn_scenario(base_config(0.01, 7, "sf"));
  CHECK(one.others.size() == 1);

  const World full = spawn_scenario(base_config(1.0, 7, "sf"));
  CHECK(full.others.size() == 100);

  CHECK(full.ego.position == Vec2(0.0, 5.0));
  CHECK(full.ego_goal == Vec2(10.0, 5.0));
  CHECK(full.ego.id == 0);

  // groups partition the crowd, sizes within the configured bound
  std::set<int> seen;
  for (std::size_t gi = 0; gi < full.groups.size(); ++gi) {
    const auto& group = full.groups[gi];
    CHECK(group.size() >= 1);
    CHECK(group.size() <= 4);
    for (int idx : group) {
      CHECK(seen.insert(idx).second);
      CHECK(full.others[idx].group_id == static_cast<int>(gi));
    }
  }
  CHECK(seen.size() == 100);

  for (const AgentState& a : full.others) {
    CHECK(a.position.x() >= 0.0);
    CHECK(a.position.x() <= 10.0);
    CHECK(a.position.y() >= 0.0);
    CHECK(a.position.y() <= 10.0);
    CHECK(a.goal.x() >= 0.0);
    CHECK(a.goal.x() <= 10.0);
    CHECK(a.goal.y() >= 0.0);
    CHECK(a.goal.y() <= 10.0);
  }

  // nobody spawns inside anybody else's personal disc
  for (std::size_t i = 0; i < full.others.size(); ++i) {
    CHECK((full.others[i].position - full.ego.position).norm() >= 0.6);
    for (std::size_t j = i + 1; j < full.others.size(); ++j) {
      CHECK((full.others[i].position - full.others[j].position).norm() >= 0.6);
    }
  }
}

TEST_CASE("spawn is a pure function of the seed") {
  const World a = spawn_scenario(base_config(0.5, 42, "sf"));
  const World b = spawn_scenario(base_config(0.5, 42, "sf"));
  REQUIRE(a.others.size() == b.others.size());
  for (std::size_t i = 0; i < a.others.size(); ++i) {
    CHECK(a.others[i].position == b.others[i].position);
    CHECK(a.others[i].goal == b.others[i].goal);
    CHECK(a.others[i].group_id == b.others[i].group_id);
  }

  // the planner choice must not touch the spawn
  const World c = spawn_scenario(base_config(0.5, 42, "pgp_dwa"));
  for (std::size_t i = 0; i < a.others.size(); ++i) {
    CHECK(a.others[i].position == c.others[i].position);
    CHECK(a.others[i].goal == c.others[i].goal);
  }

  const World d = spawn_scenario(base_config(0.5, 43, "sf"));
  bool any_differs = d.others.size() != a.others.size();
  for (std::size_t i = 0; !any_differs && i < a.others.size(); ++i) {
    any_differs = a.others[i].position != d.others[i].position;
  }
  CHECK(any_differs);
}

TEST_CASE("stepping an empty world only advances the clock") {
  const ScenarioConfig config = base_config(0.0, 1, "sf");
  World world = spawn_scenario(config);
  CHECK(world.others.empty());
  const Vec2 before = world.ego.position;
  step_world(world, config, VelocityCommand{});
  CHECK(world.time == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(world.tick == 1);
  CHECK(world.ego.position == before);
}

TEST_CASE("a lone crowd agent relaxes to its desired walking speed") {
  ScenarioConfig config = base_config(0.0, 1, "sf");
  World world = spawn_scenario(config);
  AgentState walker = make_agent(1, {1.0, 1.0}, {0.0, 0.0}, {9.0, 9.0});
  world.others.push_back(walker);
  world.groups.push_back({0});
  for (int i = 0; i < 30; ++i) step_world(world, config, VelocityCommand{});
  CHECK(world.others[0].speed() == doctest::Approx(config.desired_speed).epsilon(0.05));
  // and it heads for its goal
  const Vec2 dir = (world.others[0].goal - world.others[0].position).normalized();
  CHECK(world.others[0].velocity.normalized().dot(dir) > 0.95);
}

TEST_CASE("crowd speeds never exceed the desired speed") {
  const ScenarioConfig config = base_config(1.0, 5, "sf");
  World world = spawn_scenario(config);
  for (int i = 0; i < 50; ++i) {
    step_world(world, config, VelocityCommand{});
    for (const AgentState& a : world.others) {
      CHECK(a.speed() <= config.desired_speed + 1e-12);
      CHECK(a.position.x() >= 0.0);
      CHECK(a.position.x() <= 10.0);
      CHECK(a.position.y() >= 0.0);
      CHECK(a.position.y() <= 10.0);
    }
  }
}

TEST_CASE("whole groups pick a fresh goal together the tick anyone arrives") {
  ScenarioConfig config = base_config(0.0, 9, "sf");
  World world = spawn_scenario(config);
  AgentState leader = make_agent(1, {5.0, 5.0}, {0.0, 0.0}, {5.0, 5.0});
  AgentState trailer = make_agent(2, {6.5, 5.0}, {0.0, 0.0}, {6.5, 6.5});
  leader.group_id = trailer.group_id = 0;
  world.others = {leader, trailer};
  world.groups = {{0, 1}};

  const Vec2 old_leader_goal = world.others[0].goal;
  const Vec2 old_trailer_goal = world.others[1].goal;
  step_world(world, config, VelocityCommand{});
  // the leader sat on its goal, so both members were redirected on this tick
  CHECK(world.others[0].goal != old_leader_goal);
  CHECK(world.others[1].goal != old_trailer_goal);

  // fresh goals still live on the stage
  for (int i : {0, 1}) {
    CHECK(world.others[i].goal.x() >= 0.0);
    CHECK(world.others[i].goal.x() <= 10.0);
    CHECK(world.others[i].goal.y() >= 0.0);
    CHECK(world.others[i].goal.y() <= 10.0);
  }
}

TEST_CASE("an empty stage is crossed in roughly the direct time") {
  for (const char* planner : {"sf", "orca", "dwa"}) {
    const RunRecord rec = run_scenario(base_config(0.0, 2, planner));
    CHECK(rec.outcome == Outcome::kReached);
    // 10 m at 1 m/s with a 0.5 m arrival radius, minus spin-up
    CHECK(rec.time_to_target > 8.5);
    CHECK(rec.time_to_target < 13.0);
  }
}

TEST_CASE("runs are bit-identical for the same configuration") {
  const ScenarioConfig config = base_config(0.3, 11, "pgp_sf");
  const RunRecord a = run_scenario(config);
  const RunRecord b = run_scenario(config);
  REQUIRE(a.steps.size() == b.steps.size());
  CHECK(a.outcome == b.outcome);
  CHECK(a.time_to_target == b.time_to_target);
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    REQUIRE(a.steps[i].agents.size() == b.steps[i].agents.size());
    for (std::size_t k = 0; k < a.steps[i].agents.size(); ++k) {
      CHECK(a.steps[i].agents[k].position == b.steps[i].agents[k].position);
      CHECK(a.steps[i].agents[k].velocity == b.steps[i].agents[k].velocity);
    }
    CHECK(a.steps[i].moving == b.steps[i].moving);
    CHECK(a.steps[i].colliding == b.steps[i].colliding);
    CHECK(a.steps[i].violating == b.steps[i].violating);
    CHECK(a.steps[i].ego_social_force == b.steps[i].ego_social_force);
    CHECK(a.steps[i].subgoal == b.steps[i].subgoal);
  }
}

TEST_CASE("the long-horizon layer changes the ego, never the crowd's start") {
  const RunRecord plain = run_scenario(base_config(0.5, 17, "sf"));
  const RunRecord layered = run_scenario(base_config(0.5, 17, "pgp_sf"));
  REQUIRE(!plain.steps.empty());
  REQUIRE(!layered.steps.empty());
  const StepRecord& p0 = plain.steps[0];
  const StepRecord& l0 = layered.steps[0];
  REQUIRE(p0.agents.size() == l0.agents.size());
  for (std::size_t k = 0; k < p0.agents.size(); ++k) {
    CHECK(p0.agents[k].position == l0.agents[k].position);
  }
  CHECK_FALSE(p0.has_subgoal);
  CHECK_FALSE(l0.has_subgoal);
  // after the first planning tick the layered run carries a subgoal
  CHECK(layered.steps[1].has_subgoal);
  CHECK_FALSE(plain.steps[1].has_subgoal);
}

TEST_CASE("step records carry consistent flags and timing") {
  const RunRecord rec = run_scenario(base_config(0.5, 23, "sf"));
  REQUIRE(rec.steps.size() >= 2);
  CHECK(rec.steps[0].time == 0.0);
  CHECK(rec.steps.size() <= static_cast<std::size_t>(60.0 / 0.1) + 2);
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    const StepRecord& row = rec.steps[i];
    if (i > 0) {
      CHECK(row.time == doctest::Approx(rec.steps[i - 1].time + 0.1).epsilon(1e-9));
    }
    const AgentState& ego = row.agents[0];
    CHECK(row.moving == (ego.speed() > 0.1));
    bool colliding = false;
    bool violating = false;
    for (std::size_t k = 1; k < row.agents.size(); ++k) {
      const double d = (row.agents[k].position - ego.position).norm();
      if (d < 0.6) colliding = true;
      if (d < 1.0) violating = true;
    }
    CHECK(row.colliding == colliding);
    CHECK(row.violating == violating);
    // the recorded force is the summed pairwise repulsion on the ego
    std::vector<AgentState> others(row.agents.begin() + 1, row.agents.end());
    CHECK(row.ego_social_force ==
          doctest::Approx(social_force(ego, others, rec.config.sf).norm())
              .epsilon(1e-12));
  }
  if (rec.outcome == Outcome::kReached) {
    const StepRecord& last = rec.steps.back();
    CHECK((last.agents[0].position - rec.ego_goal).norm() <= 0.5 + 1e-9);
    CHECK(rec.time_to_target == doctest::Approx(last.time).epsilon(1e-12));
  } else {
    CHECK(rec.time_to_target == 60.0);
  }
}

TEST_CASE("the pedestrian baseline crosses a packed stage almost every time") {
  int reached = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const RunRecord rec = run_scenario(base_config(1.0, 1000 + s, "sf"));
    if (rec.outcome == Outcome::kReached) ++reached;
  }
  CHECK(reached >= 95);
}

TEST_CASE("scenario validation names the offending field") {
  ScenarioConfig config = base_config(0.5, 1, "sf");
  config.sim_dt = 0.0;
  CHECK_THROWS_WITH_AS(config.validate(), "sim_dt: must be positive", ContractViolation);
  config = base_config(-0.1, 1, "sf");
  CHECK_THROWS_WITH_AS(config.validate(), "density: must be non-negative",
                       ContractViolation);
  config = base_config(0.5, 1, "sf");
  config.pgp.fan_angles.clear();
  CHECK_THROWS_WITH_AS(config.validate(), "pgp.fan_angles: must not be empty",
                       ContractViolation);
}
