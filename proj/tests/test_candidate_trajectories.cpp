#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "pgp/candidate_trajectories.hpp"
#include "support.hpp"

using namespace pgp;
using pgp::test::make_agent;

namespace {

AgentState ego_at(Vec2 pos, double heading = 0.0) {
  AgentState a = make_agent(0, pos, {0.0, 0.0}, {0.0, 0.0});
  a.heading = heading;
  return a;
}

double polyline_arc(const CandidateTrajectory& t, double dt) {
  double arc = 0.0;
  for (double v : t.speeds) arc += v * dt;
  return arc;
}

}  // namespace

TEST_CASE("planner goal projects onto the goal ray, clamped to the horizon") {
  PgpConfig config;  // horizon 8 s at 1 m/s
  const AgentState ego = ego_at({0.0, 0.0});
  CHECK(pgp_goal(ego, {100.0, 0.0}, config) == Vec2(8.0, 0.0));
  CHECK(pgp_goal(ego, {3.0, 0.0}, config) == Vec2(3.0, 0.0));
  CHECK(pgp_goal(ego, {0.0, 8.0}, config) == Vec2(0.0, 8.0));
  const Vec2 diag = pgp_goal(ego, {30.0, 40.0}, config);
  CHECK(diag.x() == doctest::Approx(4.8).epsilon(1e-12));
  CHECK(diag.y() == doctest::Approx(6.4).epsilon(1e-12));
  CHECK_THROWS_AS((void)pgp_goal(ego, {0.0, 0.0}, config), ContractViolation);
}

TEST_CASE("default fan produces 21 distinct paths with the straight one once") {
  PgpConfig config;
  const auto paths = build_paths({0.0, 0.0}, {8.0, 0.0}, config);
  CHECK(paths.size() == 21);

  int straight = 0;
  for (const FanPath& p : paths) {
    if (p.fan_angle == 0.0) {
      ++straight;
      REQUIRE(p.polyline.size() == 2);
      CHECK(p.polyline[0] == Vec2(0.0, 0.0));
      CHECK(p.polyline[1] == Vec2(8.0, 0.0));
    } else {
      CHECK(p.polyline.size() >= 3);
      CHECK(p.polyline.front() == Vec2(0.0, 0.0));
      CHECK(p.polyline.back() == Vec2(8.0, 0.0));
    }
  }
  CHECK(straight == 1);
}

TEST_CASE("first fan vertex sits d_turned away at the fan angle") {
  PgpConfig config;
  const auto paths = build_paths({0.0, 0.0}, {8.0, 0.0}, config);
  const double want = deg2rad(80.0);
  bool found = false;
  for (const FanPath& p : paths) {
    if (p.fan_angle != want) continue;
    found = true;
    CHECK(p.polyline[1].x() == doctest::Approx(0.43412044416732604).epsilon(1e-12));
    CHECK(p.polyline[1].y() == doctest::Approx(2.46201938253052).epsilon(1e-12));
    CHECK(p.polyline[1].norm() == doctest::Approx(config.d_turned).epsilon(1e-12));
  }
  CHECK(found);
}

TEST_CASE("straight candidate walks the full horizon at v_max") {
  PgpConfig config;
  const auto cands = build_candidates(ego_at({0.0, 0.0}), {100.0, 0.0}, config);
  REQUIRE(cands.size() == 21);
  for (const auto& c : cands) {
    CHECK(c.positions.size() == 32);
    CHECK(c.speeds.size() == 32);
    CHECK(c.headings.size() == 32);
    CHECK(c.heading_dirs.size() == 32);
    CHECK(c.goal_point == Vec2(8.0, 0.0));
  }

  const auto straight = std::find_if(cands.begin(), cands.end(),
                                     [](const auto& c) { return c.fan_angle == 0.0; });
  REQUIRE(straight != cands.end());
  for (int i = 0; i < 32; ++i) {
    CHECK(straight->positions[i].x() == doctest::Approx(0.25 * i).epsilon(1e-12));
    CHECK(straight->positions[i].y() == 0.0);
    CHECK(straight->speeds[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(straight->heading_dirs[i] == Vec2(1.0, 0.0));
  }
  CHECK(polyline_arc(*straight, config.dt()) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("sharp turn-in halves the speed for the turn duration") {
  PgpConfig config;
  config.fan_angles = {deg2rad(60.0)};
  config.outside_fractions = {0.0};
  const auto cands = build_candidates(ego_at({0.0, 0.0}, 0.0), {100.0, 0.0}, config);
  REQUIRE(cands.size() == 1);
  // 60 degrees at 1 rad/s in quarter-second steps: ceil(1.047 / 0.25) = 5
  for (int i = 0; i < 5; ++i) CHECK(cands[0].speeds[i] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cands[0].speeds[5] == doctest::Approx(1.0).epsilon(1e-12));

  // 32 degrees: ceil(0.5585 / 0.25) = 3 slow steps
  config.fan_angles = {deg2rad(32.0)};
  const auto sharp = build_candidates(ego_at({0.0, 0.0}, 0.0), {100.0, 0.0}, config);
  CHECK(sharp[0].speeds[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sharp[0].speeds[3] == doctest::Approx(1.0).epsilon(1e-12));

  // 16 degrees is under the 30 degree threshold: no slowdown
  config.fan_angles = {deg2rad(16.0)};
  const auto mild = build_candidates(ego_at({0.0, 0.0}, 0.0), {100.0, 0.0}, config);
  CHECK(mild[0].speeds[0] == doctest::Approx(1.0).epsilon(1e-12));

  // the slowdown keys on the ego heading, not the path shape
  config.fan_angles = {0.0};
  const auto behind = build_candidates(ego_at({0.0, 0.0}, M_PI), {100.0, 0.0}, config);
  CHECK(behind[0].speeds[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("candidate set is exactly mirror symmetric about the goal line") {
  PgpConfig config;
  const auto cands = build_candidates(ego_at({0.0, 0.0}), {100.0, 0.0}, config);

  std::map<double, std::vector<const CandidateTrajectory*>> by_angle;
  for (const auto& c : cands) by_angle[c.fan_angle].push_back(&c);

  for (const auto& [angle, list] : by_angle) {
    if (angle <= 0.0) continue;
    REQUIRE(by_angle.count(-angle) == 1);
    const auto& mirror = by_angle.at(-angle);
    REQUIRE(mirror.size() == list.size());
    for (std::size_t v = 0; v < list.size(); ++v) {
      for (int i = 0; i < 32; ++i) {
        // bitwise: x equal, y negated
        CHECK(list[v]->positions[i].x() == mirror[v]->positions[i].x());
        CHECK(list[v]->positions[i].y() == -mirror[v]->positions[i].y());
        CHECK(list[v]->speeds[i] == mirror[v]->speeds[i]);
        CHECK(list[v]->heading_dirs[i].x() == mirror[v]->heading_dirs[i].x());
        CHECK(list[v]->heading_dirs[i].y() == -mirror[v]->heading_dirs[i].y());
      }
    }
  }
}

TEST_CASE("every candidate respects speed bounds and arc budget") {
  PgpConfig config;
  const std::vector<Vec2> goals{{100.0, 0.0}, {4.0, 3.0}, {-2.0, 7.0}};
  for (const Vec2& goal : goals) {
    const auto cands = build_candidates(ego_at({1.0, 1.0}, 0.7), goal, config);
    CHECK(cands.size() == 21);
    for (const auto& c : cands) {
      double arc = 0.0;
      for (int i = 0; i < 32; ++i) {
        CHECK(c.speeds[i] >= 0.0);
        CHECK(c.speeds[i] <= config.v_max + 1e-12);
        arc += c.speeds[i] * config.dt();
        CHECK(c.heading_dirs[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
        // chord never exceeds the distance walked along the path
        if (i + 1 < 32) {
          const double chord = (c.positions[i + 1] - c.positions[i]).norm();
          CHECK(chord <= c.speeds[i] * config.dt() + 1e-9);
        }
      }
      CHECK(arc <= config.horizon_T * config.v_max + 1e-9);
      CHECK(c.positions[0] == Vec2(1.0, 1.0));
    }
  }
}

TEST_CASE("short goals hold the endpoint with zero speed") {
  PgpConfig config;
  const auto cands = build_candidates(ego_at({0.0, 0.0}), {3.0, 0.0}, config);
  const auto straight = std::find_if(cands.begin(), cands.end(),
                                     [](const auto& c) { return c.fan_angle == 0.0; });
  REQUIRE(straight != cands.end());
  // 3 m at 1 m/s and 4 Hz: moving through step 11, then parked at the goal
  for (int i = 0; i < 12; ++i) CHECK(straight->speeds[i] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 12; i < 32; ++i) {
    CHECK(straight->speeds[i] == 0.0);
    CHECK(straight->positions[i] == Vec2(3.0, 0.0));
  }
  // held steps keep the last motion direction
  CHECK(straight->heading_dirs[31] == Vec2(1.0, 0.0));
}
