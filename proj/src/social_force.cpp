#include "pgp/social_force.hpp"

#include <cmath>

namespace pgp {
namespace {

constexpr double kTiny = 1e-9;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Vec2 left_normal(const Vec2& v) { return Vec2(-v.y(), v.x()); }

}  // namespace

Vec2 interaction_force(const AgentState& ego, const AgentState& other,
                       const SfParams& params) {
  const Vec2 diff = other.position - ego.position;
  const double dist = diff.norm();
  if (dist < kTiny) return Vec2::Zero();
  const Vec2 e = diff / dist;

  // Interaction direction blends where the other is with how fast we close in.
  const Vec2 d_vec = params.lambda * (ego.velocity - other.velocity) + e;
  const double d_len = d_vec.norm();
  if (d_len < kTiny) return Vec2::Zero();
  const Vec2 t = d_vec / d_len;
  const double b = params.gamma * d_len;

  const double theta = wrap_angle(std::atan2(t.y(), t.x()) - std::atan2(e.y(), e.x()));
  const double braking = -std::exp(-dist / b - square(params.n_prime * b * theta));
  const double turning =
      -sign(theta) * std::exp(-dist / b - square(params.n * b * theta));
  return params.strength * (braking * t + turning * left_normal(t));
}

Vec2 social_force(const AgentState& ego, std::span<const AgentState> others,
                  const SfParams& params) {
  Vec2 total = Vec2::Zero();
  for (const AgentState& other : others) {
    if (other.id == ego.id) continue;
    total += interaction_force(ego, other, params);
  }
  return total;
}

Vec2 goal_force(const AgentState& agent, const Vec2& goal, const SfParams& params) {
  const Vec2 to_goal = goal - agent.position;
  const double dist = to_goal.norm();
  if (dist < params.goal_threshold) {
    return -agent.velocity / params.relaxation_time;
  }
  return (params.v_max * (to_goal / dist) - agent.velocity) / params.relaxation_time;
}

void add_group_forces(std::span<const AgentState> agents, std::span<const int> members,
                      const GroupForceParams& params, std::span<Vec2> forces) {
  const int size = static_cast<int>(members.size());
  if (size <= 1) return;

  Vec2 com = Vec2::Zero();
  for (int idx : members) com += agents[idx].position;
  com /= static_cast<double>(size);

  const double coherence_threshold = (size - 1) / 2.0;
  for (int idx : members) {
    const Vec2 to_com = com - agents[idx].position;
    const double soft = (std::tanh(to_com.norm() - coherence_threshold) + 1.0) / 2.0;
    forces[idx] += params.coherence_factor * soft * to_com;
  }

  for (int a = 0; a < size; ++a) {
    Vec2 repulsion = Vec2::Zero();
    for (int b = 0; b < size; ++b) {
      if (a == b) continue;
      const Vec2 diff = agents[members[a]].position - agents[members[b]].position;
      if (diff.norm() <= params.repulsion_threshold) repulsion += diff;
    }
    forces[members[a]] += params.repulsion_factor * repulsion;
  }

  // Gaze: pull the walking direction toward the rest of the group.
  for (int a = 0; a < size; ++a) {
    const AgentState& agent = agents[members[a]];
    const Vec2 to_goal = agent.goal - agent.position;
    const double goal_dist = to_goal.norm();
    if (goal_dist < kTiny) continue;
    const Vec2 desired_dir = to_goal / goal_dist;
    Vec2 rest_com = Vec2::Zero();
    for (int b = 0; b < size; ++b) {
      if (b != a) rest_com += agents[members[b]].position;
    }
    rest_com /= static_cast<double>(size - 1);
    const Vec2 rel = rest_com - agent.position;
    const double rel_dist = rel.norm();
    if (rel_dist < kTiny) continue;
    const double alignment = desired_dir.dot(rel / rel_dist);
    forces[members[a]] +=
        params.gaze_factor * (rel_dist * alignment / goal_dist) * desired_dir;
  }
}

}  // namespace pgp
