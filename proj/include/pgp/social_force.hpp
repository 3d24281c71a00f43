#pragma once

#include <span>
#include <vector>

#include "pgp/core.hpp"
#include "pgp/prediction.hpp"

namespace pgp {

/// Pedestrian interaction model parameters (angular-interaction variant with
/// velocity-dependent direction). Shared by the crowd simulator, the
/// social-forces ego controller and the exposure metric.
struct SfParams {
  double v_max = 1.0;
  double strength = 5.1;         // A, scales the pairwise interaction force
  double lambda = 3.0;           // weight of relative velocity in the interaction direction
  double gamma = 0.35;           // range scaling
  double n = 1.0;                // angular falloff of the turning term
  double n_prime = 3.0;          // angular falloff of the braking term
  double relaxation_time = 0.25;  // seconds, goal attraction; 0.5 starves goal tracking in packed stages
  double goal_threshold = 0.1;   // meters; inside it the goal force only brakes
};

/// Group shaping forces for crowd agents walking together.
struct GroupForceParams {
  double coherence_factor = 3.0;
  double repulsion_factor = 1.0;
  double repulsion_threshold = 0.5;  // meters between members
  double gaze_factor = 4.0;
};

/// Repulsive force exerted on `ego` by one other agent. Includes the strength
/// factor. Zero for coincident positions.
Vec2 interaction_force(const AgentState& ego, const AgentState& other,
                       const SfParams& params);

/// Sum of pairwise interaction forces on `ego` from every agent in `others`
/// with a different id.
Vec2 social_force(const AgentState& ego, std::span<const AgentState> others,
                  const SfParams& params);

/// Relaxation toward walking at v_max straight to the goal; inside
/// goal_threshold it decays the current velocity instead.
Vec2 goal_force(const AgentState& agent, const Vec2& goal, const SfParams& params);

/// Adds coherence, intra-group repulsion and gaze forces for one group.
/// `members` holds indices into `agents`; `forces` must have one slot per
/// agent and is accumulated into.
void add_group_forces(std::span<const AgentState> agents, std::span<const int> members,
                      const GroupForceParams& params, std::span<Vec2> forces);

}  // namespace pgp
