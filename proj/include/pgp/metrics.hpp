#pragma once

#include <span>

#include "pgp/crowd_sim.hpp"

namespace pgp {

struct SuccessMetrics {
  double time_to_target = 0.0;        // seconds; timeout value for failed runs
  double path_length = 0.0;           // meters
  double collision_rate_moving = 0.0; // fraction of moving ticks
};

struct MetricsRecord {
  double time_to_target = 0.0;
  double path_length = 0.0;
  double collision_rate_moving = 0.0;
  double svr_moving = 0.0;
  double avg_social_force = 0.0;
  Outcome outcome = Outcome::kTimeout;
};

/// Arrival time (first tick within the arrival radius, else timeout), ego path
/// length, and the fraction of moving ticks with another agent inside the
/// combined body radii. Rates over zero moving ticks are 0.
SuccessMetrics success_metrics(const RunRecord& record);

/// Fraction of moving ticks with any other agent strictly closer than
/// `threshold` (center to center).
double svr(const RunRecord& record, double threshold = 1.0);

/// Mean over all ticks of the recorded pairwise-repulsion magnitude on the
/// ego.
double avg_social_force(const RunRecord& record);

MetricsRecord compute_metrics(const RunRecord& record);

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences are dropped, ties get midranks; exact tail enumeration up to 25
/// effective pairs, normal approximation with tie correction beyond. All
/// differences zero gives p = 1.
double wilcoxon_paired(std::span<const double> sample_a, std::span<const double> sample_b);

}  // namespace pgp
