#include "pgp/risk_model.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace pgp {
namespace {

std::atomic<std::uint64_t> g_clamp_events{0};

double clamp_probability(double p) {
  if (p < 0.0) {
    g_clamp_events.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  if (p > 1.0) {
    g_clamp_events.fetch_add(1, std::memory_order_relaxed);
    return 1.0;
  }
  return p;
}

void check_step(const GaussianPrediction& ego, const GaussianPrediction& other,
                int step) {
  require(ego.steps() == other.steps(),
          "risk_model: predictions have mismatched horizon lengths");
  require(step >= 0 && step < ego.steps(), "risk_model: step out of range");
}

}  // namespace

void GaussianPrediction::validate() const {
  require(!positions.empty(), "GaussianPrediction: horizon must be >= 1");
  require(positions.size() == sigmas.size(),
          "GaussianPrediction: positions and sigmas differ in length");
  require(sigmas.front() == sigma0, "GaussianPrediction: sigmas[0] != sigma0");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    require(sigmas[i] > 0.0, "GaussianPrediction: sigma must be positive");
    if (i > 0)
      require(sigmas[i] >= sigmas[i - 1],
              "GaussianPrediction: sigmas must be non-decreasing");
  }
}

double StaticObstacle::min_distance(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) d = std::min(d, point_segment_distance(p, s));
  return d;
}

double pairwise_collision_prob(const GaussianPrediction& ego,
                               const GaussianPrediction& other, int step) {
  check_step(ego, other, step);
  const double var_i = ego.sigmas[step] * ego.sigmas[step] +
                       other.sigmas[step] * other.sigmas[step];
  const double var_0 = ego.sigma0 * ego.sigma0 + other.sigma0 * other.sigma0;
  const double dist_sq = (ego.positions[step] - other.positions[step]).squaredNorm();
  return clamp_probability(std::exp(-dist_sq / (2.0 * var_i)) * (var_0 / var_i));
}

double cooperative_factor(const GaussianPrediction& ego,
                          const GaussianPrediction& other, int step) {
  check_step(ego, other, step);
  return (ego.sigma0 / ego.sigmas[step]) * (other.sigma0 / other.sigmas[step]);
}

double cooperative_collision_prob(const GaussianPrediction& ego,
                                  const GaussianPrediction& other, int step) {
  return clamp_probability(pairwise_collision_prob(ego, other, step) *
                           cooperative_factor(ego, other, step));
}

double static_collision_prob(const Vec2& ego_position, double ego_sigma,
                             const StaticObstacle& obstacles) {
  require(ego_sigma > 0.0, "static_collision_prob: sigma must be positive");
  if (obstacles.empty()) return 0.0;
  const double d = obstacles.min_distance(ego_position);
  return clamp_probability(1.0 - erf_series(d / (ego_sigma * std::sqrt(2.0))));
}

SurvivalProfile survival_analysis(const Eigen::MatrixXd& coop_probs,
                                  const Eigen::VectorXd& static_probs,
                                  const RiskParams& params) {
  const int steps = static_cast<int>(coop_probs.rows());
  require(static_probs.size() == steps,
          "survival_analysis: matrix and vector horizon lengths differ");
  require(params.p_escape >= 0.0 && params.p_escape < 1.0,
          "survival_analysis: p_escape must lie in [0, 1)");
  require(coop_probs.size() == 0 || coop_probs.minCoeff() >= 0.0,
          "survival_analysis: negative collision probability");
  require(steps == 0 || static_probs.minCoeff() >= 0.0,
          "survival_analysis: negative static probability");

  SurvivalProfile profile;
  profile.p_surv.resize(steps);
  profile.per_step_rates.resize(steps);
  double surv = 1.0;
  for (int i = 0; i < steps; ++i) {
    profile.p_surv[i] = surv;
    const double rate = coop_probs.row(i).sum() + static_probs[i] + params.p_escape;
    profile.per_step_rates[i] = rate;
    surv *= std::exp(-rate);
  }
  return profile;
}

double erf_series(double z) {
  const double sign = z < 0.0 ? -1.0 : 1.0;
  const double x = std::abs(z);
  if (x >= 4.0) return sign;  // 1 - erf(4) < 1.6e-8
  // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
  const double x_sq = x * x;
  double power = x;  // (-1)^n x^(2n+1) / n!
  double sum = x;
  for (int n = 1; n < 120; ++n) {
    power *= -x_sq / n;
    const double term = power / (2 * n + 1);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sign * sum * 2.0 / std::sqrt(M_PI);
}

std::uint64_t clamp_event_count() {
  return g_clamp_events.load(std::memory_order_relaxed);
}

void reset_clamp_event_count() { g_clamp_events.store(0, std::memory_order_relaxed); }

}  // namespace pgp
