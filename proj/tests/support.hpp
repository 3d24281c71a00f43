#pragma once

// Shared helpers for the test binaries: state builders, an independent
// sign-flip enumeration oracle for the paired Wilcoxon test, and a brute
// 2D quadrature for the pairwise collision integral.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pgp/prediction.hpp"
#include "pgp/risk_model.hpp"

namespace pgp::test {

inline AgentState make_agent(int id, Vec2 position, Vec2 velocity, Vec2 goal) {
  AgentState a;
  a.id = id;
  a.position = position;
  a.velocity = velocity;
  a.heading = velocity.norm() > 0.0 ? std::atan2(velocity.y(), velocity.x()) : 0.0;
  a.goal = goal;
  return a;
}

inline GaussianPrediction make_prediction(std::vector<Vec2> positions,
                                          std::vector<double> sigmas,
                                          double sigma0, double dt, int id) {
  GaussianPrediction p;
  p.positions = std::move(positions);
  p.sigmas = std::move(sigmas);
  p.sigma0 = sigma0;
  p.dt = dt;
  p.agent_id = id;
  return p;
}

// A prediction standing still at `pos` with constant sigma, `steps` long.
inline GaussianPrediction still_prediction(Vec2 pos, double sigma, int steps,
                                           int id, double sigma0 = -1.0) {
  return make_prediction(std::vector<Vec2>(steps, pos),
                         std::vector<double>(steps, sigma),
                         sigma0 < 0.0 ? sigma : sigma0, 0.25, id);
}

// Paired Wilcoxon p-value by brute enumeration of all 2^n sign assignments.
// Ranks are doubled midranks recomputed here by direct counting, so the only
// thing shared with the library is the two-sided convention itself.
inline double wilcoxon_enumeration(std::span<const double> a,
                                   std::span<const double> b) {
  std::vector<double> abs_diffs;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    abs_diffs.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  const int n = static_cast<int>(abs_diffs.size());
  if (n == 0) return 1.0;

  std::vector<long> rank2(n, 0);
  for (int i = 0; i < n; ++i) {
    long less = 0;
    long equal = 0;
    for (int j = 0; j < n; ++j) {
      if (abs_diffs[j] < abs_diffs[i]) ++less;
      if (abs_diffs[j] == abs_diffs[i]) ++equal;
    }
    rank2[i] = 2 * less + equal + 1;  // twice the midrank
  }

  long total2 = 0;
  long observed2 = 0;
  for (int i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (positive[i]) observed2 += rank2[i];
  }
  const long t2 = std::min(observed2, total2 - observed2);

  long count_low = 0;
  long count_center = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    long w2 = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ull << i)) w2 += rank2[i];
    }
    if (w2 <= t2) ++count_low;
    if (w2 == t2) ++count_center;
  }
  const double denom = std::ldexp(1.0, n);
  double p = 2.0 * static_cast<double>(count_low) / denom;
  if (2 * t2 == total2) p -= static_cast<double>(count_center) / denom;
  return std::min(1.0, p);
}

// Midpoint quadrature of the product of two isotropic Gaussians over a box
// around both means. Normalizing by the analytic zero-distance value with
// initial sigmas reproduces the pairwise collision probability.
inline double gaussian_overlap_quadrature(const Vec2& mean_a, double sigma_a,
                                          const Vec2& mean_b, double sigma_b,
                                          double half_width, double h) {
  const Vec2 center = 0.5 * (mean_a + mean_b);
  const int n = static_cast<int>(std::ceil(2.0 * half_width / h));
  double sum = 0.0;
  const double inv2a = 1.0 / (2.0 * sigma_a * sigma_a);
  const double inv2b = 1.0 / (2.0 * sigma_b * sigma_b);
  for (int ix = 0; ix < n; ++ix) {
    const double x = center.x() - half_width + (ix + 0.5) * h;
    for (int iy = 0; iy < n; ++iy) {
      const double y = center.y() - half_width + (iy + 0.5) * h;
      const double da = square(x - mean_a.x()) + square(y - mean_a.y());
      const double db = square(x - mean_b.x()) + square(y - mean_b.y());
      sum += std::exp(-da * inv2a - db * inv2b);
    }
  }
  const double norm_a = 1.0 / (2.0 * M_PI * sigma_a * sigma_a);
  const double norm_b = 1.0 / (2.0 * M_PI * sigma_b * sigma_b);
  return sum * h * h * norm_a * norm_b;
}

}  // namespace pgp::test
