#include "pgp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pgp {
namespace {

bool row_violates(const StepRecord& row, double threshold) {
  const AgentState& ego = row.agents[0];
  for (std::size_t i = 1; i < row.agents.size(); ++i) {
    if ((row.agents[i].position - ego.position).norm() < threshold) return true;
  }
  return false;
}

bool row_moving(const StepRecord& row, const RunRecord& record) {
  return row.agents[0].speed() > record.config.moving_speed_threshold;
}

// Fraction of moving rows on which `violated` holds; 0 when nothing moves.
template <typename Pred>
double moving_rate(const RunRecord& record, Pred violated) {
  long moving = 0;
  long hits = 0;
  for (const StepRecord& row : record.steps) {
    if (!row_moving(row, record)) continue;
    ++moving;
    if (violated(row)) ++hits;
  }
  return moving > 0 ? static_cast<double>(hits) / static_cast<double>(moving) : 0.0;
}

}  // namespace

SuccessMetrics success_metrics(const RunRecord& record) {
  require(!record.steps.empty(), "success_metrics: empty trace");
  SuccessMetrics out;

  out.time_to_target = record.config.timeout;
  for (const StepRecord& row : record.steps) {
    if ((row.agents[0].position - record.ego_goal).norm() <=
        record.config.arrival_radius) {
      out.time_to_target = row.time;
      break;
    }
  }

  for (std::size_t i = 1; i < record.steps.size(); ++i) {
    out.path_length += (record.steps[i].agents[0].position -
                        record.steps[i - 1].agents[0].position)
                           .norm();
  }

  out.collision_rate_moving = moving_rate(record, [&](const StepRecord& row) {
    const AgentState& ego = row.agents[0];
    for (std::size_t i = 1; i < row.agents.size(); ++i) {
      if ((row.agents[i].position - ego.position).norm() <
          ego.radius + row.agents[i].radius) {
        return true;
      }
    }
    return false;
  });
  return out;
}

double svr(const RunRecord& record, double threshold) {
  require(!record.steps.empty(), "svr: empty trace");
  return moving_rate(record,
                     [&](const StepRecord& row) { return row_violates(row, threshold); });
}

double avg_social_force(const RunRecord& record) {
  require(!record.steps.empty(), "avg_social_force: empty trace");
  double sum = 0.0;
  for (const StepRecord& row : record.steps) sum += row.ego_social_force;
  return sum / static_cast<double>(record.steps.size());
}

MetricsRecord compute_metrics(const RunRecord& record) {
  const SuccessMetrics s = success_metrics(record);
  MetricsRecord m;
  m.time_to_target = s.time_to_target;
  m.path_length = s.path_length;
  m.collision_rate_moving = s.collision_rate_moving;
  m.svr_moving = svr(record, record.config.svr_threshold);
  m.avg_social_force = avg_social_force(record);
  m.outcome = record.outcome;
  return m;
}

double wilcoxon_paired(std::span<const double> sample_a,
                       std::span<const double> sample_b) {
  require(sample_a.size() == sample_b.size(),
          "wilcoxon_paired: samples must have equal length");
  require(sample_a.size() >= 5, "wilcoxon_paired: need at least 5 pairs");

  std::vector<double> abs_diffs;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < sample_a.size(); ++i) {
    const double d = sample_a[i] - sample_b[i];
    if (d == 0.0) continue;
    abs_diffs.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  const int n = static_cast<int>(abs_diffs.size());
  if (n == 0) return 1.0;

  // Midranks over |d|, doubled so ties stay integral.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return abs_diffs[a] < abs_diffs[b]; });
  std::vector<long> rank2(n);
  std::vector<long> tie_sizes;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && abs_diffs[order[j]] == abs_diffs[order[i]]) ++j;
    const long r2 = (i + 1) + j;  // 2 * average of ranks i+1 .. j
    for (int k = i; k < j; ++k) rank2[order[k]] = r2;
    tie_sizes.push_back(j - i);
    i = j;
  }

  long w2_plus = 0;
  long total2 = 0;
  for (int i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (positive[i]) w2_plus += rank2[i];
  }
  const long w2_minus = total2 - w2_plus;
  const long t2 = std::min(w2_plus, w2_minus);

  if (n <= 25) {
    // Exact null distribution of the doubled rank sum over all 2^n sign
    // assignments.
    std::vector<double> ways(total2 + 1, 0.0);
    ways[0] = 1.0;
    for (int i = 0; i < n; ++i) {
      for (long s = total2 - rank2[i]; s >= 0; --s) {
        if (ways[s] > 0.0) ways[s + rank2[i]] += ways[s];
      }
    }
    const double denom = std::ldexp(1.0, n);  // 2^n
    double low = 0.0;
    for (long s = 0; s <= t2; ++s) low += ways[s];
    double p = 2.0 * low / denom;
    if (2 * t2 == total2) p -= ways[t2] / denom;  // both tails share the center
    return std::min(1.0, p);
  }

  const double nn = n;
  const double mean = nn * (nn + 1.0) / 4.0;
  double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  for (long t : tie_sizes) {
    variance -= static_cast<double>(t * t * t - t) / 48.0;
  }
  if (variance <= 0.0) return 1.0;  // unreachable for n >= 1, keeps sqrt safe
  const double w_plus = w2_plus / 2.0;
  const double z = (w_plus - mean) / std::sqrt(variance);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace pgp
