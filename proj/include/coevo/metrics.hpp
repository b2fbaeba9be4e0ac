#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "coevo/types.hpp"

// Quality indicator and run statistics: inverted generational distance,
// paired Wilcoxon signed-rank test and the avg/min/max/std summary used by
// the report tables.

namespace coevo {

/// Thrown when a statistical test has too few usable samples.
class insufficient_data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double min_squared_distance(const PayoffVector& v,
                                   std::span<const PayoffVector> points) {
  double best = std::numeric_limits<double>::infinity();
  for (const PayoffVector& p : points) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double d = v[k] - p[k];
      d2 += d * d;
    }
    best = std::min(best, d2);
  }
  return best;
}

// 2-objective nearest-point query via a sort on the first coordinate.
// Scanning stops once the first-coordinate gap alone exceeds the best
// squared distance, so the result equals the brute-force minimum.
inline double igd_two_dim(std::span<const PayoffVector> reference,
                          std::span<const PayoffVector> approximation) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(approximation.size());
  for (const PayoffVector& p : approximation) pts.emplace_back(p[0], p[1]);
  std::sort(pts.begin(), pts.end());

  double total = 0.0;
  for (const PayoffVector& v : reference) {
    const double x = v[0];
    const double y = v[1];
    auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, y));
    double best = std::numeric_limits<double>::infinity();
    for (auto r = it; r != pts.end(); ++r) {
      const double dx = r->first - x;
      if (dx * dx >= best) break;
      const double dy = r->second - y;
      best = std::min(best, dx * dx + dy * dy);
    }
    for (auto l = it; l != pts.begin();) {
      --l;
      const double dx = l->first - x;
      if (dx * dx >= best) break;
      const double dy = l->second - y;
      best = std::min(best, dx * dx + dy * dy);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(reference.size());
}

}  // namespace detail

/// Inverted generational distance: the mean over reference points of the
/// minimum Euclidean distance to the approximation set. Lower is better.
inline double igd(std::span<const PayoffVector> reference,
                  std::span<const PayoffVector> approximation) {
  if (reference.empty() || approximation.empty())
    throw std::invalid_argument("igd: empty point set");
  const std::size_t k = reference.front().size();
  for (const PayoffVector& p : reference)
    if (p.size() != k) throw std::invalid_argument("igd: mixed dimensions in reference set");
  for (const PayoffVector& p : approximation)
    if (p.size() != k)
      throw std::invalid_argument("igd: approximation dimension differs from reference");
  if (k == 2) return detail::igd_two_dim(reference, approximation);
  double total = 0.0;
  for (const PayoffVector& v : reference)
    total += std::sqrt(detail::min_squared_distance(v, approximation));
  return total / static_cast<double>(reference.size());
}

struct WilcoxonResult {
  double statistic = 0.0;  // min of the positive/negative rank sums
  double z = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;  // pairs remaining after discarding zero differences
};

/// Paired two-sided Wilcoxon signed-rank test with average ranks for tied
/// absolute differences and a tie-corrected normal approximation of the
/// p-value. Zero differences are discarded; fewer than 6 usable pairs raise
/// insufficient_data_error.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                           std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("wilcoxon_signed_rank: sample length mismatch");
  std::vector<double> diff;
  diff.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diff.push_back(d);
  }
  const std::size_t n = diff.size();
  if (n < 6)
    throw insufficient_data_error(
        "wilcoxon_signed_rank: fewer than 6 non-zero paired differences");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::fabs(diff[i]) < std::fabs(diff[j]);
  });

  std::vector<double> rank(n, 0.0);
  double tie_correction = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(diff[order[j + 1]]) == std::fabs(diff[order[i]])) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg_rank;
    const double ties = static_cast<double>(j - i + 1);
    tie_correction += ties * ties * ties - ties;
    i = j + 1;
  }

  double w_plus = 0.0;
  double w_minus = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    (diff[i] > 0.0 ? w_plus : w_minus) += rank[i];

  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  const double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_correction / 48.0;
  const double w = std::min(w_plus, w_minus);
  const double z = (w - mean) / std::sqrt(variance);
  const double p = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
  return {w, z, p, n};
}

/// Summary of a 20-run style sample: average, minimum, maximum and sample
/// standard deviation (divisor n - 1, zero for a single value).
struct RunStatistics {
  double avg = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;
};

inline RunStatistics summarize_runs(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("summarize_runs: empty sample");
  RunStatistics stats;
  stats.min = values.front();
  stats.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
  }
  stats.avg = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - stats.avg;
      ss += d * d;
    }
    stats.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return stats;
}

}  // namespace coevo
