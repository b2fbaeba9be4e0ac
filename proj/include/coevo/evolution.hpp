#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "coevo/domination.hpp"
#include "coevo/types.hpp"

// Real-coded variation operators and the rank/crowding environmental
// selection applied within each subpopulation.

namespace coevo {

/// Distribution indices and application probabilities of the variation
/// operators. When the per-variable mutation probability is unset it
/// defaults to 1/N for strategies of length N.
struct VariationParams {
  double eta_crossover = 20.0;
  double eta_mutation = 20.0;
  double p_crossover = 0.9;
  std::optional<double> p_mutation_per_variable;

  double mutation_probability(std::size_t n_variables) const {
    return p_mutation_per_variable ? *p_mutation_per_variable
                                   : 1.0 / static_cast<double>(n_variables);
  }

  void validate() const {
    if (!(eta_crossover > 0.0) || !(eta_mutation > 0.0))
      throw std::invalid_argument("variation: distribution indices must be > 0");
    if (p_crossover < 0.0 || p_crossover > 1.0)
      throw std::invalid_argument("variation: p_crossover must be in [0, 1]");
    if (p_mutation_per_variable &&
        (*p_mutation_per_variable < 0.0 || *p_mutation_per_variable > 1.0))
      throw std::invalid_argument("variation: p_mutation_per_variable must be in [0, 1]");
  }
};

namespace detail {

/// SBX spread factor for a uniform draw u.
inline double sbx_spread(double u, double eta) {
  return u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                  : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
}

/// Child values of one variable before bound repair, written as midpoint
/// plus spread so their mean equals the parents' mean and identical
/// parents reproduce exactly.
inline std::pair<double, double> sbx_blend(double x1, double x2, double beta) {
  const double mid = 0.5 * (x1 + x2);
  const double spread = 0.5 * beta * (x1 - x2);
  return {mid + spread, mid - spread};
}

/// Bounded polynomial perturbation of one variable for a uniform draw u.
inline double pm_perturbed(double x, double lo, double hi, double u, double eta) {
  const double range = hi - lo;
  const double mut_pow = 1.0 / (eta + 1.0);
  double dq;
  if (u <= 0.5) {
    const double xy = 1.0 - (x - lo) / range;
    const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
    dq = std::pow(val, mut_pow) - 1.0;
  } else {
    const double xy = 1.0 - (hi - x) / range;
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
    dq = 1.0 - std::pow(val, mut_pow);
  }
  return x + dq * range;
}

inline void require_within_bounds(const Strategy& s, const StrategyBounds& bounds,
                                  const char* who) {
  if (!bounds.contains(s.values))
    throw std::invalid_argument(std::string(who) + ": strategy outside bounds");
}

}  // namespace detail

/// Simulated binary crossover. Each variable recombines with probability
/// 0.5 using the spread factor drawn from the eta_crossover distribution,
/// with the usual random child swap; with probability 1 - p_crossover the
/// parents pass through as value copies. Children are clipped to bounds and
/// get fresh ids.
inline std::pair<Strategy, Strategy> sbx_crossover(const Strategy& p1, const Strategy& p2,
                                                   const VariationParams& params,
                                                   const StrategyBounds& bounds, Rng& rng,
                                                   IdSource& ids) {
  if (p1.values.size() != p2.values.size())
    throw std::invalid_argument("sbx_crossover: parent length mismatch");
  detail::require_within_bounds(p1, bounds, "sbx_crossover");
  detail::require_within_bounds(p2, bounds, "sbx_crossover");

  Strategy c1{ids.next(), p1.values};
  Strategy c2{ids.next(), p2.values};
  if (rng.bernoulli(params.p_crossover)) {
    for (std::size_t i = 0; i < c1.values.size(); ++i) {
      if (!rng.bernoulli(0.5)) continue;
      const double beta = detail::sbx_spread(rng.uniform(), params.eta_crossover);
      auto [a, b] = detail::sbx_blend(p1.values[i], p2.values[i], beta);
      if (rng.bernoulli(0.5)) std::swap(a, b);
      c1.values[i] = a;
      c2.values[i] = b;
    }
    bounds.clip(c1.values);
    bounds.clip(c2.values);
  }
  return {std::move(c1), std::move(c2)};
}

/// Polynomial mutation. Each variable is perturbed independently with the
/// configured probability; the result stays within bounds and carries a
/// fresh id.
inline Strategy polynomial_mutation(const Strategy& s, const VariationParams& params,
                                    const StrategyBounds& bounds, Rng& rng, IdSource& ids) {
  detail::require_within_bounds(s, bounds, "polynomial_mutation");
  Strategy out{ids.next(), s.values};
  const double pm = params.mutation_probability(s.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!rng.bernoulli(pm)) continue;
    out.values[i] = detail::pm_perturbed(out.values[i], bounds.lower[i], bounds.upper[i],
                                         rng.uniform(), params.eta_mutation);
  }
  bounds.clip(out.values);
  return out;
}

/// Non-domination ranks of all points: rank 0 is the non-dominated set,
/// rank r the set that becomes non-dominated once ranks below r are removed.
inline std::vector<int> fast_nondominated_sort(std::span<const PayoffVector> points,
                                               Sense sense) {
  if (points.empty())
    throw std::invalid_argument("fast_nondominated_sort: empty input");
  const std::size_t n = points.size();
  std::vector<int> rank(n, -1);
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> dominates_list(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j], sense)) {
        dominates_list[i].push_back(j);
        ++dominated_by[j];
      } else if (dominates(points[j], points[i], sense)) {
        dominates_list[j].push_back(i);
        ++dominated_by[i];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dominated_by[i] == 0) current.push_back(i);
  int level = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      rank[i] = level;
      for (std::size_t j : dominates_list[i])
        if (--dominated_by[j] == 0) next.push_back(j);
    }
    current = std::move(next);
    ++level;
  }
  return rank;
}

/// Crowding distances within one front. Boundary points of every objective
/// get +infinity; interior points accumulate the normalized neighbour gap
/// per objective, with zero-range objectives contributing nothing.
inline std::vector<double> crowding_distance(std::span<const PayoffVector> front) {
  if (front.empty())
    throw std::invalid_argument("crowding_distance: empty front");
  const std::size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t k = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < k; ++m) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range = front[order.back()][m] - front[order.front()][m];
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::isinf(distance[order[i]])) continue;
      distance[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / range;
    }
  }
  return distance;
}

/// Rank/crowding survival. Ranks and crowding distances are recomputed on
/// the pool's ideal points, fronts fill in ascending rank order, and the
/// last partially fitting front is truncated by descending crowding
/// distance with ties broken by creation id.
inline std::vector<Individual> environmental_selection(std::span<const Individual> pool,
                                                       std::size_t mu, Sense sense) {
  if (pool.empty())
    throw std::invalid_argument("environmental_selection: empty pool");
  std::vector<PayoffVector> points;
  points.reserve(pool.size());
  for (const Individual& ind : pool) {
    if (!ind.ideal_point)
      throw std::logic_error("environmental_selection: individual lacks an ideal point");
    points.push_back(*ind.ideal_point);
  }
  const std::vector<int> ranks = fast_nondominated_sort(points, sense);
  const int max_rank = *std::max_element(ranks.begin(), ranks.end());

  std::vector<std::vector<std::size_t>> fronts(static_cast<std::size_t>(max_rank) + 1);
  for (std::size_t i = 0; i < pool.size(); ++i)
    fronts[static_cast<std::size_t>(ranks[i])].push_back(i);

  std::vector<Individual> selected;
  selected.reserve(std::min(mu, pool.size()));
  for (std::size_t r = 0; r < fronts.size() && selected.size() < mu; ++r) {
    const auto& front = fronts[r];
    std::vector<PayoffVector> front_points;
    front_points.reserve(front.size());
    for (std::size_t i : front) front_points.push_back(points[i]);
    const std::vector<double> crowd = crowding_distance(front_points);

    auto take = [&](std::size_t front_pos) {
      Individual ind = pool[front[front_pos]];
      ind.rank = static_cast<int>(r);
      ind.crowding = crowd[front_pos];
      selected.push_back(std::move(ind));
    };

    if (selected.size() + front.size() <= mu) {
      for (std::size_t pos = 0; pos < front.size(); ++pos) take(pos);
    } else {
      std::vector<std::size_t> positions(front.size());
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      std::sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
        return pool[front[a]].strategy.id < pool[front[b]].strategy.id;
      });
      const std::size_t need = mu - selected.size();
      for (std::size_t pos = 0; pos < need; ++pos) take(positions[pos]);
    }
  }
  return selected;
}

}  // namespace coevo
