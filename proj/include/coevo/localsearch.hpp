#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "coevo/surrogate.hpp"
#include "coevo/types.hpp"

// Memetic refinement: uniform random scalarization weights, a bounded
// Nelder-Mead simplex search on the surrogate landscape, and Lamarckian
// write-back of the refined strategy. The true game is never evaluated
// here; refinement cost is surrogate-only.

namespace coevo {

/// Weights on the probability simplex (non-negative, summing to one).
using SimplexWeights = std::vector<double>;

/// A point uniformly distributed on the (K-1)-simplex, realized as
/// normalized independent exponential draws. Normalizing plain uniforms
/// would bias the corners.
inline SimplexWeights random_simplex_weights(int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("random_simplex_weights: k must be >= 1");
  SimplexWeights w(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log1p(-rng.uniform());
    sum += v;
  }
  if (sum == 0.0) {  // all draws hit zero; fall back to equal weights
    std::fill(w.begin(), w.end(), 1.0 / k);
    return w;
  }
  for (double& v : w) v /= sum;
  return w;
}

struct NelderMeadParams {
  double initial_step = 0.05;  // fraction of each variable's range
  int max_iterations = 100;
  double tolerance = 1e-6;  // objective spread across the simplex
  // Range-relative simplex extent that must also be reached before
  // stopping; objective spread alone stalls on symmetric value ties.
  double point_tolerance = 1e-8;
  // Refinement searches within start +- trust_radius * r^2 * (per-variable
  // extent of the surrogate's training batch), intersected with the
  // player's bounds, where r^2 is the model's explained-variance score.
  // The surrogate is only trustworthy near its data; an unrestricted
  // search chases extrapolation artifacts, typically collapsing the force
  // variable.
  double trust_radius = 0.2;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;

  void validate() const {
    if (!(initial_step > 0.0) || !(initial_step < 1.0))
      throw std::invalid_argument("nelder_mead: initial_step must be in (0, 1)");
    if (max_iterations < 0)
      throw std::invalid_argument("nelder_mead: max_iterations must be >= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("nelder_mead: tolerance must be > 0");
    if (!(point_tolerance > 0.0))
      throw std::invalid_argument("nelder_mead: point_tolerance must be > 0");
    if (!(trust_radius > 0.0))
      throw std::invalid_argument("nelder_mead: trust_radius must be > 0");
  }
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0.0;
  int iterations = 0;
};

/// Derivative-free bounded simplex minimization. Candidate vertices are
/// clipped to the bounds before evaluation, so every evaluated point lies
/// inside the box. Terminates once both the objective spread and the
/// range-relative point extent of the simplex fall below their tolerances,
/// or when the iteration budget runs out; returns the best vertex seen.
inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                                    std::span<const double> start, const StrategyBounds& bounds,
                                    const NelderMeadParams& params) {
  params.validate();
  const std::size_t dim = start.size();
  if (dim != bounds.size())
    throw std::invalid_argument("nelder_mead: start dimension does not match bounds");
  if (!bounds.contains(start))
    throw std::invalid_argument("nelder_mead: start point outside bounds");

  auto eval = [&](std::vector<double>& x) {
    bounds.clip(x);
    return objective(x);
  };

  std::vector<std::vector<double>> vertex;
  vertex.reserve(dim + 1);
  std::vector<double> value;
  value.reserve(dim + 1);

  vertex.emplace_back(start.begin(), start.end());
  value.push_back(objective(start));
  if (!std::isfinite(value.front()))
    throw std::invalid_argument("nelder_mead: objective non-finite at start");
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> v(start.begin(), start.end());
    const double step = params.initial_step * bounds.range(i);
    v[i] = v[i] + step <= bounds.upper[i] ? v[i] + step : v[i] - step;
    vertex.push_back(v);
    value.push_back(eval(vertex.back()));
  }

  std::vector<std::size_t> order(dim + 1);
  int iteration = 0;
  for (; iteration < params.max_iterations; ++iteration) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim > 0 ? dim - 1 : 0];
    if (value[worst] - value[best] < params.tolerance) {
      double extent = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (bounds.range(i) <= 0.0) continue;
        double lo = vertex[0][i];
        double hi = lo;
        for (std::size_t r = 1; r <= dim; ++r) {
          lo = std::min(lo, vertex[r][i]);
          hi = std::max(hi, vertex[r][i]);
        }
        extent = std::max(extent, (hi - lo) / bounds.range(i));
      }
      if (extent < params.point_tolerance) break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += vertex[order[r]][i];
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto along = [&](double coeff) {
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < dim; ++i)
        x[i] = centroid[i] + coeff * (centroid[i] - vertex[worst][i]);
      return x;
    };

    auto shrink_towards_best = [&] {
      for (std::size_t r = 1; r <= dim; ++r) {
        const std::size_t v = order[r];
        for (std::size_t i = 0; i < dim; ++i)
          vertex[v][i] = vertex[best][i] + params.shrink * (vertex[v][i] - vertex[best][i]);
        value[v] = eval(vertex[v]);
      }
    };

    std::vector<double> reflected = along(params.reflection);
    const double f_reflected = eval(reflected);

    if (f_reflected < value[best]) {
      std::vector<double> expanded = along(params.reflection * params.expansion);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = std::move(expanded);
        value[worst] = f_expanded;
      } else {
        vertex[worst] = std::move(reflected);
        value[worst] = f_reflected;
      }
    } else if (f_reflected < value[second_worst]) {
      vertex[worst] = std::move(reflected);
      value[worst] = f_reflected;
    } else if (f_reflected < value[worst]) {
      std::vector<double> contracted = along(params.reflection * params.contraction);
      const double f_contracted = eval(contracted);
      if (f_contracted <= f_reflected) {
        vertex[worst] = std::move(contracted);
        value[worst] = f_contracted;
      } else {
        shrink_towards_best();
      }
    } else {
      std::vector<double> contracted = along(-params.contraction);
      const double f_contracted = eval(contracted);
      if (f_contracted < value[worst]) {
        vertex[worst] = std::move(contracted);
        value[worst] = f_contracted;
      } else {
        shrink_towards_best();
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i)
    if (value[i] < value[best]) best = i;
  return {vertex[best], value[best], iteration};
}

/// Lamarckian refinement pass over an offspring subpopulation. Each
/// individual is selected independently with probability p_ls; selected
/// ones minimize (or, for a maximizing player, maximize via negation) a
/// freshly drawn random scalarization of the surrogate prediction from
/// their own strategy, and the search result replaces the strategy under a
/// fresh id. Unselected individuals pass through untouched.
inline std::vector<Individual> refine_population(std::span<const Individual> offspring,
                                                 const SurrogateModel& model, double p_ls,
                                                 Sense player_sense, const StrategyBounds& bounds,
                                                 const NelderMeadParams& params, Rng& rng,
                                                 IdSource& ids) {
  if (p_ls < 0.0 || p_ls > 1.0)
    throw std::invalid_argument("refine_population: p_ls must be in [0, 1]");
  std::vector<Individual> refined;
  refined.reserve(offspring.size());
  for (const Individual& ind : offspring) {
    if (!rng.bernoulli(p_ls)) {
      refined.push_back(ind);
      continue;
    }
    if (static_cast<int>(ind.strategy.values.size()) != model.n_in)
      throw std::invalid_argument("refine_population: strategy/model dimension mismatch");
    const SimplexWeights weights = random_simplex_weights(model.n_out, rng);
    const double sign = player_sense == Sense::Minimize ? 1.0 : -1.0;
    auto scalarized = [&](std::span<const double> x) {
      const PayoffVector p = model.predict(x);
      double v = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) v += weights[k] * p[k];
      return sign * v;
    };
    StrategyBounds search = bounds;
    for (std::size_t i = 0; i < search.size(); ++i) {
      const double radius = params.trust_radius * model.r_squared * model.in_span[i];
      search.lower[i] = std::max(bounds.lower[i], ind.strategy.values[i] - radius);
      search.upper[i] = std::min(bounds.upper[i], ind.strategy.values[i] + radius);
    }
    NelderMeadResult result = nelder_mead(scalarized, ind.strategy.values, search, params);
    Individual out;
    out.strategy = Strategy{ids.next(), std::move(result.point)};
    refined.push_back(std::move(out));
  }
  return refined;
}

}  // namespace coevo
