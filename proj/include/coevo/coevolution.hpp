#pragma once

#include <unordered_map>
#include <utility>

#include "coevo/evolution.hpp"
#include "coevo/games.hpp"
#include "coevo/localsearch.hpp"
#include "coevo/metrics.hpp"
#include "coevo/surrogate.hpp"

// The two co-evolutionary loops. Both maintain one subpopulation per
// player, evaluate all cross-population interactions through a
// repetition-avoiding ledger, reduce each strategy's anti-optimal front to
// its approximated ideal point, and apply rank/crowding survival per
// subpopulation. The memetic loop additionally refines offspring on
// per-player surrogate landscapes before any true evaluation and retrains
// the surrogates on each generation's survivors.

namespace coevo {

/// Run parameters shared by both loops.
struct CoevoConfig {
  int population = 50;   // subpopulation size per player
  int generations = 100;
  VariationParams variation;
  bool memetic = false;
  double p_ls = 0.2;  // per-individual local search probability
  SurrogateTrainingParams surrogate;
  NelderMeadParams local_search;
  std::uint64_t seed = 0;
  int reference_resolution = 100;

  void validate() const {
    if (population < 2) throw std::invalid_argument("coevo: population must be >= 2");
    if (generations < 0) throw std::invalid_argument("coevo: generations must be >= 0");
    if (p_ls < 0.0 || p_ls > 1.0) throw std::invalid_argument("coevo: p_ls must be in [0, 1]");
    if (reference_resolution < 2)
      throw std::invalid_argument("coevo: reference_resolution must be >= 2");
    variation.validate();
    surrogate.validate();
    local_search.validate();
  }
};

/// Cache of all true payoff evaluations of a run, keyed by strategy id
/// pair. Lookups of a recorded pair never re-evaluate; the counter equals
/// the number of distinct pairs ever evaluated. Owned by a single run.
class InteractionLedger {
 public:
  const PayoffVector& payoff(const Strategy& s1, const Strategy& s2,
                             const GameDefinition& game) {
    const Key key{s1.id, s2.id};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    PayoffVector value = evaluate(game, s1.values, s2.values);
    ++true_evaluations_;
    return cache_.emplace(key, std::move(value)).first->second;
  }

  bool contains(std::uint64_t id1, std::uint64_t id2) const {
    return cache_.count(Key{id1, id2}) > 0;
  }

  std::uint64_t true_evaluations() const { return true_evaluations_; }

 private:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(mix64(k.first * 0x9E3779B97F4A7C15ull ^ k.second));
    }
  };
  std::unordered_map<Key, PayoffVector, KeyHash> cache_;
  std::uint64_t true_evaluations_ = 0;
};

/// Row-major matrix of interaction payoffs: entry (i, j) is the payoff of
/// the i-th player-1 strategy against the j-th player-2 strategy.
struct PayoffMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<PayoffVector> cells;

  const PayoffVector& at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

/// Complete bipartite evaluation of two subpopulations. Pairs already in
/// the ledger are served from it; new pairs are evaluated once and
/// recorded.
inline PayoffMatrix evaluate_interactions(std::span<const Individual> s1,
                                          std::span<const Individual> s2,
                                          const GameDefinition& game,
                                          InteractionLedger& ledger) {
  PayoffMatrix matrix;
  matrix.rows = s1.size();
  matrix.cols = s2.size();
  matrix.cells.reserve(matrix.rows * matrix.cols);
  for (const Individual& a : s1)
    for (const Individual& b : s2)
      matrix.cells.push_back(ledger.payoff(a.strategy, b.strategy, game));
  return matrix;
}

/// Approximated ideal points from a payoff matrix: the component-wise
/// maximum over each row for player 1 (whose opponent maximizes), the
/// component-wise minimum over each column for player 2. Equals reducing
/// the opponent-sense non-dominated front of the row or column to its
/// ideal point.
inline std::vector<PayoffVector> approximate_ideal_points(const PayoffMatrix& matrix,
                                                          int for_player) {
  if (matrix.rows == 0 || matrix.cols == 0)
    throw std::invalid_argument("approximate_ideal_points: empty matrix");
  if (for_player != 1 && for_player != 2)
    throw std::invalid_argument("approximate_ideal_points: player must be 1 or 2");
  std::vector<PayoffVector> ideals;
  if (for_player == 1) {
    ideals.reserve(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
      PayoffVector extreme = matrix.at(i, 0);
      for (std::size_t j = 1; j < matrix.cols; ++j) {
        const PayoffVector& p = matrix.at(i, j);
        for (std::size_t k = 0; k < extreme.size(); ++k)
          if (p[k] > extreme[k]) extreme[k] = p[k];
      }
      ideals.push_back(std::move(extreme));
    }
  } else {
    ideals.reserve(matrix.cols);
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      PayoffVector extreme = matrix.at(0, j);
      for (std::size_t i = 1; i < matrix.rows; ++i) {
        const PayoffVector& p = matrix.at(i, j);
        for (std::size_t k = 0; k < extreme.size(); ++k)
          if (p[k] < extreme[k]) extreme[k] = p[k];
      }
      ideals.push_back(std::move(extreme));
    }
  }
  return ideals;
}

/// State of both subpopulations after one generation (index 0 holds the
/// evaluated initial populations), the IGD of the realized interaction
/// outcomes against the reference layer, and the cumulative count of true
/// payoff evaluations.
struct GenerationSnapshot {
  std::vector<Individual> population_p1;
  std::vector<Individual> population_p2;
  double igd = 0.0;
  std::uint64_t true_evaluations = 0;
};

struct RunHistory {
  std::vector<GenerationSnapshot> snapshots;
};

namespace detail {

inline std::vector<Individual> random_population(int mu, const StrategyBounds& bounds, Rng& rng,
                                                 IdSource& ids) {
  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(mu));
  for (int i = 0; i < mu; ++i) {
    Strategy s;
    s.id = ids.next();
    s.values.resize(bounds.size());
    for (std::size_t v = 0; v < bounds.size(); ++v)
      s.values[v] = rng.uniform(bounds.lower[v], bounds.upper[v]);
    population.push_back(Individual{std::move(s), std::nullopt, std::nullopt, std::nullopt});
  }
  return population;
}

/// Offspring via uniform random mating of survivors, SBX and polynomial
/// mutation. Produces exactly mu children.
inline std::vector<Individual> make_offspring(std::span<const Individual> parents,
                                              const VariationParams& variation,
                                              const StrategyBounds& bounds, Rng& rng,
                                              IdSource& ids) {
  std::vector<Individual> offspring;
  offspring.reserve(parents.size());
  const std::size_t mu = parents.size();
  while (offspring.size() < mu) {
    const Strategy& p1 = parents[rng.index(mu)].strategy;
    const Strategy& p2 = parents[rng.index(mu)].strategy;
    auto [c1, c2] = sbx_crossover(p1, p2, variation, bounds, rng, ids);
    offspring.push_back(Individual{polynomial_mutation(c1, variation, bounds, rng, ids),
                                   std::nullopt, std::nullopt, std::nullopt});
    if (offspring.size() < mu)
      offspring.push_back(Individual{polynomial_mutation(c2, variation, bounds, rng, ids),
                                     std::nullopt, std::nullopt, std::nullopt});
  }
  return offspring;
}

inline void assign_ideal_points(std::vector<Individual>& s1, std::vector<Individual>& s2,
                                const PayoffMatrix& matrix) {
  const std::vector<PayoffVector> ideals1 = approximate_ideal_points(matrix, 1);
  const std::vector<PayoffVector> ideals2 = approximate_ideal_points(matrix, 2);
  for (std::size_t i = 0; i < s1.size(); ++i) s1[i].ideal_point = ideals1[i];
  for (std::size_t j = 0; j < s2.size(); ++j) s2[j].ideal_point = ideals2[j];
}

/// Payoffs realized by all interactions between the two survivor
/// populations; every pair is already in the ledger.
inline std::vector<PayoffVector> realized_outcomes(std::span<const Individual> s1,
                                                   std::span<const Individual> s2,
                                                   const GameDefinition& game,
                                                   InteractionLedger& ledger) {
  std::vector<PayoffVector> cloud;
  cloud.reserve(s1.size() * s2.size());
  for (const Individual& a : s1)
    for (const Individual& b : s2) cloud.push_back(ledger.payoff(a.strategy, b.strategy, game));
  return cloud;
}

inline SurrogateModel train_player_model(std::span<const Individual> population,
                                         const StrategyBounds& bounds,
                                         const SurrogateTrainingParams& params, Rng& rng) {
  std::vector<Strategy> inputs;
  std::vector<PayoffVector> targets;
  inputs.reserve(population.size());
  targets.reserve(population.size());
  for (const Individual& ind : population) {
    inputs.push_back(ind.strategy);
    targets.push_back(*ind.ideal_point);
  }
  return train_surrogate(inputs, targets, bounds, params, rng);
}

inline RunHistory run_impl(const CoevoConfig& config, const GameDefinition& game,
                           std::span<const PayoffVector> reference) {
  config.validate();
  game.bounds_p1.validate();
  game.bounds_p2.validate();

  Rng rng(config.seed);
  IdSource ids;
  InteractionLedger ledger;
  RunHistory history;
  history.snapshots.reserve(static_cast<std::size_t>(config.generations) + 1);

  std::vector<Individual> pop1 = random_population(config.population, game.bounds_p1, rng, ids);
  std::vector<Individual> pop2 = random_population(config.population, game.bounds_p2, rng, ids);

  const PayoffMatrix initial = evaluate_interactions(pop1, pop2, game, ledger);
  assign_ideal_points(pop1, pop2, initial);
  history.snapshots.push_back(
      {pop1, pop2, igd(reference, initial.cells), ledger.true_evaluations()});

  SurrogateModel model1;
  SurrogateModel model2;
  if (config.memetic) {
    model1 = train_player_model(pop1, game.bounds_p1, config.surrogate, rng);
    model2 = train_player_model(pop2, game.bounds_p2, config.surrogate, rng);
  }

  for (int generation = 1; generation <= config.generations; ++generation) {
    std::vector<Individual> off1 =
        make_offspring(pop1, config.variation, game.bounds_p1, rng, ids);
    std::vector<Individual> off2 =
        make_offspring(pop2, config.variation, game.bounds_p2, rng, ids);

    if (config.memetic) {
      off1 = refine_population(off1, model1, config.p_ls, game.sense_p1, game.bounds_p1,
                               config.local_search, rng, ids);
      off2 = refine_population(off2, model2, config.p_ls, game.sense_p2, game.bounds_p2,
                               config.local_search, rng, ids);
    }

    std::vector<Individual> union1 = pop1;
    union1.insert(union1.end(), std::make_move_iterator(off1.begin()),
                  std::make_move_iterator(off1.end()));
    std::vector<Individual> union2 = pop2;
    union2.insert(union2.end(), std::make_move_iterator(off2.begin()),
                  std::make_move_iterator(off2.end()));

    const PayoffMatrix matrix = evaluate_interactions(union1, union2, game, ledger);
    assign_ideal_points(union1, union2, matrix);

    pop1 = environmental_selection(union1, static_cast<std::size_t>(config.population),
                                   game.sense_p1);
    pop2 = environmental_selection(union2, static_cast<std::size_t>(config.population),
                                   game.sense_p2);

    const std::vector<PayoffVector> outcomes = realized_outcomes(pop1, pop2, game, ledger);
    history.snapshots.push_back(
        {pop1, pop2, igd(reference, outcomes), ledger.true_evaluations()});

    if (config.memetic) {
      model1 = train_player_model(pop1, game.bounds_p1, config.surrogate, rng);
      model2 = train_player_model(pop2, game.bounds_p2, config.surrogate, rng);
    }
  }
  return history;
}

}  // namespace detail

/// Canonical loop: variation, union with parents, complete bipartite
/// evaluation through the ledger, ideal-point approximation and
/// lexicographic rank/crowding survival.
inline RunHistory run_canonical(const CoevoConfig& config, const GameDefinition& game,
                                std::span<const PayoffVector> reference) {
  if (config.memetic)
    throw std::invalid_argument("run_canonical: config has the memetic flag set");
  return detail::run_impl(config, game, reference);
}

inline RunHistory run_canonical(const CoevoConfig& config, const GameDefinition& game) {
  const auto reference = reference_pareto_layer(game, config.reference_resolution);
  return run_canonical(config, game, reference);
}

/// Memetic loop: canonical loop plus surrogate training before the first
/// generation, surrogate-guided refinement of each offspring subpopulation
/// before any true evaluation, and retraining on each generation's
/// survivors only.
inline RunHistory run_memetic(const CoevoConfig& config, const GameDefinition& game,
                              std::span<const PayoffVector> reference) {
  if (!config.memetic)
    throw std::invalid_argument("run_memetic: config lacks the memetic flag");
  return detail::run_impl(config, game, reference);
}

inline RunHistory run_memetic(const CoevoConfig& config, const GameDefinition& game) {
  const auto reference = reference_pareto_layer(game, config.reference_resolution);
  return run_memetic(config, game, reference);
}

/// Dispatch on the memetic flag.
inline RunHistory run(const CoevoConfig& config, const GameDefinition& game,
                      std::span<const PayoffVector> reference) {
  return config.memetic ? run_memetic(config, game, reference)
                        : run_canonical(config, game, reference);
}

inline RunHistory run(const CoevoConfig& config, const GameDefinition& game) {
  const auto reference = reference_pareto_layer(game, config.reference_resolution);
  return run(config, game, reference);
}

}  // namespace coevo
