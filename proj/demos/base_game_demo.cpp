// Solves the base tug-of-war game with the canonical co-evolutionary loop
// and prints the IGD trend plus the final angle ranges of both players.

#include <algorithm>
#include <iostream>

#include "coevo/coevo.hpp"

int main() {
  coevo::GameDefinition game = coevo::make_game(coevo::Variant::Base);

  coevo::CoevoConfig config;
  config.population = 30;
  config.generations = 40;
  config.seed = 7;

  const coevo::RunHistory history = coevo::run_canonical(config, game);

  std::cout << "generation  igd\n";
  for (std::size_t g = 0; g < history.snapshots.size(); g += 5)
    std::cout << g << "  " << history.snapshots[g].igd << "\n";

  const auto& final_snapshot = history.snapshots.back();
  const auto angle_span = [](const std::vector<coevo::Individual>& population) {
    double lo = population.front().strategy.values[0];
    double hi = lo;
    for (const coevo::Individual& ind : population) {
      lo = std::min(lo, ind.strategy.values[0]);
      hi = std::max(hi, ind.strategy.values[0]);
    }
    return std::pair{lo, hi};
  };
  const auto [lo1, hi1] = angle_span(final_snapshot.population_p1);
  const auto [lo2, hi2] = angle_span(final_snapshot.population_p2);
  std::cout << "player 1 final angles in [" << lo1 << ", " << hi1 << "]\n";
  std::cout << "player 2 final angles in [" << lo2 << ", " << hi2 << "]\n";
  std::cout << "true evaluations: " << final_snapshot.true_evaluations << "\n";
  return 0;
}
