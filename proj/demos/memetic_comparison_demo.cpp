// Compares the canonical and memetic loops on one extended variant over a
// few seeds and prints the mean IGD at a handful of generations.

#include <iostream>
#include <vector>

#include "coevo/coevo.hpp"

int main() {
  const coevo::GameDefinition game = coevo::make_game(coevo::Variant::Rastrigin1D);
  const auto reference = coevo::reference_pareto_layer(game, 100);

  coevo::CoevoConfig config;
  config.population = 50;
  config.generations = 30;

  const std::vector<std::uint64_t> seeds{11, 22, 33};
  std::vector<coevo::RunHistory> canonical;
  std::vector<coevo::RunHistory> memetic;
  for (std::uint64_t seed : seeds) {
    config.seed = seed;
    config.memetic = false;
    canonical.push_back(coevo::run_canonical(config, game, reference));
    config.memetic = true;
    memetic.push_back(coevo::run_memetic(config, game, reference));
  }

  const auto mean_igd = [&](const std::vector<coevo::RunHistory>& runs, std::size_t g) {
    double sum = 0.0;
    for (const coevo::RunHistory& h : runs) sum += h.snapshots[g].igd;
    return sum / static_cast<double>(runs.size());
  };

  std::cout << "generation  canonical  memetic\n";
  for (std::size_t g = 0; g <= 30; g += 5)
    std::cout << g << "  " << mean_igd(canonical, g) << "  " << mean_igd(memetic, g) << "\n";
  return 0;
}
