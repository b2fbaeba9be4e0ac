// Command line front end: runs configured experiment grids, lists the game
// variants and dumps reference layers.
//
// Exit codes: 0 success, 1 configuration error, 2 run failure, 3 IO failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coevo/coevo.hpp"

namespace {

struct RunOverrides {
  std::vector<std::string> variants;
  std::vector<std::string> algorithms;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
};

int run_command(const std::string& config_path, const RunOverrides& overrides) {
  coevo::ExperimentConfig config;
  try {
    config = coevo::load_config(config_path);
    if (!overrides.variants.empty()) {
      config.variants.clear();
      for (const std::string& name : overrides.variants)
        config.variants.push_back(coevo::parse_variant(name));
    }
    if (!overrides.algorithms.empty()) {
      config.algorithms.clear();
      for (const std::string& name : overrides.algorithms)
        config.algorithms.push_back(coevo::parse_algorithm(name));
    }
    if (overrides.runs) config.runs = *overrides.runs;
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    if (overrides.workers) config.workers = *overrides.workers;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    const auto dir = coevo::run_experiment(config);
    std::cout << "reports written to " << dir.string() << "\n";
    return 0;
  } catch (const coevo::IoError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int reference_command(const std::string& variant, int resolution, const std::string& out_file) {
  coevo::Variant parsed;
  try {
    parsed = coevo::parse_variant(variant);
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  try {
    coevo::emit_reference_csv(parsed, resolution, out_file);
    std::cout << "reference layer written to " << out_file << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolutionary solver for two-player multi-objective games"};
  app.require_subcommand(1);

  std::string config_path;
  RunOverrides overrides;

  CLI::App* run = app.add_subcommand("run", "Run an experiment grid and write reports");
  run->add_option("--config", config_path, "JSON configuration file")->required();
  run->add_option("--variant", overrides.variants,
                  "Game variant (repeatable; overrides the config)");
  run->add_option("--algorithm", overrides.algorithms,
                  "Algorithm, canonical or memetic (repeatable; overrides the config)");
  run->add_option("--runs", overrides.runs, "Runs per variant/algorithm cell");
  run->add_option("--seed", overrides.seed, "Master seed");
  run->add_option("--out", overrides.out_dir, "Output directory");
  run->add_option("--workers", overrides.workers, "Parallel worker count (0 = hardware)");

  CLI::App* list = app.add_subcommand("list-variants", "List the game variant names");

  std::string ref_variant;
  int ref_resolution = 100;
  std::string ref_out;
  CLI::App* reference =
      app.add_subcommand("reference", "Dump the reference layer of a variant as CSV");
  reference->add_option("--variant", ref_variant, "Game variant")->required();
  reference->add_option("--resolution", ref_resolution, "Grid resolution per angle");
  reference->add_option("--out", ref_out, "Output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (run->parsed()) return run_command(config_path, overrides);
  if (list->parsed()) {
    for (coevo::Variant v : coevo::all_variants()) std::cout << coevo::variant_name(v) << "\n";
    return 0;
  }
  if (reference->parsed()) return reference_command(ref_variant, ref_resolution, ref_out);
  return 1;
}
