#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "coevo/config.hpp"
#include "coevo/report.hpp"

// Experiment orchestration: executes the variant x algorithm x seed grid
// with a worker pool over independent runs, then writes one table CSV, one
// long-format convergence CSV, one significance file and the scatter SVGs
// of the first run per cell. Per-run seeds derive from the master seed and
// the cell coordinates, so any cell reproduces in isolation.

namespace coevo {

namespace detail {

struct RunTask {
  std::size_t variant_pos = 0;    // position within the configured variant list
  std::size_t algorithm_pos = 0;  // position within the configured algorithm list
  int run_index = 0;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::vector<double> igd;
  std::optional<RunHistory> history;  // retained for the first run of each cell
};

inline std::uint64_t task_seed(const ExperimentConfig& config, const RunTask& task) {
  const Variant variant = config.variants[task.variant_pos];
  const Algorithm algorithm = config.algorithms[task.algorithm_pos];
  return derive_seed(config.seed, static_cast<std::uint64_t>(variant),
                     algorithm == Algorithm::Canonical ? 0 : 1,
                     static_cast<std::uint64_t>(task.run_index));
}

}  // namespace detail

/// Runs the configured grid and writes all report files into the output
/// directory, which is returned. A failing run aborts the experiment with
/// its cell identifier in the message.
inline std::filesystem::path run_experiment(const ExperimentConfig& config) {
  config.validate();

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + config.out_dir.string());

  // Shared per-variant game definitions and reference layers.
  std::vector<GameDefinition> games;
  std::vector<std::vector<PayoffVector>> references;
  games.reserve(config.variants.size());
  references.reserve(config.variants.size());
  for (Variant v : config.variants) {
    games.push_back(make_game(v));
    references.push_back(
        reference_pareto_layer(games.back(), config.coevo.reference_resolution));
  }

  std::vector<detail::RunTask> tasks;
  for (std::size_t vp = 0; vp < config.variants.size(); ++vp)
    for (std::size_t ap = 0; ap < config.algorithms.size(); ++ap)
      for (int r = 0; r < config.runs; ++r) {
        detail::RunTask task{vp, ap, r, 0};
        task.seed = detail::task_seed(config, task);
        tasks.push_back(task);
      }

  std::vector<detail::RunResult> results(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto execute = [&](const detail::RunTask& task) {
    CoevoConfig run_config = config.coevo;
    run_config.seed = task.seed;
    run_config.memetic = config.algorithms[task.algorithm_pos] == Algorithm::Memetic;
    RunHistory history =
        run(run_config, games[task.variant_pos], references[task.variant_pos]);
    detail::RunResult result;
    result.igd = igd_series(history);
    if (task.run_index == 0) result.history = std::move(history);
    return result;
  };

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        results[i] = execute(tasks[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          const detail::RunTask& task = tasks[i];
          first_error = std::make_exception_ptr(std::runtime_error(
              "run failed in cell variant=" +
              std::string(variant_name(config.variants[task.variant_pos])) +
              " algorithm=" +
              std::string(algorithm_name(config.algorithms[task.algorithm_pos])) +
              " run=" + std::to_string(task.run_index) + ": " + e.what()));
        }
        failed.store(true);
      }
    }
  };

  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min(tasks.size(),
               static_cast<std::size_t>(config.workers > 0 ? config.workers : hardware));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Output assembly, serialized and in deterministic order.
  const auto task_index = [&](std::size_t vp, std::size_t ap, int r) {
    return (vp * config.algorithms.size() + ap) * static_cast<std::size_t>(config.runs) +
           static_cast<std::size_t>(r);
  };

  for (std::size_t vp = 0; vp < config.variants.size(); ++vp) {
    const Variant variant = config.variants[vp];

    // Table blocks are laid out canonical first, then memetic when present.
    std::vector<AlgorithmIgdSeries> blocks;
    for (Algorithm algorithm : {Algorithm::Canonical, Algorithm::Memetic}) {
      for (std::size_t ap = 0; ap < config.algorithms.size(); ++ap) {
        if (config.algorithms[ap] != algorithm) continue;
        AlgorithmIgdSeries block;
        block.algorithm = algorithm;
        for (int r = 0; r < config.runs; ++r) {
          const std::size_t i = task_index(vp, ap, r);
          block.igd_per_run.push_back(results[i].igd);
          block.run_seeds.push_back(tasks[i].seed);
        }
        blocks.push_back(std::move(block));
      }
    }

    emit_convergence_table(config.out_dir, variant, blocks);
    emit_convergence_csv(config.out_dir, variant, blocks);

    if (blocks.size() == 2) {
      std::vector<double> canonical_final;
      std::vector<double> memetic_final;
      for (const auto& series : blocks[0].igd_per_run) canonical_final.push_back(series.back());
      for (const auto& series : blocks[1].igd_per_run) memetic_final.push_back(series.back());
      emit_wilcoxon(config.out_dir, variant, canonical_final, memetic_final);
    }

    // Scatters come from the first run of each cell, at the configured
    // generations that the run actually reached.
    std::vector<int> generations;
    for (int g : config.scatter_generations)
      if (g <= config.coevo.generations) generations.push_back(g);
    for (std::size_t ap = 0; ap < config.algorithms.size(); ++ap) {
      const detail::RunResult& first = results[task_index(vp, ap, 0)];
      if (!first.history || generations.empty()) continue;
      const std::string prefix = std::string(variant_name(variant)) + "_" +
                                 std::string(algorithm_name(config.algorithms[ap]));
      emit_objective_scatter(*first.history, games[vp], generations, references[vp],
                             config.out_dir, prefix);
    }
  }
  return config.out_dir;
}

/// Writes the reference layer of a variant as a two-column CSV.
inline std::filesystem::path emit_reference_csv(Variant variant, int resolution,
                                                const std::filesystem::path& file) {
  const GameDefinition game = make_game(variant);
  const std::vector<PayoffVector> layer = reference_pareto_layer(game, resolution);
  std::string csv = "x1,x2\n";
  for (const PayoffVector& p : layer)
    csv += format_double(p[0]) + "," + format_double(p[1]) + "\n";
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + file.parent_path().string());
  }
  write_file_atomic(file, csv);
  return file;
}

}  // namespace coevo
