#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <system_error>

#include "coevo/config.hpp"
#include "coevo/metrics.hpp"

// Report emitters: appendix-style summary tables, long-format convergence
// CSVs, significance files and objective-space scatter SVGs. All writes go
// through a temp-then-rename step so re-running overwrites atomically.

namespace coevo {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form of a double; locale independent.
inline std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

/// Per-generation IGD of every run of one algorithm, plus the derived seed
/// each run used. Series index g holds the value after generation g, with
/// index 0 the evaluated initial populations.
struct AlgorithmIgdSeries {
  Algorithm algorithm = Algorithm::Canonical;
  std::vector<std::vector<double>> igd_per_run;
  std::vector<std::uint64_t> run_seeds;
};

inline std::vector<double> igd_series(const RunHistory& history) {
  std::vector<double> series;
  series.reserve(history.snapshots.size());
  for (const GenerationSnapshot& s : history.snapshots) series.push_back(s.igd);
  return series;
}

namespace detail {

inline int common_generation_count(std::span<const AlgorithmIgdSeries> blocks) {
  int generations = -1;
  for (const AlgorithmIgdSeries& block : blocks) {
    if (block.igd_per_run.empty())
      throw std::invalid_argument("convergence table: an algorithm block has no runs");
    for (const auto& series : block.igd_per_run) {
      const int g = static_cast<int>(series.size()) - 1;
      if (generations < 0) generations = g;
      if (g != generations)
        throw std::invalid_argument("convergence table: inconsistent generation counts");
    }
  }
  return generations;
}

}  // namespace detail

/// Summary table with one row per fifth generation and avg/min/max/std of
/// the per-run IGD values per algorithm block.
inline std::filesystem::path emit_convergence_table(const std::filesystem::path& out_dir,
                                                    Variant variant,
                                                    std::span<const AlgorithmIgdSeries> blocks) {
  const int generations = detail::common_generation_count(blocks);
  std::string csv = "generation";
  for (const AlgorithmIgdSeries& block : blocks) {
    const std::string name(algorithm_name(block.algorithm));
    csv += "," + name + "_avg," + name + "_min," + name + "_max," + name + "_std";
  }
  csv += "\n";
  for (int g = 5; g <= generations; g += 5) {
    csv += std::to_string(g);
    for (const AlgorithmIgdSeries& block : blocks) {
      std::vector<double> values;
      values.reserve(block.igd_per_run.size());
      for (const auto& series : block.igd_per_run)
        values.push_back(series[static_cast<std::size_t>(g)]);
      const RunStatistics stats = summarize_runs(values);
      csv += "," + format_double(stats.avg) + "," + format_double(stats.min) + "," +
             format_double(stats.max) + "," + format_double(stats.std);
    }
    csv += "\n";
  }
  const std::filesystem::path path =
      out_dir / (std::string(variant_name(variant)) + "_table.csv");
  write_file_atomic(path, csv);
  return path;
}

/// Long-format per-generation, per-run IGD rows.
inline std::filesystem::path emit_convergence_csv(const std::filesystem::path& out_dir,
                                                  Variant variant,
                                                  std::span<const AlgorithmIgdSeries> blocks) {
  detail::common_generation_count(blocks);
  std::string csv = "variant,algorithm,seed,generation,igd\n";
  for (const AlgorithmIgdSeries& block : blocks) {
    if (block.run_seeds.size() != block.igd_per_run.size())
      throw std::invalid_argument("convergence csv: seed list does not match run list");
    for (std::size_t run = 0; run < block.igd_per_run.size(); ++run) {
      const auto& series = block.igd_per_run[run];
      for (std::size_t g = 0; g < series.size(); ++g) {
        csv += std::string(variant_name(variant)) + "," +
               std::string(algorithm_name(block.algorithm)) + "," +
               std::to_string(block.run_seeds[run]) + "," + std::to_string(g) + "," +
               format_double(series[g]) + "\n";
      }
    }
  }
  const std::filesystem::path path =
      out_dir / (std::string(variant_name(variant)) + "_convergence.csv");
  write_file_atomic(path, csv);
  return path;
}

/// Paired two-sided significance file comparing final-generation IGD of the
/// two algorithms across run seeds.
inline std::filesystem::path emit_wilcoxon(const std::filesystem::path& out_dir, Variant variant,
                                           std::span<const double> canonical_final,
                                           std::span<const double> memetic_final) {
  std::string text =
      "test: wilcoxon_signed_rank, two-sided, paired final-generation igd "
      "(canonical vs memetic)\n";
  text += "n_runs: " + std::to_string(canonical_final.size()) + "\n";
  try {
    const WilcoxonResult result = wilcoxon_signed_rank(canonical_final, memetic_final);
    text += "n_nonzero_pairs: " + std::to_string(result.n) + "\n";
    text += "statistic: " + format_double(result.statistic) + "\n";
    text += "z: " + format_double(result.z) + "\n";
    text += "p_value: " + format_double(result.p_value) + "\n";
    text += result.p_value < 0.05 ? "verdict: significant at alpha=0.05\n"
                                  : "verdict: not significant at alpha=0.05\n";
  } catch (const insufficient_data_error& e) {
    text += std::string("error: ") + e.what() + "\n";
    text += "verdict: insufficient data\n";
  }
  const std::filesystem::path path =
      out_dir / (std::string(variant_name(variant)) + "_wilcoxon.txt");
  write_file_atomic(path, text);
  return path;
}

/// SVG scatter of the realized interaction payoffs of one generation with
/// the reference layer underlaid. Axes are fixed to [-2.2, 2.2] x
/// [-2.2, 2.2] so plots of one run share a viewport.
inline std::string render_scatter_svg(std::span<const PayoffVector> points,
                                      std::span<const PayoffVector> reference,
                                      const std::string& title) {
  constexpr double lo = -2.2;
  constexpr double hi = 2.2;
  constexpr double size = 520.0;
  constexpr double margin = 40.0;
  constexpr double plot = size - 2.0 * margin;
  // Centipixel precision keeps the files small.
  const auto pixel = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto px = [&](double x) { return margin + (x - lo) / (hi - lo) * plot; };
  const auto py = [&](double y) { return margin + (hi - y) / (hi - lo) * plot; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"520\" "
         "viewBox=\"0 0 520 520\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"520\" height=\"520\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + pixel(margin) + "\" y=\"" + pixel(margin) +
         "\" width=\"" + pixel(plot) + "\" height=\"" + pixel(plot) +
         "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (int t = -2; t <= 2; ++t) {
    const std::string vx = pixel(px(t));
    const std::string vy = pixel(py(t));
    svg += "<line x1=\"" + vx + "\" y1=\"" + pixel(size - margin) + "\" x2=\"" + vx +
           "\" y2=\"" + pixel(size - margin + 5) + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + vx + "\" y=\"" + pixel(size - margin + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + std::to_string(t) + "</text>\n";
    svg += "<line x1=\"" + pixel(margin - 5) + "\" y1=\"" + vy + "\" x2=\"" +
           pixel(margin) + "\" y2=\"" + vy + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + pixel(margin - 8) + "\" y=\"" + vy +
           "\" font-size=\"11\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
           std::to_string(t) + "</text>\n";
  }
  svg += "<text x=\"" + pixel(size / 2) + "\" y=\"" + pixel(margin - 14) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + title + "</text>\n";
  svg += "<g fill=\"#c8c8c8\">\n";
  for (const PayoffVector& p : reference)
    svg += "<rect x=\"" + pixel(px(p[0]) - 1.0) + "\" y=\"" +
           pixel(py(p[1]) - 1.0) + "\" width=\"2\" height=\"2\"/>\n";
  svg += "</g>\n<g fill=\"#15507a\" fill-opacity=\"0.45\">\n";
  for (const PayoffVector& p : points)
    svg += "<circle cx=\"" + pixel(px(p[0])) + "\" cy=\"" + pixel(py(p[1])) +
           "\" r=\"2\"/>\n";
  svg += "</g>\n</svg>\n";
  return svg;
}

/// One SVG per requested generation, plotting all realized interaction
/// payoffs of that generation's survivor populations. The interaction
/// outcomes are recomputed from the recorded populations.
inline std::vector<std::filesystem::path> emit_objective_scatter(
    const RunHistory& history, const GameDefinition& game, std::span<const int> generations,
    std::span<const PayoffVector> reference, const std::filesystem::path& out_dir,
    const std::string& file_prefix) {
  std::vector<std::filesystem::path> files;
  for (int g : generations) {
    if (g < 0 || static_cast<std::size_t>(g) >= history.snapshots.size())
      throw std::invalid_argument("emit_objective_scatter: no snapshot for generation " +
                                  std::to_string(g));
    const GenerationSnapshot& snapshot = history.snapshots[static_cast<std::size_t>(g)];
    std::vector<PayoffVector> points;
    points.reserve(snapshot.population_p1.size() * snapshot.population_p2.size());
    for (const Individual& a : snapshot.population_p1)
      for (const Individual& b : snapshot.population_p2)
        points.push_back(evaluate(game, a.strategy.values, b.strategy.values));
    const std::string svg =
        render_scatter_svg(points, reference, file_prefix + " generation " + std::to_string(g));
    const std::filesystem::path path =
        out_dir / (file_prefix + "_gen" + std::to_string(g) + ".svg");
    write_file_atomic(path, svg);
    files.push_back(path);
  }
  return files;
}

}  // namespace coevo
