#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace coevo {

/// Objective values produced by one interaction between two strategies.
/// All vectors compared against each other must share the same length K.
using PayoffVector = std::vector<double>;

enum class Sense { Minimize, Maximize };

inline const char* to_string(Sense s) {
  return s == Sense::Minimize ? "minimize" : "maximize";
}

/// A real decision vector owned by one player. Ids are unique within a run
/// and key the interaction ledger; variation operators always assign fresh
/// ids to their outputs.
struct Strategy {
  std::uint64_t id = 0;
  std::vector<double> values;
};

/// Per-variable box constraints of one player's decision space.
struct StrategyBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  double range(std::size_t i) const { return upper[i] - lower[i]; }

  void validate() const {
    if (lower.size() != upper.size())
      throw std::invalid_argument("strategy bounds: lower/upper length mismatch");
    if (lower.empty())
      throw std::invalid_argument("strategy bounds: empty");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i]))
        throw std::invalid_argument("strategy bounds: lower must be < upper in every variable");
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
  }

  void clip(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i]) x[i] = lower[i];
      if (x[i] > upper[i]) x[i] = upper[i];
    }
  }
};

/// Population member. Ideal point, rank and crowding distance are attached
/// by the evaluation and ranking passes and are absent before them.
struct Individual {
  Strategy strategy;
  std::optional<PayoffVector> ideal_point;
  std::optional<int> rank;
  std::optional<double> crowding;
};

/// Issues run-unique strategy ids.
class IdSource {
 public:
  std::uint64_t next() { return next_++; }

 private:
  std::uint64_t next_ = 0;
};

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of one run cell as a pure function of the master seed and the cell
/// coordinates, so any cell can be reproduced in isolation.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t variant_index,
                                 std::uint64_t algorithm_index, std::uint64_t run_index) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ 0xA0761D6478BD642Full * (variant_index + 1));
  h = mix64(h ^ 0xE7037ED1A0B428DBull * (algorithm_index + 1));
  h = mix64(h ^ 0x8EBC6AF09C88C6E3ull * (run_index + 1));
  return h;
}

/// Deterministic random stream. Doubles are derived from raw 64-bit draws
/// instead of <random> distributions, so a seed pins the exact sequence
/// independently of standard library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coevo
