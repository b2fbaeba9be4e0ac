#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "coevo/types.hpp"

// The tug-of-war game and its extended variants. Two players pull a unit
// mass by choosing angles (and, in the extended variants, force magnitudes
// and auxiliary decision variables fed through a synthetic multimodal
// function). The outcome is the final mass position (x1, x2); player 1
// minimizes both coordinates, player 2 maximizes them.

namespace coevo {

enum class Variant {
  Base,
  Rosenbrock2D,
  Rosenbrock3D,
  Rastrigin1D,
  Rastrigin2D,
  Rastrigin3D,
  Griewank1D,
  Griewank2D,
  Griewank3D,
  Ackley2D,
};

inline constexpr std::array<Variant, 10> all_variants() {
  return {Variant::Base,        Variant::Rosenbrock2D, Variant::Rosenbrock3D,
          Variant::Rastrigin1D, Variant::Rastrigin2D,  Variant::Rastrigin3D,
          Variant::Griewank1D,  Variant::Griewank2D,   Variant::Griewank3D,
          Variant::Ackley2D};
}

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Base: return "Base";
    case Variant::Rosenbrock2D: return "Rosenbrock2D";
    case Variant::Rosenbrock3D: return "Rosenbrock3D";
    case Variant::Rastrigin1D: return "Rastrigin1D";
    case Variant::Rastrigin2D: return "Rastrigin2D";
    case Variant::Rastrigin3D: return "Rastrigin3D";
    case Variant::Griewank1D: return "Griewank1D";
    case Variant::Griewank2D: return "Griewank2D";
    case Variant::Griewank3D: return "Griewank3D";
    case Variant::Ackley2D: return "Ackley2D";
  }
  return "Base";
}

inline std::string valid_variant_names() {
  std::string names;
  for (Variant v : all_variants()) {
    if (!names.empty()) names += ", ";
    names += variant_name(v);
  }
  return names;
}

inline Variant parse_variant(std::string_view name) {
  for (Variant v : all_variants())
    if (variant_name(v) == name) return v;
  throw std::invalid_argument("unknown game variant '" + std::string(name) +
                              "' (valid: " + valid_variant_names() + ")");
}

enum class PhiFamily { Rosenbrock, Rastrigin, Griewank, Ackley };

/// Synthetic function family plus its expected input dimension.
struct PhiKind {
  PhiFamily family;
  int dimension;
};

/// Value of the embedded synthetic function. Every family has global
/// minimum 0 on its configured domain: Rosenbrock at (1,...,1), the other
/// three at the origin.
inline double phi(PhiKind kind, std::span<const double> z) {
  if (static_cast<int>(z.size()) != kind.dimension)
    throw std::invalid_argument("phi: input dimension mismatch");
  const int n = kind.dimension;
  switch (kind.family) {
    case PhiFamily::Rosenbrock: {
      if (n < 2) throw std::invalid_argument("phi: Rosenbrock needs dimension >= 2");
      double sum = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        const double a = z[i + 1] - z[i] * z[i];
        const double b = z[i] - 1.0;
        sum += 100.0 * a * a + b * b;
      }
      return sum;
    }
    case PhiFamily::Rastrigin: {
      if (n < 1) throw std::invalid_argument("phi: Rastrigin needs dimension >= 1");
      double sum = 10.0 * n;
      for (int i = 0; i < n; ++i)
        sum += z[i] * z[i] - 10.0 * std::cos(2.0 * M_PI * z[i]);
      return sum;
    }
    case PhiFamily::Griewank: {
      if (n < 1) throw std::invalid_argument("phi: Griewank needs dimension >= 1");
      double sum = 0.0;
      double prod = 1.0;
      for (int i = 0; i < n; ++i) {
        sum += z[i] * z[i] / 4000.0;
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
      }
      return sum - prod + 1.0;
    }
    case PhiFamily::Ackley: {
      if (n < 1) throw std::invalid_argument("phi: Ackley needs dimension >= 1");
      double sq = 0.0;
      double cs = 0.0;
      for (int i = 0; i < n; ++i) {
        sq += z[i] * z[i];
        cs += std::cos(2.0 * M_PI * z[i]);
      }
      // Grouped so the value is exactly 0 at the origin.
      return 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sq / n))) +
             (std::exp(1.0) - std::exp(cs / n));
    }
  }
  throw std::invalid_argument("phi: unknown family");
}

/// Conventional benchmark domain half-width of each family.
inline double phi_domain_halfwidth(PhiFamily family) {
  switch (family) {
    case PhiFamily::Rosenbrock: return 2.048;
    case PhiFamily::Rastrigin: return 5.12;
    case PhiFamily::Griewank: return 600.0;
    case PhiFamily::Ackley: return 32.768;
  }
  return 0.0;
}

/// Point of the family's global minimum for one variable.
inline double phi_minimizer_value(PhiFamily family) {
  return family == PhiFamily::Rosenbrock ? 1.0 : 0.0;
}

/// Decision-space bounds for both players, the payoff map and the fixed
/// per-player optimization senses of one game variant. The extended layout
/// per player is [theta, F, z_1..z_n]; the base layout is [theta].
struct GameDefinition {
  Variant variant = Variant::Base;
  StrategyBounds bounds_p1;
  StrategyBounds bounds_p2;
  Sense sense_p1 = Sense::Minimize;
  Sense sense_p2 = Sense::Maximize;
  int objectives = 2;
  std::optional<PhiKind> phi_kind;  // absent for Base
};

namespace detail {

inline std::optional<PhiKind> variant_phi(Variant v) {
  switch (v) {
    case Variant::Base: return std::nullopt;
    case Variant::Rosenbrock2D: return PhiKind{PhiFamily::Rosenbrock, 2};
    case Variant::Rosenbrock3D: return PhiKind{PhiFamily::Rosenbrock, 3};
    case Variant::Rastrigin1D: return PhiKind{PhiFamily::Rastrigin, 1};
    case Variant::Rastrigin2D: return PhiKind{PhiFamily::Rastrigin, 2};
    case Variant::Rastrigin3D: return PhiKind{PhiFamily::Rastrigin, 3};
    case Variant::Griewank1D: return PhiKind{PhiFamily::Griewank, 1};
    case Variant::Griewank2D: return PhiKind{PhiFamily::Griewank, 2};
    case Variant::Griewank3D: return PhiKind{PhiFamily::Griewank, 3};
    case Variant::Ackley2D: return PhiKind{PhiFamily::Ackley, 2};
  }
  return std::nullopt;
}

}  // namespace detail

inline GameDefinition make_game(Variant v) {
  GameDefinition game;
  game.variant = v;
  game.phi_kind = detail::variant_phi(v);
  StrategyBounds bounds;
  bounds.lower = {0.0};
  bounds.upper = {2.0 * M_PI};
  if (game.phi_kind) {
    bounds.lower.push_back(0.0);  // force magnitude F
    bounds.upper.push_back(1.0);
    const double half = phi_domain_halfwidth(game.phi_kind->family);
    for (int i = 0; i < game.phi_kind->dimension; ++i) {
      bounds.lower.push_back(-half);
      bounds.upper.push_back(half);
    }
  }
  game.bounds_p1 = bounds;
  game.bounds_p2 = bounds;
  return game;
}

/// Payoff of the base game: the mass position after both unit forces act
/// at the chosen angles.
inline PayoffVector evaluate_base(double theta1, double theta2) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2))
    throw std::invalid_argument("evaluate_base: non-finite angle");
  return {std::cos(theta1) + std::cos(theta2), std::sin(theta1) + std::sin(theta2)};
}

/// Payoff of a game variant for raw decision vectors.
inline PayoffVector evaluate(const GameDefinition& game, std::span<const double> s1,
                             std::span<const double> s2) {
  if (s1.size() != game.bounds_p1.size() || s2.size() != game.bounds_p2.size())
    throw std::invalid_argument("evaluate: strategy layout does not match the game variant");
  if (!game.phi_kind) return evaluate_base(s1[0], s2[0]);
  const double c1 = s1[1] / (1.0 + phi(*game.phi_kind, s1.subspan(2)));
  const double c2 = s2[1] / (1.0 + phi(*game.phi_kind, s2.subspan(2)));
  return {c1 * std::cos(s1[0]) + c2 * std::cos(s2[0]),
          c1 * std::sin(s1[0]) + c2 * std::sin(s2[0])};
}

/// Payoff of an extended variant; the force magnitudes divide by one plus
/// the synthetic function of each player's auxiliary variables.
inline PayoffVector evaluate_extended(const Strategy& s1, const Strategy& s2,
                                      const GameDefinition& game) {
  if (!game.phi_kind)
    throw std::invalid_argument("evaluate_extended: game has no embedded function");
  return evaluate(game, s1.values, s2.values);
}

namespace detail {

// cos(pi * x) and sin(pi * x), exact at integer and half-integer x. The
// reference grid is built in units of pi so quadrant corners evaluate to
// exact zeros and collide under exact-equality deduplication.
inline double cospi(double x) {
  const double r = std::remainder(x, 2.0);  // [-1, 1]
  const double a = std::fabs(r);
  if (a == 0.0) return 1.0;
  if (a == 1.0) return -1.0;
  if (a == 0.5) return 0.0;
  return std::cos(M_PI * r);
}

inline double sinpi(double x) {
  const double r = std::remainder(x, 2.0);
  if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(M_PI * r);
}

}  // namespace detail

/// Payoff points of all rationalizable strategy pairs, sampled on a
/// resolution x resolution grid of (theta1, theta2) over
/// [pi, 3pi/2] x [0, pi/2] with F = 1 and the embedded functions at their
/// global minimizers. All variants share this layer because every embedded
/// function has minimum 0. Exact duplicates are removed; grid order of
/// first occurrence is preserved.
inline std::vector<PayoffVector> reference_pareto_layer(const GameDefinition& game,
                                                        int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("reference_pareto_layer: resolution must be >= 2");
  if (game.objectives != 2)
    throw std::invalid_argument("reference_pareto_layer: requires a 2-objective game");
  std::vector<PayoffVector> layer;
  layer.reserve(static_cast<std::size_t>(resolution) * resolution);
  std::set<std::pair<double, double>> seen;
  for (int i = 0; i < resolution; ++i) {
    // Angles in units of pi: theta1/pi in [1, 1.5], theta2/pi in [0, 0.5].
    const double u = 1.0 + 0.5 * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double v = 0.5 * j / (resolution - 1);
      const double x1 = detail::cospi(u) + detail::cospi(v);
      const double x2 = detail::sinpi(u) + detail::sinpi(v);
      if (seen.insert({x1, x2}).second) layer.push_back({x1, x2});
    }
  }
  return layer;
}

}  // namespace coevo
