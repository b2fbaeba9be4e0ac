#pragma once

#include <span>
#include <vector>

#include "coevo/types.hpp"

// Domination relations between payoff vectors and payoff sets, anti-optimal
// front extraction and its ideal-point reduction. All comparisons are exact
// floating-point comparisons; evolutionary ranking only needs a consistent
// partial order and an epsilon would change front membership unpredictably.

namespace coevo {

namespace detail {

inline void require_same_dimension(const PayoffVector& f, const PayoffVector& h) {
  if (f.size() != h.size())
    throw std::invalid_argument("payoff vectors differ in dimension");
}

}  // namespace detail

/// Vector domination. In a maximization comparison f dominates h iff
/// f >= h in every objective and f > h in at least one; minimization
/// mirrors the relation with <= / <.
inline bool dominates(const PayoffVector& f, const PayoffVector& h, Sense sense) {
  detail::require_same_dimension(f, h);
  bool strict = false;
  if (sense == Sense::Maximize) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] < h[k]) return false;
      if (f[k] > h[k]) strict = true;
    }
  } else {
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] > h[k]) return false;
      if (f[k] < h[k]) strict = true;
    }
  }
  return strict;
}

/// Set F dominates set H when every member of H is dominated by some
/// member of F.
inline bool set_dominates(std::span<const PayoffVector> F, std::span<const PayoffVector> H,
                          Sense sense) {
  if (F.empty() || H.empty())
    throw std::invalid_argument("set domination over an empty set");
  for (const auto& h : H) {
    bool covered = false;
    for (const auto& f : F) {
      if (dominates(f, h, sense)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

/// Pessimistic ordering between anti-optimal fronts: for a minimizing
/// player F worst-case dominates H when H dominates F in the maximization
/// sense, and symmetrically for a maximizing player.
inline bool worst_case_dominates(std::span<const PayoffVector> F, std::span<const PayoffVector> H,
                                 Sense player_sense) {
  return player_sense == Sense::Minimize ? set_dominates(H, F, Sense::Maximize)
                                         : set_dominates(H, F, Sense::Minimize);
}

/// Indices of all points not dominated by any other point. Duplicates of a
/// front member are all retained, which keeps the extraction independent of
/// input order.
inline std::vector<std::size_t> non_dominated_front(std::span<const PayoffVector> points,
                                                    Sense sense) {
  if (points.empty())
    throw std::invalid_argument("non_dominated_front: empty input");
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i && dominates(points[j], points[i], sense)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

/// Component-wise extreme of a front in the opponent's sense: per-objective
/// maximum for a maximizing opponent, minimum for a minimizing one.
inline PayoffVector ideal_point(std::span<const PayoffVector> front, Sense opponent_sense) {
  if (front.empty())
    throw std::invalid_argument("ideal_point: empty front");
  PayoffVector extreme = front.front();
  for (std::size_t i = 1; i < front.size(); ++i) {
    detail::require_same_dimension(front[i], extreme);
    for (std::size_t k = 0; k < extreme.size(); ++k) {
      if (opponent_sense == Sense::Maximize) {
        if (front[i][k] > extreme[k]) extreme[k] = front[i][k];
      } else {
        if (front[i][k] < extreme[k]) extreme[k] = front[i][k];
      }
    }
  }
  return extreme;
}

}  // namespace coevo
