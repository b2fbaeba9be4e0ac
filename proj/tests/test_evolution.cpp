#include <cmath>
#include <doctest.h>

#include "coevo/evolution.hpp"
#include "oracles.hpp"

using namespace coevo;
using doctest::Approx;

namespace {

StrategyBounds unit_bounds(std::size_t n) {
  StrategyBounds b;
  b.lower.assign(n, 0.0);
  b.upper.assign(n, 1.0);
  return b;
}

Individual with_ideal(std::uint64_t id, PayoffVector ideal) {
  Individual ind;
  ind.strategy.id = id;
  ind.ideal_point = std::move(ideal);
  return ind;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("sbx spread-factor identities") {
  // u = 0.5 keeps the children on the parents.
  CHECK(detail::sbx_spread(0.5, 20.0) == Approx(1.0));
  auto [same1, same2] = detail::sbx_blend(0.2, 0.8, 1.0);
  CHECK(same1 == Approx(0.2));
  CHECK(same2 == Approx(0.8));
  // u -> 0 collapses both children onto the parents' midpoint.
  auto [mid1, mid2] = detail::sbx_blend(0.2, 0.8, detail::sbx_spread(0.0, 20.0));
  CHECK(mid1 == Approx(0.5));
  CHECK(mid2 == Approx(0.5));
}

TEST_CASE("sbx preserves the parent mean before clipping") {
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const double x1 = rng.uniform(0.3, 0.7);
    const double x2 = rng.uniform(0.3, 0.7);
    const double beta = detail::sbx_spread(rng.uniform(), 20.0);
    auto [c1, c2] = detail::sbx_blend(x1, x2, beta);
    CHECK(c1 + c2 == Approx(x1 + x2).epsilon(1e-12));
  }
}

TEST_CASE("sbx with identical parents returns the parent") {
  const StrategyBounds bounds = unit_bounds(4);
  VariationParams params;
  Rng rng(22);
  IdSource ids;
  const Strategy parent{ids.next(), {0.1, 0.4, 0.9, 0.5}};
  for (int i = 0; i < 50; ++i) {
    auto [c1, c2] = sbx_crossover(parent, parent, params, bounds, rng, ids);
    CHECK(c1.values == parent.values);
    CHECK(c2.values == parent.values);
    CHECK(c1.id != c2.id);
    CHECK(c1.id != parent.id);
  }
}

TEST_CASE("sbx validates parents") {
  const StrategyBounds bounds = unit_bounds(2);
  VariationParams params;
  Rng rng(23);
  IdSource ids;
  const Strategy inside{0, {0.5, 0.5}};
  const Strategy outside{1, {1.5, 0.5}};
  const Strategy short_one{2, {0.5}};
  CHECK_THROWS_AS(sbx_crossover(inside, outside, params, bounds, rng, ids),
                  std::invalid_argument);
  CHECK_THROWS_AS(sbx_crossover(inside, short_one, params, bounds, rng, ids),
                  std::invalid_argument);
}

TEST_CASE("polynomial mutation closed-form cases") {
  // u = 0.5 leaves the variable unchanged.
  CHECK(detail::pm_perturbed(0.3, 0.0, 1.0, 0.5, 20.0) == Approx(0.3));
  // u -> 1 pushes a centered variable all the way to the upper bound.
  CHECK(detail::pm_perturbed(0.5, 0.0, 1.0, 1.0, 20.0) == Approx(1.0).epsilon(1e-12));
  // Mirrored: u -> 0 reaches the lower bound.
  CHECK(detail::pm_perturbed(0.5, 0.0, 1.0, 0.0, 20.0) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("polynomial mutation with zero probability is a value no-op") {
  const StrategyBounds bounds = unit_bounds(3);
  VariationParams params;
  params.p_mutation_per_variable = 0.0;
  Rng rng(24);
  IdSource ids;
  const Strategy s{ids.next(), {0.2, 0.5, 0.8}};
  const Strategy mutated = polynomial_mutation(s, params, bounds, rng, ids);
  CHECK(mutated.values == s.values);
  CHECK(mutated.id != s.id);
}

TEST_CASE("operators respect bounds under fuzzing") {
  StrategyBounds bounds;
  bounds.lower = {-1.0, 0.0, 5.0};
  bounds.upper = {2.0, 0.25, 9.0};
  VariationParams params;
  Rng rng(25);
  IdSource ids;
  for (int i = 0; i < 2000; ++i) {
    Strategy p1{ids.next(), {}};
    Strategy p2{ids.next(), {}};
    for (std::size_t v = 0; v < bounds.size(); ++v) {
      p1.values.push_back(rng.uniform(bounds.lower[v], bounds.upper[v]));
      p2.values.push_back(rng.uniform(bounds.lower[v], bounds.upper[v]));
    }
    auto [c1, c2] = sbx_crossover(p1, p2, params, bounds, rng, ids);
    CHECK(bounds.contains(c1.values));
    CHECK(bounds.contains(c2.values));
    const Strategy m = polynomial_mutation(c1, params, bounds, rng, ids);
    CHECK(bounds.contains(m.values));
  }
}

TEST_CASE("operators are deterministic for a fixed seed") {
  const StrategyBounds bounds = unit_bounds(5);
  VariationParams params;
  const Strategy p1{100, {0.1, 0.2, 0.3, 0.4, 0.5}};
  const Strategy p2{101, {0.9, 0.8, 0.7, 0.6, 0.5}};
  const auto run_once = [&] {
    Rng rng(77);
    IdSource ids;
    auto [c1, c2] = sbx_crossover(p1, p2, params, bounds, rng, ids);
    const Strategy m = polynomial_mutation(c1, params, bounds, rng, ids);
    return std::tuple{c1.values, c2.values, m.values, m.id};
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("fast non-dominated sort") {
  CHECK(fast_nondominated_sort({{{1, 1}, {2, 2}, {3, 3}}}, Sense::Minimize) ==
        std::vector<int>{0, 1, 2});
  CHECK(fast_nondominated_sort({{{1, 2}, {2, 1}}}, Sense::Minimize) == std::vector<int>{0, 0});
  CHECK_THROWS_AS(fast_nondominated_sort({}, Sense::Minimize), std::invalid_argument);

  Rng rng(26);
  const auto points = oracle::random_points(rng, 15, 2);
  CHECK(fast_nondominated_sort(points, Sense::Minimize) ==
        oracle::peel_ranks(points, Sense::Minimize));
}

TEST_CASE("sorting matches brute-force peeling on random instances") {
  Rng rng(27);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t count = 1 + rng.index(20);
    const std::size_t dim = 2 + rng.index(3);
    auto points = oracle::random_points(rng, count, dim);
    // Snap some coordinates to a coarse grid so exact duplicates occur.
    if (rng.bernoulli(0.5))
      for (auto& p : points)
        for (double& v : p) v = std::round(v);
    const Sense sense = rng.bernoulli(0.5) ? Sense::Maximize : Sense::Minimize;
    CHECK(fast_nondominated_sort(points, sense) == oracle::peel_ranks(points, sense));
  }
}

TEST_CASE("crowding distance") {
  const auto two = crowding_distance({{{0, 0}, {1, 1}}});
  CHECK(std::isinf(two[0]));
  CHECK(std::isinf(two[1]));

  const auto three = crowding_distance({{{0, 0}, {1, 1}, {2, 2}}});
  CHECK(std::isinf(three[0]));
  CHECK(three[1] == Approx(2.0));
  CHECK(std::isinf(three[2]));

  const auto one = crowding_distance({{{3, 4}}});
  CHECK(std::isinf(one[0]));

  // A constant objective contributes nothing to interior points.
  const auto flat = crowding_distance({{{0, 5}, {1, 5}, {2, 5}}});
  CHECK(flat[1] == Approx(1.0));
}

TEST_CASE("environmental selection keeps whole pools and whole fronts") {
  std::vector<Individual> pool;
  pool.push_back(with_ideal(0, {0, 2}));
  pool.push_back(with_ideal(1, {2, 0}));
  const auto all = environmental_selection(pool, 2, Sense::Minimize);
  REQUIRE(all.size() == 2);
  CHECK(all[0].strategy.id == 0);
  CHECK(all[1].strategy.id == 1);
  CHECK(all[0].rank == 0);

  pool.clear();
  pool.push_back(with_ideal(0, {0, 1}));
  pool.push_back(with_ideal(1, {1, 0}));
  pool.push_back(with_ideal(2, {5, 5}));
  pool.push_back(with_ideal(3, {6, 6}));
  const auto survivors = environmental_selection(pool, 2, Sense::Minimize);
  REQUIRE(survivors.size() == 2);
  CHECK(survivors[0].strategy.id == 0);
  CHECK(survivors[1].strategy.id == 1);
}

TEST_CASE("environmental selection truncates by crowding") {
  std::vector<Individual> pool;
  pool.push_back(with_ideal(10, {0, 2}));
  pool.push_back(with_ideal(11, {1, 1}));
  pool.push_back(with_ideal(12, {2, 0}));
  const auto survivors = environmental_selection(pool, 2, Sense::Minimize);
  REQUIRE(survivors.size() == 2);
  // The interior point loses to the two infinite-crowding boundary points.
  CHECK(survivors[0].strategy.id == 10);
  CHECK(survivors[1].strategy.id == 12);
}

TEST_CASE("environmental selection requires ideal points") {
  std::vector<Individual> pool(1);
  pool[0].strategy.id = 0;
  CHECK_THROWS_AS(environmental_selection(pool, 1, Sense::Minimize), std::logic_error);
}

TEST_CASE("selection is elitist") {
  Rng rng(28);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t count = 2 + rng.index(19);
    const std::size_t mu = 1 + rng.index(count);
    std::vector<Individual> pool;
    for (std::size_t i = 0; i < count; ++i) {
      PayoffVector ideal{static_cast<double>(rng.index(6)), static_cast<double>(rng.index(6))};
      pool.push_back(with_ideal(i, std::move(ideal)));
    }
    const auto survivors = environmental_selection(pool, mu, Sense::Minimize);
    REQUIRE(survivors.size() == mu);

    std::vector<bool> kept(count, false);
    for (const Individual& s : survivors) kept[s.strategy.id] = true;
    int worst_kept_rank = -1;
    double min_kept_crowding_at_worst = std::numeric_limits<double>::infinity();
    for (const Individual& s : survivors) {
      if (*s.rank > worst_kept_rank) {
        worst_kept_rank = *s.rank;
        min_kept_crowding_at_worst = *s.crowding;
      } else if (*s.rank == worst_kept_rank) {
        min_kept_crowding_at_worst = std::min(min_kept_crowding_at_worst, *s.crowding);
      }
    }
    // Discarded members must not beat any survivor lexicographically.
    std::vector<PayoffVector> points;
    for (const Individual& ind : pool) points.push_back(*ind.ideal_point);
    const auto ranks = fast_nondominated_sort(points, Sense::Minimize);
    for (std::size_t i = 0; i < count; ++i) {
      if (kept[i]) continue;
      CHECK(ranks[i] >= worst_kept_rank);
    }
  }
}

}  // TEST_SUITE
