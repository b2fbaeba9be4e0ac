#include <cmath>
#include <doctest.h>

#include "coevo/games.hpp"

using namespace coevo;
using doctest::Approx;

TEST_SUITE("games") {

TEST_CASE("variant names round-trip and parsing rejects unknowns") {
  for (Variant v : all_variants()) CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_WITH_AS(parse_variant("Sphere5D"),
                       doctest::Contains("valid: Base, Rosenbrock2D"), std::invalid_argument);
}

TEST_CASE("base payoff map") {
  const PayoffVector a = evaluate_base(M_PI, 0.0);
  CHECK(std::fabs(a[0]) <= 1e-15);
  CHECK(std::fabs(a[1]) <= 1e-15);
  const PayoffVector b = evaluate_base(M_PI, M_PI / 2.0);
  CHECK(b[0] == Approx(-1.0));
  CHECK(b[1] == Approx(1.0));
  const PayoffVector c = evaluate_base(0.0, 0.0);
  CHECK(c[0] == 2.0);
  CHECK(c[1] == 0.0);
  CHECK_THROWS_AS(evaluate_base(std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("base payoff components stay within [-2, 2]") {
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    const PayoffVector p = evaluate_base(rng.uniform(0, 2 * M_PI), rng.uniform(0, 2 * M_PI));
    CHECK(std::fabs(p[0]) <= 2.0);
    CHECK(std::fabs(p[1]) <= 2.0);
  }
}

TEST_CASE("embedded function values") {
  CHECK(phi({PhiFamily::Rosenbrock, 2}, std::vector<double>{1.0, 1.0}) == 0.0);
  CHECK(phi({PhiFamily::Rosenbrock, 3}, std::vector<double>{1.0, 1.0, 1.0}) == 0.0);
  CHECK(phi({PhiFamily::Rastrigin, 1}, std::vector<double>{0.5}) == Approx(20.25));
  CHECK(phi({PhiFamily::Rastrigin, 2}, std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(phi({PhiFamily::Griewank, 3}, std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  CHECK(phi({PhiFamily::Ackley, 2}, std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(phi({PhiFamily::Rastrigin, 2}, std::vector<double>{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi({PhiFamily::Rosenbrock, 1}, std::vector<double>{0.0}),
                  std::invalid_argument);
}

TEST_CASE("embedded functions are non-negative on their domains") {
  Rng rng(12);
  for (Variant v : all_variants()) {
    const GameDefinition game = make_game(v);
    if (!game.phi_kind) continue;
    const double half = phi_domain_halfwidth(game.phi_kind->family);
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> z(static_cast<std::size_t>(game.phi_kind->dimension));
      for (double& x : z) x = rng.uniform(-half, half);
      CHECK(phi(*game.phi_kind, z) >= 0.0);
    }
  }
}

TEST_CASE("game layouts") {
  const GameDefinition base = make_game(Variant::Base);
  CHECK(base.bounds_p1.size() == 1);
  CHECK(base.sense_p1 == Sense::Minimize);
  CHECK(base.sense_p2 == Sense::Maximize);

  const GameDefinition rosenbrock3 = make_game(Variant::Rosenbrock3D);
  CHECK(rosenbrock3.bounds_p1.size() == 5);  // theta, F, z1..z3
  CHECK(rosenbrock3.bounds_p1.lower[0] == 0.0);
  CHECK(rosenbrock3.bounds_p1.upper[0] == Approx(2 * M_PI));
  CHECK(rosenbrock3.bounds_p1.lower[1] == 0.0);
  CHECK(rosenbrock3.bounds_p1.upper[1] == 1.0);
  CHECK(rosenbrock3.bounds_p1.lower[2] == -2.048);
  CHECK(rosenbrock3.bounds_p1.upper[2] == 2.048);

  const GameDefinition rastrigin1 = make_game(Variant::Rastrigin1D);
  CHECK(rastrigin1.bounds_p1.size() == 3);
  CHECK(rastrigin1.bounds_p1.upper[2] == 5.12);
  const GameDefinition griewank2 = make_game(Variant::Griewank2D);
  CHECK(griewank2.bounds_p1.size() == 4);
  CHECK(griewank2.bounds_p1.upper[2] == 600.0);
  const GameDefinition ackley2 = make_game(Variant::Ackley2D);
  CHECK(ackley2.bounds_p1.size() == 4);
  CHECK(ackley2.bounds_p1.upper[2] == 32.768);
}

TEST_CASE("extended payoff map") {
  const GameDefinition game = make_game(Variant::Rastrigin1D);

  const Strategy at_minimum{0, {M_PI, 1.0, 0.0}};
  const Strategy opponent{1, {0.0, 1.0, 0.0}};
  const PayoffVector reduced = evaluate_extended(at_minimum, opponent, game);
  CHECK(std::fabs(reduced[0]) <= 1e-15);
  CHECK(std::fabs(reduced[1]) <= 1e-15);

  const Strategy off_minimum{2, {M_PI, 1.0, 0.5}};
  const PayoffVector damped = evaluate_extended(off_minimum, opponent, game);
  CHECK(damped[0] == Approx(1.0 - 1.0 / 21.25).epsilon(1e-12));
  CHECK(std::fabs(damped[1]) <= 1e-12);

  const Strategy no_force_1{3, {1.0, 0.0, 2.0}};
  const Strategy no_force_2{4, {2.0, 0.0, -2.0}};
  const PayoffVector zero = evaluate_extended(no_force_1, no_force_2, game);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  const Strategy wrong_layout{5, {0.0}};
  CHECK_THROWS_AS(evaluate_extended(wrong_layout, opponent, game), std::invalid_argument);
}

TEST_CASE("extended map reduces to the base map at unit force and function minima") {
  Rng rng(13);
  for (Variant v : all_variants()) {
    const GameDefinition game = make_game(v);
    if (!game.phi_kind) continue;
    const double z_min = phi_minimizer_value(game.phi_kind->family);
    for (int i = 0; i < 500; ++i) {
      const double theta1 = rng.uniform(0, 2 * M_PI);
      const double theta2 = rng.uniform(0, 2 * M_PI);
      std::vector<double> s1{theta1, 1.0};
      std::vector<double> s2{theta2, 1.0};
      for (int d = 0; d < game.phi_kind->dimension; ++d) {
        s1.push_back(z_min);
        s2.push_back(z_min);
      }
      const PayoffVector extended = evaluate(game, s1, s2);
      const PayoffVector base = evaluate_base(theta1, theta2);
      CHECK(extended[0] == base[0]);
      CHECK(extended[1] == base[1]);
    }
  }
}

TEST_CASE("reference layer at resolution 2") {
  const GameDefinition game = make_game(Variant::Base);
  const auto layer = reference_pareto_layer(game, 2);
  REQUIRE(layer.size() == 3);  // the two zero corners collide exactly
  CHECK(layer[0] == PayoffVector{0.0, 0.0});
  CHECK(layer[1] == PayoffVector{-1.0, 1.0});
  CHECK(layer[2] == PayoffVector{1.0, -1.0});
  CHECK_THROWS_AS(reference_pareto_layer(game, 1), std::invalid_argument);
}

TEST_CASE("reference layer is identical across variants and stays in the unit box") {
  const auto base_layer = reference_pareto_layer(make_game(Variant::Base), 40);
  const auto ackley_layer = reference_pareto_layer(make_game(Variant::Ackley2D), 40);
  CHECK(base_layer == ackley_layer);
  // The grid anti-diagonal (theta1 = theta2 + pi) maps to the origin, so up
  // to 39 of the 1600 grid points can collide under exact-equality
  // deduplication; rounding keeps some of them distinct.
  CHECK(base_layer.size() <= 40 * 40 - 1);
  CHECK(base_layer.size() >= 40 * 40 - 39);
  for (const PayoffVector& p : base_layer) {
    // Rationalizable angles put each component in [-1, 1].
    CHECK(p[0] >= -1.0);
    CHECK(p[0] <= 1.0);
    CHECK(p[1] >= -1.0);
    CHECK(p[1] <= 1.0);
  }
}

}  // TEST_SUITE
