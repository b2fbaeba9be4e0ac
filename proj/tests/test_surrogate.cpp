#include <cmath>
#include <cstdio>
#include <doctest.h>
#include <filesystem>

#include "coevo/surrogate.hpp"

using namespace coevo;
using doctest::Approx;

namespace {

StrategyBounds box(std::size_t n, double lo, double hi) {
  StrategyBounds b;
  b.lower.assign(n, lo);
  b.upper.assign(n, hi);
  return b;
}

std::vector<Strategy> sample_strategies(Rng& rng, std::size_t count, const StrategyBounds& b) {
  std::vector<Strategy> strategies(count);
  for (std::size_t i = 0; i < count; ++i) {
    strategies[i].id = i;
    strategies[i].values.resize(b.size());
    for (std::size_t v = 0; v < b.size(); ++v)
      strategies[i].values[v] = rng.uniform(b.lower[v], b.upper[v]);
  }
  return strategies;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(41);
  SurrogateModel m;
  m.n_in = 2;
  m.n_hidden = 3;
  m.n_out = 2;
  m.w1.resize(6);
  m.b1.resize(3);
  m.w2.resize(6);
  m.b2.resize(2);
  for (double& w : m.w1) w = rng.uniform(-1.0, 1.0);
  for (double& w : m.b1) w = rng.uniform(-1.0, 1.0);
  for (double& w : m.w2) w = rng.uniform(-1.0, 1.0);
  for (double& w : m.b2) w = rng.uniform(-1.0, 1.0);

  std::vector<std::vector<double>> x(5, std::vector<double>(2));
  std::vector<std::vector<double>> y(5, std::vector<double>(2));
  for (auto& row : x)
    for (double& v : row) v = rng.uniform();
  for (auto& row : y)
    for (double& v : row) v = rng.uniform();

  const detail::FnnGradients g = detail::fnn_gradients(m, x, y);
  const double step = 1e-5;
  const auto check_block = [&](std::vector<double>& weights, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double saved = weights[i];
      weights[i] = saved + step;
      const double up = detail::fnn_loss(m, x, y);
      weights[i] = saved - step;
      const double down = detail::fnn_loss(m, x, y);
      weights[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double denom = std::max({std::fabs(numeric), std::fabs(grad[i]), 1e-8});
      CHECK(std::fabs(numeric - grad[i]) / denom < 1e-4);
    }
  };
  check_block(m.w1, g.w1);
  check_block(m.b1, g.b1);
  check_block(m.w2, g.w2);
  check_block(m.b2, g.b2);
}

TEST_CASE("normalization round-trips") {
  Rng rng(42);
  const StrategyBounds bounds = box(3, -2.0, 4.0);
  const auto strategies = sample_strategies(rng, 20, bounds);
  std::vector<PayoffVector> targets(20);
  for (auto& t : targets) t = {rng.uniform(-3.0, 3.0), rng.uniform(10.0, 20.0)};
  SurrogateTrainingParams params;
  params.epochs = 0;  // normalization only
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);
  for (const PayoffVector& t : targets)
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double normalized = (t[k] - m.out_min[k]) / m.out_range[k];
      const double back = normalized * m.out_range[k] + m.out_min[k];
      CHECK(back == Approx(t[k]).epsilon(1e-12));
    }
}

TEST_CASE("constant targets are reproduced exactly") {
  Rng rng(43);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 12, bounds);
  const PayoffVector constant{3.5, -1.25};
  const std::vector<PayoffVector> targets(12, constant);
  SurrogateTrainingParams params;
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);
  for (const Strategy& s : strategies) {
    const PayoffVector p = m.predict(s);
    CHECK(std::fabs(p[0] - constant[0]) < 1e-3);
    CHECK(std::fabs(p[1] - constant[1]) < 1e-3);
  }
}

TEST_CASE("a single sample is interpolated") {
  Rng rng(44);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const std::vector<Strategy> strategies{{0, {0.25, 0.75}}};
  const std::vector<PayoffVector> targets{{2.0, -7.0}};
  SurrogateTrainingParams params;
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);
  const PayoffVector p = m.predict(strategies[0]);
  CHECK(std::fabs(p[0] - 2.0) < 1e-3);
  CHECK(std::fabs(p[1] + 7.0) < 1e-3);
}

TEST_CASE("training beats the batch-mean predictor on a linear target") {
  Rng rng(45);
  const StrategyBounds bounds = box(3, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 50, bounds);
  std::vector<PayoffVector> targets(50);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& v = strategies[i].values;
    targets[i] = {2.0 * v[0] - v[1] + 0.5 * v[2] + 1.0, -v[0] + 3.0 * v[2]};
  }
  SurrogateTrainingParams params;
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);

  PayoffVector mean(2, 0.0);
  for (const PayoffVector& t : targets)
    for (std::size_t k = 0; k < 2; ++k) mean[k] += t[k] / 50.0;
  double model_mse = 0.0;
  double mean_mse = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const PayoffVector p = m.predict(strategies[i]);
    for (std::size_t k = 0; k < 2; ++k) {
      model_mse += (p[k] - targets[i][k]) * (p[k] - targets[i][k]);
      mean_mse += (mean[k] - targets[i][k]) * (mean[k] - targets[i][k]);
    }
  }
  CHECK(model_mse < mean_mse);
}

TEST_CASE("prediction is deterministic and finite") {
  Rng rng(46);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 30, bounds);
  std::vector<PayoffVector> targets(30);
  for (auto& t : targets) t = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  SurrogateTrainingParams params;
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> probe{rng.uniform(), rng.uniform()};
    const PayoffVector once = m.predict(probe);
    const PayoffVector twice = m.predict(probe);
    CHECK(once == twice);
    CHECK(std::isfinite(once[0]));
    CHECK(std::isfinite(once[1]));
  }
  CHECK_THROWS_AS(m.predict(std::vector<double>{0.5}), std::invalid_argument);
}

TEST_CASE("training leaves previous models untouched") {
  Rng rng(47);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 10, bounds);
  std::vector<PayoffVector> targets(10, PayoffVector{1.0, 2.0});
  SurrogateTrainingParams params;
  const SurrogateModel first = train_surrogate(strategies, targets, bounds, params, rng);
  const SurrogateModel copy = first;
  targets.assign(10, PayoffVector{-5.0, 9.0});
  const SurrogateModel second = train_surrogate(strategies, targets, bounds, params, rng);
  CHECK(first.w1 == copy.w1);
  CHECK(first.out_min == copy.out_min);
  CHECK(second.out_min != first.out_min);
}

TEST_CASE("training validates its inputs") {
  Rng rng(48);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 4, bounds);
  SurrogateTrainingParams params;
  CHECK_THROWS_AS(
      train_surrogate(strategies, std::vector<PayoffVector>(3, {0.0, 0.0}), bounds, params, rng),
      std::invalid_argument);
  std::vector<PayoffVector> bad(4, PayoffVector{0.0, 0.0});
  bad[2][1] = std::nan("");
  CHECK_THROWS_AS(train_surrogate(strategies, bad, bounds, params, rng), std::invalid_argument);
}

TEST_CASE("model dump writes a readable header") {
  Rng rng(49);
  const StrategyBounds bounds = box(2, 0.0, 1.0);
  const auto strategies = sample_strategies(rng, 5, bounds);
  const std::vector<PayoffVector> targets(5, PayoffVector{1.0, 0.0});
  SurrogateTrainingParams params;
  params.epochs = 10;
  const SurrogateModel m = train_surrogate(strategies, targets, bounds, params, rng);
  const auto path = std::filesystem::temp_directory_path() / "coevo_fnn_dump_test.txt";
  dump_surrogate(m, path);
  std::ifstream in(path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  int n_in = 0;
  int n_hidden = 0;
  int n_out = 0;
  in >> n_in >> n_hidden >> n_out;
  CHECK(magic == "coevo-fnn");
  CHECK(version == 1);
  CHECK(n_in == 2);
  CHECK(n_hidden == 10);
  CHECK(n_out == 2);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
