#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "coevo/types.hpp"

// Per-player surrogate of the ideal-point map: a one-hidden-layer tanh
// network trained by full-batch gradient descent on min-max normalized
// data. Models are retrained from scratch every generation on that
// generation's survivors only; no data is accumulated across generations.

namespace coevo {

struct SurrogateTrainingParams {
  int hidden_units = 10;
  int epochs = 500;
  double learning_rate = 0.05;
  double init_weight_range = 0.5;

  void validate() const {
    if (hidden_units < 1) throw std::invalid_argument("surrogate: hidden_units must be >= 1");
    if (epochs < 0) throw std::invalid_argument("surrogate: epochs must be >= 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("surrogate: learning_rate must be > 0");
    if (!(init_weight_range > 0.0))
      throw std::invalid_argument("surrogate: init_weight_range must be > 0");
  }
};

/// Trained regression from one player's strategy space to that player's
/// approximated ideal point. Immutable once trained; safe for concurrent
/// prediction.
struct SurrogateModel {
  // Input map x -> (x - in_lo) * in_scale, built from the per-variable
  // min/max of the training batch. Normalizing by the full bounds instead
  // starves the network of within-cluster variation once the population
  // concentrates, leaving it with noise slopes in those variables.
  std::vector<double> in_lo;
  std::vector<double> in_scale;
  // Per-variable extent of the training batch; the region where the model
  // has seen data. Zero marks a constant input variable.
  std::vector<double> in_span;
  // Per-objective batch min and range. A zero range marks a degenerate
  // objective whose prediction de-normalizes to the constant.
  std::vector<double> out_min;
  std::vector<double> out_range;

  int n_in = 0;
  int n_hidden = 0;
  int n_out = 0;
  std::vector<double> w1;  // n_hidden x n_in, row-major
  std::vector<double> b1;
  std::vector<double> w2;  // n_out x n_hidden, row-major
  std::vector<double> b2;

  int epochs_run = 0;
  double final_loss = 0.0;
  // Fraction of the normalized target variance the trained network
  // explains, clamped to [0, 1]. Refinement scales its trust region by
  // this, so an uninformative model cannot push strategies around.
  double r_squared = 0.0;

  PayoffVector predict(std::span<const double> values) const;
  PayoffVector predict(const Strategy& s) const { return predict(s.values); }
};

namespace detail {

inline void fnn_forward(const SurrogateModel& m, std::span<const double> x_norm,
                        std::vector<double>& hidden, std::vector<double>& out) {
  hidden.resize(static_cast<std::size_t>(m.n_hidden));
  out.resize(static_cast<std::size_t>(m.n_out));
  for (int j = 0; j < m.n_hidden; ++j) {
    double a = m.b1[static_cast<std::size_t>(j)];
    const double* row = m.w1.data() + static_cast<std::size_t>(j) * m.n_in;
    for (int i = 0; i < m.n_in; ++i) a += row[i] * x_norm[static_cast<std::size_t>(i)];
    hidden[static_cast<std::size_t>(j)] = std::tanh(a);
  }
  for (int o = 0; o < m.n_out; ++o) {
    double a = m.b2[static_cast<std::size_t>(o)];
    const double* row = m.w2.data() + static_cast<std::size_t>(o) * m.n_hidden;
    for (int j = 0; j < m.n_hidden; ++j) a += row[j] * hidden[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(o)] = a;
  }
}

/// Mean squared error over the normalized batch (mean over samples and
/// output dimensions).
inline double fnn_loss(const SurrogateModel& m, std::span<const std::vector<double>> x,
                       std::span<const std::vector<double>> y) {
  std::vector<double> hidden;
  std::vector<double> out;
  double total = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    fnn_forward(m, x[s], hidden, out);
    for (int o = 0; o < m.n_out; ++o) {
      const double d = out[static_cast<std::size_t>(o)] - y[s][static_cast<std::size_t>(o)];
      total += d * d;
    }
  }
  return total / (static_cast<double>(x.size()) * m.n_out);
}

struct FnnGradients {
  std::vector<double> w1, b1, w2, b2;
};

/// Analytic gradients of fnn_loss with respect to every weight and bias.
inline FnnGradients fnn_gradients(const SurrogateModel& m,
                                  std::span<const std::vector<double>> x,
                                  std::span<const std::vector<double>> y) {
  FnnGradients g;
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.w2.assign(m.w2.size(), 0.0);
  g.b2.assign(m.b2.size(), 0.0);
  std::vector<double> hidden;
  std::vector<double> out;
  std::vector<double> delta_out(static_cast<std::size_t>(m.n_out));
  std::vector<double> delta_hidden(static_cast<std::size_t>(m.n_hidden));
  const double scale = 2.0 / (static_cast<double>(x.size()) * m.n_out);
  for (std::size_t s = 0; s < x.size(); ++s) {
    fnn_forward(m, x[s], hidden, out);
    for (int o = 0; o < m.n_out; ++o) {
      delta_out[static_cast<std::size_t>(o)] =
          scale * (out[static_cast<std::size_t>(o)] - y[s][static_cast<std::size_t>(o)]);
    }
    for (int j = 0; j < m.n_hidden; ++j) {
      double back = 0.0;
      for (int o = 0; o < m.n_out; ++o)
        back += delta_out[static_cast<std::size_t>(o)] *
                m.w2[static_cast<std::size_t>(o) * m.n_hidden + j];
      const double h = hidden[static_cast<std::size_t>(j)];
      delta_hidden[static_cast<std::size_t>(j)] = back * (1.0 - h * h);
    }
    for (int o = 0; o < m.n_out; ++o) {
      g.b2[static_cast<std::size_t>(o)] += delta_out[static_cast<std::size_t>(o)];
      for (int j = 0; j < m.n_hidden; ++j)
        g.w2[static_cast<std::size_t>(o) * m.n_hidden + j] +=
            delta_out[static_cast<std::size_t>(o)] * hidden[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < m.n_hidden; ++j) {
      g.b1[static_cast<std::size_t>(j)] += delta_hidden[static_cast<std::size_t>(j)];
      for (int i = 0; i < m.n_in; ++i)
        g.w1[static_cast<std::size_t>(j) * m.n_in + i] +=
            delta_hidden[static_cast<std::size_t>(j)] * x[s][static_cast<std::size_t>(i)];
    }
  }
  return g;
}

}  // namespace detail

inline PayoffVector SurrogateModel::predict(std::span<const double> values) const {
  if (static_cast<int>(values.size()) != n_in)
    throw std::invalid_argument("surrogate predict: input dimension mismatch");
  std::vector<double> x_norm(values.size());
  for (int i = 0; i < n_in; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    x_norm[si] = in_span[si] == 0.0 ? 0.5 : (values[si] - in_lo[si]) * in_scale[si];
  }
  std::vector<double> hidden;
  std::vector<double> out;
  detail::fnn_forward(*this, x_norm, hidden, out);
  PayoffVector result(static_cast<std::size_t>(n_out));
  for (int o = 0; o < n_out; ++o) {
    const std::size_t so = static_cast<std::size_t>(o);
    result[so] = out_range[so] == 0.0 ? out_min[so] : out[so] * out_range[so] + out_min[so];
  }
  return result;
}

/// Fits a fresh model to the supplied batch only. Inputs are the strategy
/// vectors, targets the corresponding ideal points.
inline SurrogateModel train_surrogate(std::span<const Strategy> strategies,
                                      std::span<const PayoffVector> targets,
                                      const StrategyBounds& bounds,
                                      const SurrogateTrainingParams& params, Rng& rng) {
  params.validate();
  if (strategies.empty() || strategies.size() != targets.size())
    throw std::invalid_argument("train_surrogate: need equally many strategies and targets");
  const std::size_t n_in = strategies.front().values.size();
  const std::size_t n_out = targets.front().size();
  if (n_in != bounds.size())
    throw std::invalid_argument("train_surrogate: strategy length does not match bounds");
  for (const Strategy& s : strategies)
    if (s.values.size() != n_in)
      throw std::invalid_argument("train_surrogate: mixed strategy dimensions");
  for (const PayoffVector& t : targets) {
    if (t.size() != n_out)
      throw std::invalid_argument("train_surrogate: mixed target dimensions");
    for (double v : t)
      if (!std::isfinite(v)) throw std::invalid_argument("train_surrogate: non-finite target");
  }

  SurrogateModel m;
  m.n_in = static_cast<int>(n_in);
  m.n_hidden = params.hidden_units;
  m.n_out = static_cast<int>(n_out);
  m.in_lo.resize(n_in);
  m.in_scale.resize(n_in);
  m.in_span.resize(n_in);
  for (std::size_t i = 0; i < n_in; ++i) {
    double lo = strategies.front().values[i];
    double hi = lo;
    for (const Strategy& s : strategies) {
      lo = std::min(lo, s.values[i]);
      hi = std::max(hi, s.values[i]);
    }
    m.in_lo[i] = lo;
    m.in_span[i] = hi - lo;
    m.in_scale[i] = m.in_span[i] > 0.0 ? 1.0 / m.in_span[i] : 0.0;
  }
  m.out_min.assign(n_out, 0.0);
  m.out_range.assign(n_out, 0.0);
  for (std::size_t k = 0; k < n_out; ++k) {
    double lo = targets.front()[k];
    double hi = lo;
    for (const PayoffVector& t : targets) {
      lo = std::min(lo, t[k]);
      hi = std::max(hi, t[k]);
    }
    m.out_min[k] = lo;
    m.out_range[k] = hi - lo;
  }

  const auto init = [&] { return rng.uniform(-params.init_weight_range, params.init_weight_range); };
  m.w1.resize(static_cast<std::size_t>(m.n_hidden) * m.n_in);
  m.b1.resize(static_cast<std::size_t>(m.n_hidden));
  m.w2.resize(static_cast<std::size_t>(m.n_out) * m.n_hidden);
  m.b2.resize(static_cast<std::size_t>(m.n_out));
  for (double& w : m.w1) w = init();
  for (double& w : m.b1) w = init();
  for (double& w : m.w2) w = init();
  for (double& w : m.b2) w = init();

  std::vector<std::vector<double>> x(strategies.size());
  std::vector<std::vector<double>> y(strategies.size());
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    x[s].resize(n_in);
    for (std::size_t i = 0; i < n_in; ++i)
      x[s][i] = m.in_span[i] == 0.0
                    ? 0.5
                    : (strategies[s].values[i] - m.in_lo[i]) * m.in_scale[i];
    y[s].resize(n_out);
    for (std::size_t k = 0; k < n_out; ++k)
      y[s][k] = m.out_range[k] == 0.0 ? 0.5 : (targets[s][k] - m.out_min[k]) / m.out_range[k];
  }

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const detail::FnnGradients g = detail::fnn_gradients(m, x, y);
    for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= params.learning_rate * g.w1[i];
    for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= params.learning_rate * g.b1[i];
    for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= params.learning_rate * g.w2[i];
    for (std::size_t i = 0; i < m.b2.size(); ++i) m.b2[i] -= params.learning_rate * g.b2[i];
  }
  m.epochs_run = params.epochs;
  m.final_loss = detail::fnn_loss(m, x, y);

  std::vector<double> y_mean(n_out, 0.0);
  for (const auto& row : y)
    for (std::size_t k = 0; k < n_out; ++k) y_mean[k] += row[k] / static_cast<double>(y.size());
  double y_var = 0.0;
  for (const auto& row : y)
    for (std::size_t k = 0; k < n_out; ++k) {
      const double d = row[k] - y_mean[k];
      y_var += d * d / (static_cast<double>(y.size()) * static_cast<double>(n_out));
    }
  m.r_squared = y_var > 0.0 ? std::clamp(1.0 - m.final_loss / y_var, 0.0, 1.0) : 0.0;
  return m;
}

/// Debug dump: dimension header followed by the normalization maps and
/// row-major weights as decimal text.
inline void dump_surrogate(const SurrogateModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_surrogate: cannot open " + path.string());
  out.precision(17);
  out << "coevo-fnn 1\n";
  out << m.n_in << ' ' << m.n_hidden << ' ' << m.n_out << ' ' << m.epochs_run << ' '
      << m.final_loss << '\n';
  const auto line = [&out](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
  };
  line(m.in_lo);
  line(m.in_scale);
  line(m.in_span);
  line(m.out_min);
  line(m.out_range);
  line(m.w1);
  line(m.b1);
  line(m.w2);
  line(m.b2);
  if (!out) throw std::runtime_error("dump_surrogate: write failed for " + path.string());
}

}  // namespace coevo
