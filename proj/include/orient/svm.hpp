#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "orient/error.hpp"

namespace orient {

struct SvmHyperParams {
  int epochs = 200;
  double learning_rate = 0.5;
  double lambda = 1e-4;  // L2 strength
  std::uint64_t seed = 7;
  friend bool operator==(const SvmHyperParams&, const SvmHyperParams&) = default;
};

/// Linear one-vs-rest classifier over `Dim` features and `Classes` labels.
template <std::size_t Dim, std::size_t Classes>
struct OneVsRestSvm {
  using Features = std::array<double, Dim>;

  std::array<Features, Classes> weights{};
  std::array<double, Classes> biases{};
  SvmHyperParams hp;
  /// Summed objective of all binary problems after each epoch, starting with
  /// the initial (all-zero) model.
  std::vector<double> loss_history;

  std::array<double, Classes> decision_values(const Features& f) const {
    std::array<double, Classes> out{};
    for (std::size_t c = 0; c < Classes; ++c) {
      double s = biases[c];
      for (std::size_t i = 0; i < Dim; ++i) s += weights[c][i] * f[i];
      out[c] = s;
    }
    return out;
  }

  /// Best class (lowest index wins ties) and its lead over the runner-up.
  std::pair<std::size_t, double> predict(const Features& f) const {
    const auto v = decision_values(f);
    std::size_t best = 0;
    for (std::size_t c = 1; c < Classes; ++c)
      if (v[c] > v[best]) best = c;
    double second = -INFINITY;
    for (std::size_t c = 0; c < Classes; ++c)
      if (c != best && v[c] > second) second = v[c];
    return {best, Classes > 1 ? v[best] - second : 0.0};
  }
};

namespace detail {

template <std::size_t Dim>
double binary_objective(std::span<const std::array<double, Dim>> x, std::span<const double> y,
                        const std::array<double, Dim>& w, double b, double lambda) {
  double reg = 0.0;
  for (double wi : w) reg += wi * wi;
  double hinge = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double s = b;
    for (std::size_t i = 0; i < Dim; ++i) s += w[i] * x[n][i];
    hinge += std::max(0.0, 1.0 - y[n] * s);
  }
  return 0.5 * lambda * reg + hinge / static_cast<double>(x.size());
}

/// Fisher-Yates on a fixed engine so the order is identical on every platform.
inline void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace detail

/// Hinge-loss sub-gradient descent, one binary problem per class. Each epoch
/// walks a seeded shuffle of the data; an epoch that raises the objective is
/// rolled back and the step halved, so the objective never increases.
template <std::size_t Dim, std::size_t Classes>
OneVsRestSvm<Dim, Classes> train_one_vs_rest(std::span<const std::array<double, Dim>> x,
                                             std::span<const std::size_t> labels, const SvmHyperParams& hp) {
  if (x.size() != labels.size()) throw Error(ErrorKind::InvalidConfig, "feature and label counts differ");
  if (hp.epochs < 0 || !(hp.learning_rate > 0.0) || !(hp.lambda >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "invalid SVM hyperparameters");
  std::array<std::size_t, Classes> counts{};
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (labels[n] >= Classes) throw Error(ErrorKind::InvalidConfig, "label out of range");
    ++counts[labels[n]];
    for (double v : x[n])
      if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteFeature, "sample " + std::to_string(n));
  }
  for (std::size_t c = 0; c < Classes; ++c)
    if (counts[c] == 0) throw Error(ErrorKind::MissingClass, "no samples for class " + std::to_string(c));

  OneVsRestSvm<Dim, Classes> model;
  model.hp = hp;
  std::array<std::vector<double>, Classes> targets;
  std::array<double, Classes> objective{};
  std::array<double, Classes> backoff{};
  for (std::size_t c = 0; c < Classes; ++c) {
    targets[c].resize(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) targets[c][n] = labels[n] == c ? 1.0 : -1.0;
    objective[c] = detail::binary_objective<Dim>(x, targets[c], model.weights[c], model.biases[c], hp.lambda);
    backoff[c] = 1.0;
  }
  auto total = [&] {
    double s = 0.0;
    for (double o : objective) s += o;
    return s;
  };
  model.loss_history.push_back(total());

  std::mt19937_64 rng(hp.seed);
  std::vector<std::size_t> order(x.size());
  for (std::size_t n = 0; n < order.size(); ++n) order[n] = n;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    detail::shuffle_indices(order, rng);
    for (std::size_t c = 0; c < Classes; ++c) {
      const double eta = hp.learning_rate * backoff[c] / (1.0 + 0.1 * epoch);
      auto w = model.weights[c];
      double b = model.biases[c];
      for (const std::size_t n : order) {
        const double y = targets[c][n];
        double s = b;
        for (std::size_t i = 0; i < Dim; ++i) s += w[i] * x[n][i];
        const double shrink = 1.0 - eta * hp.lambda;
        for (double& wi : w) wi *= shrink;
        if (y * s < 1.0) {
          for (std::size_t i = 0; i < Dim; ++i) w[i] += eta * y * x[n][i];
          b += eta * y;
        }
      }
      const double obj = detail::binary_objective<Dim>(x, targets[c], w, b, hp.lambda);
      if (obj <= objective[c]) {
        model.weights[c] = w;
        model.biases[c] = b;
        objective[c] = obj;
      } else {
        backoff[c] *= 0.5;
      }
    }
    model.loss_history.push_back(total());
  }
  return model;
}

}  // namespace orient
