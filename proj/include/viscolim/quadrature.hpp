#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "viscolim/error.hpp"
#include "viscolim/hermite_functions.hpp"

namespace viscolim {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw ConfigError("quadrature order must be positive");
  const int n = order;
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // refresh derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Gauss-Hermite rule for the weight exp(-x^2) (Golub-Welsch). The weights
/// are returned pre-multiplied by exp(x_i^2) so integrands that already carry
/// the Gaussian, such as products of Hermite functions, can be summed
/// directly without overflow: sum_i w_i f(x_i) ~ int f(x) dx.
inline QuadratureRule gauss_hermite_scaled(int order) {
  if (order < 1) throw ConfigError("quadrature order must be positive");
  const int n = order;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("Gauss-Hermite node computation");

  QuadratureRule rule;
  rule.nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  rule.weights.resize(n);
  // Christoffel numbers: w_i exp(x_i^2) = 1 / sum_k h_k(x_i)^2 over the
  // normalized Hermite functions h_0..h_{n-1}.
  for (int i = 0; i < n; ++i)
    rule.weights[i] = std::exp(-log_hermite_sum_squares(rule.nodes[i], static_cast<std::size_t>(n)));
  return rule;
}

}  // namespace viscolim
