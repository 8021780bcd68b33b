#pragma once

// Galerkin discretization of the CAP-regularized operator
//   P_eps = D^2 + V(x) - i eps e^{-i alpha} x^2,   D^2 = -d^2/dx^2,
// in the basis of harmonic-oscillator eigenfunctions. With eta = |eps| and
// y = eta^{1/4} x the operator is unitarily equivalent to
//   eta^{1/2} ( D_y^2 - i sign(eps) e^{-i alpha} y^2 + eta^{-1/2} V(eta^{-1/4} y) ),
// and the bracket is what gets assembled.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "viscolim/error.hpp"
#include "viscolim/hermite_functions.hpp"
#include "viscolim/potential.hpp"
#include "viscolim/quadrature.hpp"

namespace viscolim {

using cdouble = std::complex<double>;

struct CapConfig {
  double epsilon = 0.25;
  double alpha = 0.0;  ///< CAP phase: the absorbing term is -i eps e^{-i alpha} x^2
  int basis_size = 64;
  int quadrature_order = 160;
  double basis_scale = 1.0;  ///< basis functions s^{1/2} h_k(s y)

  void validate() const {
    if (!(epsilon != 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be finite and nonzero");
    if (!(alpha >= 0.0 && alpha < std::numbers::pi)) throw ConfigError("alpha must lie in [0, pi)");
    if (basis_size < 2) throw ConfigError("basis size must be at least 2");
    if (quadrature_order < 2 * basis_size) throw QuadratureOrderTooLow(quadrature_order, basis_size);
    if (!(basis_scale > 0.0) || !std::isfinite(basis_scale)) throw ConfigError("basis scale must be positive");
  }

  /// Same configuration at a different basis size; the quadrature order
  /// keeps its margin over 2N.
  CapConfig resized(int n) const {
    CapConfig c = *this;
    c.quadrature_order = quadrature_order - 2 * basis_size + 2 * n;
    c.basis_size = n;
    return c;
  }
};

inline int default_quadrature_order(int basis_size) { return 2 * basis_size + 32; }

struct GalerkinMatrix {
  Eigen::MatrixXcd entries;
  cdouble scale_factor{1.0, 0.0};  ///< eigenvalues of P_eps = scale_factor * eig(entries)
  CapConfig config;
  std::string potential_digest;
};

/// N x |points| matrix of h_k(x).
inline Eigen::MatrixXd hermite_functions(std::span<const double> points, int n) {
  if (n < 1) throw ConfigError("hermite_functions needs N >= 1");
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    hermite_function_values(points[i], std::span<double>(out.col(static_cast<Eigen::Index>(i)).data(), n));
  return out;
}

namespace detail {

inline Eigen::MatrixXd pentadiagonal(int n, double off_sign) {
  if (n < 2) throw ConfigError("operator matrices need N >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = k + 0.5;
  for (int k = 0; k + 2 < n; ++k)
    m(k, k + 2) = m(k + 2, k) = off_sign * 0.5 * std::sqrt((k + 1.0) * (k + 2.0));
  return m;
}

}  // namespace detail

/// <h_j, x^2 h_k>
inline Eigen::MatrixXd matrix_x2(int n) { return detail::pentadiagonal(n, +1.0); }

/// <h_j, -h_k''>
inline Eigen::MatrixXd matrix_d2(int n) { return detail::pentadiagonal(n, -1.0); }

namespace detail {

// sum over nodes of w * f(x) h_j(x) h_k(x), filled symmetrically
inline Eigen::MatrixXd weighted_gram(int n, const std::vector<double>& nodes,
                                     const std::vector<double>& weights) {
  const Eigen::MatrixXd h = hermite_functions(nodes, n);
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
  Eigen::MatrixXd g = (h * w.asDiagonal()) * h.transpose();
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) g(k, j) = g(j, k);
  return g;
}

// Hermite functions below this level beyond |y| = sqrt(2N+1) + margin
inline double basis_extent(int n) { return std::sqrt(2.0 * n + 1.0) + 12.0; }

}  // namespace detail

/// <h_j, V(dilation * y) h_k>. Piecewise potentials use Gauss-Legendre of the
/// given order on each piece (split into panels of width <= 4 in y); the
/// quadratic form is assembled exactly; SincLike uses Gauss-Hermite.
inline Eigen::MatrixXd potential_matrix(const Potential& p, int n, int quadrature_order, double dilation) {
  if (!(dilation > 0.0) || !std::isfinite(dilation)) throw ConfigError("dilation must be positive");
  if (n < 1) throw ConfigError("basis size must be positive");

  if (const auto* pc = std::get_if<PiecewiseConstantPotential>(&p)) {
    if (quadrature_order < 2 * n) throw QuadratureOrderTooLow(quadrature_order, n);
    const QuadratureRule gl = gauss_legendre(quadrature_order);
    const double extent = detail::basis_extent(n);
    constexpr double kPanel = 4.0;
    std::vector<double> nodes, weights;
    for (const Piece& piece : pc->pieces()) {
      if (piece.v == 0.0) continue;
      const double lo = std::max(piece.a / dilation, -extent);
      const double hi = std::min(piece.b / dilation, extent);
      if (!(lo < hi)) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanel)));
      const double width = (hi - lo) / panels;
      for (int q = 0; q < panels; ++q) {
        const double mid = lo + (q + 0.5) * width;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          nodes.push_back(mid + 0.5 * width * gl.nodes[i]);
          weights.push_back(0.5 * width * gl.weights[i] * piece.v);
        }
      }
    }
    if (nodes.empty()) return Eigen::MatrixXd::Zero(n, n);
    return detail::weighted_gram(n, nodes, weights);
  }

  const auto& an = std::get<AnalyticPotential>(p);
  switch (an.kind) {
    case AnalyticPotential::Kind::Zero:
      return Eigen::MatrixXd::Zero(n, n);
    case AnalyticPotential::Kind::Quadratic:
      return an.coeff * dilation * dilation * matrix_x2(n);
    case AnalyticPotential::Kind::SincLike: {
      const QuadratureRule gh = gauss_hermite_scaled(std::max(quadrature_order, 2 * n));
      std::vector<double> weights(gh.weights.size());
      for (std::size_t i = 0; i < weights.size(); ++i)
        weights[i] = gh.weights[i] * evaluate(an, dilation * gh.nodes[i]);
      return detail::weighted_gram(n, gh.nodes, weights);
    }
  }
  return Eigen::MatrixXd::Zero(n, n);
}

/// Rescaled CAP operator; scale_factor * eig(entries) approximates the
/// spectrum of P_eps.
inline GalerkinMatrix assemble_cap_matrix(const Potential& p, const CapConfig& cfg) {
  cfg.validate();
  const int n = cfg.basis_size;
  const double eta = std::abs(cfg.epsilon);
  const double sign = cfg.epsilon > 0.0 ? 1.0 : -1.0;
  const double s2 = cfg.basis_scale * cfg.basis_scale;

  // -i sign e^{-i alpha}, written out so that alpha = 0 gives exactly -i sign
  const cdouble cap(-sign * std::sin(cfg.alpha), -sign * std::cos(cfg.alpha));

  const Eigen::MatrixXd d2 = matrix_d2(n);
  const Eigen::MatrixXd x2 = matrix_x2(n);
  const Eigen::MatrixXd vm =
      potential_matrix(p, n, cfg.quadrature_order, std::pow(eta, -0.25) / cfg.basis_scale);
  const double v_weight = 1.0 / std::sqrt(eta);

  GalerkinMatrix out;
  out.entries.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      out.entries(j, k) = cdouble(s2 * d2(j, k) + v_weight * vm(j, k), 0.0) + cap * (x2(j, k) / s2);
  out.scale_factor = cdouble(std::sqrt(eta), 0.0);
  out.config = cfg;
  out.potential_digest = potential_digest(p);
  return out;
}

/// Davies oscillator H = D^2 + e^{-i gamma} eps x^2 in the same rescaled
/// form (V == 0, CAP phase written through gamma directly).
inline GalerkinMatrix assemble_davies_matrix(double epsilon, double gamma, int n, double basis_scale = 1.0) {
  if (!(epsilon > 0.0)) throw ConfigError("Davies oscillator needs epsilon > 0");
  if (!(gamma >= 0.0 && gamma < std::numbers::pi)) throw ConfigError("gamma must lie in [0, pi)");
  const double s2 = basis_scale * basis_scale;
  const cdouble phase(std::cos(gamma), -std::sin(gamma));
  const Eigen::MatrixXd d2 = matrix_d2(n);
  const Eigen::MatrixXd x2 = matrix_x2(n);
  GalerkinMatrix out;
  out.entries.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.entries(j, k) = s2 * d2(j, k) + phase * (x2(j, k) / s2);
  out.scale_factor = cdouble(std::sqrt(epsilon), 0.0);
  out.config.epsilon = epsilon;
  out.config.alpha = std::max(0.0, gamma - std::numbers::pi / 2);
  out.config.basis_size = n;
  out.config.quadrature_order = default_quadrature_order(n);
  out.config.basis_scale = basis_scale;
  out.potential_digest = potential_digest(AnalyticPotential::zero());
  return out;
}

}  // namespace viscolim
