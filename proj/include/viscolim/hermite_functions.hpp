#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace viscolim {

/// Fills out[k] = h_k(x), k < out.size(), the L2-normalized Hermite functions
/// (eigenfunctions of D^2 + x^2 with eigenvalue 2k+1), via
///   h_0 = pi^{-1/4} e^{-x^2/2},  h_1 = sqrt(2) x h_0,
///   h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}.
/// The recurrence runs on the polynomial part with a running log-scale, so
/// values near the turning point sqrt(2k+1) stay accurate even where the
/// Gaussian factor alone would underflow.
inline void hermite_function_values(double x, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  constexpr double kBig = 1e150;
  const double gauss_log = -0.5 * x * x;
  double log_scale = 0.0;  // true polynomial value = stored value * exp(log_scale)
  double pm1 = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  out[0] = p * std::exp(gauss_log);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double kd = static_cast<double>(k);
    double pp1 = std::sqrt(2.0 / (kd + 1.0)) * x * p - std::sqrt(kd / (kd + 1.0)) * pm1;
    pm1 = p;
    p = pp1;
    if (std::abs(p) > kBig) {
      p /= kBig;
      pm1 /= kBig;
      log_scale += std::log(kBig);
    }
    out[k + 1] = p * std::exp(gauss_log + log_scale);
  }
}

/// log( sum_{k<n} h_k(x)^2 ), stable for any x.
inline double log_hermite_sum_squares(double x, std::size_t n) {
  constexpr double kBig = 1e150;
  double log_scale = 0.0;
  double pm1 = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  double sum = p * p;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double kd = static_cast<double>(k);
    double pp1 = std::sqrt(2.0 / (kd + 1.0)) * x * p - std::sqrt(kd / (kd + 1.0)) * pm1;
    pm1 = p;
    p = pp1;
    if (std::abs(p) > kBig) {
      p /= kBig;
      pm1 /= kBig;
      sum /= kBig * kBig;
      log_scale += 2.0 * std::log(kBig);
    }
    sum += p * p;
  }
  return std::log(sum) + log_scale - x * x;
}

}  // namespace viscolim
