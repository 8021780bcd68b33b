#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <json.hpp>
#include <lapacke.h>

#include "viscolim/error.hpp"
#include "viscolim/oscillator_basis.hpp"
#include "viscolim/potential.hpp"

namespace viscolim {

/// Eigenvalues sorted by imaginary part descending, then real part ascending.
struct Spectrum {
  std::vector<cdouble> eigenvalues;
  std::vector<double> residuals;  ///< |Av - lambda v| / (|A|_F |v|)
  std::vector<bool> stable;       ///< empty until a stability filter ran
  std::string config_digest;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  bool empty() const noexcept { return eigenvalues.empty(); }
};

inline bool spectrum_order(const cdouble& a, const cdouble& b) {
  if (a.imag() != b.imag()) return a.imag() > b.imag();
  return a.real() < b.real();
}

/// Argument in (-pi/4, 7pi/4]: continuous from the positive real axis down
/// into the lower half plane as far as the Davies ray.
inline double sector_arg(const cdouble& z) {
  double a = std::arg(z);
  if (a <= -std::numbers::pi / 4) a += 2.0 * std::numbers::pi;
  return a;
}

struct SectorWindow {
  double arg_min = -std::numbers::pi / 4;
  double arg_max = 7.0 * std::numbers::pi / 4;
  double radius_min = 0.0;
  double radius_max = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(arg_min < arg_max)) throw ConfigError("window needs arg_min < arg_max");
    if (arg_min < -std::numbers::pi / 4 || arg_max > 7.0 * std::numbers::pi / 4)
      throw ConfigError("window must lie inside -pi/4 <= arg z <= 7pi/4");
    if (!(radius_min >= 0.0) || !(radius_min <= radius_max)) throw ConfigError("window radii out of order");
  }

  bool contains(const cdouble& z) const {
    const double a = sector_arg(z);
    const double r = std::abs(z);
    return a > arg_min && a < arg_max && r >= radius_min && r <= radius_max;
  }
};

namespace detail {

inline Spectrum sorted(Spectrum s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return spectrum_order(s.eigenvalues[a], s.eigenvalues[b]); });
  Spectrum out;
  out.config_digest = s.config_digest;
  for (std::size_t i : idx) {
    out.eigenvalues.push_back(s.eigenvalues[i]);
    out.residuals.push_back(s.residuals[i]);
    if (!s.stable.empty()) out.stable.push_back(s.stable[i]);
  }
  return out;
}

}  // namespace detail

/// All eigenvalues of a dense complex matrix, with residuals recomputed from
/// the returned eigenpairs.
inline Spectrum eig_dense(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw ConfigError("eig_dense needs a square matrix");
  if (!a.allFinite()) throw ConfigError("eig_dense needs finite entries");
  Spectrum s;
  if (a.rows() == 0) return s;
  // zgeev overwrites its input
  Eigen::MatrixXcd work = a;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXcd values(n);
  Eigen::MatrixXcd vectors(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
                    reinterpret_cast<lapack_complex_double*>(values.data()), nullptr, 1,
                    reinterpret_cast<lapack_complex_double*>(vectors.data()), n);
  if (info > 0) throw NoConvergence("QR iteration in zgeev (info " + std::to_string(info) + ")");
  if (info < 0) throw NumericalError("zgeev rejected argument " + std::to_string(-info));
  const double norm = std::max(a.norm(), std::numeric_limits<double>::min());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXcd v = vectors.col(i);
    const double vn = v.norm();
    const double r = (a * v - values(i) * v).norm() / (norm * (vn > 0.0 ? vn : 1.0));
    s.eigenvalues.push_back(values(i));
    s.residuals.push_back(r);
  }
  return detail::sorted(std::move(s));
}

inline std::string config_digest(const Potential& p, const CapConfig& cfg) {
  nlohmann::json j = {{"potential", to_json_value(p)},
                      {"epsilon", cfg.epsilon},
                      {"alpha", cfg.alpha},
                      {"basis_size", cfg.basis_size},
                      {"quadrature_order", cfg.quadrature_order},
                      {"basis_scale", cfg.basis_scale}};
  return fnv1a_hex(j.dump());
}

/// Spectrum of P_eps at the configured truncation (no stability flags).
inline Spectrum cap_spectrum(const Potential& p, const CapConfig& cfg) {
  const GalerkinMatrix m = assemble_cap_matrix(p, cfg);
  Spectrum s = eig_dense(m.entries);
  for (auto& z : s.eigenvalues) z *= m.scale_factor;
  s.config_digest = config_digest(p, cfg);
  return detail::sorted(std::move(s));
}

struct StabilityOptions {
  double growth = 1.5;
  double match_tol = 1e-6;
  double residual_tol = 1e-8;
};

/// Spectrum at N, with stable[i] set when the eigenvalue has a partner within
/// match_tol in the spectrum at ceil(growth * N) and a small residual.
inline Spectrum stability_filter(const Potential& p, const CapConfig& cfg, const StabilityOptions& opt = {}) {
  if (!(opt.growth > 1.0)) throw ConfigError("stability growth factor must exceed 1");
  if (!(opt.match_tol > 0.0)) throw ConfigError("stability match tolerance must be positive");
  Spectrum coarse = cap_spectrum(p, cfg);
  const int larger = static_cast<int>(std::ceil(opt.growth * cfg.basis_size));
  const Spectrum fine = cap_spectrum(p, cfg.resized(larger));
  coarse.stable.assign(coarse.size(), false);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse.residuals[i] > opt.residual_tol) continue;
    for (const cdouble& w : fine.eigenvalues) {
      if (std::abs(w - coarse.eigenvalues[i]) <= opt.match_tol) {
        coarse.stable[i] = true;
        break;
      }
    }
  }
  return coarse;
}

inline Spectrum filter_sector(const Spectrum& s, const SectorWindow& w) {
  Spectrum out;
  out.config_digest = s.config_digest;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!w.contains(s.eigenvalues[i])) continue;
    out.eigenvalues.push_back(s.eigenvalues[i]);
    out.residuals.push_back(s.residuals[i]);
    if (!s.stable.empty()) out.stable.push_back(s.stable[i]);
  }
  return out;
}

/// Stable entries only (all entries when no flags are set).
inline Spectrum stable_only(const Spectrum& s) {
  if (s.stable.empty()) return s;
  Spectrum out;
  out.config_digest = s.config_digest;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.stable[i]) continue;
    out.eigenvalues.push_back(s.eigenvalues[i]);
    out.residuals.push_back(s.residuals[i]);
    out.stable.push_back(true);
  }
  return out;
}

/// 1 / sigma_min(A - z I); +infinity when A - z I is numerically singular.
inline double resolvent_norm(const Eigen::MatrixXcd& a, cdouble z) {
  if (a.rows() != a.cols()) throw ConfigError("resolvent_norm needs a square matrix");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd shifted = a;
  shifted.diagonal().array() -= z;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(n - 1);
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       std::max(smax, std::abs(z));
  if (!(smin > floor)) return std::numeric_limits<double>::infinity();
  return 1.0 / smin;
}

/// Resolvent norm of the operator approximated by a Galerkin matrix, i.e.
/// of scale_factor * entries.
inline double resolvent_norm(const GalerkinMatrix& m, cdouble z) {
  return resolvent_norm(Eigen::MatrixXcd(m.scale_factor * m.entries), z);
}

}  // namespace viscolim
