#pragma once

// Closed-form spectra: the Davies oscillator -Laplacian + e^{-i gamma} eps x^2
// and quadratic potentials sum lambda_j^2 x_j^2 - sum mu_l^2 x_{r+l}^2, with or
// without the absorbing term. Multiplicities appear as repeated entries.

#include <complex>
#include <cmath>
#include <vector>

#include "viscolim/error.hpp"

namespace viscolim {

using cdouble = std::complex<double>;

struct MultiIndexBox {
  int n = 1;          ///< dimension
  int max_level = 0;  ///< enumerate k in N_0^n with |k| <= max_level
};

/// All k in N_0^n with |k| <= max_level, ordered by |k| and then
/// lexicographically descending within a level.
inline std::vector<std::vector<int>> enumerate_multi_indices(const MultiIndexBox& box) {
  if (box.n < 1) throw ConfigError("multi-index dimension must be positive");
  if (box.max_level < 0) throw ConfigError("multi-index level must be nonnegative");
  std::vector<std::vector<int>> out;
  std::vector<int> k(box.n, 0);
  for (int level = 0; level <= box.max_level; ++level) {
    // compositions of `level` into n nonnegative parts
    auto recurse = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == box.n - 1) {
        k[pos] = remaining;
        out.push_back(k);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        k[pos] = v;
        self(self, pos + 1, remaining - v);
      }
    };
    recurse(recurse, 0, level);
  }
  return out;
}

inline int multi_index_weight(const std::vector<int>& k) {
  int w = 0;
  for (int v : k) w += v;
  return w;
}

/// Principal square root, exp(Log(w) / 2).
inline cdouble principal_sqrt(cdouble w) {
  if (w == cdouble(0.0, 0.0)) return w;
  return std::exp(0.5 * std::log(w));
}

/// e^{-i gamma / 2} sqrt(eps) (n + 2|k|) for every enumerated k.
inline std::vector<cdouble> davies_spectrum(double epsilon, double gamma, const MultiIndexBox& box) {
  if (!(epsilon > 0.0)) throw ConfigError("Davies oscillator needs epsilon > 0");
  const cdouble rot = std::polar(std::sqrt(epsilon), -0.5 * gamma);
  std::vector<cdouble> out;
  for (const auto& k : enumerate_multi_indices(box))
    out.push_back(rot * static_cast<double>(box.n + 2 * multi_index_weight(k)));
  return out;
}

namespace detail {

inline void check_quadratic_args(const std::vector<double>& lambdas, const std::vector<double>& mus,
                                 const MultiIndexBox& box) {
  if (static_cast<int>(lambdas.size() + mus.size()) != box.n)
    throw ConfigError("number of lambdas and mus must equal the dimension");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ConfigError("lambdas must be positive");
  for (double m : mus)
    if (!(m > 0.0)) throw ConfigError("mus must be positive");
}

template <class LambdaTerm, class MuTerm>
std::vector<cdouble> lattice(const std::vector<double>& lambdas, const std::vector<double>& mus,
                             const MultiIndexBox& box, LambdaTerm lambda_term, MuTerm mu_term) {
  detail::check_quadratic_args(lambdas, mus, box);
  const std::size_t r = lambdas.size();
  std::vector<cdouble> out;
  for (const auto& k : enumerate_multi_indices(box)) {
    cdouble z = 0.0;
    for (std::size_t j = 0; j < r; ++j) z += lambda_term(lambdas[j]) * (2.0 * k[j] + 1.0);
    for (std::size_t j = 0; j < mus.size(); ++j) z += mu_term(mus[j]) * (2.0 * k[j + r] + 1.0);
    out.push_back(z);
  }
  return out;
}

}  // namespace detail

/// sum lambda_j (2k_j + 1) - i sum mu_l (2k_{r+l} + 1)
inline std::vector<cdouble> quadratic_resonances(const std::vector<double>& lambdas, const std::vector<double>& mus,
                                                 const MultiIndexBox& box) {
  return detail::lattice(
      lambdas, mus, box, [](double l) { return cdouble(l, 0.0); }, [](double m) { return cdouble(0.0, -m); });
}

/// Eigenvalues of -Laplacian + V - i eps x^2 for the quadratic V above:
///   sum (lambda_j^2 - i eps)^{1/2} (2k_j + 1) - i sum (mu_l^2 + i eps)^{1/2} (2k_{r+l} + 1).
/// Each term is beta (2k + 1) with beta^2 the coefficient of x_j^2 and
/// Re beta > 0 so that exp(-beta x^2 / 2) is normalizable; for the inverted
/// directions the coefficient is -(mu^2 + i eps), hence the sign inside the root.
inline std::vector<cdouble> quadratic_cap_eigenvalues(const std::vector<double>& lambdas,
                                                      const std::vector<double>& mus, double epsilon,
                                                      const MultiIndexBox& box) {
  if (!(epsilon > 0.0)) throw ConfigError("quadratic CAP oracle needs epsilon > 0");
  return detail::lattice(
      lambdas, mus, box, [epsilon](double l) { return principal_sqrt(cdouble(l * l, -epsilon)); },
      [epsilon](double m) { return cdouble(0.0, -1.0) * principal_sqrt(cdouble(m * m, epsilon)); });
}

/// Binomial coefficient as a double (exact for the small arguments used here).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace viscolim
