#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "viscolim/error.hpp"

namespace viscolim {

using cdouble = std::complex<double>;

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials, O(n^3)). Returns col_of_row.
inline std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

struct MatchedPair {
  std::size_t eigen_index = 0;
  std::size_t resonance_index = 0;
  cdouble eigenvalue;
  cdouble resonance;
  double abs_error = 0.0;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;                  ///< sorted by resonance index, then eigen index
  std::vector<std::size_t> unmatched_eigenvalues;  ///< indices into eigs
  std::vector<std::size_t> unmatched_resonances;   ///< one entry per unfilled multiplicity slot
};

struct WeightedResonance {
  cdouble z;
  int multiplicity = 1;
};

/// Pairs eigenvalues with resonances under a hard distance bound. A resonance
/// of multiplicity m accepts up to m eigenvalues. Among all assignments with
/// the largest number of pairs, the one with least total distance is chosen.
inline MatchResult match_spectra(const std::vector<cdouble>& eigs, const std::vector<WeightedResonance>& resonances,
                                 double radius) {
  if (!(radius > 0.0)) throw ConfigError("match radius must be positive");
  std::vector<std::size_t> slot_owner;
  for (std::size_t r = 0; r < resonances.size(); ++r) {
    if (resonances[r].multiplicity < 1) throw ConfigError("resonance multiplicity must be positive");
    for (int m = 0; m < resonances[r].multiplicity; ++m) slot_owner.push_back(r);
  }
  const std::size_t rows = slot_owner.size();
  const std::size_t cols = eigs.size();
  const std::size_t n = std::max(rows, cols);

  // Any admissible pair costs at most `radius`; a forbidden or dummy cell
  // costs more than every admissible assignment combined.
  const double forbidden = 2.0 * radius * static_cast<double>(std::min(rows, cols) + 1) + 1.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, forbidden));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = std::abs(eigs[j] - resonances[slot_owner[i]].z);
      if (d <= radius) cost[i][j] = d;
    }
  const std::vector<int> assign = solve_assignment(cost);

  MatchResult out;
  std::vector<char> eig_used(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    const int j = assign[i];
    if (j >= 0 && static_cast<std::size_t>(j) < cols && cost[i][j] < forbidden) {
      const std::size_t r = slot_owner[i];
      out.pairs.push_back({static_cast<std::size_t>(j), r, eigs[j], resonances[r].z, std::abs(eigs[j] - resonances[r].z)});
      eig_used[j] = 1;
    } else {
      out.unmatched_resonances.push_back(slot_owner[i]);
    }
  }
  for (std::size_t j = 0; j < cols; ++j)
    if (!eig_used[j]) out.unmatched_eigenvalues.push_back(j);
  std::sort(out.pairs.begin(), out.pairs.end(), [](const MatchedPair& a, const MatchedPair& b) {
    return std::pair(a.resonance_index, a.eigen_index) < std::pair(b.resonance_index, b.eigen_index);
  });
  return out;
}

}  // namespace viscolim
