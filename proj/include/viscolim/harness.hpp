#pragma once

// Experiment drivers: epsilon sweeps against directly computed resonances,
// the conjugation check for eps -> -eps, resolvent-norm scans for the Davies
// oscillator and the exploratory sin(x)/x sweep.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "viscolim/eigensolver.hpp"
#include "viscolim/error.hpp"
#include "viscolim/matching.hpp"
#include "viscolim/oracles.hpp"
#include "viscolim/oscillator_basis.hpp"
#include "viscolim/parallel.hpp"
#include "viscolim/potential.hpp"
#include "viscolim/resonance_direct.hpp"

namespace viscolim {

/// arg z in (-pi/4 + 0.05, pi), |z| in [0.05, 30]
inline SectorWindow default_window() {
  return {-std::numbers::pi / 4 + 0.05, std::numbers::pi, 0.05, 30.0};
}

struct SweepConfig {
  Potential potential = AnalyticPotential::zero();
  std::vector<double> epsilons{0.25, 0.1, 0.025, 0.00625};
  double alpha = 0.0;
  int basis_size = 128;
  int quadrature_order = 0;  ///< 0: 2N + 32
  double basis_scale = 1.0;
  StabilityOptions stability;
  SectorWindow window = default_window();
  double match_radius = 0.1;
  std::vector<KRectangle> search_rects;  ///< empty: derived from the window
  RootFinderOptions root_options;
  std::optional<std::vector<WeightedResonance>> resonances;  ///< supplied externally
  std::optional<double> tolerance;  ///< calibrated bound on the final-epsilon error
  std::string output_dir = "out";

  CapConfig cap_config(double epsilon) const {
    CapConfig c;
    c.epsilon = epsilon;
    c.alpha = alpha;
    c.basis_size = basis_size;
    c.quadrature_order = quadrature_order > 0 ? quadrature_order : default_quadrature_order(basis_size);
    c.basis_scale = basis_scale;
    return c;
  }

  void validate() const {
    if (epsilons.empty()) throw ConfigError("sweep needs at least one epsilon");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      if (epsilons[i] == 0.0 || !std::isfinite(epsilons[i])) throw ConfigError("epsilons must be finite and nonzero");
      if (i > 0 && !(std::abs(epsilons[i]) < std::abs(epsilons[i - 1])))
        throw ConfigError("epsilons must be sorted by strictly decreasing magnitude");
    }
    window.validate();
    if (!(match_radius > 0.0)) throw ConfigError("match radius must be positive");
    for (double e : epsilons) cap_config(e).validate();
  }
};

struct ResonanceEntry {
  cdouble z;
  int multiplicity = 1;
  bool certified = true;
};

struct DiskCount {
  double epsilon = 0.0;
  std::size_t resonance_index = 0;
  double delta = 0.0;
  int count = 0;     ///< stable eigenvalues in D(z, delta)
  int expected = 0;  ///< multiplicity of the resonance
};

struct EpsilonResult {
  double epsilon = 0.0;
  Spectrum spectrum;           ///< full spectrum at N with stability flags
  std::vector<cdouble> candidates;  ///< stable eigenvalues inside the window
  MatchResult match;
  std::string failure;  ///< non-empty when this epsilon's pipeline failed
};

struct ConvergenceReport {
  std::vector<ResonanceEntry> resonances;
  std::vector<EpsilonResult> per_epsilon;  ///< ordered as the configured ladder
  /// errors[r][e]: error of resonance r at epsilon e; NaN when unmatched
  std::vector<std::vector<double>> errors;
  std::vector<DiskCount> disk_counts;
};

/// Search rectangles in the k-plane covering the window: the fourth-quadrant
/// strip for resonances, plus a thin box around i R_+ when the window holds
/// the negative real axis.
inline std::vector<KRectangle> default_search_rects(const SectorWindow& w, const RootFinderOptions& opt) {
  std::vector<KRectangle> rects;
  const double kmin = std::sqrt(w.radius_min);
  const double kmax = std::sqrt(std::min(w.radius_max, 1e4));
  const double margin = std::max(10.0 * opt.threshold_exclusion_radius, 0.02);
  if (w.arg_min < 0.0) {
    const double half = -0.5 * w.arg_min;
    KRectangle r;
    r.re_min = std::max(0.9 * kmin * std::cos(half), margin);
    r.re_max = 1.05 * kmax + 0.05;
    r.im_min = -(1.1 * kmax * std::sin(half) + 0.05);
    r.im_max = 0.0;
    rects.push_back(r);
  }
  if (w.arg_min < std::numbers::pi && w.arg_max > std::numbers::pi) {
    KRectangle r;
    r.re_min = -0.05;
    r.re_max = 0.05;
    r.im_min = std::max(0.9 * kmin, margin);
    r.im_max = 1.05 * kmax + 0.05;
    rects.push_back(r);
  }
  return rects;
}

/// Resonances inside the window for the configured potential: direct solver
/// for step potentials, closed form for the quadratic one.
inline std::vector<ResonanceEntry> window_resonances(const SweepConfig& cfg) {
  std::vector<ResonanceEntry> out;
  if (cfg.resonances) {
    for (const auto& r : *cfg.resonances)
      if (cfg.window.contains(r.z)) out.push_back({r.z, r.multiplicity, true});
    return out;
  }
  if (const auto* pc = std::get_if<PiecewiseConstantPotential>(&cfg.potential)) {
    const auto rects = cfg.search_rects.empty() ? default_search_rects(cfg.window, cfg.root_options) : cfg.search_rects;
    for (const auto& rect : rects) {
      const ResonanceSet set = find_resonances(*pc, rect, cfg.root_options);
      for (const auto& pole : set.poles)
        if (pole_in_window(pole, cfg.window)) out.push_back({pole.z, pole.multiplicity, pole.certified});
    }
    std::sort(out.begin(), out.end(),
              [](const ResonanceEntry& a, const ResonanceEntry& b) { return spectrum_order(a.z, b.z); });
    return out;
  }
  const auto& an = std::get<AnalyticPotential>(cfg.potential);
  if (an.kind == AnalyticPotential::Kind::Zero) return out;
  if (an.kind == AnalyticPotential::Kind::SincLike)
    throw ConfigError("no resonance ground truth for the sinc potential; supply resonances explicitly");
  const double a = std::sqrt(std::abs(an.coeff));
  const int levels = static_cast<int>(std::ceil(std::min(cfg.window.radius_max, 1e4) / (2.0 * a))) + 1;
  const MultiIndexBox box{1, levels};
  const auto values = an.coeff > 0.0 ? quadratic_resonances({a}, {}, box) : quadratic_resonances({}, {a}, box);
  for (const cdouble& z : values)
    if (cfg.window.contains(z)) out.push_back({z, 1, true});
  return out;
}

inline ConvergenceReport run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  ConvergenceReport report;
  report.resonances = window_resonances(cfg);

  std::vector<WeightedResonance> targets;
  for (const auto& r : report.resonances) targets.push_back({r.z, r.multiplicity});

  report.per_epsilon.resize(cfg.epsilons.size());
  const auto errors = parallel_for(cfg.epsilons.size(), [&](std::size_t e) {
    EpsilonResult& res = report.per_epsilon[e];
    res.epsilon = cfg.epsilons[e];
    res.spectrum = stability_filter(cfg.potential, cfg.cap_config(res.epsilon), cfg.stability);
    const Spectrum windowed = filter_sector(stable_only(res.spectrum), cfg.window);
    res.candidates = windowed.eigenvalues;
    res.match = match_spectra(res.candidates, targets, cfg.match_radius);
  });
  for (std::size_t e = 0; e < errors.size(); ++e) {
    if (!errors[e]) continue;
    try {
      std::rethrow_exception(errors[e]);
    } catch (const std::exception& ex) {
      report.per_epsilon[e].failure = ex.what();
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.errors.assign(report.resonances.size(), std::vector<double>(cfg.epsilons.size(), nan));
  for (std::size_t e = 0; e < report.per_epsilon.size(); ++e) {
    const EpsilonResult& res = report.per_epsilon[e];
    if (!res.failure.empty()) continue;
    for (const auto& pair : res.match.pairs) {
      double& slot = report.errors[pair.resonance_index][e];
      slot = std::isnan(slot) ? pair.abs_error : std::max(slot, pair.abs_error);
    }
    for (std::size_t r = 0; r < report.resonances.size(); ++r) {
      DiskCount dc{res.epsilon, r, cfg.match_radius, 0, report.resonances[r].multiplicity};
      for (std::size_t i = 0; i < res.spectrum.size(); ++i)
        if (res.spectrum.stable[i] && std::abs(res.spectrum.eigenvalues[i] - report.resonances[r].z) < cfg.match_radius)
          ++dc.count;
      report.disk_counts.push_back(dc);
    }
  }
  return report;
}

/// True when resonance r has a match at every epsilon and its error
/// strictly decreases along the ladder.
inline bool strictly_decreasing_errors(const ConvergenceReport& report, std::size_t r) {
  const auto& seq = report.errors.at(r);
  for (std::size_t e = 0; e < seq.size(); ++e) {
    if (std::isnan(seq[e])) return false;
    if (e > 0 && !(seq[e] < seq[e - 1])) return false;
  }
  return true;
}

struct ConjugationReport {
  double epsilon = 0.0;
  double distance = 0.0;  ///< Hausdorff distance; +inf if exactly one side is empty
  std::size_t plus_count = 0;
  std::size_t minus_count = 0;
};

inline double hausdorff_distance(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<cdouble>& from, const std::vector<cdouble>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Compares the stable windowed spectrum at +|eps| with the conjugated stable
/// spectrum at -|eps|.
inline ConjugationReport conjugation_check(const Potential& p, double epsilon, const SweepConfig& cfg) {
  const double e = std::abs(epsilon);
  CapConfig plus = cfg.cap_config(e);
  CapConfig minus = cfg.cap_config(-e);
  plus.validate();
  Spectrum sp, sm;
  const auto errors = parallel_for(2, [&](std::size_t i) {
    if (i == 0)
      sp = stability_filter(p, plus, cfg.stability);
    else
      sm = stability_filter(p, minus, cfg.stability);
  });
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<cdouble> a, b;
  const Spectrum sp_stable = stable_only(sp);
  for (const auto& z : sp_stable.eigenvalues)
    if (cfg.window.contains(z)) a.push_back(z);
  const Spectrum sm_stable = stable_only(sm);
  for (const auto& z : sm_stable.eigenvalues)
    if (cfg.window.contains(std::conj(z))) b.push_back(std::conj(z));
  return {e, hausdorff_distance(a, b), a.size(), b.size()};
}

struct PseudospectrumConfig {
  std::vector<double> epsilons{0.04, 0.01};
  double gamma = std::numbers::pi / 2;
  std::vector<cdouble> points;
  int basis_size = 200;
  double basis_scale = 1.0;
};

/// Uniform grid of n_re x n_im points over a rectangle (inclusive corners).
inline std::vector<cdouble> grid_points(double re_min, double re_max, double im_min, double im_max, int n_re,
                                        int n_im) {
  if (n_re < 1 || n_im < 1) throw ConfigError("grid resolution must be positive");
  std::vector<cdouble> out;
  for (int j = 0; j < n_im; ++j)
    for (int i = 0; i < n_re; ++i) {
      const double x = n_re == 1 ? re_min : re_min + (re_max - re_min) * i / (n_re - 1);
      const double y = n_im == 1 ? im_min : im_min + (im_max - im_min) * j / (n_im - 1);
      out.emplace_back(x, y);
    }
  return out;
}

struct PseudospectrumRow {
  double epsilon = 0.0;
  cdouble z;
  double norm = 0.0;
  bool in_sector = false;  ///< -gamma < arg z < 0, away from the spectral ray
};

struct PseudospectrumTable {
  double gamma = 0.0;
  std::vector<PseudospectrumRow> rows;  ///< epsilon-major, points in input order
  /// growth[p][e] = norm(eps_{e+1}, z_p) / norm(eps_e, z_p)
  std::vector<std::vector<double>> growth;
};

inline PseudospectrumTable pseudospectrum_scan(const PseudospectrumConfig& cfg) {
  if (cfg.epsilons.empty()) throw ConfigError("pseudospectrum scan needs at least one epsilon");
  if (cfg.basis_size < 2) throw ConfigError("basis size must be at least 2");
  PseudospectrumTable table;
  table.gamma = cfg.gamma;
  const std::size_t np = cfg.points.size();
  std::vector<std::vector<double>> norms(cfg.epsilons.size(), std::vector<double>(np));
  const auto errors = parallel_for(cfg.epsilons.size(), [&](std::size_t e) {
    const GalerkinMatrix m = assemble_davies_matrix(cfg.epsilons[e], cfg.gamma, cfg.basis_size, cfg.basis_scale);
    for (std::size_t i = 0; i < np; ++i) norms[e][i] = resolvent_norm(m, cfg.points[i]);
  });
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  const double ray = -cfg.gamma / 2;
  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e)
    for (std::size_t i = 0; i < np; ++i) {
      const double a = std::arg(cfg.points[i]);
      const bool in_sector = a > -cfg.gamma && a < 0.0 && std::abs(a - ray) > 1e-9;
      table.rows.push_back({cfg.epsilons[e], cfg.points[i], norms[e][i], in_sector});
    }
  table.growth.assign(np, {});
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t e = 0; e + 1 < cfg.epsilons.size(); ++e) table.growth[i].push_back(norms[e + 1][i] / norms[e][i]);
  return table;
}

struct EpsilonSpectrum {
  double epsilon = 0.0;
  Spectrum spectrum;  ///< stable, windowed eigenvalues
};

/// sin(x)/x is not dilation analytic, so nothing here is compared against a
/// ground truth; the output is exploratory.
inline std::vector<EpsilonSpectrum> example4_sweep(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.potential = AnalyticPotential::sinc();
  c.validate();
  std::vector<EpsilonSpectrum> out(c.epsilons.size());
  const auto errors = parallel_for(c.epsilons.size(), [&](std::size_t e) {
    out[e].epsilon = c.epsilons[e];
    out[e].spectrum = filter_sector(stable_only(stability_filter(c.potential, c.cap_config(c.epsilons[e]), c.stability)),
                                    c.window);
  });
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace viscolim
