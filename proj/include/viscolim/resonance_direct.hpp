#pragma once

// Resonances of -d^2/dx^2 + V for a compactly supported step potential, as
// zeros of the outgoing matching function
//   f(k) = i k u(r0) - u'(r0),
// where u is the solution equal to e^{-ikx} left of the support. Zeros with
// Im k < 0 are resonances, zeros on i R_+ are bound states; z = k^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "viscolim/eigensolver.hpp"
#include "viscolim/error.hpp"
#include "viscolim/potential.hpp"

namespace viscolim {

using cdouble = std::complex<double>;

struct WaveState {
  cdouble u;
  cdouble du;
};

/// Transfer across a piece of length `len` with constant potential v for
/// -u'' + v u = k^2 u, using cos(sqrt(w) len) and sin(sqrt(w) len)/sqrt(w),
/// w = k^2 - v. Both are even in sqrt(w), hence entire in w and in k.
inline WaveState propagate_piece(cdouble u, cdouble du, double v, cdouble k, double len) {
  if (len < 0.0) throw ConfigError("propagation length must be nonnegative");
  const cdouble w = k * k - v;
  const double l2 = len * len;
  cdouble c, s;  // cos(sqrt(w) len), sin(sqrt(w) len) / sqrt(w)
  if (std::abs(w) * l2 < 1e-4) {
    const cdouble x = w * l2;
    c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
    s = len * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
  } else {
    const cdouble r = std::sqrt(w);
    c = std::cos(r * len);
    s = std::sin(r * len) / r;
  }
  return {u * c + du * s, -u * w * s + du * c};
}

/// Matching function; `radius` may enlarge the matching interval beyond the
/// support (an empty potential otherwise matches at r0 = 0).
inline cdouble matching_function(const PiecewiseConstantPotential& p, cdouble k, double radius = 0.0) {
  if (k == cdouble(0.0, 0.0)) throw ZeroWavenumber();
  const double r0 = std::max(support_radius(p), radius);
  const cdouble ik(-k.imag(), k.real());
  WaveState st{std::exp(ik * r0), -ik * std::exp(ik * r0)};
  double x = -r0;
  for (const Piece& piece : p.pieces()) {
    if (piece.a > x) {
      st = propagate_piece(st.u, st.du, 0.0, k, piece.a - x);
      x = piece.a;
    }
    st = propagate_piece(st.u, st.du, piece.v, k, piece.b - x);
    x = piece.b;
  }
  if (r0 > x) st = propagate_piece(st.u, st.du, 0.0, k, r0 - x);
  return ik * st.u - st.du;
}

struct KRectangle {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 0.0;

  void validate() const {
    if (!(re_min < re_max) || !(im_min < im_max)) throw ConfigError("k-rectangle needs min < max on both axes");
  }
  cdouble center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(cdouble k, double slack = 0.0) const {
    return k.real() >= re_min - slack && k.real() <= re_max + slack && k.imag() >= im_min - slack &&
           k.imag() <= im_max + slack;
  }
  /// Distance from the origin to the closed rectangle.
  double distance_to_origin() const {
    const double dx = std::max({re_min, 0.0, -re_max});
    const double dy = std::max({im_min, 0.0, -im_max});
    return std::hypot(dx, dy);
  }
};

struct RootFinderOptions {
  int samples_per_side = 64;
  double newton_tol = 1e-12;
  int newton_max_iter = 60;
  double threshold_exclusion_radius = 1e-3;
  int max_depth = 40;
  double min_cell_size = 1e-7;
  int max_phase_refinements = 30;  ///< bisection depth per boundary segment
  double boundary_floor = 1e-12;   ///< |f| on the contour relative to its max
};

namespace detail {

// Phase-tracked winding of f along a closed path t in [0, 1) -> k(t).
template <class F, class Path>
int contour_winding(F&& f, Path&& path, int samples, const RootFinderOptions& opt, double* max_abs = nullptr) {
  if (samples < 4) throw ConfigError("winding number needs at least 4 samples per contour");
  std::vector<double> ts(samples + 1);
  std::vector<cdouble> fs(samples + 1);
  double fmax = 0.0;
  for (int i = 0; i <= samples; ++i) {
    ts[i] = static_cast<double>(i) / samples;
    fs[i] = (i == samples) ? fs[0] : f(path(ts[i]));
    fmax = std::max(fmax, std::abs(fs[i]));
  }
  if (!(fmax > 0.0) || !std::isfinite(fmax)) throw BoundaryTooCloseToZero();

  double total = 0.0;
  double floor = opt.boundary_floor * fmax;
  auto check = [&](cdouble v) {
    if (!(std::abs(v) > floor)) throw BoundaryTooCloseToZero();
  };
  auto segment = [&](auto&& self, double ta, cdouble fa, double tb, cdouble fb, int depth) -> void {
    const double step = std::arg(fb / fa);
    if (std::abs(step) < std::numbers::pi / 2) {
      total += step;
      return;
    }
    if (depth >= opt.max_phase_refinements) throw BoundaryTooCloseToZero();
    const double tm = 0.5 * (ta + tb);
    const cdouble fm = f(path(tm));
    check(fm);
    self(self, ta, fa, tm, fm, depth + 1);
    self(self, tm, fm, tb, fb, depth + 1);
  };
  for (int i = 0; i < samples; ++i) check(fs[i]);
  for (int i = 0; i < samples; ++i) segment(segment, ts[i], fs[i], ts[i + 1], fs[i + 1], 0);
  if (max_abs) *max_abs = fmax;
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25) throw NumericalError("winding number is not near an integer");
  return static_cast<int>(rounded);
}

inline auto rectangle_path(const KRectangle& r) {
  return [r](double t) -> cdouble {
    const double s = 4.0 * t;
    if (s < 1.0) return {r.re_min + s * r.width(), r.im_min};
    if (s < 2.0) return {r.re_max, r.im_min + (s - 1.0) * r.height()};
    if (s < 3.0) return {r.re_max - (s - 2.0) * r.width(), r.im_max};
    return {r.re_min, r.im_max - (s - 3.0) * r.height()};
  };
}

inline auto circle_path(cdouble center, double radius) {
  return [center, radius](double t) -> cdouble { return center + std::polar(radius, 2.0 * std::numbers::pi * t); };
}

}  // namespace detail

/// Zero count of f inside `rect`, with multiplicity.
inline int winding_number(const PiecewiseConstantPotential& p, const KRectangle& rect, int samples_per_side,
                          const RootFinderOptions& opt = {}) {
  rect.validate();
  if (rect.contains(cdouble(0.0, 0.0))) throw ConfigError("k-rectangle must not contain k = 0");
  auto f = [&p](cdouble k) { return matching_function(p, k); };
  return detail::contour_winding(f, detail::rectangle_path(rect), 4 * samples_per_side, opt);
}

enum class PoleKind { Resonance, BoundState };

inline const char* to_string(PoleKind kind) { return kind == PoleKind::Resonance ? "resonance" : "bound_state"; }

struct ResonancePole {
  cdouble z;
  cdouble k;
  int multiplicity = 1;
  bool certified = false;
  PoleKind kind = PoleKind::Resonance;
  double abs_f = 0.0;  ///< |f(k)| at the reported point
};

struct ResonanceSet {
  std::vector<ResonancePole> poles;
  KRectangle search_region;
  std::string potential_digest;
  int total_winding = 0;           ///< winding of f over the whole search region
  double boundary_max_abs_f = 0.0;  ///< max |f| sampled on the search boundary
};

/// z = k^2 with the argument carried continuously from arg k: resonances
/// reached by continuation across (0, inf) from above get arg z = 2 arg k in
/// (-pi, 0), physical-sheet points get arg z in (0, 2 pi).
inline double pole_sector_arg(const ResonancePole& pole) {
  double ak = std::arg(pole.k);
  return 2.0 * ak;
}

/// True when the pole lies in the window, with the argument read off the
/// k-plane rather than from z alone.
inline bool pole_in_window(const ResonancePole& pole, const SectorWindow& w) {
  const double a = pole_sector_arg(pole);
  const double r = std::abs(pole.z);
  return a > w.arg_min && a < w.arg_max && r >= w.radius_min && r <= w.radius_max;
}

namespace detail {

inline cdouble central_derivative(const PiecewiseConstantPotential& p, cdouble k) {
  const double h = 1e-6 * (1.0 + std::abs(k));
  return (matching_function(p, k + h) - matching_function(p, k - h)) / (2.0 * h);
}

struct NewtonResult {
  cdouble k;
  bool converged = false;
};

inline NewtonResult newton(const PiecewiseConstantPotential& p, cdouble k, const RootFinderOptions& opt) {
  for (int it = 0; it < opt.newton_max_iter; ++it) {
    if (k == cdouble(0.0, 0.0)) return {k, false};
    const cdouble fk = matching_function(p, k);
    const cdouble dk = fk / central_derivative(p, k);
    if (!std::isfinite(dk.real()) || !std::isfinite(dk.imag())) return {k, false};
    k -= dk;
    if (std::abs(dk) <= opt.newton_tol * (1.0 + std::abs(k))) return {k, true};
  }
  return {k, false};
}

struct Cell {
  KRectangle rect;
  int winding;
  int depth;
};

// Splits `cell` in two along its longer side, nudging the cut off any zero.
inline std::pair<Cell, Cell> split_cell(const PiecewiseConstantPotential& p, const Cell& cell,
                                        const RootFinderOptions& opt) {
  static constexpr double kFractions[] = {0.5, 0.47, 0.53, 0.43, 0.57, 0.39, 0.61, 0.35, 0.65};
  const bool vertical_cut = cell.rect.width() >= cell.rect.height();
  for (double frac : kFractions) {
    KRectangle a = cell.rect, b = cell.rect;
    if (vertical_cut) {
      const double cut = cell.rect.re_min + frac * cell.rect.width();
      a.re_max = cut;
      b.re_min = cut;
    } else {
      const double cut = cell.rect.im_min + frac * cell.rect.height();
      a.im_max = cut;
      b.im_min = cut;
    }
    try {
      const int wa = winding_number(p, a, opt.samples_per_side, opt);
      const int wb = winding_number(p, b, opt.samples_per_side, opt);
      if (wa + wb != cell.winding) continue;
      return {Cell{a, wa, cell.depth + 1}, Cell{b, wb, cell.depth + 1}};
    } catch (const BoundaryTooCloseToZero&) {
      continue;
    }
  }
  throw NumericalError("could not subdivide search cell without crossing a zero");
}

}  // namespace detail

/// Recursive argument-principle bisection of `rect` plus Newton refinement.
/// Every isolated root is certified by a unit winding number on a small
/// circle around it; clusters that survive to min_cell_size are reported
/// once with their total multiplicity.
inline ResonanceSet find_resonances(const PiecewiseConstantPotential& p, const KRectangle& rect,
                                    const RootFinderOptions& opt = {}) {
  rect.validate();
  if (rect.distance_to_origin() < opt.threshold_exclusion_radius)
    throw ConfigError("search rectangle must stay outside the threshold exclusion disk");

  ResonanceSet out;
  out.search_region = rect;
  out.potential_digest = potential_digest(p);
  {
    auto f = [&p](cdouble k) { return matching_function(p, k); };
    out.total_winding = detail::contour_winding(f, detail::rectangle_path(rect), 4 * opt.samples_per_side, opt,
                                                &out.boundary_max_abs_f);
  }

  auto make_pole = [&](cdouble k, int multiplicity, bool certified) {
    ResonancePole pole;
    pole.k = k;
    pole.z = k * k;
    pole.multiplicity = multiplicity;
    pole.certified = certified;
    pole.kind = k.imag() > 0.0 ? PoleKind::BoundState : PoleKind::Resonance;
    pole.abs_f = std::abs(matching_function(p, k));
    return pole;
  };

  std::vector<detail::Cell> stack{{rect, out.total_winding, 0}};
  while (!stack.empty()) {
    const detail::Cell cell = stack.back();
    stack.pop_back();
    if (cell.winding == 0) continue;
    if (cell.depth > opt.max_depth) throw BudgetExceeded("subdivision depth limit reached");

    if (cell.winding == 1) {
      const auto res = detail::newton(p, cell.rect.center(), opt);
      const double slack = 1e-9 * (1.0 + std::max(cell.rect.width(), cell.rect.height()));
      if (res.converged && cell.rect.contains(res.k, slack) && std::abs(res.k) >= opt.threshold_exclusion_radius) {
        const double radius = std::max(1e-6, 100.0 * opt.newton_tol) * (1.0 + std::abs(res.k));
        bool certified = false;
        try {
          auto f = [&p](cdouble k) { return matching_function(p, k); };
          certified = detail::contour_winding(f, detail::circle_path(res.k, radius), 64, opt) == 1;
        } catch (const NumericalError&) {
          certified = false;
        }
        out.poles.push_back(make_pole(res.k, 1, certified));
        continue;
      }
    }

    if (std::max(cell.rect.width(), cell.rect.height()) < opt.min_cell_size) {
      out.poles.push_back(make_pole(cell.rect.center(), cell.winding, true));
      continue;
    }
    auto [a, b] = detail::split_cell(p, cell, opt);
    stack.push_back(b);
    stack.push_back(a);
  }

  std::sort(out.poles.begin(), out.poles.end(),
            [](const ResonancePole& a, const ResonancePole& b) { return spectrum_order(a.z, b.z); });
  return out;
}

}  // namespace viscolim
