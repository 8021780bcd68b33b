#include <gtest/gtest.h>

#include <numbers>

#include "viscolim/harness.hpp"
#include "viscolim/oracles.hpp"

using namespace viscolim;

namespace {

const PiecewiseConstantPotential kBarrier({{-1, 1, 10}});

SweepConfig barrier_config() {
  SweepConfig cfg;
  cfg.potential = kBarrier;
  cfg.epsilons = {0.25, 0.1, 0.025};
  cfg.basis_size = 256;
  cfg.basis_scale = 2.0;
  cfg.stability.match_tol = 1e-2;
  cfg.window = SectorWindow{-std::numbers::pi / 4 + 0.05, std::numbers::pi / 2, 0.5, 15};
  return cfg;
}

}  // namespace

TEST(Harness, BarrierErrorShrinksAlongLadder) {
  const ConvergenceReport r = run_sweep(barrier_config());
  ASSERT_EQ(r.resonances.size(), 1u);
  EXPECT_NEAR(std::abs(r.resonances[0].z - cdouble(11.882874871254218, -1.2842071483211412)), 0.0, 1e-9);
  for (const auto& e : r.per_epsilon) EXPECT_TRUE(e.failure.empty()) << e.failure;
  ASSERT_FALSE(std::isnan(r.errors[0][0]));
  ASSERT_FALSE(std::isnan(r.errors[0][2]));
  EXPECT_LT(r.errors[0][2], r.errors[0][0]);
  EXPECT_EQ(r.disk_counts.size(), 3u);
}

TEST(Harness, QuadraticSweepAgainstOracle) {
  SweepConfig cfg;
  cfg.potential = AnalyticPotential::quadratic(1.0);
  cfg.epsilons = {0.25, 0.1};
  cfg.basis_size = 96;
  cfg.basis_scale = 1.6;
  cfg.stability.match_tol = 1e-6;
  cfg.window.radius_max = 10;
  cfg.match_radius = 1.5;  // the viscosity shift reaches eps (2k + 1) / 2
  const ConvergenceReport r = run_sweep(cfg);
  // resonances 1, 3, 5, 7, 9 on the positive axis
  ASSERT_EQ(r.resonances.size(), 5u);
  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
    const double eps = cfg.epsilons[e];
    const auto exact = quadratic_cap_eigenvalues({1.0}, {}, eps, {1, 4});
    for (std::size_t k = 0; k < exact.size(); ++k) {
      double best = INFINITY;
      for (const auto& z : r.per_epsilon[e].candidates) best = std::min(best, std::abs(z - exact[k]));
      EXPECT_LE(best, 1e-6) << eps << " " << k;
      // distance to the resonance is the O(eps) viscosity shift
      EXPECT_LE(r.errors[k][e], eps * (2.0 * k + 1.0)) << eps << " " << k;
    }
  }
}

TEST(Harness, ZeroPotentialEigenvaluesOnDaviesRay) {
  SweepConfig cfg;
  cfg.epsilons = {0.25, 0.1};
  cfg.basis_size = 64;
  const ConvergenceReport r = run_sweep(cfg);
  EXPECT_TRUE(r.resonances.empty());
  for (const auto& e : r.per_epsilon) {
    EXPECT_TRUE(e.match.pairs.empty());
    EXPECT_TRUE(e.candidates.empty());
    for (std::size_t i = 0; i < e.spectrum.size(); ++i)
      if (e.spectrum.stable[i])
        EXPECT_NEAR(std::arg(e.spectrum.eigenvalues[i]), -std::numbers::pi / 4, 1e-8);
  }
}

TEST(Harness, ConjugationForBarrier) {
  SweepConfig cfg = barrier_config();
  cfg.basis_size = 96;
  cfg.window = default_window();
  const ConjugationReport c = conjugation_check(kBarrier, 0.1, cfg);
  EXPECT_GT(c.plus_count, 0u);
  EXPECT_EQ(c.plus_count, c.minus_count);
  EXPECT_LE(c.distance, 1e-10);
}

TEST(Harness, ZeroPotentialReflectsDaviesRay) {
  SweepConfig cfg;
  CapConfig minus = cfg.cap_config(-0.25);
  minus.basis_size = 64;
  minus.quadrature_order = 128;
  const Spectrum s = stable_only(stability_filter(AnalyticPotential::zero(), minus));
  ASSERT_GE(s.size(), 10u);
  for (const auto& z : s.eigenvalues) EXPECT_NEAR(std::arg(z), std::numbers::pi / 4, 1e-8);
}

TEST(Harness, HausdorffDistance) {
  EXPECT_EQ(hausdorff_distance({}, {}), 0.0);
  EXPECT_TRUE(std::isinf(hausdorff_distance({{1, 0}}, {})));
  EXPECT_NEAR(hausdorff_distance({{0, 0}, {1, 0}}, {{0, 0}}), 1.0, 1e-15);
}

TEST(Harness, PseudospectrumTable) {
  PseudospectrumConfig cfg;
  cfg.basis_size = 60;
  cfg.points = {std::polar(1.0, -std::numbers::pi / 8), {2, 0}, 0.5 * std::polar(1.0, -std::numbers::pi / 4)};
  cfg.epsilons = {0.25, 0.04};
  const PseudospectrumTable t = pseudospectrum_scan(cfg);
  ASSERT_EQ(t.rows.size(), 6u);
  ASSERT_EQ(t.growth.size(), 3u);
  EXPECT_TRUE(t.rows[0].in_sector);
  EXPECT_FALSE(t.rows[1].in_sector);
  EXPECT_FALSE(t.rows[2].in_sector);
  // 0.5 e^{-i pi/4} is the ground state at eps = 0.25
  EXPECT_GT(t.rows[2].norm, 1e10);
  EXPECT_NEAR(t.growth[0][0], t.rows[3].norm / t.rows[0].norm, 1e-15);
}

TEST(Harness, GridPoints) {
  const auto g = grid_points(0, 1, -1, 0, 3, 2);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g.front(), cdouble(0, -1));
  EXPECT_EQ(g.back(), cdouble(1, 0));
  EXPECT_THROW(grid_points(0, 1, 0, 1, 0, 1), ConfigError);
}

TEST(Harness, Example4StableEigenvaluesAreCertified) {
  SweepConfig cfg;
  cfg.epsilons = {0.1};
  cfg.basis_size = 200;
  const auto runs = example4_sweep(cfg);
  ASSERT_EQ(runs.size(), 1u);
  for (std::size_t i = 0; i < runs[0].spectrum.size(); ++i) {
    EXPECT_LE(runs[0].spectrum.residuals[i], 1e-8);
    EXPECT_TRUE(cfg.window.contains(runs[0].spectrum.eigenvalues[i]));
  }
}

TEST(Harness, ConfigValidation) {
  SweepConfig cfg;
  cfg.epsilons = {0.1, 0.25};
  EXPECT_THROW(run_sweep(cfg), ConfigError);
  cfg.epsilons = {};
  EXPECT_THROW(run_sweep(cfg), ConfigError);
  cfg.epsilons = {0.1};
  cfg.potential = AnalyticPotential::sinc();
  EXPECT_THROW(run_sweep(cfg), ConfigError);
}

TEST(Harness, SuppliedResonancesBypassSolver) {
  SweepConfig cfg;
  cfg.potential = AnalyticPotential::sinc();
  cfg.resonances = std::vector<WeightedResonance>{{{1, -0.1}, 1}, {{-5, -5}, 1}};
  const auto r = window_resonances(cfg);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].z, cdouble(1, -0.1));
}

TEST(Harness, StrictDecrease) {
  ConvergenceReport r;
  r.errors = {{0.3, 0.2, 0.1}, {0.3, 0.3, 0.1}, {0.3, NAN, 0.1}};
  EXPECT_TRUE(strictly_decreasing_errors(r, 0));
  EXPECT_FALSE(strictly_decreasing_errors(r, 1));
  EXPECT_FALSE(strictly_decreasing_errors(r, 2));
}

TEST(Parallel, CollectsExceptions) {
  std::vector<int> hits(8, 0);
  const auto errs = parallel_for(8, [&](std::size_t i) {
    hits[i] = 1;
    if (i == 5) throw ConfigError("boom");
  });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 8);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(static_cast<bool>(errs[i]), i == 5);
}
