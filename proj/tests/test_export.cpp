#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>

#include "viscolim/config.hpp"
#include "viscolim/export.hpp"

using namespace viscolim;

TEST(Export, EmptySpectrumIsHeaderOnly) {
  EXPECT_EQ(spectrum_csv({}), "epsilon,alpha,index,re_z,im_z,residual,stable\n");
  EXPECT_EQ(spectrum_csv({TaggedSpectrum{0.1, 0.0, {}}}), "epsilon,alpha,index,re_z,im_z,residual,stable\n");
}

TEST(Export, SpectrumColumns) {
  Spectrum s;
  s.eigenvalues = {{1.0 / 3.0, -0.25}};
  s.residuals = {1e-15};
  s.stable = {true};
  const std::string csv = spectrum_csv({{0.1, 0.0, s}});
  EXPECT_EQ(csv,
            "epsilon,alpha,index,re_z,im_z,residual,stable\n"
            "0.10000000000000001,0,0,0.33333333333333331,-0.25,1.0000000000000001e-15,1\n");
}

TEST(Export, SpectrumJsonRoundTrip) {
  Spectrum s;
  s.eigenvalues = {{1.0 / 3.0, -0.25}, {std::numbers::pi, 1e-300}};
  s.residuals = {1e-15, std::numeric_limits<double>::infinity()};
  s.stable = {true, false};
  s.config_digest = "abc";
  const TaggedSpectrum t{0.1, 0.2, s};
  const TaggedSpectrum back = tagged_spectrum_from_json(json::parse(to_json_value(t).dump()));
  EXPECT_EQ(back.epsilon, t.epsilon);
  EXPECT_EQ(back.alpha, t.alpha);
  EXPECT_EQ(back.spectrum.eigenvalues, s.eigenvalues);
  EXPECT_EQ(back.spectrum.residuals, s.residuals);
  EXPECT_EQ(back.spectrum.stable, s.stable);
  EXPECT_EQ(back.spectrum.config_digest, s.config_digest);
}

TEST(Export, ResonanceSetRoundTrip) {
  const PiecewiseConstantPotential p({{-1, 1, 10}});
  const ResonanceSet set = find_resonances(p, KRectangle{0.3, 6, -2, -1e-3});
  const ResonanceSet back = resonance_set_from_json(json::parse(to_json_value(set).dump()));
  ASSERT_EQ(back.poles.size(), set.poles.size());
  for (std::size_t i = 0; i < set.poles.size(); ++i) {
    EXPECT_EQ(back.poles[i].k, set.poles[i].k);
    EXPECT_EQ(back.poles[i].z, set.poles[i].z);
    EXPECT_EQ(back.poles[i].multiplicity, set.poles[i].multiplicity);
    EXPECT_EQ(back.poles[i].certified, set.poles[i].certified);
    EXPECT_EQ(back.poles[i].kind, set.poles[i].kind);
    EXPECT_EQ(back.poles[i].abs_f, set.poles[i].abs_f);
  }
  EXPECT_EQ(back.total_winding, set.total_winding);
  EXPECT_EQ(back.potential_digest, set.potential_digest);
  EXPECT_EQ(resonance_csv(back), resonance_csv(set));
  EXPECT_EQ(resonance_csv(set).substr(0, resonance_csv(set).find('\n')),
            "re_k,im_k,re_z,im_z,multiplicity,certified,kind");
}

TEST(Export, ReportRoundTripAndDeterminism) {
  SweepConfig cfg;
  cfg.potential = AnalyticPotential::quadratic(1.0);
  cfg.epsilons = {0.25, 0.1};
  cfg.basis_size = 48;
  cfg.basis_scale = 1.6;
  cfg.window.radius_max = 6;
  const ConvergenceReport a = run_sweep(cfg);
  const ConvergenceReport b = run_sweep(cfg);
  EXPECT_EQ(to_json_value(a).dump(), to_json_value(b).dump());
  EXPECT_EQ(report_pairs_csv(a), report_pairs_csv(b));

  const ConvergenceReport back = report_from_json(json::parse(to_json_value(a).dump()));
  EXPECT_EQ(to_json_value(back).dump(), to_json_value(a).dump());
  EXPECT_EQ(report_pairs_csv(back), report_pairs_csv(a));
  EXPECT_EQ(report_disk_csv(back), report_disk_csv(a));
}

TEST(Export, NonFiniteNumbers) {
  const json nan_json = detail::number(std::numeric_limits<double>::quiet_NaN());
  EXPECT_TRUE(nan_json.is_null());
  EXPECT_TRUE(std::isnan(detail::number_from(nan_json)));
  EXPECT_TRUE(std::isinf(detail::number_from(detail::number(std::numeric_limits<double>::infinity()))));
}

TEST(Export, SvgHasMarkersPerSeries) {
  const std::string svg = svg_scatter({{"eps = 0.1", series_color(0), false, {{1, -0.1}, {2, -0.2}}},
                                       {"resonances", "#d62728", true, {{1, -0.12}}}},
                                      "test");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_NE(svg.find("resonances"), std::string::npos);
  EXPECT_EQ(svg, svg_scatter({{"eps = 0.1", series_color(0), false, {{1, -0.1}, {2, -0.2}}},
                              {"resonances", "#d62728", true, {{1, -0.12}}}},
                             "test"));
}

TEST(Export, IoErrorsCarryPath) {
  const std::filesystem::path bad = "/nonexistent_dir_for_viscolim/x/out.csv";
  try {
    read_text(bad);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
  }
}

TEST(Config, ParsesSections) {
  const auto cfg = config_from_json(json::parse(R"({
    "potential": {"type": "piecewise", "pieces": [{"a": -1, "b": 1, "v": 10}]},
    "cap": {"epsilon": 0.1, "basis_size": 64, "basis_scale": 2.0},
    "stability": {"match_tol": 0.01},
    "window": {"arg_min": -0.5, "arg_max": 1.5, "radius_min": 0.5, "radius_max": 15},
    "sweep": {"epsilons": [0.25, 0.1], "match_radius": 0.1, "tolerance": 0.002},
    "resonances": {"search_rects": [{"re_min": 0.5, "re_max": 4, "im_min": -2, "im_max": 0}]},
    "pseudospectrum": {"points": [[1, -0.4]], "grid": {"re_min": 0, "re_max": 1, "im_min": -1, "im_max": 0, "n_re": 2, "n_im": 2}},
    "output_dir": "somewhere"
  })"));
  EXPECT_EQ(cfg.epsilon, 0.1);
  EXPECT_EQ(cfg.sweep.basis_size, 64);
  EXPECT_EQ(cfg.sweep.basis_scale, 2.0);
  EXPECT_EQ(cfg.sweep.stability.match_tol, 0.01);
  EXPECT_EQ(cfg.sweep.window.radius_max, 15);
  EXPECT_EQ(cfg.sweep.epsilons, (std::vector<double>{0.25, 0.1}));
  EXPECT_EQ(cfg.sweep.tolerance, 0.002);
  ASSERT_EQ(cfg.sweep.search_rects.size(), 1u);
  EXPECT_EQ(cfg.sweep.search_rects[0].re_max, 4);
  EXPECT_EQ(cfg.pseudospectrum.points.size(), 5u);
  EXPECT_EQ(cfg.sweep.output_dir, "somewhere");
}

TEST(Config, RejectsMalformed) {
  EXPECT_THROW(config_from_json(json::parse(R"({"cap": {"basis_size": "many"}})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"potential": {"type": "complex"}})")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent_dir_for_viscolim/cfg.json"), IoError);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"barrier.json", "davies.json", "quadratic.json", "pseudospectrum.json", "example4.json"}) {
    const auto path = std::filesystem::path(VISCOLIM_SOURCE_DIR) / "configs" / name;
    EXPECT_NO_THROW({
      const auto cfg = load_config(path);
      cfg.sweep.validate();
    }) << name;
  }
}
