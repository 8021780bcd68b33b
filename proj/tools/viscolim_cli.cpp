// viscolim: command-line driver for the CAP / resonance experiments.
//
//   viscolim <subcommand> [--config file.json] [overrides...]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "viscolim/viscolim.hpp"

namespace fs = std::filesystem;
using namespace viscolim;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::optional<int> basis_size;
  std::optional<double> basis_scale;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("-c,--config", o.config_path, "JSON configuration file");
  sub->add_option("-o,--out", o.out_dir, "output directory (overrides output_dir)");
  sub->add_option("--epsilon", o.epsilon, "CAP strength for single-epsilon commands");
  sub->add_option("--alpha", o.alpha, "CAP phase alpha in [0, pi)");
  sub->add_option("-N,--basis-size", o.basis_size, "Hermite basis size");
  sub->add_option("--basis-scale", o.basis_scale, "extra basis dilation s > 0");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.out_dir) cfg.sweep.output_dir = *o.out_dir;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.alpha) cfg.sweep.alpha = *o.alpha;
  if (o.basis_size) {
    cfg.sweep.basis_size = *o.basis_size;
    cfg.sweep.quadrature_order = 0;
  }
  if (o.basis_scale) cfg.sweep.basis_scale = *o.basis_scale;
  return cfg;
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) { return fs::path(cfg.sweep.output_dir) / name; }

const PiecewiseConstantPotential& require_piecewise(const Potential& p) {
  if (const auto* pc = std::get_if<PiecewiseConstantPotential>(&p)) return *pc;
  if (const auto* an = std::get_if<AnalyticPotential>(&p); an && !an->compact()) throw NonCompactSupport();
  throw ConfigError("the direct resonance solver needs a piecewise constant potential");
}

std::vector<cdouble> resonance_points(const ResonanceSet& set) {
  std::vector<cdouble> out;
  for (const auto& p : set.poles) out.push_back(p.z);
  return out;
}

int cmd_resonances(const CommonOptions& o, const std::optional<KRectangle>& rect_flag) {
  const ExperimentConfig cfg = resolve(o);
  const auto& pc = require_piecewise(cfg.sweep.potential);
  KRectangle rect;
  if (rect_flag) {
    rect = *rect_flag;
  } else if (!cfg.sweep.search_rects.empty()) {
    rect = cfg.sweep.search_rects.front();
  } else {
    const auto rects = default_search_rects(cfg.sweep.window, cfg.sweep.root_options);
    if (rects.empty()) throw ConfigError("window does not reach the resonance region; give a k-rectangle");
    rect = rects.front();
  }
  const ResonanceSet set = find_resonances(pc, rect, cfg.sweep.root_options);
  write_text(out_path(cfg, "resonances.csv"), resonance_csv(set));
  write_text(out_path(cfg, "resonances.json"), to_json_value(set).dump(2) + "\n");
  write_text(out_path(cfg, "resonances.svg"),
             svg_scatter({{"resonances", "#d62728", true, resonance_points(set)}}, "resonances (z = k^2)"));
  fmt::print("{} zero(s), total winding {}\n", set.poles.size(), set.total_winding);
  for (const auto& p : set.poles)
    fmt::print("  k = {:.12g} {:+.12g}i   z = {:.12g} {:+.12g}i   m = {}  {}{}\n", p.k.real(), p.k.imag(), p.z.real(),
               p.z.imag(), p.multiplicity, to_string(p.kind), p.certified ? "" : "  (uncertified)");
  return 0;
}

int cmd_cap_spectrum(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const CapConfig cap = cfg.sweep.cap_config(cfg.epsilon);
  const Spectrum s = stability_filter(cfg.sweep.potential, cap, cfg.sweep.stability);
  const TaggedSpectrum tagged{cap.epsilon, cap.alpha, s};
  write_text(out_path(cfg, "spectrum.csv"), spectrum_csv({tagged}));
  write_text(out_path(cfg, "spectrum.json"), to_json_value(tagged).dump(2) + "\n");
  const Spectrum shown = filter_sector(stable_only(s), cfg.sweep.window);
  write_text(out_path(cfg, "spectrum.svg"),
             svg_scatter({{fmt::format("eps = {:.6g}", cap.epsilon), series_color(0), false, shown.eigenvalues}},
                         "stable eigenvalues of P_eps"));
  std::size_t stable = 0;
  for (bool b : s.stable) stable += b;
  fmt::print("{} eigenvalues, {} stable, {} stable in window\n", s.size(), stable, shown.size());
  for (const auto& z : shown.eigenvalues) fmt::print("  {:.12g} {:+.12g}i\n", z.real(), z.imag());
  return 0;
}

int cmd_sweep(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const ConvergenceReport report = run_sweep(cfg.sweep);
  write_text(out_path(cfg, "report.json"), to_json_value(report).dump(2) + "\n");
  write_text(out_path(cfg, "sweep_pairs.csv"), report_pairs_csv(report));
  write_text(out_path(cfg, "sweep_disks.csv"), report_disk_csv(report));
  std::vector<TaggedSpectrum> spectra;
  std::vector<SvgSeries> series;
  for (std::size_t e = 0; e < report.per_epsilon.size(); ++e) {
    const auto& r = report.per_epsilon[e];
    spectra.push_back({r.epsilon, cfg.sweep.alpha, r.spectrum});
    series.push_back({fmt::format("eps = {:.6g}", r.epsilon), series_color(e), false, r.candidates});
  }
  std::vector<cdouble> res;
  for (const auto& r : report.resonances) res.push_back(r.z);
  series.push_back({"resonances", "#d62728", true, res});
  write_text(out_path(cfg, "sweep_spectra.csv"), spectrum_csv(spectra));
  write_text(out_path(cfg, "sweep.svg"), svg_scatter(series, "CAP eigenvalues vs resonances"));

  bool failed = false;
  fmt::print("{} resonance(s) in window\n", report.resonances.size());
  for (std::size_t r = 0; r < report.resonances.size(); ++r) {
    const cdouble z = report.resonances[r].z;
    fmt::print("  z = {:.12g} {:+.12g}i  errors:", z.real(), z.imag());
    for (double err : report.errors[r]) fmt::print(" {:.3e}", err);
    fmt::print("{}\n", strictly_decreasing_errors(report, r) ? "  (decreasing)" : "");
  }
  for (const auto& e : report.per_epsilon)
    if (!e.failure.empty()) {
      failed = true;
      fmt::print(stderr, "epsilon {}: FAILED: {}\n", e.epsilon, e.failure);
    }
  return failed ? 3 : 0;
}

int cmd_oracle(const CommonOptions& o, const std::optional<std::vector<double>>& lambdas,
               const std::optional<std::vector<double>>& mus, const std::optional<int>& max_level, bool davies,
               const std::optional<double>& gamma) {
  ExperimentConfig cfg = resolve(o);
  OracleConfig& oc = cfg.oracle;
  if (lambdas) oc.lambdas = *lambdas;
  if (mus) oc.mus = *mus;
  if (max_level) oc.max_level = *max_level;
  if (davies) oc.davies = true;
  if (gamma) oc.gamma = *gamma;
  if (o.epsilon) oc.epsilon = *o.epsilon;
  std::vector<cdouble> values;
  const int n = static_cast<int>(oc.lambdas.size() + oc.mus.size());
  if (oc.davies) {
    values = davies_spectrum(oc.epsilon.value_or(cfg.epsilon), oc.gamma, {std::max(n, 1), oc.max_level});
  } else if (oc.epsilon) {
    values = quadratic_cap_eigenvalues(oc.lambdas, oc.mus, *oc.epsilon, {n, oc.max_level});
  } else {
    values = quadratic_resonances(oc.lambdas, oc.mus, {n, oc.max_level});
  }
  write_text(out_path(cfg, "oracle.csv"), oracle_csv(values));
  for (const auto& z : values) fmt::print("{} {}\n", fmt17(z.real()), fmt17(z.imag()));
  return 0;
}

int cmd_conjugation(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const ConjugationReport rep = conjugation_check(cfg.sweep.potential, cfg.epsilon, cfg.sweep);
  const json j = {{"epsilon", rep.epsilon},
                  {"hausdorff_distance", detail::number(rep.distance)},
                  {"plus_count", rep.plus_count},
                  {"minus_count", rep.minus_count}};
  write_text(out_path(cfg, "conjugation.json"), j.dump(2) + "\n");
  fmt::print("epsilon {}: {} vs {} stable windowed eigenvalues, Hausdorff distance {:.3e}\n", rep.epsilon,
             rep.plus_count, rep.minus_count, rep.distance);
  return 0;
}

int cmd_pseudospectrum(const CommonOptions& o) {
  ExperimentConfig cfg = resolve(o);
  if (o.basis_size) cfg.pseudospectrum.basis_size = *o.basis_size;
  if (cfg.pseudospectrum.points.empty()) throw ConfigError("pseudospectrum scan needs points or a grid");
  const PseudospectrumTable t = pseudospectrum_scan(cfg.pseudospectrum);
  write_text(out_path(cfg, "pseudospectrum.csv"), pseudospectrum_csv(t));
  write_text(out_path(cfg, "pseudospectrum.json"), to_json_value(t).dump(2) + "\n");
  const std::size_t np = cfg.pseudospectrum.points.size();
  for (std::size_t i = 0; i < np; ++i) {
    const cdouble z = cfg.pseudospectrum.points[i];
    fmt::print("z = {:.6g} {:+.6g}i:", z.real(), z.imag());
    for (std::size_t e = 0; e < cfg.pseudospectrum.epsilons.size(); ++e) fmt::print(" {:.6e}", t.rows[e * np + i].norm);
    fmt::print("  growth");
    for (double g : t.growth[i]) fmt::print(" {:.4g}", g);
    fmt::print("\n");
  }
  return 0;
}

int cmd_example4(const CommonOptions& o) {
  ExperimentConfig cfg = resolve(o);
  const auto runs = example4_sweep(cfg.sweep);
  std::vector<SvgSeries> series;
  json all = json::array();
  for (std::size_t e = 0; e < runs.size(); ++e) {
    const TaggedSpectrum tagged{runs[e].epsilon, cfg.sweep.alpha, runs[e].spectrum};
    write_text(out_path(cfg, fmt::format("example4_eps_{:g}.csv", runs[e].epsilon)), spectrum_csv({tagged}));
    all.push_back(to_json_value(tagged));
    series.push_back({fmt::format("eps = {:.6g}", runs[e].epsilon), series_color(e), false, runs[e].spectrum.eigenvalues});
    fmt::print("epsilon {}: {} stable eigenvalue(s) in window\n", runs[e].epsilon, runs[e].spectrum.size());
  }
  write_text(out_path(cfg, "example4.json"), json{{"exploratory", true}, {"runs", all}}.dump(2) + "\n");
  write_text(out_path(cfg, "example4.svg"), svg_scatter(series, "sin(x)/x: stable CAP eigenvalues (exploratory)"));
  return 0;
}

int cmd_export(const std::string& input, const std::string& format, const std::string& output) {
  json j;
  try {
    j = json::parse(read_text(input));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + input + ": " + e.what());
  }
  std::string text;
  try {
    if (j.contains("poles")) {
      const ResonanceSet set = resonance_set_from_json(j);
      if (format == "csv") text = resonance_csv(set);
      else if (format == "json") text = to_json_value(set).dump(2) + "\n";
      else text = svg_scatter({{"resonances", "#d62728", true, resonance_points(set)}}, "resonances (z = k^2)");
    } else if (j.contains("per_epsilon")) {
      const ConvergenceReport r = report_from_json(j);
      if (format == "csv") text = report_pairs_csv(r);
      else if (format == "json") text = to_json_value(r).dump(2) + "\n";
      else {
        std::vector<SvgSeries> series;
        for (std::size_t e = 0; e < r.per_epsilon.size(); ++e)
          series.push_back({fmt::format("eps = {:.6g}", r.per_epsilon[e].epsilon), series_color(e), false,
                            r.per_epsilon[e].candidates});
        std::vector<cdouble> res;
        for (const auto& x : r.resonances) res.push_back(x.z);
        series.push_back({"resonances", "#d62728", true, res});
        text = svg_scatter(series, "CAP eigenvalues vs resonances");
      }
    } else if (j.contains("spectrum")) {
      const TaggedSpectrum t = tagged_spectrum_from_json(j);
      if (format == "csv") text = spectrum_csv({t});
      else if (format == "json") text = to_json_value(t).dump(2) + "\n";
      else text = svg_scatter({{fmt::format("eps = {:.6g}", t.epsilon), series_color(0), false, t.spectrum.eigenvalues}},
                              "eigenvalues of P_eps");
    } else {
      throw ConfigError("unrecognized artifact in " + input);
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed artifact " + input + ": " + e.what());
  }
  write_text(output, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscolim: scattering resonances as limits of complex-absorbing-potential eigenvalues"};
  app.require_subcommand(1);

  CommonOptions res_opt, cap_opt, sweep_opt, oracle_opt, conj_opt, ps_opt, ex4_opt;

  auto* res = app.add_subcommand("resonances", "direct resonance search for a step potential");
  add_common(res, res_opt);
  std::vector<double> rect_values;
  res->add_option("--k-rect", rect_values, "search rectangle re_min re_max im_min im_max")->expected(4);

  auto* cap = app.add_subcommand("cap-spectrum", "stability-filtered spectrum of P_eps at one epsilon");
  add_common(cap, cap_opt);

  auto* sweep = app.add_subcommand("sweep", "epsilon sweep matched against resonances");
  add_common(sweep, sweep_opt);

  auto* oracle = app.add_subcommand("oracle", "closed-form quadratic / Davies spectra");
  add_common(oracle, oracle_opt);
  std::optional<std::vector<double>> lambdas, mus;
  std::optional<int> max_level;
  std::optional<double> gamma;
  bool davies = false;
  oracle->add_option("--lambdas", lambdas, "confining frequencies");
  oracle->add_option("--mus", mus, "inverted frequencies");
  oracle->add_option("--max-level", max_level, "largest |k|");
  oracle->add_flag("--davies", davies, "Davies spectrum instead of the quadratic lattice");
  oracle->add_option("--gamma", gamma, "Davies phase");

  auto* conj = app.add_subcommand("conjugation", "compare spectra at +eps and -eps");
  add_common(conj, conj_opt);

  auto* ps = app.add_subcommand("pseudospectrum", "resolvent norms of the Davies oscillator");
  add_common(ps, ps_opt);

  auto* ex4 = app.add_subcommand("example4", "exploratory sweep for V = sin(x)/x");
  add_common(ex4, ex4_opt);

  auto* exp = app.add_subcommand("export", "convert a JSON artifact to csv, json or svg");
  std::string input, format = "csv", output;
  exp->add_option("-i,--input", input, "JSON artifact")->required();
  exp->add_option("-f,--format", format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  exp->add_option("-o,--output", output, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*res) {
      std::optional<KRectangle> rect;
      if (!rect_values.empty()) {
        rect = KRectangle{rect_values[0], rect_values[1], rect_values[2], rect_values[3]};
        rect->validate();
      }
      return cmd_resonances(res_opt, rect);
    }
    if (*cap) return cmd_cap_spectrum(cap_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*oracle) return cmd_oracle(oracle_opt, lambdas, mus, max_level, davies, gamma);
    if (*conj) return cmd_conjugation(conj_opt);
    if (*ps) return cmd_pseudospectrum(ps_opt);
    if (*ex4) return cmd_example4(ex4_opt);
    if (*exp) return cmd_export(input, format, output);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    switch (e.kind()) {
      case ErrorKind::Config:
        return 2;
      case ErrorKind::Numerical:
        return 3;
      case ErrorKind::Io:
        return 4;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  }
  return 0;
}
