#pragma once

// Single-document JSON configuration shared by all CLI subcommands. Every
// section is optional; missing fields keep their defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "viscolim/error.hpp"
#include "viscolim/export.hpp"
#include "viscolim/harness.hpp"

namespace viscolim {

struct OracleConfig {
  std::vector<double> lambdas{1.0};
  std::vector<double> mus;
  std::optional<double> epsilon;  ///< set: CAP eigenvalues, unset: resonances
  int max_level = 4;
  bool davies = false;  ///< Davies spectrum instead of the quadratic lattice
  double gamma = std::numbers::pi / 2;
};

struct ExperimentConfig {
  SweepConfig sweep;
  double epsilon = 0.25;  ///< single-epsilon commands (cap-spectrum, conjugation)
  PseudospectrumConfig pseudospectrum;
  OracleConfig oracle;
};

namespace detail {

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  SweepConfig& s = cfg.sweep;
  try {
    if (j.contains("potential")) s.potential = potential_from_json(j.at("potential"));
    if (j.contains("cap")) {
      const json& c = j.at("cap");
      detail::read_if(c, "epsilon", cfg.epsilon);
      detail::read_if(c, "alpha", s.alpha);
      detail::read_if(c, "basis_size", s.basis_size);
      detail::read_if(c, "quadrature_order", s.quadrature_order);
      detail::read_if(c, "basis_scale", s.basis_scale);
    }
    if (j.contains("stability")) {
      const json& c = j.at("stability");
      detail::read_if(c, "growth", s.stability.growth);
      detail::read_if(c, "match_tol", s.stability.match_tol);
      detail::read_if(c, "residual_tol", s.stability.residual_tol);
    }
    if (j.contains("window")) {
      const json& c = j.at("window");
      detail::read_if(c, "arg_min", s.window.arg_min);
      detail::read_if(c, "arg_max", s.window.arg_max);
      detail::read_if(c, "radius_min", s.window.radius_min);
      detail::read_if(c, "radius_max", s.window.radius_max);
    }
    if (j.contains("sweep")) {
      const json& c = j.at("sweep");
      detail::read_if(c, "epsilons", s.epsilons);
      detail::read_if(c, "match_radius", s.match_radius);
      if (c.contains("tolerance")) s.tolerance = c.at("tolerance").get<double>();
    }
    if (j.contains("resonances")) {
      const json& c = j.at("resonances");
      if (c.contains("search_rects"))
        for (const auto& r : c.at("search_rects")) s.search_rects.push_back(krect_from_json(r));
      detail::read_if(c, "newton_tol", s.root_options.newton_tol);
      detail::read_if(c, "threshold_exclusion_radius", s.root_options.threshold_exclusion_radius);
      detail::read_if(c, "samples_per_side", s.root_options.samples_per_side);
      detail::read_if(c, "max_depth", s.root_options.max_depth);
      if (c.contains("supplied")) {
        std::vector<WeightedResonance> supplied;
        for (const auto& r : c.at("supplied"))
          supplied.push_back({detail::complex_from(r.at("z")), r.value("multiplicity", 1)});
        s.resonances = std::move(supplied);
      }
    }
    if (j.contains("pseudospectrum")) {
      const json& c = j.at("pseudospectrum");
      PseudospectrumConfig& p = cfg.pseudospectrum;
      detail::read_if(c, "epsilons", p.epsilons);
      detail::read_if(c, "gamma", p.gamma);
      detail::read_if(c, "basis_size", p.basis_size);
      detail::read_if(c, "basis_scale", p.basis_scale);
      if (c.contains("points"))
        for (const auto& z : c.at("points")) p.points.push_back(detail::complex_from(z));
      if (c.contains("grid")) {
        const json& g = c.at("grid");
        const auto grid = grid_points(g.at("re_min").get<double>(), g.at("re_max").get<double>(),
                                      g.at("im_min").get<double>(), g.at("im_max").get<double>(),
                                      g.at("n_re").get<int>(), g.at("n_im").get<int>());
        p.points.insert(p.points.end(), grid.begin(), grid.end());
      }
    }
    if (j.contains("oracle")) {
      const json& c = j.at("oracle");
      OracleConfig& o = cfg.oracle;
      detail::read_if(c, "lambdas", o.lambdas);
      detail::read_if(c, "mus", o.mus);
      if (c.contains("epsilon")) o.epsilon = c.at("epsilon").get<double>();
      detail::read_if(c, "max_level", o.max_level);
      detail::read_if(c, "davies", o.davies);
      detail::read_if(c, "gamma", o.gamma);
    }
    detail::read_if(j, "output_dir", s.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace viscolim
