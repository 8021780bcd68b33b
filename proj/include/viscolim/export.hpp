#pragma once

// CSV / JSON / SVG artifacts. CSV floats carry 17 significant digits and a
// fixed column order; JSON mirrors the in-memory structures.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "viscolim/eigensolver.hpp"
#include "viscolim/error.hpp"
#include "viscolim/harness.hpp"
#include "viscolim/resonance_direct.hpp"

namespace viscolim {

using nlohmann::json;

inline std::string fmt17(double x) { return fmt::format("{:.17g}", x); }

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- CSV

/// A spectrum tagged with the epsilon and alpha it was computed at.
struct TaggedSpectrum {
  double epsilon = 0.0;
  double alpha = 0.0;
  Spectrum spectrum;
};

inline std::string spectrum_csv(const std::vector<TaggedSpectrum>& spectra) {
  std::string out = "epsilon,alpha,index,re_z,im_z,residual,stable\n";
  for (const auto& t : spectra)
    for (std::size_t i = 0; i < t.spectrum.size(); ++i) {
      const bool stable = !t.spectrum.stable.empty() && t.spectrum.stable[i];
      out += fmt::format("{},{},{},{},{},{},{}\n", fmt17(t.epsilon), fmt17(t.alpha), i,
                         fmt17(t.spectrum.eigenvalues[i].real()), fmt17(t.spectrum.eigenvalues[i].imag()),
                         fmt17(t.spectrum.residuals[i]), stable ? 1 : 0);
    }
  return out;
}

inline std::string resonance_csv(const ResonanceSet& set) {
  std::string out = "re_k,im_k,re_z,im_z,multiplicity,certified,kind\n";
  for (const auto& p : set.poles)
    out += fmt::format("{},{},{},{},{},{},{}\n", fmt17(p.k.real()), fmt17(p.k.imag()), fmt17(p.z.real()),
                       fmt17(p.z.imag()), p.multiplicity, p.certified ? 1 : 0, to_string(p.kind));
  return out;
}

/// Matched pairs, one row per pair.
inline std::string report_pairs_csv(const ConvergenceReport& r) {
  std::string out = "epsilon,resonance_index,re_res,im_res,re_eig,im_eig,abs_error\n";
  for (const auto& e : r.per_epsilon)
    for (const auto& p : e.match.pairs)
      out += fmt::format("{},{},{},{},{},{},{}\n", fmt17(e.epsilon), p.resonance_index, fmt17(p.resonance.real()),
                         fmt17(p.resonance.imag()), fmt17(p.eigenvalue.real()), fmt17(p.eigenvalue.imag()),
                         fmt17(p.abs_error));
  return out;
}

inline std::string report_disk_csv(const ConvergenceReport& r) {
  std::string out = "epsilon,resonance_index,re_res,im_res,delta,count,expected\n";
  for (const auto& d : r.disk_counts) {
    const cdouble z = r.resonances.at(d.resonance_index).z;
    out += fmt::format("{},{},{},{},{},{},{}\n", fmt17(d.epsilon), d.resonance_index, fmt17(z.real()),
                       fmt17(z.imag()), fmt17(d.delta), d.count, d.expected);
  }
  return out;
}

inline std::string pseudospectrum_csv(const PseudospectrumTable& t) {
  std::string out = "epsilon,gamma,re_z,im_z,resolvent_norm,in_sector\n";
  for (const auto& row : t.rows)
    out += fmt::format("{},{},{},{},{},{}\n", fmt17(row.epsilon), fmt17(t.gamma), fmt17(row.z.real()),
                       fmt17(row.z.imag()), fmt17(row.norm), row.in_sector ? 1 : 0);
  return out;
}

inline std::string oracle_csv(const std::vector<cdouble>& values) {
  std::string out = "index,re_z,im_z\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out += fmt::format("{},{},{}\n", i, fmt17(values[i].real()), fmt17(values[i].imag()));
  return out;
}

// ---------------------------------------------------------------- JSON

namespace detail {

inline json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

inline double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("unexpected number encoding '" + s + "'");
  }
  return j.get<double>();
}

inline json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }
inline cdouble complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace detail

inline json to_json_value(const Spectrum& s) {
  json ev = json::array(), res = json::array(), st = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    ev.push_back(detail::complex_json(s.eigenvalues[i]));
    res.push_back(detail::number(s.residuals[i]));
  }
  for (bool b : s.stable) st.push_back(b);
  return {{"eigenvalues", ev}, {"residuals", res}, {"stable", st}, {"config_digest", s.config_digest}};
}

inline Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  for (const auto& z : j.at("eigenvalues")) s.eigenvalues.push_back(detail::complex_from(z));
  for (const auto& r : j.at("residuals")) s.residuals.push_back(detail::number_from(r));
  for (const auto& b : j.at("stable")) s.stable.push_back(b.get<bool>());
  s.config_digest = j.at("config_digest").get<std::string>();
  if (s.residuals.size() != s.eigenvalues.size() || (!s.stable.empty() && s.stable.size() != s.eigenvalues.size()))
    throw ConfigError("spectrum JSON has inconsistent array lengths");
  return s;
}

inline json to_json_value(const TaggedSpectrum& t) {
  return {{"epsilon", t.epsilon}, {"alpha", t.alpha}, {"spectrum", to_json_value(t.spectrum)}};
}

inline TaggedSpectrum tagged_spectrum_from_json(const json& j) {
  return {j.at("epsilon").get<double>(), j.at("alpha").get<double>(), spectrum_from_json(j.at("spectrum"))};
}

inline json to_json_value(const KRectangle& r) {
  return {{"re_min", r.re_min}, {"re_max", r.re_max}, {"im_min", r.im_min}, {"im_max", r.im_max}};
}

inline KRectangle krect_from_json(const json& j) {
  KRectangle r{j.at("re_min").get<double>(), j.at("re_max").get<double>(), j.at("im_min").get<double>(),
               j.at("im_max").get<double>()};
  r.validate();
  return r;
}

inline json to_json_value(const ResonanceSet& set) {
  json poles = json::array();
  for (const auto& p : set.poles)
    poles.push_back({{"k", detail::complex_json(p.k)},
                     {"z", detail::complex_json(p.z)},
                     {"multiplicity", p.multiplicity},
                     {"certified", p.certified},
                     {"kind", to_string(p.kind)},
                     {"abs_f", p.abs_f}});
  return {{"poles", poles},
          {"search_region", to_json_value(set.search_region)},
          {"potential_digest", set.potential_digest},
          {"total_winding", set.total_winding},
          {"boundary_max_abs_f", set.boundary_max_abs_f}};
}

inline ResonanceSet resonance_set_from_json(const json& j) {
  ResonanceSet set;
  for (const auto& p : j.at("poles")) {
    ResonancePole pole;
    pole.k = detail::complex_from(p.at("k"));
    pole.z = detail::complex_from(p.at("z"));
    pole.multiplicity = p.at("multiplicity").get<int>();
    pole.certified = p.at("certified").get<bool>();
    pole.kind = p.at("kind").get<std::string>() == "bound_state" ? PoleKind::BoundState : PoleKind::Resonance;
    pole.abs_f = p.at("abs_f").get<double>();
    set.poles.push_back(pole);
  }
  set.search_region = krect_from_json(j.at("search_region"));
  set.potential_digest = j.at("potential_digest").get<std::string>();
  set.total_winding = j.at("total_winding").get<int>();
  set.boundary_max_abs_f = j.at("boundary_max_abs_f").get<double>();
  return set;
}

inline json to_json_value(const ConvergenceReport& r) {
  json res = json::array();
  for (const auto& e : r.resonances)
    res.push_back({{"z", detail::complex_json(e.z)}, {"multiplicity", e.multiplicity}, {"certified", e.certified}});
  json per = json::array();
  for (const auto& e : r.per_epsilon) {
    json pairs = json::array();
    for (const auto& p : e.match.pairs)
      pairs.push_back({{"eigen_index", p.eigen_index},
                       {"resonance_index", p.resonance_index},
                       {"eigenvalue", detail::complex_json(p.eigenvalue)},
                       {"resonance", detail::complex_json(p.resonance)},
                       {"abs_error", p.abs_error}});
    json cands = json::array();
    for (const auto& z : e.candidates) cands.push_back(detail::complex_json(z));
    per.push_back({{"epsilon", e.epsilon},
                   {"spectrum", to_json_value(e.spectrum)},
                   {"candidates", cands},
                   {"pairs", pairs},
                   {"unmatched_eigenvalues", e.match.unmatched_eigenvalues},
                   {"unmatched_resonances", e.match.unmatched_resonances},
                   {"failure", e.failure}});
  }
  json errors = json::array();
  for (const auto& row : r.errors) {
    json jr = json::array();
    for (double x : row) jr.push_back(detail::number(x));
    errors.push_back(jr);
  }
  json disks = json::array();
  for (const auto& d : r.disk_counts)
    disks.push_back({{"epsilon", d.epsilon},
                     {"resonance_index", d.resonance_index},
                     {"delta", d.delta},
                     {"count", d.count},
                     {"expected", d.expected}});
  return {{"resonances", res}, {"per_epsilon", per}, {"errors", errors}, {"disk_counts", disks}};
}

inline ConvergenceReport report_from_json(const json& j) {
  ConvergenceReport r;
  for (const auto& e : j.at("resonances"))
    r.resonances.push_back({detail::complex_from(e.at("z")), e.at("multiplicity").get<int>(), e.at("certified").get<bool>()});
  for (const auto& e : j.at("per_epsilon")) {
    EpsilonResult res;
    res.epsilon = e.at("epsilon").get<double>();
    res.spectrum = spectrum_from_json(e.at("spectrum"));
    for (const auto& z : e.at("candidates")) res.candidates.push_back(detail::complex_from(z));
    for (const auto& p : e.at("pairs"))
      res.match.pairs.push_back({p.at("eigen_index").get<std::size_t>(), p.at("resonance_index").get<std::size_t>(),
                                 detail::complex_from(p.at("eigenvalue")), detail::complex_from(p.at("resonance")),
                                 p.at("abs_error").get<double>()});
    res.match.unmatched_eigenvalues = e.at("unmatched_eigenvalues").get<std::vector<std::size_t>>();
    res.match.unmatched_resonances = e.at("unmatched_resonances").get<std::vector<std::size_t>>();
    res.failure = e.at("failure").get<std::string>();
    r.per_epsilon.push_back(std::move(res));
  }
  for (const auto& row : j.at("errors")) {
    std::vector<double> v;
    for (const auto& x : row) v.push_back(detail::number_from(x));
    r.errors.push_back(std::move(v));
  }
  for (const auto& d : j.at("disk_counts"))
    r.disk_counts.push_back({d.at("epsilon").get<double>(), d.at("resonance_index").get<std::size_t>(),
                             d.at("delta").get<double>(), d.at("count").get<int>(), d.at("expected").get<int>()});
  return r;
}

inline json to_json_value(const PseudospectrumTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows)
    rows.push_back({{"epsilon", row.epsilon},
                    {"z", detail::complex_json(row.z)},
                    {"resolvent_norm", detail::number(row.norm)},
                    {"in_sector", row.in_sector}});
  json growth = json::array();
  for (const auto& g : t.growth) {
    json jg = json::array();
    for (double x : g) jg.push_back(detail::number(x));
    growth.push_back(jg);
  }
  return {{"gamma", t.gamma}, {"rows", rows}, {"growth", growth}};
}

// ---------------------------------------------------------------- SVG

struct SvgSeries {
  std::string label;
  std::string color;
  bool cross = false;  ///< crosses for resonances, dots for eigenvalues
  std::vector<cdouble> points;
};

inline std::string series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return palette[i % (sizeof palette / sizeof *palette)];
}

/// Static scatter plot in the complex plane with the Davies ray arg z = -pi/4
/// drawn dashed for orientation.
inline std::string svg_scatter(const std::vector<SvgSeries>& series, const std::string& title) {
  constexpr double W = 720, H = 520, L = 70, R = 170, T = 40, B = 50;
  double xmin = 0, xmax = 1, ymin = -1, ymax = 0.2;
  bool any = false;
  for (const auto& s : series)
    for (const auto& z : s.points) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      if (!any) xmin = xmax = z.real(), ymin = ymax = z.imag(), any = true;
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
  xmin = std::min(xmin, 0.0), xmax = std::max(xmax, 0.0), ymin = std::min(ymin, 0.0), ymax = std::max(ymax, 0.0);
  const double padx = 0.05 * (xmax - xmin + 1e-12), pady = 0.05 * (ymax - ymin + 1e-12);
  xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
      W, H, W, H, L, title);
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#999\"/>\n", px(xmin),
                     py(0), px(xmax), py(0));
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#999\"/>\n", px(0),
                     py(ymin), px(0), py(ymax));
  // Davies ray arg z = -pi/4, clipped to the plot box
  const double t = std::min(xmax, -ymin);
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#bbb\" stroke-dasharray=\"5,4\"/>\n",
      px(0), py(0), px(t), py(-t));
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#777\">"
                     "arg z = -pi/4</text>\n",
                     px(t) - 70, py(-t) - 6);
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">Re z: [{:.4g}, {:.4g}]  "
                     "Im z: [{:.4g}, {:.4g}]  |z| max {:.4g}</text>\n",
                     L, H - 18, xmin, xmax, ymin, ymax,
                     std::max(std::hypot(xmax, ymax), std::hypot(xmin, ymin)));
  double legend_y = T + 10;
  for (const auto& s : series) {
    for (const auto& z : s.points) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      const double x = px(z.real()), y = py(z.imag());
      if (s.cross)
        out += fmt::format("<path d=\"M{:.2f} {:.2f}L{:.2f} {:.2f}M{:.2f} {:.2f}L{:.2f} {:.2f}\" stroke=\"{}\" "
                           "stroke-width=\"1.6\"/>\n",
                           x - 5, y - 5, x + 5, y + 5, x - 5, y + 5, x + 5, y - 5, s.color);
      else
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.6\" fill=\"{}\"/>\n", x, y, s.color);
    }
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{} {}</text>\n",
                       W - R + 12, legend_y, s.color, s.cross ? "x" : "o", s.label);
    legend_y += 18;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace viscolim
