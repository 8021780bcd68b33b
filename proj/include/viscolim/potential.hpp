#pragma once

// Real-valued potentials: compactly supported step potentials plus a few
// closed-form shapes used as oracles or exploratory inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "viscolim/error.hpp"

namespace viscolim {

/// Constant value `v` on the half-open interval [a, b).
struct Piece {
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;

  friend bool operator==(const Piece&, const Piece&) = default;
};

class PiecewiseConstantPotential {
 public:
  PiecewiseConstantPotential() = default;

  /// Throws ConfigError unless the pieces are finite, non-empty intervals,
  /// sorted and non-overlapping.
  explicit PiecewiseConstantPotential(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Piece& p = pieces_[i];
      if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.v))
        throw ConfigError("potential piece " + std::to_string(i) + " has a non-finite field");
      if (!(p.a < p.b))
        throw ConfigError("potential piece " + std::to_string(i) + " must satisfy a < b");
      if (i > 0 && pieces_[i - 1].b > p.a)
        throw ConfigError("potential pieces must be sorted and non-overlapping");
    }
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  friend bool operator==(const PiecewiseConstantPotential&,
                         const PiecewiseConstantPotential&) = default;

 private:
  std::vector<Piece> pieces_;
};

struct AnalyticPotential {
  enum class Kind { Zero, Quadratic, SincLike };

  Kind kind = Kind::Zero;
  double coeff = 0.0;  ///< V(x) = coeff * x^2 when kind == Quadratic

  static AnalyticPotential zero() { return {Kind::Zero, 0.0}; }
  static AnalyticPotential quadratic(double coeff) {
    if (coeff == 0.0 || !std::isfinite(coeff))
      throw ConfigError("quadratic coefficient must be finite and nonzero");
    return {Kind::Quadratic, coeff};
  }
  static AnalyticPotential sinc() { return {Kind::SincLike, 0.0}; }

  bool compact() const noexcept { return kind != Kind::SincLike; }

  friend bool operator==(const AnalyticPotential&, const AnalyticPotential&) = default;
};

using Potential = std::variant<PiecewiseConstantPotential, AnalyticPotential>;

inline double evaluate(const PiecewiseConstantPotential& p, double x) {
  const auto& pieces = p.pieces();
  // first piece with b > x; it contains x iff a <= x
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](double value, const Piece& piece) { return value < piece.b; });
  if (it != pieces.end() && it->a <= x) return it->v;
  return 0.0;
}

inline double evaluate(const AnalyticPotential& p, double x) {
  switch (p.kind) {
    case AnalyticPotential::Kind::Zero:
      return 0.0;
    case AnalyticPotential::Kind::Quadratic:
      return p.coeff * x * x;
    case AnalyticPotential::Kind::SincLike:
      return x == 0.0 ? 1.0 : std::sin(x) / x;
  }
  return 0.0;
}

inline double evaluate(const Potential& p, double x) {
  return std::visit([x](const auto& q) { return evaluate(q, x); }, p);
}

inline std::vector<double> piece_breakpoints(const PiecewiseConstantPotential& p) {
  std::vector<double> out;
  out.reserve(2 * p.pieces().size());
  for (const Piece& piece : p.pieces()) {
    if (out.empty() || out.back() != piece.a) out.push_back(piece.a);
    out.push_back(piece.b);
  }
  return out;
}

/// Smallest r with V == 0 outside [-r, r]. Zero potentials report 0; the
/// quadratic form is not compactly supported either but is accepted by the
/// Galerkin path, so only SincLike is rejected here.
inline double support_radius(const PiecewiseConstantPotential& p) {
  double r = 0.0;
  for (double x : piece_breakpoints(p)) r = std::max(r, std::abs(x));
  return r;
}

inline double support_radius(const AnalyticPotential& p) {
  switch (p.kind) {
    case AnalyticPotential::Kind::Zero:
      return 0.0;
    case AnalyticPotential::Kind::Quadratic:
    case AnalyticPotential::Kind::SincLike:
      throw NonCompactSupport();
  }
  return 0.0;
}

inline double support_radius(const Potential& p) {
  return std::visit([](const auto& q) { return support_radius(q); }, p);
}

// JSON:
//   {"type":"piecewise","pieces":[{"a":-1.0,"b":1.0,"v":10.0}]}
//   {"type":"quadratic","coeff":1.0}
//   {"type":"sinc"}
//   {"type":"zero"}

inline nlohmann::json to_json_value(const Potential& p) {
  using nlohmann::json;
  if (const auto* pc = std::get_if<PiecewiseConstantPotential>(&p)) {
    json pieces = json::array();
    for (const Piece& piece : pc->pieces())
      pieces.push_back({{"a", piece.a}, {"b", piece.b}, {"v", piece.v}});
    return {{"type", "piecewise"}, {"pieces", pieces}};
  }
  const auto& an = std::get<AnalyticPotential>(p);
  switch (an.kind) {
    case AnalyticPotential::Kind::Zero:
      return {{"type", "zero"}};
    case AnalyticPotential::Kind::Quadratic:
      return {{"type", "quadratic"}, {"coeff", an.coeff}};
    case AnalyticPotential::Kind::SincLike:
      return {{"type", "sinc"}};
  }
  return {};
}

inline Potential potential_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "piecewise") {
      std::vector<Piece> pieces;
      for (const auto& item : j.at("pieces")) {
        if (item.contains("im") || item.at("v").is_object() || item.at("v").is_array())
          throw ConfigError("complex-valued potentials are not supported");
        pieces.push_back({item.at("a").get<double>(), item.at("b").get<double>(),
                          item.at("v").get<double>()});
      }
      return PiecewiseConstantPotential(std::move(pieces));
    }
    if (type == "quadratic") {
      if (j.contains("coeff_im")) throw ConfigError("complex-valued potentials are not supported");
      return AnalyticPotential::quadratic(j.at("coeff").get<double>());
    }
    if (type == "sinc") return AnalyticPotential::sinc();
    if (type == "zero") return AnalyticPotential::zero();
    throw ConfigError("unknown potential type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed potential description: ") + e.what());
  }
}

/// 64-bit FNV-1a hash of a byte string, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string potential_digest(const Potential& p) {
  return fnv1a_hex(to_json_value(p).dump());
}

}  // namespace viscolim
