#pragma once

#include <stdexcept>
#include <string>

namespace viscolim {

/// Broad failure classes; the CLI maps each one to an exit code.
enum class ErrorKind {
  Config,     ///< invalid input or configuration (exit 2)
  Numerical,  ///< NoConvergence, BudgetExceeded and friends (exit 3)
  Io,         ///< filesystem errors (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct NonCompactSupport : ConfigError {
  NonCompactSupport() : ConfigError("potential has non-compact support") {}
};

struct QuadratureOrderTooLow : ConfigError {
  QuadratureOrderTooLow(int order, int basis_size)
      : ConfigError("quadrature order " + std::to_string(order) +
                    " is below 2 * basis size (" + std::to_string(2 * basis_size) + ")") {}
};

struct ZeroWavenumber : ConfigError {
  ZeroWavenumber() : ConfigError("matching function evaluated at k = 0") {}
};

struct NoConvergence : NumericalError {
  explicit NoConvergence(const std::string& what) : NumericalError("no convergence: " + what) {}
};

struct BudgetExceeded : NumericalError {
  explicit BudgetExceeded(const std::string& what) : NumericalError("budget exceeded: " + what) {}
};

struct BoundaryTooCloseToZero : NumericalError {
  BoundaryTooCloseToZero() : NumericalError("contour passes too close to a zero") {}
};

}  // namespace viscolim
