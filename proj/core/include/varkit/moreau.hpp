#pragma once

#include <optional>
#include <string>

#include "varkit/oracle.hpp"
#include "varkit/types.hpp"

namespace varkit {

/// Contract of the inner prox solver.
struct InnerSolverConfig {
  enum class Mode {
    Auto,      // analytic prox when the oracle has one, numerical otherwise
    Numerical  // always numerical
  };
  Mode mode = Mode::Auto;
  /// Search radius for the prox problem is radius_factor * box diameter.
  double radius_factor = 10.0;
  int grid_points = 2001;
  /// Multi-start count for dimension > 1.
  int starts = 6;
  double tolerance = 1e-12;
};

struct ProxResult {
  Point p;
  double objective = 0.0;
  /// First-order optimality defect at p.
  double residual = 0.0;
  bool analytic = false;
};

/// Oracle, lambda and solver contract. Immutable; calls are pure.
class EnvelopeHandle {
 public:
  /// Throws InvalidArgument if lambda <= 0 or lambda >= 1/rho for a declared
  /// weak modulus rho.
  EnvelopeHandle(FunctionOracle oracle, double lambda, Box box, InnerSolverConfig cfg = {});

  [[nodiscard]] const FunctionOracle& oracle() const noexcept { return oracle_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] const Box& box() const noexcept { return box_; }
  [[nodiscard]] const InnerSolverConfig& config() const noexcept { return cfg_; }

  /// Throws ProxDiverged or InnerSolverFailed.
  [[nodiscard]] ProxResult prox_full(const Point& x) const;
  [[nodiscard]] Point prox(const Point& x) const { return prox_full(x).p; }
  [[nodiscard]] double envelope(const Point& x) const;
  /// (x - prox(x)) / lambda.
  [[nodiscard]] Point gradient(const Point& x) const;
  /// Symmetrized central-difference Jacobian of the gradient.
  [[nodiscard]] Matrix hessian_fd(const Point& x, double step, double* symmetry_defect = nullptr) const;

 private:
  FunctionOracle oracle_;
  double lambda_;
  Box box_;
  InnerSolverConfig cfg_;
};

/// Numerical minimizer of phi(y) + |y - x|^2 / (2 lambda). Throws
/// ProxDiverged when the minimizer escapes the search region.
ProxResult numerical_prox(const FunctionOracle& oracle, double lambda, const Point& x, const Box& box,
                          const InnerSolverConfig& cfg = {});

/// Optimality defect of p for the prox problem at x.
double prox_residual(const FunctionOracle& oracle, double lambda, const Point& x, const Point& p);

struct ProxBoundVerdict {
  bool bounded = true;
  Point anchor;
  /// Unit direction along which the prox objective keeps decreasing.
  Point escape_direction;
};

/// Empirical prox-boundedness at anchor points of the box.
ProxBoundVerdict prox_bound_probe(const FunctionOracle& oracle, double lambda, const Box& box,
                                  const InnerSolverConfig& cfg = {});

/// min(lambda_user, 1/(2 rho)) with rho from the oracle truth or the given
/// estimate; lambda_user when no positive modulus is known.
double default_lambda(const FunctionOracle& oracle, double lambda_user, std::optional<double> rho_estimate = {});

/// Copy of the oracle whose prox is computed numerically on `box`.
FunctionOracle with_numeric_prox(const FunctionOracle& oracle, const Box& box, const InnerSolverConfig& cfg = {});

}  // namespace varkit
