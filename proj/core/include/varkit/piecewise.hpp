#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varkit/ext_real.hpp"
#include "varkit/rational.hpp"

namespace varkit {

/// a*x^2 + c*x + d on one closed piece.
struct QuadPiece {
  Rational a, c, d;

  [[nodiscard]] Rational value(const Rational& x) const { return (a * x + c) * x + d; }
  [[nodiscard]] Rational slope(const Rational& x) const { return 2 * a * x + c; }
  friend bool operator==(const QuadPiece&, const QuadPiece&) = default;
};

/// Closed interval [lo, hi]; a missing bound is infinite.
struct Domain1D {
  std::optional<Rational> lo, hi;
  friend bool operator==(const Domain1D&, const Domain1D&) = default;
};

/// One-sided data of a piecewise quadratic at a point of its domain.
struct LocalData {
  Rational x;
  Rational value;
  bool has_left = false, has_right = false;  // false at domain endpoints
  Rational d_left, d_right;                  // one-sided derivatives
  Rational a_left, a_right;                  // one-sided curvature halves
  bool at_breakpoint = false;
  bool at_lower_end = false, at_upper_end = false;
};

/// Continuous piecewise quadratic on a closed interval, +infinity outside.
/// Piece i lives on [b_{i-1}, b_i] with b_0 = domain.lo (or -inf) and
/// b_m = domain.hi (or +inf).
class PiecewiseQuad1D {
 public:
  /// Exact: adjacent pieces must agree exactly at breakpoints. Approximate:
  /// agreement within 1e-12 relative, for functions built from floating
  /// data (e.g. upper envelopes with irrational crossing points).
  enum class Continuity { Exact, Approximate };

  PiecewiseQuad1D(std::vector<Rational> breakpoints, std::vector<QuadPiece> pieces,
                  Domain1D domain = {}, Continuity continuity = Continuity::Exact);

  /// Single quadratic on a domain.
  static PiecewiseQuad1D quadratic(const Rational& a, const Rational& c, const Rational& d,
                                   Domain1D domain = {});

  [[nodiscard]] const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const std::vector<QuadPiece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] const Domain1D& domain() const noexcept { return domain_; }
  [[nodiscard]] Continuity continuity() const noexcept { return continuity_; }

  [[nodiscard]] bool in_domain(const Rational& x) const;
  [[nodiscard]] std::optional<Rational> value_exact(const Rational& x) const;
  [[nodiscard]] ExtReal value(double x) const;
  /// Piece containing x; at a breakpoint the left piece.
  [[nodiscard]] std::size_t piece_index(const Rational& x) const;

  /// Throws OutOfDomain outside the domain.
  [[nodiscard]] LocalData local(const Rational& x) const;

  /// f - (kappa/2) x^2.
  [[nodiscard]] PiecewiseQuad1D tilted(const Rational& kappa) const;
  /// f + g for g = alpha*x^2 + beta*x + gamma.
  [[nodiscard]] PiecewiseQuad1D plus_quadratic(const Rational& alpha, const Rational& beta,
                                               const Rational& gamma) const;

  /// Exact minimizer of f(y) + (y - x)^2 / (2 lambda), piece by piece in
  /// floating point. Throws ProxDiverged when the objective is unbounded
  /// below. Ties go to the smaller minimizer.
  [[nodiscard]] double prox(double lambda, double x) const;

  /// Finite points of interest: breakpoints and finite domain ends.
  [[nodiscard]] std::vector<Rational> critical_points() const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const PiecewiseQuad1D&, const PiecewiseQuad1D&) = default;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<QuadPiece> pieces_;
  Domain1D domain_;
  Continuity continuity_;
  std::vector<double> breakpoints_d_;
  std::vector<double> a_d_, c_d_, d_d_;
  double lo_d_, hi_d_;
};

/// f + g on the intersection of the domains. Throws InvalidArgument when the
/// intersection has empty interior.
PiecewiseQuad1D sum(const PiecewiseQuad1D& f, const PiecewiseQuad1D& g);

/// Upper envelope of 1-D quadratics a_i x^2 + b_i x + c_i. Crossing points are
/// computed in floating point, so the result is Approximate unless every
/// crossing is rational and exact.
PiecewiseQuad1D upper_envelope(const std::vector<QuadPiece>& quadratics);

}  // namespace varkit
