#pragma once

#include <Eigen/Dense>
#include <string>

namespace varkit {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned evaluation region.
struct Box {
  Point lo;
  Point hi;

  Box() = default;
  Box(Point lo_, Point hi_);
  /// [lo, hi]^n.
  static Box cube(int dim, double lo, double hi);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(lo.size()); }
  [[nodiscard]] double diameter() const { return (hi - lo).norm(); }
  [[nodiscard]] Point center() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(const Point& x) const;
};

/// A pair (x, v) with v in the limiting subdifferential at x, up to the
/// producing routine's residual.
struct SubgradientPair {
  Point x;
  Point v;
  double residual = 0.0;
};

/// Coordinates joined with ';' using shortest round-trip decimals.
std::string format_point(const Point& p);

}  // namespace varkit
