#pragma once

#include <string>
#include <vector>

#include "varkit/rng.hpp"
#include "varkit/types.hpp"

namespace varkit {

/// Closed-form limiting subdifferential: a finite union of convex pieces,
/// each either a box (bounds may be infinite) or the convex hull of finitely
/// many points. Covers singletons, intervals, the whole line, the two-point
/// sets of concave kinks, products of intervals (l1) and gradient hulls of
/// max-type functions.
class SubdiffSet {
 public:
  struct Piece {
    enum class Kind { Box, Hull };
    Kind kind = Kind::Box;
    Point lo, hi;                 // Box
    std::vector<Point> vertices;  // Hull
  };

  explicit SubdiffSet(int dim = 1) : dim_(dim) {}

  static SubdiffSet point(const Point& p);
  static SubdiffSet box(const Point& lo, const Point& hi);
  static SubdiffSet hull(std::vector<Point> vertices);
  /// 1-D closed interval; bounds may be +-infinity.
  static SubdiffSet interval(double lo, double hi);
  static SubdiffSet scalar(double v) { return interval(v, v); }

  SubdiffSet& unite(const SubdiffSet& other);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }
  [[nodiscard]] const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] bool is_singleton() const;
  [[nodiscard]] bool is_bounded() const;

  [[nodiscard]] Point project(const Point& v) const;
  [[nodiscard]] double distance(const Point& v) const;
  [[nodiscard]] bool contains(const Point& v, double tol = 0.0) const;

  /// S + d.
  [[nodiscard]] SubdiffSet translated(const Point& d) const;

  /// Selections of S inside the ball B(center, radius): the nearest point of
  /// each piece, the finite vertices/endpoints in the ball, and points at a
  /// fixed ladder of fractions of `radius` along each coordinate. Deterministic.
  [[nodiscard]] std::vector<Point> selections_near(const Point& center, double radius) const;

  /// Finite representatives (endpoints, corners, centers); infinite bounds
  /// are replaced by the finite end moved out by `spread`.
  [[nodiscard]] std::vector<Point> anchors(double spread = 1.0) const;

  /// Random element (pieces chosen uniformly).
  [[nodiscard]] Point sample(Rng& rng, double spread = 1.0) const;

  [[nodiscard]] std::string describe() const;

 private:
  int dim_;
  std::vector<Piece> pieces_;
};

}  // namespace varkit
