#pragma once

#include <string>
#include <vector>

#include "varkit/rational.hpp"

namespace varkit {

struct Vec2 {
  Rational x, y;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  [[nodiscard]] bool is_zero() const { return x == 0 && y == 0; }
};

inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
/// Rotation by +90 degrees.
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

/// Closed convex cone in the plane in canonical form. Directions are scaled
/// so that max(|x|, |y|) = 1, which makes == a cone equality test.
class ConvexCone2D {
 public:
  enum class Kind { Zero, Ray, Line, Sector, HalfPlane, Plane };

  static ConvexCone2D zero() { return ConvexCone2D(Kind::Zero, {}); }
  static ConvexCone2D plane() { return ConvexCone2D(Kind::Plane, {}); }
  static ConvexCone2D ray(const Vec2& g);
  static ConvexCone2D line(const Vec2& g);
  /// Region swept counterclockwise from g1 to g2 (angle < pi).
  static ConvexCone2D sector(const Vec2& g1, const Vec2& g2);
  /// {p : <n, p> >= 0}.
  static ConvexCone2D half_plane(const Vec2& inner_normal);
  /// Conic hull of arbitrary generators.
  static ConvexCone2D hull(const std::vector<Vec2>& generators);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<Vec2>& data() const noexcept { return data_; }

  /// Generators whose conic hull is the cone.
  [[nodiscard]] std::vector<Vec2> generators() const;
  /// Vectors a_i with cone = {p : <a_i, p> <= 0 for all i}.
  [[nodiscard]] std::vector<Vec2> constraints() const;

  [[nodiscard]] bool contains(const Vec2& p) const;
  [[nodiscard]] ConvexCone2D polar() const;
  [[nodiscard]] ConvexCone2D intersect(const ConvexCone2D& other) const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const ConvexCone2D&, const ConvexCone2D&) = default;

 private:
  ConvexCone2D(Kind k, std::vector<Vec2> d) : kind_(k), data_(std::move(d)) {}
  Kind kind_;
  std::vector<Vec2> data_;
};

/// Finite union of closed convex cones.
class Cone2D {
 public:
  Cone2D() = default;
  explicit Cone2D(ConvexCone2D c) { add(std::move(c)); }

  Cone2D& add(ConvexCone2D c);
  Cone2D& unite(const Cone2D& other);

  [[nodiscard]] const std::vector<ConvexCone2D>& parts() const noexcept { return parts_; }
  [[nodiscard]] bool contains(const Vec2& p) const;
  /// Polar of the union, i.e. the intersection of the polars.
  [[nodiscard]] ConvexCone2D polar() const;
  /// Set equality, decided exactly on the finitely many angular cells.
  [[nodiscard]] bool same_set(const Cone2D& other) const;

  [[nodiscard]] std::string describe() const;

 private:
  std::vector<ConvexCone2D> parts_;
};

/// Normalized direction (max(|x|,|y|) = 1); zero stays zero.
Vec2 normalize_direction(const Vec2& v);

/// Strict counterclockwise angular order starting at the positive x-axis.
bool angle_less(const Vec2& a, const Vec2& b);

}  // namespace varkit
