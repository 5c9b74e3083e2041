#include <gtest/gtest.h>

#include "varkit/cone2d.hpp"

using namespace varkit;

namespace {
Vec2 v(int x, int y) { return {Rational(x), Rational(y)}; }
}

TEST(ConvexCone2D, CanonicalEquality) {
  EXPECT_EQ(ConvexCone2D::ray(v(2, 0)), ConvexCone2D::ray(v(5, 0)));
  EXPECT_EQ(ConvexCone2D::line(v(0, 1)), ConvexCone2D::line(v(0, -3)));
  EXPECT_EQ(ConvexCone2D::hull({v(1, 0), v(-1, 0)}), ConvexCone2D::line(v(1, 0)));
  EXPECT_EQ(ConvexCone2D::hull({v(1, 0), v(0, 1), v(-1, -1)}), ConvexCone2D::plane());
  EXPECT_EQ(ConvexCone2D::hull({}), ConvexCone2D::zero());
}

TEST(ConvexCone2D, Polars) {
  EXPECT_EQ(ConvexCone2D::zero().polar(), ConvexCone2D::plane());
  EXPECT_EQ(ConvexCone2D::plane().polar(), ConvexCone2D::zero());
  EXPECT_EQ(ConvexCone2D::line(v(0, 1)).polar(), ConvexCone2D::line(v(1, 0)));
  EXPECT_EQ(ConvexCone2D::ray(v(1, 0)).polar(), ConvexCone2D::half_plane(v(-1, 0)));
  // Quadrant R+ x R+ has polar R- x R-.
  EXPECT_EQ(ConvexCone2D::sector(v(1, 0), v(0, 1)).polar(), ConvexCone2D::sector(v(-1, 0), v(0, -1)));
}

TEST(ConvexCone2D, PolarIsInvolutive) {
  const std::vector<ConvexCone2D> cones = {
      ConvexCone2D::ray(v(1, 2)),      ConvexCone2D::line(v(3, -1)),
      ConvexCone2D::sector(v(1, 0), v(1, 1)), ConvexCone2D::half_plane(v(1, -2)),
      ConvexCone2D::zero(),            ConvexCone2D::plane(),
  };
  for (const auto& c : cones) EXPECT_EQ(c.polar().polar(), c) << c.describe();
}

TEST(ConvexCone2D, Membership) {
  const ConvexCone2D s = ConvexCone2D::sector(v(1, 0), v(0, 1));
  EXPECT_TRUE(s.contains(v(3, 4)));
  EXPECT_TRUE(s.contains(v(0, 0)));
  EXPECT_FALSE(s.contains(v(-1, 4)));
  EXPECT_TRUE(ConvexCone2D::half_plane(v(0, 1)).contains(v(-7, 0)));
}

TEST(ConvexCone2D, Intersection) {
  const ConvexCone2D h1 = ConvexCone2D::half_plane(v(0, 1));
  const ConvexCone2D h2 = ConvexCone2D::half_plane(v(1, 0));
  EXPECT_EQ(h1.intersect(h2), ConvexCone2D::sector(v(1, 0), v(0, 1)));
  EXPECT_EQ(h1.intersect(ConvexCone2D::half_plane(v(0, -1))), ConvexCone2D::line(v(1, 0)));
}

TEST(Cone2D, UnionPolarAndEquality) {
  Cone2D axes;
  axes.add(ConvexCone2D::line(v(1, 0))).add(ConvexCone2D::line(v(0, 1)));
  EXPECT_EQ(axes.polar(), ConvexCone2D::zero());
  EXPECT_TRUE(axes.contains(v(0, -5)));
  EXPECT_FALSE(axes.contains(v(1, 1)));

  Cone2D halves;
  halves.add(ConvexCone2D::half_plane(v(0, 1))).add(ConvexCone2D::half_plane(v(0, -1)));
  EXPECT_TRUE(halves.same_set(Cone2D(ConvexCone2D::plane())));
  EXPECT_FALSE(axes.same_set(Cone2D(ConvexCone2D::plane())));
}

TEST(Vec2Helpers, AngleOrder) {
  EXPECT_TRUE(angle_less(v(1, 0), v(0, 1)));
  EXPECT_TRUE(angle_less(v(-1, 1), v(-1, -1)));
  EXPECT_FALSE(angle_less(v(0, -1), v(1, 1)));
  EXPECT_EQ(normalize_direction(v(4, -2)), (Vec2{Rational(1), Rational(-1, 2)}));
}
