#include <gtest/gtest.h>

#include "test_oracles.hpp"
#include "varkit/errors.hpp"
#include "varkit/exact_calculus.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;
using Kind = SecondOrderValue::Kind;

namespace {

const PiecewiseQuad1D kAbs({0}, {{0, -1, 0}, {0, 1, 0}});
const PiecewiseQuad1D kNegAbs({0}, {{0, 1, 0}, {0, -1, 0}});
const PiecewiseQuad1D kSpliced({0}, {{1, 0, 0}, {-1, 0, 0}});
const PiecewiseQuad1D kHalfSquare = PiecewiseQuad1D::quadratic(Rational(1, 2), 0, 0);
const PiecewiseQuad1D kIndicator01 = PiecewiseQuad1D::quadratic(0, 0, 0, Domain1D{Rational(0), Rational(1)});

Vec2 p(const Rational& x, const Rational& y) { return {x, y}; }
std::optional<Rational> none() { return std::nullopt; }

}  // namespace

TEST(ExactSet1D, NormalizeAndOps) {
  ExactSet1D s = ExactSet1D::interval(Rational(0), Rational(1));
  s.unite(ExactSet1D::interval(Rational(1, 2), Rational(3)));
  ASSERT_EQ(s.parts().size(), 1u);
  EXPECT_EQ(s, ExactSet1D::interval(Rational(0), Rational(3)));
  s.unite(ExactSet1D::point(5));
  EXPECT_EQ(s.parts().size(), 2u);
  EXPECT_TRUE(s.contains(5));
  EXPECT_FALSE(s.contains(4));
  EXPECT_EQ(s.translated(1).parts().front().lo, Rational(1));
  EXPECT_TRUE(ExactSet1D::all().is_all());
  EXPECT_TRUE(ExactSet1D::interval(Rational(1), none()).pairing_at_least(1, 1));
  EXPECT_FALSE(ExactSet1D::interval(Rational(1), none()).pairing_at_least(-1, 0));
}

TEST(Subdifferential, Examples) {
  EXPECT_EQ(subdifferential(kAbs, 0), ExactSet1D::interval(Rational(-1), Rational(1)));
  EXPECT_EQ(subdifferential(kSpliced, 0), ExactSet1D::point(0));
  ExactSet1D two = ExactSet1D::point(-1);
  two.unite(ExactSet1D::point(1));
  EXPECT_EQ(subdifferential(kNegAbs, 0), two);
  EXPECT_EQ(subdifferential(kIndicator01, 1), ExactSet1D::interval(Rational(0), none()));
  EXPECT_EQ(subdifferential(kIndicator01, 0), ExactSet1D::interval(none(), Rational(0)));
  EXPECT_THROW(subdifferential(kIndicator01, 2), Error);
}

TEST(GraphSubdiff, Components) {
  const SubdiffGraph1D g = graph_subdiff(kAbs);
  EXPECT_EQ(g.arcs().size(), 2u);
  EXPECT_EQ(g.verticals().size(), 1u);
  const SubdiffGraph1D q = graph_subdiff(kHalfSquare);
  EXPECT_EQ(q.arcs().size(), 1u);
  EXPECT_TRUE(q.verticals().empty());
  EXPECT_TRUE(q.contains(p(3, 3)));
  const SubdiffGraph1D ind = graph_subdiff(kIndicator01);
  EXPECT_EQ(ind.verticals().size(), 2u);
  EXPECT_TRUE(ind.contains(p(0, -7)));
  EXPECT_TRUE(ind.contains(p(1, 7)));
  EXPECT_FALSE(ind.contains(p(1, -7)));
}

TEST(ConesAt, AbsCorner) {
  const PlaneCones c = cones_at(kAbs, p(0, 1));
  Cone2D expected;
  expected.add(ConvexCone2D::ray(p(0, -1))).add(ConvexCone2D::ray(p(1, 0)));
  EXPECT_TRUE(c.tangent.same_set(expected)) << c.tangent.describe();
  EXPECT_EQ(c.regular_normal, ConvexCone2D::sector(p(0, 1), p(-1, 0)));
  EXPECT_EQ(c.regular_normal, c.regular_normal_direct);
}

TEST(ConesAt, AbsVerticalInterior) {
  const PlaneCones c = cones_at(kAbs, p(0, 0));
  EXPECT_TRUE(c.tangent.same_set(Cone2D(ConvexCone2D::line(p(0, 1)))));
  EXPECT_EQ(c.regular_normal, ConvexCone2D::line(p(1, 0)));
}

TEST(ConesAt, JumpFunctionTable) {
  const SubdiffGraph1D g = unit_except_origin_graph();
  const ConvexCone2D vert = ConvexCone2D::line(p(0, 1)), horiz = ConvexCone2D::line(p(1, 0));
  EXPECT_TRUE(cones_at(g, p(0, 3)).tangent.same_set(Cone2D(vert)));
  Cone2D cross(vert);
  cross.add(horiz);
  EXPECT_TRUE(cones_at(g, p(0, 0)).tangent.same_set(cross));
  EXPECT_TRUE(cones_at(g, p(1, 0)).tangent.same_set(Cone2D(horiz)));
  EXPECT_THROW(cones_at(g, p(1, 1)), Error);
}

TEST(D2Exact, Examples) {
  EXPECT_EQ(d2_exact(kAbs, 0, 1, 1), (ExactSecond{Kind::Finite, 0}));
  EXPECT_EQ(d2_exact(kAbs, 0, 1, -1), ExactSecond::plus_inf());
  EXPECT_EQ(d2_exact(kAbs, 0, Rational(1, 2), 1), ExactSecond::plus_inf());
  EXPECT_EQ(d2_exact(kHalfSquare, 3, 3, 2), (ExactSecond{Kind::Finite, 4}));
  EXPECT_EQ(d2_exact(kSpliced, 1, -2, 1), (ExactSecond{Kind::Finite, -2}));
  EXPECT_EQ(d2_exact(kNegAbs, 0, 1, 0), ExactSecond::minus_inf());
  EXPECT_THROW(d2_exact(kAbs, 0, 2, 1), Error);
}

TEST(D2Exact, MatchesGridOracle) {
  const auto phi = [](double x) { return std::abs(x); };
  EXPECT_NEAR(testsupport::d2_grid(phi, 0, 1, 1), 0.0, 1e-9);
  // The grid minimum is attained at the coarsest tau: 4/tau and 1/tau.
  EXPECT_NEAR(testsupport::d2_grid(phi, 0, 1, -1), 400.0, 1.0);
  EXPECT_NEAR(testsupport::d2_grid(phi, 0, 0.5, 1), 100.0, 0.2);
}

TEST(SecondOrderMaps, AbsCorner) {
  const ExactSet1D minus = ExactSet1D::interval(none(), Rational(0));
  EXPECT_TRUE(second_order_maps_exact(kAbs, 0, 1, -1).graphical.empty());
  EXPECT_EQ(second_order_maps_exact(kAbs, 0, 1, 0).graphical, minus);
  EXPECT_EQ(second_order_maps_exact(kAbs, 0, 1, 1).graphical, ExactSet1D::point(0));
  EXPECT_EQ(second_order_maps_exact(kAbs, 0, 1, -1).combined, minus);
  EXPECT_TRUE(second_order_maps_exact(kAbs, 0, 1, 1).combined.empty());
}

TEST(SecondOrderMaps, JumpFunctionAtOrigin) {
  const SubdiffGraph1D g = unit_except_origin_graph();
  EXPECT_TRUE(second_order_maps_exact(g, 0, 0, 0).graphical.is_all());
  EXPECT_EQ(second_order_maps_exact(g, 0, 0, 1).graphical, ExactSet1D::point(0));
}

TEST(Decision, Examples) {
  EXPECT_EQ(convexity_decide_exact(kAbs).verdict, ConvexityDecision::Verdict::Convex);
  const ConvexityDecision s = convexity_decide_exact(kSpliced);
  EXPECT_EQ(s.verdict, ConvexityDecision::Verdict::WeaklyConvex);
  EXPECT_EQ(s.rho, Rational(2));
  const ConvexityDecision n = convexity_decide_exact(kNegAbs);
  EXPECT_FALSE(n.weakly_convex());
  EXPECT_EQ(n.concave_kink, Rational(0));
  const ConvexityDecision q = convexity_decide_exact(kAbs.plus_quadratic(Rational(1, 2), 0, 0));
  EXPECT_EQ(q.verdict, ConvexityDecision::Verdict::StronglyConvex);
  EXPECT_EQ(q.kappa, Rational(1));
}

TEST(Equivalences, Examples) {
  const EquivalenceReport a = verify_theorem_equivalences(kAbs);
  EXPECT_EQ(a.status, EquivalenceReport::Status::Confirmed);
  EXPECT_TRUE(a.graphical_holds && a.d2_holds && a.combined_holds && a.limiting_holds);
  const EquivalenceReport s = verify_theorem_equivalences(kSpliced);
  EXPECT_EQ(s.status, EquivalenceReport::Status::Confirmed);
  EXPECT_FALSE(s.d2_holds);
  EXPECT_EQ(verify_theorem_equivalences(kNegAbs).status, EquivalenceReport::Status::GateFailed);
  EXPECT_EQ(verify_theorem_equivalences(kNegAbs).status_name(), "gate_failed");
}

TEST(Properties, ConvexMeansNondecreasingSlopes) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const PiecewiseQuad1D f = testsupport::random_piecewise(rng);
    bool monotone = true;
    for (const auto& q : f.pieces()) monotone = monotone && q.a >= 0;
    for (const Rational& b : f.breakpoints()) {
      const LocalData l = f.local(b);
      monotone = monotone && l.d_left <= l.d_right;
    }
    EXPECT_EQ(convexity_decide_exact(f).convex(), monotone) << f.describe();
  }
}

TEST(Properties, ConvexGraphicalPairingsNonnegative) {
  Rng rng(22);
  int convex = 0;
  for (int i = 0; i < 300 && convex < 40; ++i) {
    const PiecewiseQuad1D f = testsupport::random_piecewise(rng);
    if (!convexity_decide_exact(f).convex()) continue;
    ++convex;
    for (const auto& [x, v] : exact_test_pairs(f))
      for (const Rational w : {Rational(-1), Rational(0), Rational(1), Rational(1, 3)})
        EXPECT_TRUE(second_order_maps_exact(f, x, v, w).graphical.pairing_at_least(w, 0)) << f.describe();
  }
  EXPECT_GT(convex, 10);
}

TEST(Properties, SegmentBruteForceMatchesDecision) {
  Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    const PiecewiseQuad1D f = testsupport::random_piecewise(rng, 3);
    const ConvexityDecision d = convexity_decide_exact(f);
    const auto phi = [&](double x) { return f.value(x).as_double(); };
    if (!d.weakly_convex()) {
      const double k = to_double(*d.concave_kink), h = 1e-3;
      const double s = 2 * (0.5 * phi(k - h) + 0.5 * phi(k + h) - phi(k)) / (0.25 * 4 * h * h);
      EXPECT_LT(s, -100.0) << f.describe();
    } else {
      double lo = -4, hi = 4;
      if (f.domain().lo) lo = to_double(*f.domain().lo);
      if (f.domain().hi) hi = to_double(*f.domain().hi);
      EXPECT_GE(testsupport::segment_grid(phi, lo, hi, 161), -to_double(d.rho) - 1e-6) << f.describe();
    }
  }
}
