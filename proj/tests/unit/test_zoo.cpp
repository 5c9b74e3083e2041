#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_oracles.hpp"
#include "varkit/errors.hpp"
#include "varkit/sampling.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Zoo, ListsEveryEntry) {
  const auto& names = zoo_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "unit_except_origin"), names.end());
  for (const auto& n : names) EXPECT_NO_THROW(zoo_get(n)) << n;
  EXPECT_THROW(zoo_get("nope"), Error);
  EXPECT_THROW(zoo_get("abs", {}, 2), Error);
}

TEST(Zoo, EvaluationExamples) {
  EXPECT_EQ(eval_checked(zoo_get("abs").oracle, scalar_point(-3)), ExtReal(3.0));
  const auto& u = zoo_get("unit_except_origin").oracle;
  EXPECT_EQ(eval_checked(u, scalar_point(0)), ExtReal(0.0));
  EXPECT_EQ(eval_checked(u, scalar_point(0.2)), ExtReal(1.0));
  EXPECT_TRUE(eval_checked(zoo_get("indicator_box").oracle, scalar_point(2)).is_inf());
}

TEST(Zoo, Truths) {
  const Truth u = zoo_get("unit_except_origin").truth;
  EXPECT_FALSE(u.is_convex());
  EXPECT_FALSE(u.weak_modulus().has_value());
  const Truth q = zoo_get("quadratic", {{"Q", {"1", "0", "0", "1"}}}).truth;
  EXPECT_TRUE(q.is_convex());
  EXPECT_DOUBLE_EQ(*q.strong_modulus(), 1.0);
  EXPECT_TRUE(zoo_get("max_quadratics").truth.is_convex());
  EXPECT_DOUBLE_EQ(*zoo_get("spliced_parabola").truth.weak_modulus(), 2.0);
  EXPECT_DOUBLE_EQ(*zoo_get("abs_x2_minus_1").truth.weak_modulus(), 2.0);
  EXPECT_FALSE(zoo_get("neg_abs").truth.weakly_convex());
  EXPECT_FALSE(zoo_get("neg_abs").impossibility_witness.empty());
  EXPECT_EQ(zoo_get("abs").truth.describe(), "convex, rho = 0");
}

TEST(Zoo, AnalyticSubdifferentials) {
  const ZooEntry u = zoo_get("unit_except_origin");
  const SubdiffSet s0 = subdiff_analytic(u, scalar_point(0));
  EXPECT_TRUE(s0.contains(scalar_point(-1e9)) && s0.contains(scalar_point(1e9)));
  EXPECT_TRUE(subdiff_analytic(u, scalar_point(0.3)).is_singleton());
  const SubdiffSet a = subdiff_analytic(zoo_get("abs"), scalar_point(0));
  EXPECT_TRUE(a.contains(scalar_point(-1)) && a.contains(scalar_point(1)) && !a.contains(scalar_point(1.01)));
  const SubdiffSet ind = subdiff_analytic(zoo_get("indicator_box"), scalar_point(1));
  EXPECT_TRUE(ind.contains(scalar_point(1e6)));
  EXPECT_FALSE(ind.contains(scalar_point(-0.1)));
  EXPECT_THROW(subdiff_analytic(zoo_get("abs"), Point::Zero(2)), Error);
}

TEST(Zoo, ProxMatchesGridMinimization) {
  Rng rng(31);
  for (const auto& name : zoo_names()) {
    const ZooEntry e = zoo_get(name);
    if (!e.oracle.has_prox() || e.oracle.dimension() != 1 || name == "unit_except_origin") continue;
    const auto phi = [&](double x) { return e.oracle.value(scalar_point(x)).as_double(); };
    const auto rho = e.truth.weak_modulus();
    const double lmax = rho && *rho > 0 ? 0.9 / *rho : 4.0;
    for (int i = 0; i < 100; ++i) {
      const double lambda = rng.uniform(0.05, lmax);
      const double x = rng.uniform(-3, 3);
      const double p = e.oracle.prox(lambda, scalar_point(x))[0];
      const double g = testsupport::prox_grid(phi, lambda, x);
      const double obj = phi(p) + (p - x) * (p - x) / (2 * lambda);
      const double gobj = phi(g) + (g - x) * (g - x) / (2 * lambda);
      EXPECT_LE(obj, gobj + 1e-9) << name << " lambda=" << lambda << " x=" << x;
    }
  }
}

TEST(Zoo, WeakConvexitySubgradientInequality) {
  for (const auto& name : zoo_names()) {
    const ZooEntry e = zoo_get(name);
    const auto rho = e.truth.weak_modulus();
    if (!rho || !e.oracle.has_subdiff()) continue;
    const Box& box = e.default_box;
    Rng rng(32);
    for (int i = 0; i < 200; ++i) {
      const Point u = rng.uniform_in(box), x = rng.uniform_in(box);
      const ExtReal fu = e.oracle.value(u), fx = e.oracle.value(x);
      if (fu.is_inf() || fx.is_inf()) continue;
      const SubdiffSet s = e.oracle.subdiff(u);
      for (const Point& v : s.anchors())
        EXPECT_GE(fx.value(), fu.value() + v.dot(x - u) - 0.5 * *rho * (x - u).squaredNorm() - 1e-9) << name;
    }
  }
}

TEST(Sampling, PairExamples) {
  const FunctionOracle& abs = zoo_get("abs").oracle;
  const Box box = Box::cube(1, -2, 2);
  SubgradientPair p = pair_from_draw(abs, 1.0, scalar_point(2), box);
  EXPECT_DOUBLE_EQ(p.x[0], 1.0);
  EXPECT_DOUBLE_EQ(p.v[0], 1.0);
  p = pair_from_draw(abs, 1.0, scalar_point(0.5), box);
  EXPECT_DOUBLE_EQ(p.x[0], 0.0);
  EXPECT_DOUBLE_EQ(p.v[0], 0.5);
  p = pair_from_draw(zoo_get("quadratic").oracle, 1.0, scalar_point(2), box);
  EXPECT_DOUBLE_EQ(p.x[0], 1.0);
  EXPECT_DOUBLE_EQ(p.v[0], 1.0);
}

TEST(Sampling, PairsLieOnTheGraph) {
  for (const auto& name : zoo_names()) {
    const ZooEntry e = zoo_get(name);
    if (!e.oracle.has_subdiff()) continue;
    const auto pairs = sample_subgradient_pairs(e.oracle, e.default_box, 0.5, 40, 9);
    for (const auto& p : pairs)
      EXPECT_LE(e.oracle.subdiff(p.x).distance(p.v), 1e-6 * (1 + p.v.norm())) << name;
  }
}

TEST(Sampling, DeterministicAcrossWorkers) {
  const ZooEntry e = zoo_get("l1", {}, 3);
  const auto a = sample_subgradient_pairs(e.oracle, e.default_box, 1.0, 50, 4, 1);
  const auto b = sample_subgradient_pairs(e.oracle, e.default_box, 1.0, 50, 4, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].v, b[i].v);
  }
}

TEST(Sampling, HintPairs) {
  const auto pairs = hint_pairs(zoo_get("abs").oracle);
  ASSERT_FALSE(pairs.empty());
  for (const auto& p : pairs) EXPECT_LE(std::abs(p.v[0]), 1.0);
  EXPECT_TRUE(std::isinf(kInf));
}
