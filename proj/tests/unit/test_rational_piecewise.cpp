#include <gtest/gtest.h>

#include <cmath>

#include "test_oracles.hpp"
#include "varkit/errors.hpp"
#include "varkit/piecewise.hpp"
#include "varkit/rational.hpp"

using namespace varkit;

TEST(Rational, ParsesForms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-2/6"), Rational(-1, 3));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("3e-2"), Rational(3, 100));
  EXPECT_EQ(parse_rational("007"), Rational(7));
  EXPECT_EQ(parse_rational("1.5E2"), Rational(150));
}

TEST(Rational, RejectsGarbage) {
  for (const char* s : {"", "abc", "1/0", "1//2", "1.2.3", "e5", "1/00"}) EXPECT_THROW(parse_rational(s), Error) << s;
}

TEST(Rational, DoubleConversions) {
  EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
  EXPECT_NE(rational_from_double_exact(0.1), Rational(1, 10));
  EXPECT_EQ(rational_from_double_exact(0.375), Rational(3, 8));
  EXPECT_EQ(to_string(Rational(-4, 6)), "-2/3");
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}

TEST(Piecewise, AbsValues) {
  const PiecewiseQuad1D f({0}, {{0, -1, 0}, {0, 1, 0}});
  EXPECT_EQ(*f.value_exact(Rational(-3, 2)), Rational(3, 2));
  EXPECT_DOUBLE_EQ(f.value(2.0).value(), 2.0);
  const LocalData l = f.local(0);
  EXPECT_TRUE(l.at_breakpoint);
  EXPECT_EQ(l.d_left, Rational(-1));
  EXPECT_EQ(l.d_right, Rational(1));
}

TEST(Piecewise, RejectsDiscontinuity) {
  EXPECT_THROW(PiecewiseQuad1D({0}, {{0, 0, 0}, {0, 0, 1}}), Error);
  EXPECT_THROW(PiecewiseQuad1D({1, 0}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), Error);
}

TEST(Piecewise, DomainIsClosed) {
  const PiecewiseQuad1D f = PiecewiseQuad1D::quadratic(1, 0, 0, Domain1D{Rational(-1), Rational(2)});
  EXPECT_TRUE(f.in_domain(2));
  EXPECT_FALSE(f.in_domain(Rational(21, 10)));
  EXPECT_TRUE(f.value(3.0).is_inf());
  EXPECT_THROW((void)f.local(5), Error);
  const LocalData l = f.local(-1);
  EXPECT_TRUE(l.at_lower_end);
  EXPECT_FALSE(l.has_left);
}

TEST(Piecewise, TiltAndShift) {
  const PiecewiseQuad1D f({0}, {{0, -1, 0}, {0, 1, 0}});
  const PiecewiseQuad1D g = f.tilted(2);
  EXPECT_EQ(*g.value_exact(1), Rational(0));
  EXPECT_EQ(g.tilted(-2), f);
  EXPECT_EQ(*f.plus_quadratic(1, 1, 1).value_exact(1), Rational(4));
}

TEST(Piecewise, SumMergesBreakpoints) {
  const PiecewiseQuad1D a({0}, {{0, -1, 0}, {0, 1, 0}});
  const PiecewiseQuad1D b({1}, {{0, 0, 0}, {0, 1, -1}});
  const PiecewiseQuad1D s = sum(a, b);
  EXPECT_EQ(s.breakpoints().size(), 2u);
  for (const Rational x : {Rational(-2), Rational(1, 2), Rational(3)})
    EXPECT_EQ(*s.value_exact(x), *a.value_exact(x) + *b.value_exact(x));
}

TEST(Piecewise, UpperEnvelope) {
  const PiecewiseQuad1D e = upper_envelope({{Rational(-1, 2), 0, 0}, {1, 0, Rational(-3, 2)}});
  ASSERT_EQ(e.breakpoints().size(), 2u);
  EXPECT_EQ(e.breakpoints()[0], Rational(-1));
  EXPECT_EQ(e.breakpoints()[1], Rational(1));
  EXPECT_EQ(e.continuity(), PiecewiseQuad1D::Continuity::Exact);
}

TEST(Piecewise, ProxMatchesGridMinimizer) {
  varkit::Rng rng(3);
  for (int inst = 0; inst < 40; ++inst) {
    const PiecewiseQuad1D f = testsupport::random_piecewise(rng);
    const Rational rho = [&] {
      Rational m = 0;
      for (const auto& p : f.pieces()) m = std::min(m, Rational(2 * p.a));
      return -m;
    }();
    const double lambda = rho > 0 ? 0.5 / to_double(rho) : 1.0;
    const auto phi = [&](double y) { return f.value(y).as_double(); };
    for (double x : {-2.5, -0.3, 0.0, 1.7}) {
      double p = 0;
      try {
        p = f.prox(lambda, x);
      } catch (const Error&) {
        continue;
      }
      const double obj = phi(p) + (p - x) * (p - x) / (2 * lambda);
      const double g = testsupport::prox_grid(phi, lambda, x);
      const double gobj = phi(g) + (g - x) * (g - x) / (2 * lambda);
      EXPECT_LE(obj, gobj + 1e-9) << f.describe() << " x=" << x;
    }
  }
}

TEST(Piecewise, ProxDivergesWhenUnbounded) {
  const PiecewiseQuad1D f = PiecewiseQuad1D::quadratic(-1, 0, 0);
  EXPECT_THROW((void)f.prox(1.0, 0.5), Error);
}
