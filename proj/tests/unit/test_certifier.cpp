#include <gtest/gtest.h>

#include <cmath>

#include "test_oracles.hpp"
#include "varkit/certifier.hpp"
#include "varkit/errors.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;

namespace {

CertifyConfig config_for(const ZooEntry& e) {
  CertifyConfig c;
  c.box = e.default_box;
  return c;
}

}  // namespace

TEST(SegmentS, Values) {
  const FunctionOracle& u = zoo_get("unit_except_origin").oracle;
  EXPECT_NEAR(*segment_s(u, scalar_point(0.01), scalar_point(0), 0.5), -40000.0, 1e-6);
  const FunctionOracle& nhs = zoo_get("neg_half_square").oracle;
  EXPECT_NEAR(*segment_s(nhs, scalar_point(-1), scalar_point(2), 0.3), -1.0, 1e-12);
  const FunctionOracle& ind = zoo_get("indicator_box").oracle;
  EXPECT_FALSE(segment_s(ind, scalar_point(2), scalar_point(0), 0.5).has_value());
  EXPECT_FALSE(segment_s(nhs, scalar_point(1), scalar_point(1), 0.5).has_value());
}

TEST(SegmentModulus, Examples) {
  const ZooEntry nhs = zoo_get("neg_half_square");
  const ModulusEstimate m = segment_modulus(nhs.oracle, nhs.default_box, 2000, 1);
  EXPECT_NEAR(m.s_hat, -1.0, 1e-6);
  EXPECT_EQ(m.evidence, ModulusEstimate::Evidence::WeaklyConvex);
  EXPECT_EQ(*segment_s(nhs.oracle, m.x, m.y, m.lambda), m.s_hat);

  const ZooEntry abs = zoo_get("abs");
  const ModulusEstimate ma = segment_modulus(abs.oracle, abs.default_box, 2000, 1);
  EXPECT_GE(ma.s_hat, -1e-9);
  EXPECT_EQ(ma.evidence, ModulusEstimate::Evidence::Convex);
  const double brute = testsupport::segment_grid([](double x) { return std::abs(x); }, -2, 2, 81);
  EXPECT_GE(ma.s_hat, brute - 1e-9);

  const ZooEntry u = zoo_get("unit_except_origin");
  const ModulusEstimate mu = segment_modulus(u.oracle, u.default_box, 2000, 1);
  EXPECT_EQ(mu.evidence, ModulusEstimate::Evidence::NotWeaklyConvex);
  EXPECT_FALSE(mu.rho_hat().has_value());
}

TEST(SegmentModulus, Deterministic) {
  const ZooEntry e = zoo_get("abs_x2_minus_1");
  SegmentConfig a, b;
  a.n_triples = b.n_triples = 3000;
  b.workers = 4;
  const ModulusEstimate ma = segment_modulus(e.oracle, e.default_box, a);
  const ModulusEstimate mb = segment_modulus(e.oracle, e.default_box, b);
  EXPECT_EQ(ma.s_hat, mb.s_hat);
  EXPECT_EQ(ma.x, mb.x);
}

TEST(SegmentModulus, DegenerateBox) {
  const ZooEntry e = zoo_get("indicator_box");
  EXPECT_THROW(segment_modulus(e.oracle, Box::cube(1, 5, 6), 100, 1), Error);
}

TEST(Certify, AbsProved) {
  const ZooEntry e = zoo_get("abs");
  const CertificateReport r = certify_convexity(e.oracle, config_for(e));
  EXPECT_EQ(r.overall, RouteVerdict::Proved);
  EXPECT_EQ(r.exit_code(), 0);
  for (const auto& m : r.methods) EXPECT_NE(m.verdict, RouteVerdict::Refuted) << m.method;
}

TEST(Certify, AbsWithoutPiecewiseIsConsistent) {
  const ZooEntry e = zoo_get("abs");
  FunctionOracle plain("abs_plain", 1, e.oracle.value_fn());
  plain.with_subdiff(e.oracle.subdiff_fn()).with_prox(e.oracle.prox_fn());
  const CertificateReport r = certify_convexity(plain, config_for(e));
  EXPECT_EQ(r.overall, RouteVerdict::Consistent);
}

TEST(Certify, AbsX2Minus1Refuted) {
  const ZooEntry e = zoo_get("abs_x2_minus_1");
  const CertificateReport r = certify_convexity(e.oracle, config_for(e));
  EXPECT_TRUE(r.gate_passed);
  ASSERT_TRUE(r.modulus.has_value());
  EXPECT_NEAR(*r.modulus->rho_hat(), 2.0, 0.1);
  const MethodEntry* g = r.find("graphical");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->verdict, RouteVerdict::Refuted);
  ASSERT_TRUE(g->witness.has_value());
  EXPECT_LT(std::abs(g->witness->point("x")[0]), 1.0);
  EXPECT_EQ(r.overall, RouteVerdict::Refuted);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Certify, JumpFunctionGateFails) {
  const ZooEntry e = zoo_get("unit_except_origin");
  const CertificateReport r = certify_convexity(e.oracle, config_for(e));
  EXPECT_FALSE(r.gate_passed);
  EXPECT_EQ(r.find("graphical")->verdict, RouteVerdict::Consistent);
  EXPECT_EQ(r.overall, RouteVerdict::Refuted);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Certify, SingleMethodAndErrors) {
  const ZooEntry e = zoo_get("huber");
  CertifyConfig c = config_for(e);
  c.method = "segment";
  const CertificateReport r = certify_convexity(e.oracle, c);
  EXPECT_EQ(r.methods.size(), 1u);
  c.method = "bogus";
  EXPECT_THROW(certify_convexity(e.oracle, c), Error);
  c.method = "exact1d";
  const ZooEntry l1 = zoo_get("l1", {}, 2);
  CertifyConfig c2 = config_for(l1);
  c2.method = "exact1d";
  EXPECT_THROW(certify_convexity(l1.oracle, c2), Error);
  EXPECT_THROW(certify_strong(e.oracle, 0.0, config_for(e)), Error);
}

TEST(CertifyStrong, Examples) {
  const ZooEntry q = zoo_get("quadratic");
  EXPECT_EQ(certify_strong(q.oracle, 1.0, config_for(q)).exit_code(), 0);
  const CertificateReport over = certify_strong(q.oracle, 1.5, config_for(q));
  EXPECT_EQ(over.overall, RouteVerdict::Refuted);
  const PiecewiseQuad1D f = PiecewiseQuad1D({0}, {{0, -1, 0}, {0, 1, 0}}).plus_quadratic(Rational(1, 2), 0, 0);
  const FunctionOracle o = oracle_from_piecewise("abs_plus_half_square", f);
  CertifyConfig c;
  c.box = Box::cube(1, -2, 2);
  const CertificateReport r = certify_strong(o, 1.0, c);
  EXPECT_EQ(r.overall, RouteVerdict::Proved);
  EXPECT_EQ(r.tilt_agreement, std::optional<bool>(true));
}

TEST(Falsify, Examples) {
  // Without a piecewise form the monotonicity scan is the strongest route.
  const ZooEntry nhs = zoo_get("neg_half_square", {}, 2);
  const auto w = falsify(nhs.oracle, config_for(nhs));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->kind, "monotonicity");
  EXPECT_LT(w->value, 0.0);
  EXPECT_EQ(replay_witness(nhs.oracle, *w), w->value);

  const ZooEntry nhs1 = zoo_get("neg_half_square");
  const auto w1 = falsify(nhs1.oracle, config_for(nhs1));
  ASSERT_TRUE(w1.has_value());
  EXPECT_EQ(w1->kind, "exact_curvature");

  const ZooEntry abs = zoo_get("abs");
  EXPECT_FALSE(falsify(abs.oracle, config_for(abs)).has_value());

  const ZooEntry ax = zoo_get("abs_x2_minus_1");
  const auto wx = falsify(ax.oracle, config_for(ax));
  ASSERT_TRUE(wx.has_value());
  EXPECT_EQ(replay_witness(ax.oracle, *wx), wx->value);
}

TEST(Witness, UnknownKindRejected) {
  Witness w;
  w.kind = "nonsense";
  EXPECT_THROW(replay_witness(zoo_get("abs").oracle, w), Error);
}
