// Zoo-wide properties of the certifier.

#include <gtest/gtest.h>

#include <cmath>

#include "varkit/certifier.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;

namespace {

struct Instance {
  std::string name;
  int dim;
};

std::vector<Instance> instances() {
  std::vector<Instance> out;
  for (const auto& n : zoo_names()) out.push_back({n, 1});
  for (const auto& n : {"quadratic", "l1", "huber", "neg_half_square", "indicator_box"}) out.push_back({n, 2});
  return out;
}

void PrintTo(const Instance& i, std::ostream* os) { *os << i.name << "/" << i.dim; }

std::string label(const ::testing::TestParamInfo<Instance>& info) {
  return info.param.name + "_" + std::to_string(info.param.dim) + "d";
}

ZooEntry entry(const Instance& i) { return zoo_get(i.name, {}, i.dim); }

CertifyConfig config_for(const ZooEntry& e) {
  CertifyConfig c;
  c.box = e.default_box;
  return c;
}

}  // namespace

class ZooProperty : public ::testing::TestWithParam<Instance> {};

TEST_P(ZooProperty, GateMatchesTruth) {
  const ZooEntry e = entry(GetParam());
  const ModulusEstimate m = segment_modulus(e.oracle, e.default_box, 10000, 1);
  if (!e.truth.weakly_convex()) {
    EXPECT_EQ(m.evidence, ModulusEstimate::Evidence::NotWeaklyConvex);
    return;
  }
  ASSERT_NE(m.evidence, ModulusEstimate::Evidence::NotWeaklyConvex);
  const double rho = *e.truth.weak_modulus();
  const double rho_hat = *m.rho_hat();
  EXPECT_LE(rho_hat, rho * (1 + 1e-6) + 1e-9);
  if (rho > 0) EXPECT_GE(rho_hat, 0.95 * rho);
}

TEST_P(ZooProperty, RoutesNeverRefuteConvexAndCatchNonconvex) {
  const ZooEntry e = entry(GetParam());
  const CertificateReport r = certify_convexity(e.oracle, config_for(e));
  if (e.truth.is_convex()) {
    for (const auto& m : r.methods) EXPECT_NE(m.verdict, RouteVerdict::Refuted) << m.method << ": " << m.note;
    EXPECT_EQ(r.exit_code(), 0) << r.summary;
  } else if (e.truth.weakly_convex()) {
    bool any = false;
    for (const auto& m : r.methods) any = any || m.verdict == RouteVerdict::Refuted;
    EXPECT_TRUE(any);
    EXPECT_EQ(r.overall, RouteVerdict::Refuted);
  } else {
    EXPECT_FALSE(r.gate_passed);
    EXPECT_EQ(r.exit_code(), 1) << r.summary;
  }
}

TEST_P(ZooProperty, WitnessesReplayExactly) {
  const ZooEntry e = entry(GetParam());
  const CertificateReport r = certify_convexity(e.oracle, config_for(e));
  for (const auto& m : r.methods) {
    if (m.verdict != RouteVerdict::Refuted && m.verdict != RouteVerdict::GateFailed) continue;
    if (!m.witness) continue;
    EXPECT_EQ(replay_witness(e.oracle, *m.witness), m.witness->value) << m.method << " " << m.witness->kind;
  }
  if (const auto w = falsify(e.oracle, config_for(e))) EXPECT_EQ(replay_witness(e.oracle, *w), w->value) << w->kind;
}

TEST_P(ZooProperty, TiltCoherence) {
  const ZooEntry e = entry(GetParam());
  if (!e.truth.weakly_convex()) return;
  for (const double kappa : {0.5, 1.5}) {
    const CertificateReport s = certify_strong(e.oracle, kappa, config_for(e));
    ASSERT_TRUE(s.tilt_agreement.has_value());
    EXPECT_TRUE(*s.tilt_agreement) << "kappa " << kappa << ": " << s.summary;
    const bool truly = e.truth.sharp_s >= kappa;
    EXPECT_EQ(s.exit_code() == 0, truly) << "kappa " << kappa << ": " << s.summary;
  }
}

TEST_P(ZooProperty, DeterministicAcrossWorkers) {
  const ZooEntry e = entry(GetParam());
  CertifyConfig a = config_for(e), b = config_for(e);
  b.workers = 3;
  const CertificateReport ra = certify_convexity(e.oracle, a), rb = certify_convexity(e.oracle, b);
  ASSERT_EQ(ra.methods.size(), rb.methods.size());
  EXPECT_EQ(ra.summary, rb.summary);
  for (std::size_t i = 0; i < ra.methods.size(); ++i) {
    EXPECT_EQ(ra.methods[i].verdict, rb.methods[i].verdict);
    EXPECT_EQ(ra.methods[i].statistic, rb.methods[i].statistic);
    EXPECT_EQ(ra.methods[i].probe_count, rb.methods[i].probe_count);
  }
}

INSTANTIATE_TEST_SUITE_P(Zoo, ZooProperty, ::testing::ValuesIn(instances()), label);
