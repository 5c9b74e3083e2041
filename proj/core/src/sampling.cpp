#include "varkit/sampling.hpp"

#include "varkit/errors.hpp"
#include "varkit/parallel.hpp"
#include "varkit/rng.hpp"

namespace varkit {

SubgradientPair pair_from_draw(const FunctionOracle& oracle, double lambda, const Point& u, const Box& box,
                               const InnerSolverConfig& cfg) {
  const EnvelopeHandle h(oracle, lambda, box, cfg);
  const ProxResult r = h.prox_full(u);
  return SubgradientPair{r.p, (u - r.p) / lambda, r.residual};
}

std::vector<SubgradientPair> sample_subgradient_pairs(const FunctionOracle& oracle, const Box& box, double lambda,
                                                      int count, std::uint64_t seed, int workers,
                                                      const InnerSolverConfig& cfg) {
  if (box.dim() != oracle.dimension()) throw Error(Errc::DimensionMismatch, "box dimension mismatch");
  if (count < 0) throw Error(Errc::InvalidArgument, "count must be nonnegative");
  if (!oracle.has_prox() && !oracle.has_subdiff())
    throw Error(Errc::CapabilityMissing, oracle.name() + " has neither prox nor subdifferential");
  const double lam = default_lambda(oracle, lambda);
  const auto n = static_cast<std::size_t>(count);
  if (oracle.has_prox()) {
    return parallel_map<SubgradientPair>(n, workers, [&](std::size_t i) {
      Rng rng = Rng::stream(seed, i);
      return pair_from_draw(oracle, lam, rng.uniform_in(box), box, cfg);
    });
  }
  return parallel_map<SubgradientPair>(n, workers, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Point x = rng.uniform_in(box);
      if (oracle.value(x).is_inf()) continue;
      const SubdiffSet s = oracle.subdiff(x);
      if (s.empty()) continue;
      return SubgradientPair{x, s.sample(rng), 0.0};
    }
    throw Error(Errc::InnerSolverFailed, "no point with a nonempty subdifferential found in the box");
  });
}

std::vector<SubgradientPair> hint_pairs(const FunctionOracle& oracle, double spread) {
  std::vector<SubgradientPair> out;
  if (!oracle.has_subdiff()) return out;
  for (const auto& x : oracle.hints()) {
    if (x.size() != oracle.dimension() || oracle.value(x).is_inf()) continue;
    for (const auto& v : oracle.subdiff(x).anchors(spread)) out.push_back({x, v, 0.0});
  }
  return out;
}

}  // namespace varkit
