#pragma once

#include <cstdint>
#include <vector>

#include "varkit/moreau.hpp"
#include "varkit/oracle.hpp"

namespace varkit {

/// Pair (prox(u), (u - prox(u)) / lambda) for one draw u; residual is the
/// prox optimality defect.
SubgradientPair pair_from_draw(const FunctionOracle& oracle, double lambda, const Point& u, const Box& box,
                               const InnerSolverConfig& cfg = {});

/// `count` pairs on gph of the subdifferential. Uses the prox route when the
/// oracle has a prox (or a numerical prox otherwise if it lacks a
/// subdifferential), else draws x in the box and a selection of the analytic
/// subdifferential. lambda is capped at 1/(2 rho) for a declared modulus rho.
/// Draw i uses its own RNG stream, so the result is independent of workers.
/// Throws CapabilityMissing or ProxDiverged.
std::vector<SubgradientPair> sample_subgradient_pairs(const FunctionOracle& oracle, const Box& box, double lambda,
                                                      int count, std::uint64_t seed, int workers = 1,
                                                      const InnerSolverConfig& cfg = {});

/// Pairs at the oracle's hint points: anchors of the analytic subdifferential.
std::vector<SubgradientPair> hint_pairs(const FunctionOracle& oracle, double spread = 1.0);

}  // namespace varkit
