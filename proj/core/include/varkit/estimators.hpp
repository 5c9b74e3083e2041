#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "varkit/ext_real.hpp"
#include "varkit/moreau.hpp"
#include "varkit/oracle.hpp"

namespace varkit {

/// Discretization of tau -> 0 and u -> w.
struct GridConfig {
  double tau0 = 1e-1;
  double ratio = 0.5;
  int depth = 20;
  /// Radius of the direction ball at the first level.
  double delta = 1e-2;
  /// Direction perturbations per level, besides w itself.
  int samples = 8;
  /// Graphical probes keep selections with |v' - v| <= t * z_radius.
  double z_radius = 1e4;
  /// Levels inspected when classifying divergence.
  int tail = 5;
  double divergence = 1e8;

  /// Throws InvalidArgument.
  void validate() const;
  [[nodiscard]] double tau(int k) const;
};

/// 1e-6 * (1 + |w|^2).
double tol_psd(const Point& w);

enum class ProbeSource { Delta2, Graphical, EnvelopeHessian };
std::string to_string(ProbeSource s);

struct ProbeResult {
  SubgradientPair base;
  Point w;            // requested direction
  Point z;            // vector object (graphical, envelope)
  SecondOrderValue value;  // scalar object (delta2)
  double pairing = 0.0;    // <z, w_probe> for vector objects
  ProbeSource source = ProbeSource::Graphical;
  double t = 0.0;     // tau or t of the grid point
  Point w_probe;      // u or w' of the grid point
  /// Extra refutation slack from inexact pairs (cloud probes).
  double slack = 0.0;
};

/// [phi(x + tau u) - phi(x) - tau <v, u>] / (tau^2 / 2); +inf when
/// phi(x + tau u) is. Throws BasePointInfeasible or DimensionMismatch.
ExtReal delta2(const FunctionOracle& oracle, const Point& x, const Point& v, double tau, const Point& u);

struct D2Level {
  double tau = 0.0;
  /// Minimum over every direction of the level.
  SecondOrderValue level_min;
  /// Minimum over w and the fine perturbations.
  SecondOrderValue fine_min;
  Point argmin_u;
  bool resolved = true;
};

struct D2Estimate {
  SecondOrderValue value;
  double tau = 0.0;
  Point u;
  /// Minimum of delta2 over the whole grid.
  SecondOrderValue grid_min;
  std::vector<D2Level> trace;
};

/// Discrete liminf of delta2. A finite estimate is the minimum over w and
/// perturbations of radius delta * r^(3k) at the last resolved level; +-inf
/// is declared from the level minima, which also include perturbations of
/// radius delta * r^(k/2).
D2Estimate second_subderivative(const FunctionOracle& oracle, const Point& x, const Point& v, const Point& w,
                                const GridConfig& g = {});

/// Rounding bound of delta2 at one grid point; 0 when phi(x + tau u) = +inf.
double delta2_rounding_bound(const FunctionOracle& oracle, const Point& x, const Point& v, double tau,
                             const Point& u);

/// Deterministic perturbation offsets of norm at most 1 for dimension n:
/// +-e_i at scales 1, 1/2, 1/4, ...; prefixes are nested.
std::vector<Point> perturbation_directions(int n, int count);

/// Candidates z = (v' - v)/t with v' in the subdifferential at x + t w',
/// kept when matched at every finer level.
std::vector<ProbeResult> graphical_probe_structured(const FunctionOracle& oracle, const SubgradientPair& base,
                                                    const Point& w, const GridConfig& g = {});

/// Same from a sampled cloud of pairs: nearest admissible pairs per level.
std::vector<ProbeResult> graphical_probe_cloud(const std::vector<SubgradientPair>& pairs,
                                               const SubgradientPair& base, const Point& w,
                                               const GridConfig& g = {});

/// Structured probe when the oracle has an analytic subdifferential,
/// cloud probe otherwise.
std::vector<ProbeResult> graphical_derivative_probe(const FunctionOracle* oracle,
                                                    const std::vector<SubgradientPair>& pairs,
                                                    const SubgradientPair& base, const Point& w,
                                                    const GridConfig& g = {});

enum class RouteVerdict { Proved, Consistent, Refuted, Inconclusive, GateFailed };
std::string to_string(RouteVerdict v);

struct PsdTestConfig {
  int n_pairs = 64;
  int n_dirs = 4;
  double lambda = 1.0;
  std::uint64_t seed = 1;
  int workers = 1;
  GridConfig grid;
};

struct PsdVerdict {
  RouteVerdict verdict = RouteVerdict::Inconclusive;
  std::optional<ProbeResult> witness;
  /// Smallest pairing - kappa |w'|^2 over all probes.
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t probe_count = 0;
  std::size_t pair_count = 0;
  std::string note;
};

/// Refuted when some probe has pairing < kappa |w'|^2 - tol_psd(w').
PsdVerdict psd_graphical_test(const FunctionOracle& oracle, const Box& box, double kappa, const PsdTestConfig& cfg);

struct EnvelopeWitness {
  Point u;         // envelope-level point
  Point w;         // unit eigenvector
  double curvature = 0.0;  // <H w, w>
  double threshold = 0.0;  // kappa_lambda
  Point x, v;      // (prox(u), grad e(u)) on gph
  Point z_phi, w_phi;  // unwound through the resolvent
  double pairing_phi = 0.0;
};

struct EnvelopePsdVerdict {
  RouteVerdict verdict = RouteVerdict::Inconclusive;
  std::optional<EnvelopeWitness> witness;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_symmetry_defect = 0.0;
  double kappa_lambda = 0.0;
  std::size_t probe_count = 0;
  std::string note;
};

/// kappa / (1 + lambda kappa).
double envelope_threshold(double kappa, double lambda);

/// Refuted when a finite-difference envelope Hessian has <H w, w> below
/// kappa_lambda - tol at some sampled point.
EnvelopePsdVerdict coderivative_psd_via_envelope(const EnvelopeHandle& h, const Box& box, double kappa,
                                                 int n_points, double step, std::uint64_t seed, int workers = 1);

struct SumRuleReport {
  std::size_t samples = 0;
  std::size_t finite_compared = 0;
  std::size_t class_mismatches = 0;
  double max_d2_residual = 0.0;
  double max_graphical_gap = 0.0;
};

/// Residuals of d2 phi(x,v)(w) = d2 psi(x, v - kappa x)(w) + kappa |w|^2 and of
/// the graphical shift by kappa w, with psi = phi - (kappa/2)|.|^2.
SumRuleReport sum_rule_residuals(const FunctionOracle& oracle, double kappa, const std::vector<SubgradientPair>& pairs,
                                 const std::vector<Point>& directions, const GridConfig& g = {});

/// Same on `samples` pairs drawn from the box.
SumRuleReport sum_rule_residuals(const FunctionOracle& oracle, double kappa, const Box& box, int samples,
                                 const GridConfig& g, std::uint64_t seed);

}  // namespace varkit
