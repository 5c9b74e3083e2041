#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varkit/estimators.hpp"
#include "varkit/oracle.hpp"
#include "varkit/types.hpp"

namespace varkit {

/// Tightest s in the s-convexity inequality for one triple:
/// 2[(1-l) phi(x) + l phi(y) - phi(z)] / (l (1-l) |x-y|^2), z = (1-l) x + l y.
/// nullopt when phi(x) or phi(y) is +inf or x == y; -inf when only phi(z) is.
std::optional<double> segment_s(const FunctionOracle& oracle, const Point& x, const Point& y, double lambda);

/// Rounding bound of segment_s at a triple with finite values.
double segment_rounding_bound(const FunctionOracle& oracle, const Point& x, const Point& y, double lambda);

struct SegmentConfig {
  int n_triples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  double rho_max = 1e4;
  int refine_rounds = 8;
  int workers = 1;
};

struct ModulusEstimate {
  enum class Evidence { Convex, WeaklyConvex, NotWeaklyConvex };

  double s_hat = std::numeric_limits<double>::infinity();
  Point x, y;
  double lambda = 0.5;
  /// Rounding bound of segment_s at the recorded triple.
  double rounding_bound = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Evidence evidence = Evidence::Convex;
  /// Minimum of each refinement round.
  std::vector<double> refinement;
  bool diverging = false;

  /// -s_hat for weakly convex evidence, 0 for convex evidence.
  [[nodiscard]] std::optional<double> rho_hat() const;
  [[nodiscard]] std::string evidence_name() const;
};

/// Throws DegenerateBox when no triple in the box has finite endpoint values.
ModulusEstimate segment_modulus(const FunctionOracle& oracle, const Box& box, const SegmentConfig& cfg);
ModulusEstimate segment_modulus(const FunctionOracle& oracle, const Box& box, int n_triples, std::uint64_t seed);

/// Replayable evidence of a violated inequality.
struct Witness {
  struct Field {
    std::string key;
    std::vector<double> values;
  };
  std::string kind;
  std::vector<Field> data;
  /// Exact rational data for witnesses from the 1-D engine.
  std::vector<std::pair<std::string, std::string>> exact;
  double value = 0.0;
  double threshold = 0.0;
  std::string recipe;

  [[nodiscard]] const std::vector<double>& get(const std::string& key) const;
  [[nodiscard]] Point point(const std::string& key) const;
  [[nodiscard]] double scalar(const std::string& key) const { return get(key).at(0); }
};

/// Recomputes the witness value from its data. Throws InvalidArgument for an
/// unknown kind.
double replay_witness(const FunctionOracle& oracle, const Witness& w);

struct MethodEntry {
  std::string method;
  RouteVerdict verdict = RouteVerdict::Inconclusive;
  std::optional<Witness> witness;
  std::size_t probe_count = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::string statistic_name;
  std::optional<double> statistic;
  double tolerance = 0.0;
  std::string note;
};

struct CertifyConfig {
  Box box;
  /// "all" or one of graphical, subderivative, coderivative, moreau, segment, exact1d.
  std::string method = "all";
  int samples = 64;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  double lambda = 1.0;
  int workers = 1;
  int triples = 10000;
  double rho_max = 1e4;
  GridConfig grid;
  int d2_pairs = 16;
  int envelope_points = 32;
  double fd_step = 1e-4;
  int moreau_pairs = 128;
  /// certify_strong also certifies the tilt and compares.
  bool tilt_cross_check = true;
};

const std::vector<std::string>& method_names();

struct CertificateReport {
  std::string oracle_name;
  int dimension = 1;
  std::string mode = "convexity";
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::vector<MethodEntry> methods;
  RouteVerdict overall = RouteVerdict::Inconclusive;
  bool gate_passed = true;
  std::optional<ModulusEstimate> modulus;
  std::optional<bool> tilt_agreement;
  std::string summary;
  std::vector<std::string> notes;

  [[nodiscard]] const MethodEntry* find(const std::string& method) const;
  /// 0 proved/consistent, 1 refuted, 2 inconclusive/gate_failed.
  [[nodiscard]] int exit_code() const;
};

CertificateReport certify_convexity(const FunctionOracle& oracle, const CertifyConfig& cfg);

/// Throws InvalidArgument unless kappa > 0.
CertificateReport certify_strong(const FunctionOracle& oracle, double kappa, const CertifyConfig& cfg);

/// Strongest available nonconvexity witness: exact 1-D, then subgradient
/// monotonicity, then segment.
std::optional<Witness> falsify(const FunctionOracle& oracle, const CertifyConfig& cfg);

}  // namespace varkit
