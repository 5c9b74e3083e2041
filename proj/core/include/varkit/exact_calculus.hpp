#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varkit/cone2d.hpp"
#include "varkit/ext_real.hpp"
#include "varkit/piecewise.hpp"
#include "varkit/subdiff_set.hpp"

namespace varkit {

/// Closed interval of the line; a missing end is infinite.
struct Interval1D {
  std::optional<Rational> lo, hi;
  friend bool operator==(const Interval1D&, const Interval1D&) = default;
};

/// Finite union of closed intervals, kept sorted and merged.
class ExactSet1D {
 public:
  ExactSet1D() = default;
  static ExactSet1D point(const Rational& q) { return interval(q, q); }
  static ExactSet1D interval(std::optional<Rational> lo, std::optional<Rational> hi);
  static ExactSet1D all() { return interval(std::nullopt, std::nullopt); }

  ExactSet1D& unite(const ExactSet1D& other);

  [[nodiscard]] const std::vector<Interval1D>& parts() const noexcept { return parts_; }
  [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }
  [[nodiscard]] bool is_all() const;
  [[nodiscard]] bool contains(const Rational& q) const;
  [[nodiscard]] ExactSet1D translated(const Rational& d) const;
  /// Every z in the set satisfies z*w >= kappa*w^2 (vacuous when empty).
  [[nodiscard]] bool pairing_at_least(const Rational& w, const Rational& kappa) const;
  /// Endpoints, midpoints, and points one unit past infinite ends.
  [[nodiscard]] std::vector<Rational> anchors() const;

  [[nodiscard]] SubdiffSet to_subdiff_set() const;
  [[nodiscard]] std::string describe() const;

  friend bool operator==(const ExactSet1D&, const ExactSet1D&) = default;

 private:
  void normalize();
  std::vector<Interval1D> parts_;
};

/// Exact second-order value: finite rational or +-infinity.
struct ExactSecond {
  SecondOrderValue::Kind kind = SecondOrderValue::Kind::Finite;
  Rational value;

  static ExactSecond plus_inf() { return {SecondOrderValue::Kind::PlusInf, 0}; }
  static ExactSecond minus_inf() { return {SecondOrderValue::Kind::MinusInf, 0}; }
  [[nodiscard]] bool is_finite() const { return kind == SecondOrderValue::Kind::Finite; }
  [[nodiscard]] bool at_least(const Rational& t) const;
  [[nodiscard]] SecondOrderValue to_value() const;
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const ExactSecond&, const ExactSecond&) = default;
};

/// gph of a set-valued map from R to R as straight pieces: non-vertical arcs
/// v = slope*x + intercept over an x-range, and vertical segments or rays.
/// Components may meet only at isolated points.
class SubdiffGraph1D {
 public:
  struct Arc {
    std::optional<Rational> x_lo, x_hi;
    Rational slope, intercept;
  };
  struct Vertical {
    Rational x;
    std::optional<Rational> v_lo, v_hi;
  };

  void add_arc(Arc a) { arcs_.push_back(std::move(a)); }
  void add_vertical(Vertical s) { verticals_.push_back(std::move(s)); }

  [[nodiscard]] const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  [[nodiscard]] const std::vector<Vertical>& verticals() const noexcept { return verticals_; }

  [[nodiscard]] bool contains(const Vec2& p) const;
  /// Fiber {v : (x, v) in gph}.
  [[nodiscard]] ExactSet1D fiber(const Rational& x) const;
  [[nodiscard]] std::string describe() const;

 private:
  std::vector<Arc> arcs_;
  std::vector<Vertical> verticals_;
};

struct PlaneCones {
  Cone2D tangent;
  ConvexCone2D regular_normal = ConvexCone2D::zero();
  Cone2D limiting_normal;
  /// N^ computed directly from the local branches, independent of the polar.
  ConvexCone2D regular_normal_direct = ConvexCone2D::zero();
};

struct SecondOrderSets {
  ExactSet1D graphical;  // {z : (w, z) in T}
  ExactSet1D combined;   // {z : (z, -w) in N^}
  ExactSet1D limiting;   // {z : (z, -w) in N}
};

/// Limiting subdifferential; throws OutOfDomain.
ExactSet1D subdifferential(const PiecewiseQuad1D& f, const Rational& x);

SubdiffGraph1D graph_subdiff(const PiecewiseQuad1D& f);

/// Throws PointNotOnGraph.
PlaneCones cones_at(const SubdiffGraph1D& g, const Vec2& p);
PlaneCones cones_at(const PiecewiseQuad1D& f, const Vec2& p);

/// Throws NotASubgradient when v is not in the subdifferential at x.
ExactSecond d2_exact(const PiecewiseQuad1D& f, const Rational& x, const Rational& v, const Rational& w);

SecondOrderSets second_order_maps_exact(const SubdiffGraph1D& g, const Rational& x, const Rational& v,
                                        const Rational& w);
SecondOrderSets second_order_maps_exact(const PiecewiseQuad1D& f, const Rational& x, const Rational& v,
                                        const Rational& w);

/// {z : p0 + z*p1 in C}.
ExactSet1D slice(const Cone2D& c, const Vec2& p0, const Vec2& p1);

struct ConvexityDecision {
  enum class Verdict { NotWeaklyConvex, WeaklyConvex, Convex, StronglyConvex };
  Verdict verdict = Verdict::NotWeaklyConvex;
  Rational rho;    // weak modulus when weakly convex
  Rational kappa;  // min 2a over pieces when strongly convex
  /// Concave kink location when not weakly convex.
  std::optional<Rational> concave_kink;

  [[nodiscard]] bool weakly_convex() const { return verdict != Verdict::NotWeaklyConvex; }
  [[nodiscard]] bool convex() const { return verdict == Verdict::Convex || verdict == Verdict::StronglyConvex; }
  [[nodiscard]] std::string describe() const;
};

ConvexityDecision convexity_decide_exact(const PiecewiseQuad1D& f);

/// Lowest second-order coefficient min_i 2a_i.
Rational min_curvature(const PiecewiseQuad1D& f);

struct EquivalenceReport {
  enum class Status { Confirmed, GateFailed, Counterexample };
  ConvexityDecision decision;
  Rational kappa;
  Status status = Status::Confirmed;
  bool graphical_holds = true;
  bool d2_holds = true;
  bool combined_holds = true;
  bool limiting_holds = true;
  /// Graphical set equals the subdifferential of w -> d2/2 at every tested
  /// pair of a weakly convex instance.
  bool epi_cross_check = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> notes;

  [[nodiscard]] std::string status_name() const;
};

/// Checks each second-order condition (threshold kappa*w^2) on a
/// breakpoint-aware test set and compares against the exact decision.
EquivalenceReport verify_theorem_equivalences(const PiecewiseQuad1D& f, const Rational& kappa = 0);

/// Exact test pairs used by verify_theorem_equivalences.
std::vector<std::pair<Rational, Rational>> exact_test_pairs(const PiecewiseQuad1D& f);

}  // namespace varkit
