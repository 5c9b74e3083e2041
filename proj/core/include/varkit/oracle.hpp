#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "varkit/ext_real.hpp"
#include "varkit/piecewise.hpp"
#include "varkit/subdiff_set.hpp"
#include "varkit/types.hpp"

namespace varkit {

/// Known convexity data. `sharp_s` is the largest s for which the function
/// is s-convex; -inf means not weakly convex. When `exact` is false, sharp_s
/// is only a lower bound.
struct Truth {
  double sharp_s = 0.0;
  bool exact = true;

  [[nodiscard]] bool weakly_convex() const { return sharp_s > -std::numeric_limits<double>::infinity(); }
  [[nodiscard]] bool is_convex() const { return sharp_s >= 0.0; }
  /// rho = max(0, -s); none when not weakly convex.
  [[nodiscard]] std::optional<double> weak_modulus() const;
  /// kappa = s when s > 0.
  [[nodiscard]] std::optional<double> strong_modulus() const;
  [[nodiscard]] std::string describe() const;
};

/// Extended-real-valued function exposed through capabilities. Immutable
/// after construction and safe to call from several threads.
class FunctionOracle {
 public:
  using ValueFn = std::function<ExtReal(const Point&)>;
  using SubdiffFn = std::function<SubdiffSet(const Point&)>;
  using ProxFn = std::function<Point(double, const Point&)>;

  FunctionOracle(std::string name, int dimension, ValueFn value);

  FunctionOracle& with_subdiff(SubdiffFn fn);
  FunctionOracle& with_prox(ProxFn fn);
  FunctionOracle& with_truth(Truth t);
  /// Points where the function is nonsmooth or otherwise interesting.
  FunctionOracle& with_hints(std::vector<Point> hints);
  FunctionOracle& with_piecewise(PiecewiseQuad1D f);
  FunctionOracle& with_name(std::string name);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int dimension() const noexcept { return dim_; }

  /// Unchecked evaluation.
  [[nodiscard]] ExtReal value(const Point& x) const { return value_(x); }

  [[nodiscard]] bool has_subdiff() const noexcept { return static_cast<bool>(subdiff_); }
  /// Throws NoAnalyticForm without the capability.
  [[nodiscard]] SubdiffSet subdiff(const Point& x) const;

  [[nodiscard]] bool has_prox() const noexcept { return static_cast<bool>(prox_); }
  /// Throws CapabilityMissing without the capability.
  [[nodiscard]] Point prox(double lambda, const Point& x) const;

  [[nodiscard]] const std::optional<Truth>& truth() const noexcept { return truth_; }
  [[nodiscard]] const std::vector<Point>& hints() const noexcept { return hints_; }
  [[nodiscard]] const PiecewiseQuad1D* piecewise() const noexcept { return piecewise_.get(); }

  [[nodiscard]] const ValueFn& value_fn() const noexcept { return value_; }
  [[nodiscard]] const SubdiffFn& subdiff_fn() const noexcept { return subdiff_; }
  [[nodiscard]] const ProxFn& prox_fn() const noexcept { return prox_; }

 private:
  std::string name_;
  int dim_;
  ValueFn value_;
  SubdiffFn subdiff_;
  ProxFn prox_;
  std::optional<Truth> truth_;
  std::vector<Point> hints_;
  std::shared_ptr<const PiecewiseQuad1D> piecewise_;
};

/// phi(x) after checking the dimension. Throws DimensionMismatch.
ExtReal eval_checked(const FunctionOracle& oracle, const Point& x);

/// Oracle for a 1-D piecewise quadratic with exact subdifferential and prox.
FunctionOracle oracle_from_piecewise(const std::string& name, const PiecewiseQuad1D& f);

/// Truth derived from the exact decision of a piecewise quadratic.
Truth truth_from_piecewise(const PiecewiseQuad1D& f);

/// phi + (sigma/2)|x|^2. Prox, subdifferential, truth and piecewise form carry
/// over when present.
FunctionOracle add_quadratic(const FunctionOracle& base, double sigma, const std::string& name);

/// f + g. Piecewise forms combine exactly in 1-D; otherwise the
/// subdifferential uses the sum rule where one side is a singleton.
FunctionOracle sum_oracle(const FunctionOracle& f, const FunctionOracle& g, const std::string& name);

/// Point of dimension 1.
inline Point scalar_point(double x) { return Point::Constant(1, x); }

}  // namespace varkit
