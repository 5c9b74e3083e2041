#include "varkit/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "varkit/errors.hpp"
#include "varkit/exact_calculus.hpp"

namespace varkit {
namespace {

// Double -> rational, snapped onto a breakpoint or domain end when x is the
// double nearest to one.
Rational snap(const PiecewiseQuad1D& f, double x) {
  const Rational exact = rational_from_double_exact(x);
  const Rational dec = rational_from_double(x);
  for (const auto& c : f.critical_points())
    if (c == exact || c == dec) return c;
  return exact;
}

std::vector<std::pair<double, double>> intervals_1d(const SubdiffSet& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : s.pieces()) {
    if (p.kind == SubdiffSet::Piece::Kind::Box) {
      out.emplace_back(p.lo[0], p.hi[0]);
    } else {
      double lo = p.vertices.front()[0], hi = lo;
      for (const auto& v : p.vertices) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

SubdiffSet minkowski(const SubdiffSet& a, const SubdiffSet& b) {
  if (a.is_singleton()) return b.translated(a.project(Point::Zero(a.dim())));
  if (b.is_singleton()) return a.translated(b.project(Point::Zero(b.dim())));
  if (a.dim() != 1) throw Error(Errc::NoAnalyticForm, "sum rule needs a singleton side in dimension > 1");
  SubdiffSet out(1);
  for (const auto& [alo, ahi] : intervals_1d(a))
    for (const auto& [blo, bhi] : intervals_1d(b)) out.unite(SubdiffSet::interval(alo + blo, ahi + bhi));
  return out;
}

}  // namespace

std::optional<double> Truth::weak_modulus() const {
  if (!weakly_convex()) return std::nullopt;
  return sharp_s >= 0.0 ? 0.0 : -sharp_s;
}

std::optional<double> Truth::strong_modulus() const {
  if (sharp_s > 0.0) return sharp_s;
  return std::nullopt;
}

std::string Truth::describe() const {
  std::string out;
  if (!weakly_convex()) {
    out = "not weakly convex";
  } else if (sharp_s > 0) {
    out = "strongly convex, kappa = " + format_double(sharp_s);
  } else if (sharp_s == 0) {
    out = "convex, rho = 0";
  } else {
    out = "weakly convex, rho = " + format_double(-sharp_s);
  }
  if (!exact) out += " (lower bound)";
  return out;
}

FunctionOracle::FunctionOracle(std::string name, int dimension, ValueFn value)
    : name_(std::move(name)), dim_(dimension), value_(std::move(value)) {
  if (dim_ < 1) throw Error(Errc::InvalidArgument, "oracle dimension must be at least 1");
}

FunctionOracle& FunctionOracle::with_subdiff(SubdiffFn fn) {
  subdiff_ = std::move(fn);
  return *this;
}

FunctionOracle& FunctionOracle::with_prox(ProxFn fn) {
  prox_ = std::move(fn);
  return *this;
}

FunctionOracle& FunctionOracle::with_truth(Truth t) {
  truth_ = t;
  return *this;
}

FunctionOracle& FunctionOracle::with_hints(std::vector<Point> hints) {
  hints_ = std::move(hints);
  return *this;
}

FunctionOracle& FunctionOracle::with_piecewise(PiecewiseQuad1D f) {
  piecewise_ = std::make_shared<const PiecewiseQuad1D>(std::move(f));
  return *this;
}

FunctionOracle& FunctionOracle::with_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

SubdiffSet FunctionOracle::subdiff(const Point& x) const {
  if (!subdiff_) throw Error(Errc::NoAnalyticForm, name_ + " has no analytic subdifferential");
  return subdiff_(x);
}

Point FunctionOracle::prox(double lambda, const Point& x) const {
  if (!prox_) throw Error(Errc::CapabilityMissing, name_ + " has no prox");
  return prox_(lambda, x);
}

ExtReal eval_checked(const FunctionOracle& oracle, const Point& x) {
  if (x.size() != oracle.dimension())
    throw Error(Errc::DimensionMismatch, "point of dimension " + std::to_string(x.size()) + " for oracle " +
                                             oracle.name() + " of dimension " + std::to_string(oracle.dimension()));
  return oracle.value(x);
}

Truth truth_from_piecewise(const PiecewiseQuad1D& f) {
  const ConvexityDecision d = convexity_decide_exact(f);
  Truth t;
  t.sharp_s = d.weakly_convex() ? to_double(min_curvature(f)) : -std::numeric_limits<double>::infinity();
  return t;
}

FunctionOracle oracle_from_piecewise(const std::string& name, const PiecewiseQuad1D& f) {
  auto shared = std::make_shared<const PiecewiseQuad1D>(f);
  FunctionOracle o(name, 1, [shared](const Point& x) { return shared->value(x[0]); });
  o.with_subdiff([shared](const Point& x) {
     const Rational q = snap(*shared, x[0]);
     if (!shared->in_domain(q)) return SubdiffSet(1);
     return subdifferential(*shared, q).to_subdiff_set();
   })
      .with_prox([shared](double lambda, const Point& x) { return scalar_point(shared->prox(lambda, x[0])); })
      .with_truth(truth_from_piecewise(f))
      .with_piecewise(f);
  std::vector<Point> hints;
  for (const auto& c : f.critical_points()) hints.push_back(scalar_point(to_double(c)));
  o.with_hints(std::move(hints));
  return o;
}

FunctionOracle add_quadratic(const FunctionOracle& base, double sigma, const std::string& name) {
  if (base.piecewise()) {
    FunctionOracle o =
        oracle_from_piecewise(name, base.piecewise()->plus_quadratic(rational_from_double(sigma) / 2, 0, 0));
    if (base.truth() && !base.truth()->exact) {
      Truth t = *base.truth();
      t.sharp_s += sigma;
      o.with_truth(t);
    }
    return o;
  }
  const auto b = std::make_shared<const FunctionOracle>(base);
  FunctionOracle o(name, base.dimension(),
                   [b, sigma](const Point& x) { return b->value(x) + 0.5 * sigma * x.squaredNorm(); });
  if (base.has_subdiff())
    o.with_subdiff([b, sigma](const Point& x) { return b->subdiff(x).translated(sigma * x); });
  if (base.has_prox()) {
    o.with_prox([b, sigma](double lambda, const Point& x) {
      const double scale = 1.0 + lambda * sigma;
      if (!(scale > 0))
        throw Error(Errc::ProxDiverged, "prox objective unbounded below for lambda = " + format_double(lambda));
      return b->prox(lambda / scale, x / scale);
    });
  }
  if (base.truth()) {
    Truth t = *base.truth();
    t.sharp_s += sigma;
    o.with_truth(t);
  }
  o.with_hints(base.hints());
  return o;
}

FunctionOracle sum_oracle(const FunctionOracle& f, const FunctionOracle& g, const std::string& name) {
  if (f.dimension() != g.dimension())
    throw Error(Errc::DimensionMismatch, "sum of oracles with different dimensions");
  if (f.piecewise() && g.piecewise()) {
    FunctionOracle o = oracle_from_piecewise(name, sum(*f.piecewise(), *g.piecewise()));
    return o;
  }
  const auto a = std::make_shared<const FunctionOracle>(f);
  const auto b = std::make_shared<const FunctionOracle>(g);
  FunctionOracle o(name, f.dimension(), [a, b](const Point& x) { return a->value(x) + b->value(x); });
  if (f.has_subdiff() && g.has_subdiff())
    o.with_subdiff([a, b](const Point& x) { return minkowski(a->subdiff(x), b->subdiff(x)); });
  if (f.truth() && g.truth()) {
    Truth t;
    t.sharp_s = f.truth()->sharp_s + g.truth()->sharp_s;
    t.exact = false;
    if (std::isnan(t.sharp_s)) t.sharp_s = -std::numeric_limits<double>::infinity();
    o.with_truth(t);
  }
  std::vector<Point> hints = f.hints();
  hints.insert(hints.end(), g.hints().begin(), g.hints().end());
  o.with_hints(std::move(hints));
  return o;
}

}  // namespace varkit
