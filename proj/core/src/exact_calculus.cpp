#include "varkit/exact_calculus.hpp"

#include <algorithm>
#include <limits>

#include "varkit/errors.hpp"

namespace varkit {
namespace {

bool lo_less(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b.has_value();
  if (!b) return false;
  return *a < *b;
}

// a <= b for upper ends (missing = +inf) against lower ends (missing = -inf).
bool reaches(const std::optional<Rational>& hi, const std::optional<Rational>& lo) {
  if (!hi || !lo) return true;
  return *lo <= *hi;
}

bool in_range(const Rational& t, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  return (!lo || *lo <= t) && (!hi || t <= *hi);
}

std::string end_str(const std::optional<Rational>& q, const char* inf) { return q ? to_string(*q) : inf; }

const std::optional<Rational>& max_hi(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return a;
  if (!b) return b;
  return *a < *b ? b : a;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExactSet1D

ExactSet1D ExactSet1D::interval(std::optional<Rational> lo, std::optional<Rational> hi) {
  if (lo && hi && *hi < *lo) throw Error(Errc::InvalidArgument, "interval with lo > hi");
  ExactSet1D s;
  s.parts_.push_back({std::move(lo), std::move(hi)});
  return s;
}

ExactSet1D& ExactSet1D::unite(const ExactSet1D& other) {
  parts_.insert(parts_.end(), other.parts_.begin(), other.parts_.end());
  normalize();
  return *this;
}

void ExactSet1D::normalize() {
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval1D& a, const Interval1D& b) { return lo_less(a.lo, b.lo); });
  std::vector<Interval1D> merged;
  for (auto& p : parts_) {
    if (!merged.empty() && reaches(merged.back().hi, p.lo)) {
      merged.back().hi = max_hi(merged.back().hi, p.hi);
    } else {
      merged.push_back(std::move(p));
    }
  }
  parts_ = std::move(merged);
}

bool ExactSet1D::is_all() const { return parts_.size() == 1 && !parts_[0].lo && !parts_[0].hi; }

bool ExactSet1D::contains(const Rational& q) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval1D& p) { return in_range(q, p.lo, p.hi); });
}

ExactSet1D ExactSet1D::translated(const Rational& d) const {
  ExactSet1D out = *this;
  for (auto& p : out.parts_) {
    if (p.lo) *p.lo += d;
    if (p.hi) *p.hi += d;
  }
  return out;
}

bool ExactSet1D::pairing_at_least(const Rational& w, const Rational& kappa) const {
  if (w == 0) return true;
  const Rational bound = kappa * w;
  for (const auto& p : parts_) {
    if (w > 0 && !(p.lo && *p.lo >= bound)) return false;
    if (w < 0 && !(p.hi && *p.hi <= bound)) return false;
  }
  return true;
}

std::vector<Rational> ExactSet1D::anchors() const {
  std::vector<Rational> out;
  for (const auto& p : parts_) {
    if (p.lo) out.push_back(*p.lo);
    if (p.hi && (!p.lo || *p.hi != *p.lo)) out.push_back(*p.hi);
    if (p.lo && p.hi && *p.lo != *p.hi) out.push_back((*p.lo + *p.hi) / 2);
    if (!p.lo && p.hi) out.push_back(*p.hi - 1);
    if (p.lo && !p.hi) out.push_back(*p.lo + 1);
    if (!p.lo && !p.hi) out.push_back(0);
  }
  return out;
}

SubdiffSet ExactSet1D::to_subdiff_set() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  SubdiffSet out(1);
  for (const auto& p : parts_)
    out.unite(SubdiffSet::interval(p.lo ? to_double(*p.lo) : -inf, p.hi ? to_double(*p.hi) : inf));
  return out;
}

std::string ExactSet1D::describe() const {
  if (parts_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += " U ";
    const auto& p = parts_[i];
    if (p.lo && p.hi && *p.lo == *p.hi) {
      out += "{" + to_string(*p.lo) + "}";
    } else {
      out += "[" + end_str(p.lo, "-inf") + ", " + end_str(p.hi, "+inf") + "]";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ExactSecond

bool ExactSecond::at_least(const Rational& t) const {
  switch (kind) {
    case SecondOrderValue::Kind::PlusInf:
      return true;
    case SecondOrderValue::Kind::MinusInf:
      return false;
    default:
      return value >= t;
  }
}

SecondOrderValue ExactSecond::to_value() const {
  switch (kind) {
    case SecondOrderValue::Kind::PlusInf:
      return SecondOrderValue::plus_inf();
    case SecondOrderValue::Kind::MinusInf:
      return SecondOrderValue::minus_inf();
    default:
      return SecondOrderValue(to_double(value));
  }
}

std::string ExactSecond::to_string() const {
  switch (kind) {
    case SecondOrderValue::Kind::PlusInf:
      return "+inf";
    case SecondOrderValue::Kind::MinusInf:
      return "-inf";
    default:
      return varkit::to_string(value);
  }
}

// ---------------------------------------------------------------------------
// SubdiffGraph1D

bool SubdiffGraph1D::contains(const Vec2& p) const {
  for (const auto& a : arcs_)
    if (in_range(p.x, a.x_lo, a.x_hi) && p.y == a.slope * p.x + a.intercept) return true;
  for (const auto& s : verticals_)
    if (p.x == s.x && in_range(p.y, s.v_lo, s.v_hi)) return true;
  return false;
}

ExactSet1D SubdiffGraph1D::fiber(const Rational& x) const {
  ExactSet1D out;
  for (const auto& a : arcs_)
    if (in_range(x, a.x_lo, a.x_hi)) out.unite(ExactSet1D::point(a.slope * x + a.intercept));
  for (const auto& s : verticals_)
    if (s.x == x) out.unite(ExactSet1D::interval(s.v_lo, s.v_hi));
  return out;
}

std::string SubdiffGraph1D::describe() const {
  std::string out;
  for (const auto& a : arcs_) {
    if (!out.empty()) out += "; ";
    out += "arc x in [" + end_str(a.x_lo, "-inf") + ", " + end_str(a.x_hi, "+inf") + "], v = " +
           to_string(a.slope) + "x + " + to_string(a.intercept);
  }
  for (const auto& s : verticals_) {
    if (!out.empty()) out += "; ";
    out += "vertical x = " + to_string(s.x) + ", v in [" + end_str(s.v_lo, "-inf") + ", " +
           end_str(s.v_hi, "+inf") + "]";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subdifferential, graph, cones

ExactSet1D subdifferential(const PiecewiseQuad1D& f, const Rational& x) {
  const LocalData L = f.local(x);
  if (L.at_lower_end) return ExactSet1D::interval(std::nullopt, L.d_right);
  if (L.at_upper_end) return ExactSet1D::interval(L.d_left, std::nullopt);
  if (L.d_left <= L.d_right) return ExactSet1D::interval(L.d_left, L.d_right);
  return ExactSet1D::point(L.d_right).unite(ExactSet1D::point(L.d_left));
}

SubdiffGraph1D graph_subdiff(const PiecewiseQuad1D& f) {
  SubdiffGraph1D g;
  const auto& bp = f.breakpoints();
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    SubdiffGraph1D::Arc arc;
    arc.x_lo = i == 0 ? f.domain().lo : std::optional<Rational>(bp[i - 1]);
    arc.x_hi = i == bp.size() ? f.domain().hi : std::optional<Rational>(bp[i]);
    arc.slope = 2 * pieces[i].a;
    arc.intercept = pieces[i].c;
    g.add_arc(std::move(arc));
  }
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const Rational dl = pieces[i].slope(bp[i]), dr = pieces[i + 1].slope(bp[i]);
    if (dl < dr) g.add_vertical({bp[i], dl, dr});
  }
  if (const auto& lo = f.domain().lo) g.add_vertical({*lo, std::nullopt, pieces.front().slope(*lo)});
  if (const auto& hi = f.domain().hi) g.add_vertical({*hi, pieces.back().slope(*hi), std::nullopt});
  return g;
}

PlaneCones cones_at(const SubdiffGraph1D& g, const Vec2& p) {
  PlaneCones out;
  std::vector<Vec2> branch_dirs;
  std::vector<Vec2> component_dirs;
  bool found = false;

  auto add_branch = [&](const Vec2& dir, const std::optional<Rational>& lo, const std::optional<Rational>& hi,
                        const Rational& t) {
    found = true;
    const bool degenerate = lo && hi && *lo == *hi;
    if (degenerate) {
      out.tangent.add(ConvexCone2D::zero());
      return;
    }
    component_dirs.push_back(dir);
    const bool at_lo = lo && *lo == t;
    const bool at_hi = hi && *hi == t;
    if (at_lo) {
      out.tangent.add(ConvexCone2D::ray(dir));
      branch_dirs.push_back(dir);
    } else if (at_hi) {
      out.tangent.add(ConvexCone2D::ray(-dir));
      branch_dirs.push_back(-dir);
    } else {
      out.tangent.add(ConvexCone2D::line(dir));
      branch_dirs.push_back(dir);
      branch_dirs.push_back(-dir);
    }
  };

  for (const auto& a : g.arcs())
    if (in_range(p.x, a.x_lo, a.x_hi) && p.y == a.slope * p.x + a.intercept)
      add_branch({1, a.slope}, a.x_lo, a.x_hi, p.x);
  for (const auto& s : g.verticals())
    if (p.x == s.x && in_range(p.y, s.v_lo, s.v_hi)) add_branch({0, 1}, s.v_lo, s.v_hi, p.y);
  if (!found)
    throw Error(Errc::PointNotOnGraph, "(" + to_string(p.x) + ", " + to_string(p.y) + ") is not on gph");

  out.regular_normal = out.tangent.polar();
  ConvexCone2D direct = ConvexCone2D::plane();
  for (const auto& d : branch_dirs) direct = direct.intersect(ConvexCone2D::half_plane(-d));
  out.regular_normal_direct = direct;
  out.limiting_normal.add(out.regular_normal);
  for (const auto& d : component_dirs) out.limiting_normal.add(ConvexCone2D::line(perp(d)));
  return out;
}

PlaneCones cones_at(const PiecewiseQuad1D& f, const Vec2& p) { return cones_at(graph_subdiff(f), p); }

ExactSecond d2_exact(const PiecewiseQuad1D& f, const Rational& x, const Rational& v, const Rational& w) {
  const LocalData L = f.local(x);
  if (!subdifferential(f, x).contains(v))
    throw Error(Errc::NotASubgradient, to_string(v) + " is not a subgradient at " + to_string(x));
  if (w == 0) {
    // v is then a limiting but not a regular subgradient.
    if (L.at_breakpoint && L.d_left > L.d_right) return ExactSecond::minus_inf();
    return {SecondOrderValue::Kind::Finite, 0};
  }
  if (w > 0) {
    if (!L.has_right || v < L.d_right) return ExactSecond::plus_inf();
    if (v == L.d_right) return {SecondOrderValue::Kind::Finite, 2 * L.a_right * w * w};
    return ExactSecond::minus_inf();
  }
  if (!L.has_left || v > L.d_left) return ExactSecond::plus_inf();
  if (v == L.d_left) return {SecondOrderValue::Kind::Finite, 2 * L.a_left * w * w};
  return ExactSecond::minus_inf();
}

ExactSet1D slice(const Cone2D& c, const Vec2& p0, const Vec2& p1) {
  ExactSet1D out;
  for (const auto& part : c.parts()) {
    std::optional<Rational> lo, hi;
    bool feasible = true;
    for (const auto& a : part.constraints()) {
      const Rational alpha = dot(a, p1), beta = dot(a, p0);
      if (alpha == 0) {
        if (beta > 0) feasible = false;
        continue;
      }
      const Rational t = -beta / alpha;
      if (alpha > 0) {
        if (!hi || t < *hi) hi = t;
      } else {
        if (!lo || t > *lo) lo = t;
      }
    }
    if (lo && hi && *lo > *hi) feasible = false;
    if (feasible) out.unite(ExactSet1D::interval(lo, hi));
  }
  return out;
}

SecondOrderSets second_order_maps_exact(const SubdiffGraph1D& g, const Rational& x, const Rational& v,
                                        const Rational& w) {
  const PlaneCones cones = cones_at(g, {x, v});
  SecondOrderSets out;
  out.graphical = slice(cones.tangent, {w, 0}, {0, 1});
  out.combined = slice(Cone2D(cones.regular_normal), {0, -w}, {1, 0});
  out.limiting = slice(cones.limiting_normal, {0, -w}, {1, 0});
  return out;
}

SecondOrderSets second_order_maps_exact(const PiecewiseQuad1D& f, const Rational& x, const Rational& v,
                                        const Rational& w) {
  return second_order_maps_exact(graph_subdiff(f), x, v, w);
}

// ---------------------------------------------------------------------------
// Decisions

Rational min_curvature(const PiecewiseQuad1D& f) {
  Rational m = 2 * f.pieces().front().a;
  for (const auto& p : f.pieces()) m = std::min(m, Rational(2 * p.a));
  return m;
}

std::string ConvexityDecision::describe() const {
  switch (verdict) {
    case Verdict::NotWeaklyConvex:
      return "not weakly convex" + (concave_kink ? " (concave kink at " + to_string(*concave_kink) + ")" : "");
    case Verdict::WeaklyConvex:
      return "weakly convex (rho* = " + to_string(rho) + ")";
    case Verdict::Convex:
      return "convex";
    case Verdict::StronglyConvex:
      return "strongly convex (kappa* = " + to_string(kappa) + ")";
  }
  return {};
}

ConvexityDecision convexity_decide_exact(const PiecewiseQuad1D& f) {
  ConvexityDecision d;
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (f.pieces()[i].slope(bp[i]) > f.pieces()[i + 1].slope(bp[i])) {
      d.verdict = ConvexityDecision::Verdict::NotWeaklyConvex;
      d.concave_kink = bp[i];
      return d;
    }
  }
  const Rational m = min_curvature(f);
  if (m < 0) {
    d.verdict = ConvexityDecision::Verdict::WeaklyConvex;
    d.rho = -m;
  } else if (m == 0) {
    d.verdict = ConvexityDecision::Verdict::Convex;
  } else {
    d.verdict = ConvexityDecision::Verdict::StronglyConvex;
    d.kappa = m;
  }
  return d;
}

std::vector<std::pair<Rational, Rational>> exact_test_pairs(const PiecewiseQuad1D& f) {
  std::vector<Rational> xs = f.critical_points();
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i <= bp.size(); ++i) {
    const std::optional<Rational> l = i == 0 ? f.domain().lo : std::optional<Rational>(bp[i - 1]);
    const std::optional<Rational> r = i == bp.size() ? f.domain().hi : std::optional<Rational>(bp[i]);
    if (l && r) {
      xs.push_back((*l + *r) / 2);
    } else if (l) {
      xs.push_back(*l + 1);
    } else if (r) {
      xs.push_back(*r - 1);
    } else {
      xs.push_back(0);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& x : xs)
    for (const auto& v : subdifferential(f, x).anchors()) out.emplace_back(x, v);
  return out;
}

std::string EquivalenceReport::status_name() const {
  switch (status) {
    case Status::Confirmed:
      return "confirmed";
    case Status::GateFailed:
      return "gate_failed";
    case Status::Counterexample:
      return "counterexample";
  }
  return {};
}

namespace {

// Subdifferential of w -> d2(w)/2 where d2(w) = qR w^2 (w > 0), qL w^2 (w < 0)
// and +inf where a side is unavailable.
std::optional<ExactSet1D> half_d2_subgradient(const ExactSecond& right, const ExactSecond& left, const Rational& w) {
  if (right.kind == SecondOrderValue::Kind::MinusInf || left.kind == SecondOrderValue::Kind::MinusInf)
    return std::nullopt;
  if (w > 0) return right.is_finite() ? ExactSet1D::point(right.value * w) : ExactSet1D{};
  if (w < 0) return left.is_finite() ? ExactSet1D::point(left.value * w) : ExactSet1D{};
  if (right.is_finite() && left.is_finite()) return ExactSet1D::point(0);
  if (right.is_finite()) return ExactSet1D::interval(std::nullopt, Rational(0));
  if (left.is_finite()) return ExactSet1D::interval(Rational(0), std::nullopt);
  return ExactSet1D::all();
}

}  // namespace

EquivalenceReport verify_theorem_equivalences(const PiecewiseQuad1D& f, const Rational& kappa) {
  EquivalenceReport rep;
  rep.decision = convexity_decide_exact(f);
  rep.kappa = kappa;
  const SubdiffGraph1D g = graph_subdiff(f);
  const Rational ws[] = {-1, 0, 1};

  auto note = [&](bool& flag, bool ok, const std::string& what, const Rational& x, const Rational& v,
                  const Rational& w) {
    if (ok || !flag) {
      if (!ok) flag = false;
      return;
    }
    flag = false;
    rep.notes.push_back(what + " fails at (x, v, w) = (" + to_string(x) + ", " + to_string(v) + ", " +
                        to_string(w) + ")");
  };

  for (const auto& [x, v] : exact_test_pairs(f)) {
    ++rep.pairs_checked;
    const ExactSecond right = d2_exact(f, x, v, 1), left = d2_exact(f, x, v, -1);
    for (const auto& w : ws) {
      const SecondOrderSets s = second_order_maps_exact(g, x, v, w);
      const ExactSecond d2 = d2_exact(f, x, v, w);
      note(rep.graphical_holds, s.graphical.pairing_at_least(w, kappa), "graphical condition", x, v, w);
      note(rep.d2_holds, d2.at_least(kappa * w * w), "second subderivative condition", x, v, w);
      note(rep.combined_holds, s.combined.pairing_at_least(w, kappa), "combined second-order condition", x, v, w);
      note(rep.limiting_holds, s.limiting.pairing_at_least(w, kappa), "limiting second-order condition", x, v, w);
      if (rep.decision.weakly_convex()) {
        const auto expected = half_d2_subgradient(right, left, w);
        note(rep.epi_cross_check, expected && *expected == s.graphical, "graphical = subdifferential of d2/2", x,
             v, w);
      }
    }
  }

  if (!rep.decision.weakly_convex()) {
    rep.status = EquivalenceReport::Status::GateFailed;
    return rep;
  }
  const bool truth = rep.decision.convex() && min_curvature(f) >= kappa;
  const bool agree = rep.graphical_holds == truth && rep.d2_holds == truth && rep.combined_holds == truth &&
                     rep.limiting_holds == truth && rep.epi_cross_check;
  rep.status = agree ? EquivalenceReport::Status::Confirmed : EquivalenceReport::Status::Counterexample;
  return rep;
}

}  // namespace varkit
