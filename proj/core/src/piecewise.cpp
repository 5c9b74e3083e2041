#include "varkit/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varkit/errors.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(const Rational& a, const Rational& b) {
  const double da = to_double(a), db = to_double(b);
  return std::abs(da - db) <= 1e-12 * (1.0 + std::max(std::abs(da), std::abs(db)));
}

// Exact square root of a nonnegative rational when it has one.
std::optional<Rational> exact_sqrt(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  const cpp_int rn = boost::multiprecision::sqrt(num);
  const cpp_int rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn) / Rational(rd);
}

}  // namespace

PiecewiseQuad1D::PiecewiseQuad1D(std::vector<Rational> breakpoints, std::vector<QuadPiece> pieces,
                                 Domain1D domain, Continuity continuity)
    : breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      domain_(std::move(domain)),
      continuity_(continuity) {
  if (pieces_.size() != breakpoints_.size() + 1)
    throw Error(Errc::InvalidArgument, "piecewise quadratic needs one more piece than breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw Error(Errc::InvalidArgument, "breakpoints must be strictly increasing");
  }
  if (domain_.lo && domain_.hi && !(*domain_.lo < *domain_.hi))
    throw Error(Errc::InvalidArgument, "domain must satisfy lo < hi");
  if (!breakpoints_.empty()) {
    if (domain_.lo && !(*domain_.lo < breakpoints_.front()))
      throw Error(Errc::InvalidArgument, "breakpoints must lie strictly inside the domain");
    if (domain_.hi && !(breakpoints_.back() < *domain_.hi))
      throw Error(Errc::InvalidArgument, "breakpoints must lie strictly inside the domain");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const Rational& b = breakpoints_[i];
    const Rational left = pieces_[i].value(b), right = pieces_[i + 1].value(b);
    const bool ok = continuity_ == Continuity::Exact ? left == right : nearly_equal(left, right);
    if (!ok)
      throw Error(Errc::InvalidArgument, "pieces disagree at breakpoint " + to_string(b));
  }
  for (const auto& b : breakpoints_) breakpoints_d_.push_back(to_double(b));
  for (const auto& p : pieces_) {
    a_d_.push_back(to_double(p.a));
    c_d_.push_back(to_double(p.c));
    d_d_.push_back(to_double(p.d));
  }
  lo_d_ = domain_.lo ? to_double(*domain_.lo) : -kInf;
  hi_d_ = domain_.hi ? to_double(*domain_.hi) : kInf;
}

PiecewiseQuad1D PiecewiseQuad1D::quadratic(const Rational& a, const Rational& c, const Rational& d,
                                           Domain1D domain) {
  return PiecewiseQuad1D({}, {QuadPiece{a, c, d}}, std::move(domain));
}

bool PiecewiseQuad1D::in_domain(const Rational& x) const {
  if (domain_.lo && x < *domain_.lo) return false;
  if (domain_.hi && x > *domain_.hi) return false;
  return true;
}

std::size_t PiecewiseQuad1D::piece_index(const Rational& x) const {
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

std::optional<Rational> PiecewiseQuad1D::value_exact(const Rational& x) const {
  if (!in_domain(x)) return std::nullopt;
  return pieces_[piece_index(x)].value(x);
}

ExtReal PiecewiseQuad1D::value(double x) const {
  if (!(x >= lo_d_ && x <= hi_d_)) return ExtReal::infinity();
  const auto it = std::lower_bound(breakpoints_d_.begin(), breakpoints_d_.end(), x);
  const auto i = static_cast<std::size_t>(it - breakpoints_d_.begin());
  return ExtReal((a_d_[i] * x + c_d_[i]) * x + d_d_[i]);
}

LocalData PiecewiseQuad1D::local(const Rational& x) const {
  if (!in_domain(x)) throw Error(Errc::OutOfDomain, "point " + to_string(x) + " is outside dom f");
  LocalData out;
  out.x = x;
  out.at_lower_end = domain_.lo && x == *domain_.lo;
  out.at_upper_end = domain_.hi && x == *domain_.hi;
  const std::size_t i = piece_index(x);
  std::size_t left = i, right = i;
  if (i < breakpoints_.size() && breakpoints_[i] == x) {
    out.at_breakpoint = true;
    right = i + 1;
  }
  out.has_left = !out.at_lower_end;
  out.has_right = !out.at_upper_end;
  out.value = pieces_[left].value(x);
  out.d_left = pieces_[left].slope(x);
  out.d_right = pieces_[right].slope(x);
  out.a_left = pieces_[left].a;
  out.a_right = pieces_[right].a;
  return out;
}

PiecewiseQuad1D PiecewiseQuad1D::tilted(const Rational& kappa) const {
  return plus_quadratic(-kappa / 2, 0, 0);
}

PiecewiseQuad1D PiecewiseQuad1D::plus_quadratic(const Rational& alpha, const Rational& beta,
                                                const Rational& gamma) const {
  std::vector<QuadPiece> pieces = pieces_;
  for (auto& p : pieces) {
    p.a += alpha;
    p.c += beta;
    p.d += gamma;
  }
  return PiecewiseQuad1D(breakpoints_, std::move(pieces), domain_, continuity_);
}

std::vector<Rational> PiecewiseQuad1D::critical_points() const {
  std::vector<Rational> out;
  if (domain_.lo) out.push_back(*domain_.lo);
  out.insert(out.end(), breakpoints_.begin(), breakpoints_.end());
  if (domain_.hi) out.push_back(*domain_.hi);
  return out;
}

std::string PiecewiseQuad1D::describe() const {
  std::string out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const std::string lo = i == 0 ? (domain_.lo ? to_string(*domain_.lo) : "-inf") : to_string(breakpoints_[i - 1]);
    const std::string hi =
        i == breakpoints_.size() ? (domain_.hi ? to_string(*domain_.hi) : "+inf") : to_string(breakpoints_[i]);
    if (i) out += " | ";
    out += "[" + lo + ", " + hi + "]: " + to_string(pieces_[i].a) + "x^2 + " + to_string(pieces_[i].c) + "x + " +
           to_string(pieces_[i].d);
  }
  return out;
}

PiecewiseQuad1D upper_envelope(const std::vector<QuadPiece>& quadratics) {
  if (quadratics.empty()) throw Error(Errc::InvalidArgument, "upper envelope of no quadratics");
  std::vector<QuadPiece> qs;
  for (const auto& q : quadratics)
    if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);

  bool approximate = false;
  std::vector<Rational> cuts;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      const Rational da = qs[i].a - qs[j].a, db = qs[i].c - qs[j].c, dc = qs[i].d - qs[j].d;
      if (da == 0) {
        if (db != 0) cuts.push_back(-dc / db);
        continue;
      }
      const Rational disc = db * db - 4 * da * dc;
      if (disc < 0) continue;
      if (auto r = exact_sqrt(disc)) {
        cuts.push_back((-db - *r) / (2 * da));
        cuts.push_back((-db + *r) / (2 * da));
      } else {
        approximate = true;
        const double sd = std::sqrt(to_double(disc));
        const double a2 = 2.0 * to_double(da), bd = to_double(db);
        // Numerically stable pair of roots.
        const double qv = -0.5 * (bd + std::copysign(sd, bd));
        const double r1 = qv / (0.5 * a2);
        const double r2 = to_double(dc) / qv;
        cuts.push_back(rational_from_double_exact(r1));
        cuts.push_back(rational_from_double_exact(r2));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto argmax_at = [&](const Rational& x) {
    std::size_t best = 0;
    Rational best_v = qs[0].value(x);
    for (std::size_t k = 1; k < qs.size(); ++k) {
      const Rational v = qs[k].value(x);
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    return best;
  };

  std::vector<std::size_t> owner;
  if (cuts.empty()) {
    owner.push_back(argmax_at(0));
  } else {
    owner.push_back(argmax_at(cuts.front() - 1));
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) owner.push_back(argmax_at((cuts[k] + cuts[k + 1]) / 2));
    owner.push_back(argmax_at(cuts.back() + 1));
  }
  std::vector<Rational> breakpoints;
  std::vector<QuadPiece> pieces{qs[owner[0]]};
  for (std::size_t k = 1; k < owner.size(); ++k) {
    if (owner[k] == owner[k - 1]) continue;
    breakpoints.push_back(cuts[k - 1]);
    pieces.push_back(qs[owner[k]]);
  }
  return PiecewiseQuad1D(std::move(breakpoints), std::move(pieces), {},
                         approximate ? PiecewiseQuad1D::Continuity::Approximate
                                     : PiecewiseQuad1D::Continuity::Exact);
}

}  // namespace varkit

namespace varkit {

double PiecewiseQuad1D::prox(double lambda, double x) const {
  if (!(lambda > 0)) throw Error(Errc::InvalidArgument, "prox parameter must be positive");
  double best_y = 0.0, best_obj = kInf;
  bool have = false;
  auto consider = [&](std::size_t i, double y) {
    const double fy = (a_d_[i] * y + c_d_[i]) * y + d_d_[i];
    const double obj = fy + (y - x) * (y - x) / (2.0 * lambda);
    if (!have || obj < best_obj || (obj == best_obj && y < best_y)) {
      best_obj = obj;
      best_y = y;
      have = true;
    }
  };
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double l = i == 0 ? lo_d_ : breakpoints_d_[i - 1];
    const double r = i == breakpoints_d_.size() ? hi_d_ : breakpoints_d_[i];
    const double A = a_d_[i] + 1.0 / (2.0 * lambda);
    const double B = c_d_[i] - x / lambda;
    if (A > 0) {
      consider(i, std::clamp(-B / (2.0 * A), l, r));
    } else if ((A < 0 && (std::isinf(l) || std::isinf(r))) || (A == 0 && ((B > 0 && std::isinf(l)) || (B < 0 && std::isinf(r))))) {
      throw Error(Errc::ProxDiverged, "prox objective unbounded below for lambda = " + format_double(lambda));
    }
    if (std::isfinite(l)) consider(i, l);
    if (std::isfinite(r)) consider(i, r);
  }
  return best_y;
}

PiecewiseQuad1D sum(const PiecewiseQuad1D& f, const PiecewiseQuad1D& g) {
  Domain1D dom;
  dom.lo = f.domain().lo;
  if (g.domain().lo && (!dom.lo || *g.domain().lo > *dom.lo)) dom.lo = g.domain().lo;
  dom.hi = f.domain().hi;
  if (g.domain().hi && (!dom.hi || *g.domain().hi < *dom.hi)) dom.hi = g.domain().hi;
  if (dom.lo && dom.hi && !(*dom.lo < *dom.hi))
    throw Error(Errc::InvalidArgument, "sum of piecewise quadratics with disjoint domains");
  std::vector<Rational> bp;
  for (const auto* h : {&f, &g})
    for (const auto& b : h->breakpoints())
      if ((!dom.lo || b > *dom.lo) && (!dom.hi || b < *dom.hi)) bp.push_back(b);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<QuadPiece> pieces;
  for (std::size_t i = 0; i <= bp.size(); ++i) {
    const std::optional<Rational> l = i == 0 ? dom.lo : std::optional<Rational>(bp[i - 1]);
    const std::optional<Rational> r = i == bp.size() ? dom.hi : std::optional<Rational>(bp[i]);
    Rational t = l && r ? (*l + *r) / 2 : l ? *l + 1 : r ? *r - 1 : Rational(0);
    const QuadPiece& p = f.pieces()[f.piece_index(t)];
    const QuadPiece& q = g.pieces()[g.piece_index(t)];
    pieces.push_back({p.a + q.a, p.c + q.c, p.d + q.d});
  }
  const bool exact = f.continuity() == PiecewiseQuad1D::Continuity::Exact &&
                     g.continuity() == PiecewiseQuad1D::Continuity::Exact;
  return PiecewiseQuad1D(std::move(bp), std::move(pieces), std::move(dom),
                         exact ? PiecewiseQuad1D::Continuity::Exact : PiecewiseQuad1D::Continuity::Approximate);
}

}  // namespace varkit
