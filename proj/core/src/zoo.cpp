#include "varkit/zoo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "varkit/errors.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<std::string, std::string>>& registry() {
  static const std::vector<std::pair<std::string, std::string>> r = {
      {"quadratic", "1/2 <Qx,x> + <b,x> + c; params Q (n*n or diagonal n), b, c"},
      {"abs", "|x|"},
      {"l1", "sum_i |x_i|"},
      {"huber", "separable Huber function with threshold delta"},
      {"neg_half_square", "-1/2 |x|^2"},
      {"max_quadratics", "max_i (a_i x^2 + b_i x + c_i); param coeffs = [a1,b1,c1, a2,b2,c2, ...]"},
      {"abs_x2_minus_1", "max(x^2 - 1, 1 - x^2)"},
      {"indicator_box", "indicator of the box [lo, hi]"},
      {"unit_except_origin", "1 for x != 0, 0 at x = 0"},
      {"neg_abs", "-|x|"},
      {"spliced_parabola", "x^2 for x <= 0, -x^2 for x >= 0"},
  };
  return r;
}

std::vector<Rational> rationals(const ZooParams& p, const std::string& key) {
  std::vector<Rational> out;
  if (auto it = p.find(key); it != p.end())
    for (const auto& s : it->second) out.push_back(parse_rational(s));
  return out;
}

Rational scalar_param(const ZooParams& p, const std::string& key, const Rational& fallback) {
  const auto v = rationals(p, key);
  if (v.empty()) return fallback;
  if (v.size() != 1) throw Error(Errc::InvalidArgument, "parameter " + key + " must be a scalar");
  return v[0];
}

void require_dim1(const std::string& name, int dim) {
  if (dim != 1) throw Error(Errc::InvalidArgument, name + " is defined in dimension 1 only");
}

Point soft_threshold(const Point& x, double t) {
  Point y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = std::copysign(std::max(std::abs(x[i]) - t, 0.0), x[i]);
  return y;
}

double huber1(double t, double delta) {
  const double a = std::abs(t);
  return a <= delta ? t * t / (2.0 * delta) : a - delta / 2.0;
}

PiecewiseQuad1D abs_pw() { return PiecewiseQuad1D({0}, {{0, -1, 0}, {0, 1, 0}}); }

PiecewiseQuad1D huber_pw(const Rational& delta) {
  return PiecewiseQuad1D({-delta, delta}, {{0, -1, -delta / 2}, {1 / (2 * delta), 0, 0}, {0, 1, -delta / 2}});
}

ZooEntry from_piecewise(const std::string& name, const PiecewiseQuad1D& f, Box box) {
  FunctionOracle o = oracle_from_piecewise(name, f);
  Truth t = *o.truth();
  return ZooEntry{name, zoo_description(name), std::move(o), t, std::move(box), {}};
}

ZooEntry quadratic(const ZooParams& params, int dim) {
  const std::vector<Rational> q = rationals(params, "Q");
  const std::vector<Rational> b = rationals(params, "b");
  const Rational c = scalar_param(params, "c", 0);
  if (dim == 0) {
    if (!b.empty()) {
      dim = static_cast<int>(b.size());
    } else if (!q.empty()) {
      const auto r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(q.size()))));
      dim = r * r == static_cast<int>(q.size()) && q.size() > 1 ? r : static_cast<int>(q.size());
    } else {
      dim = 1;
    }
  }
  const auto n = static_cast<std::size_t>(dim);
  std::vector<Rational> Qr(n * n, 0);
  if (q.empty()) {
    for (std::size_t i = 0; i < n; ++i) Qr[i * n + i] = 1;
  } else if (q.size() == n * n) {
    Qr = q;
  } else if (q.size() == n) {
    for (std::size_t i = 0; i < n; ++i) Qr[i * n + i] = q[i];
  } else {
    throw Error(Errc::InvalidArgument, "Q must have n*n or n entries");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (Qr[i * n + j] != Qr[j * n + i]) throw Error(Errc::InvalidArgument, "Q must be symmetric");
  std::vector<Rational> br = b.empty() ? std::vector<Rational>(n, 0) : b;
  if (br.size() != n) throw Error(Errc::InvalidArgument, "b must have n entries");

  if (dim == 1) return from_piecewise("quadratic", PiecewiseQuad1D::quadratic(Qr[0] / 2, br[0], c), Box::cube(1, -2, 2));

  Matrix Q(dim, dim);
  Point bv(dim);
  for (std::size_t i = 0; i < n; ++i) {
    bv[static_cast<Eigen::Index>(i)] = to_double(br[i]);
    for (std::size_t j = 0; j < n; ++j)
      Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(Qr[i * n + j]);
  }
  const double cv = to_double(c);
  FunctionOracle o("quadratic", dim, [Q, bv, cv](const Point& x) {
    return ExtReal(0.5 * x.dot(Q * x) + bv.dot(x) + cv);
  });
  o.with_subdiff([Q, bv](const Point& x) { return SubdiffSet::point(Q * x + bv); })
      .with_prox([Q, bv](double lambda, const Point& x) -> Point {
        const Matrix M = Matrix::Identity(Q.rows(), Q.cols()) + lambda * Q;
        Eigen::LLT<Matrix> llt(M);
        if (llt.info() != Eigen::Success)
          throw Error(Errc::ProxDiverged, "prox objective unbounded below for lambda = " + format_double(lambda));
        return llt.solve(x - lambda * bv);
      });
  Truth t;
  t.sharp_s = Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().minCoeff();
  o.with_truth(t);
  return ZooEntry{"quadratic", zoo_description("quadratic"), std::move(o), t, Box::cube(dim, -2, 2), {}};
}

ZooEntry l1(int dim) {
  if (dim == 1) return from_piecewise("l1", abs_pw(), Box::cube(1, -2, 2));
  FunctionOracle o("l1", dim, [](const Point& x) { return ExtReal(x.lpNorm<1>()); });
  o.with_subdiff([](const Point& x) {
     Point lo(x.size()), hi(x.size());
     for (Eigen::Index i = 0; i < x.size(); ++i) {
       lo[i] = x[i] > 0 ? 1.0 : -1.0;
       hi[i] = x[i] < 0 ? -1.0 : 1.0;
     }
     return SubdiffSet::box(lo, hi);
   })
      .with_prox([](double lambda, const Point& x) { return soft_threshold(x, lambda); })
      .with_hints({Point::Zero(dim)});
  Truth t;
  o.with_truth(t);
  return ZooEntry{"l1", zoo_description("l1"), std::move(o), t, Box::cube(dim, -2, 2), {}};
}

ZooEntry huber(const ZooParams& params, int dim) {
  const Rational delta = scalar_param(params, "delta", 1);
  if (!(delta > 0)) throw Error(Errc::InvalidArgument, "huber delta must be positive");
  if (dim == 1) return from_piecewise("huber", huber_pw(delta), Box::cube(1, -2, 2));
  const double d = to_double(delta);
  FunctionOracle o("huber", dim, [d](const Point& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += huber1(x[i], d);
    return ExtReal(s);
  });
  o.with_subdiff([d](const Point& x) {
     Point g(x.size());
     for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = std::abs(x[i]) <= d ? x[i] / d : std::copysign(1.0, x[i]);
     return SubdiffSet::point(g);
   })
      .with_prox([d](double lambda, const Point& x) {
        Point y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
          y[i] = std::abs(x[i]) <= d + lambda ? x[i] * d / (d + lambda) : x[i] - std::copysign(lambda, x[i]);
        return y;
      });
  Truth t;
  o.with_truth(t);
  return ZooEntry{"huber", zoo_description("huber"), std::move(o), t, Box::cube(dim, -2, 2), {}};
}

ZooEntry neg_half_square(int dim) {
  if (dim == 1) return from_piecewise("neg_half_square", PiecewiseQuad1D::quadratic(Rational(-1) / 2, 0, 0), Box::cube(1, -2, 2));
  FunctionOracle o("neg_half_square", dim, [](const Point& x) { return ExtReal(-0.5 * x.squaredNorm()); });
  o.with_subdiff([](const Point& x) { return SubdiffSet::point(-x); })
      .with_prox([](double lambda, const Point& x) -> Point {
        if (!(lambda < 1.0))
          throw Error(Errc::ProxDiverged, "prox objective unbounded below for lambda = " + format_double(lambda));
        return x / (1.0 - lambda);
      });
  Truth t;
  t.sharp_s = -1.0;
  o.with_truth(t);
  return ZooEntry{"neg_half_square", zoo_description("neg_half_square"), std::move(o), t, Box::cube(dim, -2, 2), {}};
}

ZooEntry indicator_box(const ZooParams& params, int dim) {
  std::vector<Rational> lo = rationals(params, "lo"), hi = rationals(params, "hi");
  if (dim == 0) dim = lo.empty() ? 1 : static_cast<int>(lo.size());
  const auto n = static_cast<std::size_t>(dim);
  if (lo.empty()) lo.assign(n, 0);
  if (hi.empty()) hi.assign(n, 1);
  if (lo.size() == 1 && n > 1) lo.assign(n, lo[0]);
  if (hi.size() == 1 && n > 1) hi.assign(n, hi[0]);
  if (lo.size() != n || hi.size() != n) throw Error(Errc::InvalidArgument, "lo and hi must have n entries");
  Point lod(dim), hid(dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lo[i] < hi[i])) throw Error(Errc::InvalidArgument, "indicator_box needs lo < hi");
    lod[static_cast<Eigen::Index>(i)] = to_double(lo[i]);
    hid[static_cast<Eigen::Index>(i)] = to_double(hi[i]);
  }
  const Box box(lod.array() - 1.0, hid.array() + 1.0);
  if (dim == 1) return from_piecewise("indicator_box", PiecewiseQuad1D::quadratic(0, 0, 0, Domain1D{lo[0], hi[0]}), box);
  FunctionOracle o("indicator_box", dim, [lod, hid](const Point& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] < lod[i] || x[i] > hid[i]) return ExtReal::infinity();
    return ExtReal(0.0);
  });
  o.with_subdiff([lod, hid](const Point& x) {
     Point l(x.size()), h(x.size());
     for (Eigen::Index i = 0; i < x.size(); ++i) {
       if (x[i] < lod[i] || x[i] > hid[i]) return SubdiffSet(static_cast<int>(x.size()));
       l[i] = x[i] == lod[i] ? -kInf : 0.0;
       h[i] = x[i] == hid[i] ? kInf : 0.0;
     }
     return SubdiffSet::box(l, h);
   })
      .with_prox([lod, hid](double, const Point& x) -> Point { return x.cwiseMax(lod).cwiseMin(hid); })
      .with_hints({lod, hid});
  Truth t;
  o.with_truth(t);
  return ZooEntry{"indicator_box", zoo_description("indicator_box"), std::move(o), t, box, {}};
}

ZooEntry unit_except_origin() {
  FunctionOracle o("unit_except_origin", 1, [](const Point& x) { return ExtReal(x[0] == 0.0 ? 0.0 : 1.0); });
  o.with_subdiff([](const Point& x) { return x[0] == 0.0 ? SubdiffSet::interval(-kInf, kInf) : SubdiffSet::scalar(0.0); })
      .with_prox([](double lambda, const Point& x) {
        return std::abs(x[0]) <= std::sqrt(2.0 * lambda) ? scalar_point(0.0) : x;
      })
      .with_hints({scalar_point(0.0)});
  Truth t;
  t.sharp_s = -kInf;
  o.with_truth(t);
  return ZooEntry{"unit_except_origin", zoo_description("unit_except_origin"), std::move(o), t, Box::cube(1, -1, 1),
                  "lower jump at the origin: s(x, 0, 1/2) = -4/x^2 -> -inf"};
}

}  // namespace

const std::vector<std::string>& zoo_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, d] : registry()) out.push_back(n);
    return out;
  }();
  return names;
}

const std::string& zoo_description(const std::string& name) {
  for (const auto& [n, d] : registry())
    if (n == name) return d;
  throw Error(Errc::UnknownName, "no zoo entry named '" + name + "'");
}

ZooEntry zoo_get(const std::string& name, const ZooParams& params, int dimension) {
  zoo_description(name);
  if (dimension < 0) throw Error(Errc::InvalidArgument, "dimension must be positive");
  const int dim = dimension == 0 ? 1 : dimension;
  if (name == "quadratic") return quadratic(params, dimension);
  if (name == "abs") {
    require_dim1(name, dim);
    return from_piecewise(name, abs_pw(), Box::cube(1, -2, 2));
  }
  if (name == "l1") return l1(dim);
  if (name == "huber") return huber(params, dim);
  if (name == "neg_half_square") return neg_half_square(dim);
  if (name == "max_quadratics") {
    require_dim1(name, dim);
    std::vector<Rational> c = rationals(params, "coeffs");
    if (c.empty()) c = {1, 0, 0, 0, 2, -1};
    if (c.size() % 3 != 0) throw Error(Errc::InvalidArgument, "coeffs must come in triples a, b, c");
    std::vector<QuadPiece> qs;
    for (std::size_t i = 0; i < c.size(); i += 3) qs.push_back({c[i], c[i + 1], c[i + 2]});
    FunctionOracle o = oracle_from_piecewise(name, upper_envelope(qs));
    // Evaluate the max directly; the envelope breakpoints may be rounded.
    std::vector<std::array<double, 3>> qd;
    for (const auto& q : qs) qd.push_back({to_double(q.a), to_double(q.c), to_double(q.d)});
    FunctionOracle direct(name, 1, [qd](const Point& x) {
      double m = -kInf;
      for (const auto& q : qd) m = std::max(m, (q[0] * x[0] + q[1]) * x[0] + q[2]);
      return ExtReal(m);
    });
    direct.with_subdiff(o.subdiff_fn()).with_prox(o.prox_fn()).with_truth(*o.truth()).with_hints(o.hints());
    direct.with_piecewise(*o.piecewise());
    const Truth t = *o.truth();
    return ZooEntry{name, zoo_description(name), std::move(direct), t, Box::cube(1, -2, 2), {}};
  }
  if (name == "abs_x2_minus_1") {
    require_dim1(name, dim);
    return from_piecewise(name, PiecewiseQuad1D({-1, 1}, {{1, 0, -1}, {-1, 0, 1}, {1, 0, -1}}), Box::cube(1, -2, 2));
  }
  if (name == "indicator_box") return indicator_box(params, dimension);
  if (name == "unit_except_origin") {
    require_dim1(name, dim);
    return unit_except_origin();
  }
  if (name == "neg_abs") {
    require_dim1(name, dim);
    ZooEntry e = from_piecewise(name, PiecewiseQuad1D({0}, {{0, 1, 0}, {0, -1, 0}}), Box::cube(1, -2, 2));
    e.impossibility_witness = "concave kink at 0: one-sided slopes 1 > -1";
    return e;
  }
  if (name == "spliced_parabola") {
    require_dim1(name, dim);
    return from_piecewise(name, PiecewiseQuad1D({0}, {{1, 0, 0}, {-1, 0, 0}}), Box::cube(1, -2, 2));
  }
  throw Error(Errc::UnknownName, "no zoo entry named '" + name + "'");
}

SubdiffSet subdiff_analytic(const ZooEntry& entry, const Point& x) {
  if (x.size() != entry.oracle.dimension()) throw Error(Errc::DimensionMismatch, "point dimension mismatch");
  return entry.oracle.subdiff(x);
}

SubdiffGraph1D unit_except_origin_graph() {
  SubdiffGraph1D g;
  g.add_arc({std::nullopt, std::nullopt, 0, 0});
  g.add_vertical({0, std::nullopt, std::nullopt});
  return g;
}

}  // namespace varkit
