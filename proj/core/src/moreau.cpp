#include "varkit/moreau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varkit/errors.hpp"
#include "varkit/rng.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Objective {
  const FunctionOracle& oracle;
  double lambda;
  const Point& x;
  double operator()(const Point& y) const {
    const ExtReal v = oracle.value(y);
    if (v.is_inf()) return kInf;
    return v.value() + (y - x).squaredNorm() / (2.0 * lambda);
  }
};

double search_radius(const Box& box, const InnerSolverConfig& cfg) {
  return cfg.radius_factor * std::max(box.diameter(), 1.0);
}

[[noreturn]] void diverged(double lambda) {
  throw Error(Errc::ProxDiverged, "prox objective has no minimizer in the search region for lambda = " +
                                      format_double(lambda));
}

ProxResult prox_1d(const FunctionOracle& oracle, double lambda, const Point& x, const Box& box,
                   const InnerSolverConfig& cfg) {
  const Objective F{oracle, lambda, x};
  const double R = search_radius(box, cfg);
  const double lo = x[0] - R, hi = x[0] + R;
  const int n = std::max(cfg.grid_points, 3);
  const double h = (hi - lo) / (n - 1);

  int best_k = -1;
  double best_f = kInf;
  for (int k = 0; k < n; ++k) {
    const double f = F(scalar_point(lo + h * k));
    if (f < best_f) {
      best_f = f;
      best_k = k;
    }
  }
  double best_y = best_k >= 0 ? lo + h * best_k : x[0];
  bool best_is_hint = false;
  for (const auto& c : oracle.hints()) {
    if (c.size() != 1 || c[0] < lo || c[0] > hi) continue;
    const double f = F(c);
    if (f < best_f || (f == best_f && !best_is_hint)) {
      best_f = f;
      best_y = c[0];
      best_is_hint = true;
    }
  }
  if (!(best_f < kInf)) throw Error(Errc::InnerSolverFailed, "prox objective is +inf on the whole search region");
  if (!best_is_hint && (best_k == 0 || best_k == n - 1)) diverged(lambda);

  // Golden section inside the bracket around the best candidate.
  double a = std::max(lo, best_y - h), b = std::min(hi, best_y + h);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = F(scalar_point(c)), fd = F(scalar_point(d));
  for (int it = 0; it < 200 && (b - a) > cfg.tolerance * (1.0 + std::abs(best_y)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = F(scalar_point(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = F(scalar_point(d));
    }
  }
  const double g = fc <= fd ? c : d;
  const double fg = std::min(fc, fd);
  if (fg < best_f) {
    best_f = fg;
    best_y = g;
  }
  // Parabolic polish.
  for (double s : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double step = s * h;
    const double f0 = best_f, fm = F(scalar_point(best_y - step)), fp = F(scalar_point(best_y + step));
    const double denom = fm - 2.0 * f0 + fp;
    if (!(denom > 0) || !std::isfinite(denom)) continue;
    const double y = best_y + 0.5 * step * (fm - fp) / denom;
    const double fy = F(scalar_point(y));
    if (fy < best_f) {
      best_f = fy;
      best_y = y;
    }
  }
  // Bisection on the stationarity condition y - x + lambda v(y) = 0, with
  // v(y) the subgradient nearest (x - y) / lambda.
  if (oracle.has_subdiff()) {
    const auto stationarity = [&](double y) {
      const Point v = oracle.subdiff(scalar_point(y)).project(scalar_point((x[0] - y) / lambda));
      return y - x[0] + lambda * v[0];
    };
    const double w = 1e-6 * (1.0 + std::abs(best_y));
    double l = best_y - w, u = best_y + w;
    if (std::isfinite(F(scalar_point(l))) && std::isfinite(F(scalar_point(u))) && stationarity(l) < 0 &&
        stationarity(u) > 0) {
      for (int it = 0; it < 80 && l < u; ++it) {
        const double m = 0.5 * (l + u);
        if (m == l || m == u) break;
        const double sm = stationarity(m);
        if (sm == 0) {
          l = u = m;
          break;
        }
        (sm < 0 ? l : u) = m;
      }
      for (double y : {l, u}) {
        const double fy = F(scalar_point(y));
        if (fy <= best_f + 1e-15 * (1.0 + std::abs(best_f)) &&
            prox_residual(oracle, lambda, x, scalar_point(y)) < prox_residual(oracle, lambda, x, scalar_point(best_y))) {
          best_f = std::min(best_f, fy);
          best_y = y;
        }
      }
    }
  }
  ProxResult r;
  r.p = scalar_point(best_y);
  r.objective = F(r.p);
  return r;
}

ProxResult prox_nd(const FunctionOracle& oracle, double lambda, const Point& x, const Box& box,
                   const InnerSolverConfig& cfg) {
  const Objective F{oracle, lambda, x};
  const double R = search_radius(box, cfg);
  const auto dim = x.size();
  std::vector<Point> starts{x, box.center()};
  for (const auto& c : oracle.hints())
    if (c.size() == dim) starts.push_back(c);
  Rng rng(0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < cfg.starts; ++i) starts.push_back(x + rng.unit_vector(static_cast<int>(dim)) * (box.diameter() * rng.uniform()));

  Point best = x;
  double best_f = kInf;
  for (const auto& s : starts) {
    Point y = s;
    double fy = F(y);
    if (!(fy < kInf)) continue;
    double step = std::max(box.diameter(), 1.0) / 4.0;
    long evals = 0;
    while (step > cfg.tolerance * (1.0 + y.norm()) && evals < 200000) {
      bool improved = false;
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (double sign : {1.0, -1.0}) {
          Point t = y;
          t[i] += sign * step;
          const double ft = F(t);
          ++evals;
          if (ft < fy) {
            y = t;
            fy = ft;
            improved = true;
          }
        }
      }
      if ((y - x).norm() > R) diverged(lambda);
      if (!improved) step *= 0.5;
    }
    if (fy < best_f) {
      best_f = fy;
      best = y;
    }
  }
  if (!(best_f < kInf)) throw Error(Errc::InnerSolverFailed, "prox objective is +inf at every start");
  ProxResult r;
  r.p = best;
  r.objective = best_f;
  return r;
}

}  // namespace

double prox_residual(const FunctionOracle& oracle, double lambda, const Point& x, const Point& p) {
  if (oracle.has_subdiff()) {
    const SubdiffSet s = oracle.subdiff(p);
    if (s.empty()) return kInf;
    return s.distance((x - p) / lambda);
  }
  const Objective F{oracle, lambda, x};
  const double fp = F(p);
  double defect = 0.0;
  for (double h : {1e-4, 1e-6}) {
    const double step = h * (1.0 + p.norm());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        Point t = p;
        t[i] += sign * step;
        defect = std::max(defect, fp - F(t));
      }
    }
  }
  return defect;
}

ProxResult numerical_prox(const FunctionOracle& oracle, double lambda, const Point& x, const Box& box,
                          const InnerSolverConfig& cfg) {
  if (!(lambda > 0)) throw Error(Errc::InvalidArgument, "lambda must be positive");
  if (x.size() != oracle.dimension()) throw Error(Errc::DimensionMismatch, "prox point dimension mismatch");
  ProxResult r = x.size() == 1 ? prox_1d(oracle, lambda, x, box, cfg) : prox_nd(oracle, lambda, x, box, cfg);
  r.residual = prox_residual(oracle, lambda, x, r.p);
  return r;
}

EnvelopeHandle::EnvelopeHandle(FunctionOracle oracle, double lambda, Box box, InnerSolverConfig cfg)
    : oracle_(std::move(oracle)), lambda_(lambda), box_(std::move(box)), cfg_(cfg) {
  if (!(lambda_ > 0)) throw Error(Errc::InvalidArgument, "lambda must be positive");
  if (oracle_.truth()) {
    if (const auto rho = oracle_.truth()->weak_modulus(); rho && *rho > 0 && !(lambda_ * *rho < 1.0))
      throw Error(Errc::InvalidArgument, "lambda = " + format_double(lambda_) + " is not below 1/rho = " +
                                             format_double(1.0 / *rho));
  }
}

ProxResult EnvelopeHandle::prox_full(const Point& x) const {
  if (x.size() != oracle_.dimension()) throw Error(Errc::DimensionMismatch, "prox point dimension mismatch");
  if (cfg_.mode == InnerSolverConfig::Mode::Auto && oracle_.has_prox()) {
    ProxResult r;
    r.p = oracle_.prox(lambda_, x);
    const ExtReal v = oracle_.value(r.p);
    if (v.is_inf()) throw Error(Errc::InnerSolverFailed, "analytic prox left the domain");
    r.objective = v.value() + (r.p - x).squaredNorm() / (2.0 * lambda_);
    r.residual = prox_residual(oracle_, lambda_, x, r.p);
    r.analytic = true;
    return r;
  }
  return numerical_prox(oracle_, lambda_, x, box_, cfg_);
}

double EnvelopeHandle::envelope(const Point& x) const { return prox_full(x).objective; }

Point EnvelopeHandle::gradient(const Point& x) const { return (x - prox(x)) / lambda_; }

Matrix EnvelopeHandle::hessian_fd(const Point& x, double step, double* symmetry_defect) const {
  if (!(step > 0)) throw Error(Errc::InvalidArgument, "finite-difference step must be positive");
  const auto n = x.size();
  Matrix J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Point xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    J.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * step);
  }
  if (symmetry_defect) *symmetry_defect = (J - J.transpose()).cwiseAbs().maxCoeff();
  return 0.5 * (J + J.transpose());
}

ProxBoundVerdict prox_bound_probe(const FunctionOracle& oracle, double lambda, const Box& box,
                                  const InnerSolverConfig& cfg) {
  std::vector<Point> anchors{box.center()};
  const int n = box.dim();
  if (n <= 3) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      Point c(n);
      for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? box.hi[i] : box.lo[i];
      anchors.push_back(c);
    }
  }
  for (const auto& h : oracle.hints())
    if (h.size() == n) anchors.push_back(h);

  InnerSolverConfig numeric = cfg;
  numeric.mode = InnerSolverConfig::Mode::Numerical;
  const double R = search_radius(box, cfg);
  ProxBoundVerdict out;
  for (const auto& a : anchors) {
    try {
      (void)numerical_prox(oracle, lambda, a, box, numeric);
    } catch (const Error& e) {
      if (e.code() != Errc::ProxDiverged) throw;
      out.bounded = false;
      out.anchor = a;
      // Pick the coordinate direction with the lowest objective at the rim.
      const Objective F{oracle, lambda, a};
      double best = kInf;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
          Point d = Point::Zero(n);
          d[i] = sign;
          const double f = F(a + R * d);
          if (f < best) {
            best = f;
            out.escape_direction = d;
          }
        }
      }
      return out;
    }
  }
  return out;
}

double default_lambda(const FunctionOracle& oracle, double lambda_user, std::optional<double> rho_estimate) {
  std::optional<double> rho;
  if (oracle.truth()) rho = oracle.truth()->weak_modulus();
  if (!rho) rho = rho_estimate;
  if (rho && *rho > 0) return std::min(lambda_user, 1.0 / (2.0 * *rho));
  return lambda_user;
}

FunctionOracle with_numeric_prox(const FunctionOracle& oracle, const Box& box, const InnerSolverConfig& cfg) {
  FunctionOracle out = oracle;
  InnerSolverConfig numeric = cfg;
  numeric.mode = InnerSolverConfig::Mode::Numerical;
  const auto base = std::make_shared<const FunctionOracle>(oracle);
  out.with_prox([base, box, numeric](double lambda, const Point& x) {
    return numerical_prox(*base, lambda, x, box, numeric).p;
  });
  return out;
}

}  // namespace varkit
