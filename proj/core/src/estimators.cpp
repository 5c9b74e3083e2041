#include "varkit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varkit/errors.hpp"
#include "varkit/parallel.hpp"
#include "varkit/rng.hpp"
#include "varkit/sampling.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_dims(const FunctionOracle& oracle, std::initializer_list<const Point*> pts) {
  for (const Point* p : pts)
    if (p->size() != oracle.dimension())
      throw Error(Errc::DimensionMismatch, "point of dimension " + std::to_string(p->size()) + " for oracle " +
                                               oracle.name() + " of dimension " + std::to_string(oracle.dimension()));
}

struct Quotient {
  ExtReal q;
  double bound = 0.0;  // rounding bound
};

Quotient quotient(const FunctionOracle& oracle, double fx, const Point& x, const Point& v, double tau, const Point& u) {
  const ExtReal fy = oracle.value(x + tau * u);
  if (fy.is_inf()) return {ExtReal::infinity(), 0.0};
  const double lin = tau * v.dot(u);
  const double half = 0.5 * tau * tau;
  const double q = (fy.value() - fx - lin) / half;
  const double bound = 16.0 * kEps * (1.0 + std::abs(fx) + std::abs(fy.value()) + std::abs(lin)) / half;
  return {ExtReal(q), bound};
}

bool resolved(const Quotient& q) {
  if (q.q.is_inf()) return true;
  return q.bound <= 1e-6 * std::max(1.0, std::abs(q.q.value()));
}

// Tail classification of level minima (oldest first). Values within their
// rounding bound of zero never count as growth.
SecondOrderValue::Kind classify(const std::vector<Quotient>& tail, double divergence) {
  if (tail.size() < 2) return SecondOrderValue::Kind::Finite;
  bool all_inf = true, grow = true, big = true, shrink = true, very_neg = true;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const ExtReal& a = tail[i].q;
    if (!a.is_inf()) all_inf = false;
    const double av = a.as_double();
    if (!a.is_inf() && std::abs(av) <= tail[i].bound) {
      grow = false;
      shrink = false;
    }
    if (!(av > 0)) grow = false;
    if (!(av > divergence)) big = false;
    if (!(av < 0)) shrink = false;
    if (!(av < -divergence)) very_neg = false;
    if (i == 0) continue;
    const double pv = tail[i - 1].q.as_double();
    if (std::isinf(pv) && std::isinf(av)) {
      shrink = false;
      very_neg = false;
      continue;
    }
    if (!(av >= 1.2 * pv)) grow = false;
    if (!(av >= pv)) big = false;
    if (!(av <= 1.2 * pv)) shrink = false;
    if (!(av <= pv)) very_neg = false;
  }
  if (all_inf || grow || big) return SecondOrderValue::Kind::PlusInf;
  if (shrink || very_neg) return SecondOrderValue::Kind::MinusInf;
  return SecondOrderValue::Kind::Finite;
}

}  // namespace

void GridConfig::validate() const {
  if (!(tau0 > 0)) throw Error(Errc::InvalidArgument, "tau0 must be positive");
  if (!(ratio > 0 && ratio < 1)) throw Error(Errc::InvalidArgument, "ratio must lie in (0, 1)");
  if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be at least 1");
  if (!(delta >= 0)) throw Error(Errc::InvalidArgument, "delta must be nonnegative");
  if (samples < 1) throw Error(Errc::InvalidArgument, "samples must be at least 1");
  if (!(z_radius > 0)) throw Error(Errc::InvalidArgument, "z_radius must be positive");
  if (tail < 2) throw Error(Errc::InvalidArgument, "tail must be at least 2");
}

double GridConfig::tau(int k) const { return tau0 * std::pow(ratio, k); }

double tol_psd(const Point& w) { return 1e-6 * (1.0 + w.squaredNorm()); }

std::string to_string(ProbeSource s) {
  switch (s) {
    case ProbeSource::Delta2:
      return "delta2";
    case ProbeSource::Graphical:
      return "graphical";
    case ProbeSource::EnvelopeHessian:
      return "envelope_hessian";
  }
  return {};
}

std::string to_string(RouteVerdict v) {
  switch (v) {
    case RouteVerdict::Proved:
      return "proved";
    case RouteVerdict::Consistent:
      return "consistent";
    case RouteVerdict::Refuted:
      return "refuted";
    case RouteVerdict::Inconclusive:
      return "inconclusive";
    case RouteVerdict::GateFailed:
      return "gate_failed";
  }
  return {};
}

ExtReal delta2(const FunctionOracle& oracle, const Point& x, const Point& v, double tau, const Point& u) {
  check_dims(oracle, {&x, &v, &u});
  if (!(tau > 0)) throw Error(Errc::InvalidArgument, "tau must be positive");
  const ExtReal fx = oracle.value(x);
  if (fx.is_inf()) throw Error(Errc::BasePointInfeasible, "phi(x) = +inf at the base point");
  return quotient(oracle, fx.value(), x, v, tau, u).q;
}

double delta2_rounding_bound(const FunctionOracle& oracle, const Point& x, const Point& v, double tau,
                             const Point& u) {
  check_dims(oracle, {&x, &v, &u});
  const ExtReal fx = oracle.value(x);
  if (fx.is_inf()) throw Error(Errc::BasePointInfeasible, "phi(x) = +inf at the base point");
  return quotient(oracle, fx.value(), x, v, tau, u).bound;
}

std::vector<Point> perturbation_directions(int n, int count) {
  std::vector<Point> out;
  for (int j = 0; j < count; ++j) {
    const int axis = (j / 2) % n;
    const double scale = std::ldexp(1.0, -(j / (2 * n)));
    Point p = Point::Zero(n);
    p[axis] = (j % 2 == 0 ? 1.0 : -1.0) * scale;
    out.push_back(p);
  }
  return out;
}

D2Estimate second_subderivative(const FunctionOracle& oracle, const Point& x, const Point& v, const Point& w,
                                const GridConfig& g) {
  g.validate();
  check_dims(oracle, {&x, &v, &w});
  const ExtReal fxe = oracle.value(x);
  if (fxe.is_inf()) throw Error(Errc::BasePointInfeasible, "phi(x) = +inf at the base point");
  const double fx = fxe.value();
  const auto perts = perturbation_directions(oracle.dimension(), g.samples);

  D2Estimate est;
  est.grid_min = SecondOrderValue::plus_inf();
  std::vector<std::pair<Quotient, Point>> fine_best, level_best;
  for (int k = 0; k < g.depth; ++k) {
    const double tau = g.tau(k);
    const double df = g.delta * std::pow(g.ratio, 3 * k);
    const double dc = g.delta * std::pow(g.ratio, 0.5 * k);
    std::pair<Quotient, Point> fb{{ExtReal::infinity(), 0.0}, w};
    auto consider = [&](std::pair<Quotient, Point>& best, const Point& u) {
      const Quotient q = quotient(oracle, fx, x, v, tau, u);
      if (q.q < best.first.q) best = {q, u};
    };
    consider(fb, w);
    for (const auto& p : perts) consider(fb, w + df * p);
    std::pair<Quotient, Point> lb = fb;
    for (const auto& p : perts) consider(lb, w + dc * p);

    D2Level lvl;
    lvl.tau = tau;
    lvl.level_min = SecondOrderValue::from(lb.first.q);
    lvl.fine_min = SecondOrderValue::from(fb.first.q);
    lvl.argmin_u = lb.second;
    lvl.resolved = resolved(lb.first) && resolved(fb.first);
    if (lvl.level_min < est.grid_min) est.grid_min = lvl.level_min;
    est.trace.push_back(lvl);
    fine_best.push_back(fb);
    level_best.push_back(lb);
  }

  std::vector<int> res;
  for (int k = 0; k < g.depth; ++k)
    if (est.trace[static_cast<std::size_t>(k)].resolved) res.push_back(k);
  if (res.empty()) res.push_back(0);
  const std::size_t L = std::min<std::size_t>(static_cast<std::size_t>(g.tail), res.size());
  const std::vector<int> tail(res.end() - static_cast<std::ptrdiff_t>(L), res.end());

  std::vector<Quotient> tail_vals;
  for (int k : tail) tail_vals.push_back(level_best[static_cast<std::size_t>(k)].first);
  const auto kind = classify(tail_vals, g.divergence);
  const int last = tail.back();
  if (kind == SecondOrderValue::Kind::PlusInf) {
    est.value = SecondOrderValue::plus_inf();
    est.tau = g.tau(last);
    est.u = level_best[static_cast<std::size_t>(last)].second;
    return est;
  }
  if (kind == SecondOrderValue::Kind::MinusInf) {
    est.value = SecondOrderValue::minus_inf();
    est.tau = g.tau(last);
    est.u = level_best[static_cast<std::size_t>(last)].second;
    return est;
  }
  const auto& fb = fine_best[static_cast<std::size_t>(last)];
  est.value = SecondOrderValue::from(fb.first.q);
  est.tau = g.tau(last);
  est.u = fb.second;
  return est;
}

std::vector<ProbeResult> graphical_probe_structured(const FunctionOracle& oracle, const SubgradientPair& base,
                                                    const Point& w, const GridConfig& g) {
  g.validate();
  check_dims(oracle, {&base.x, &base.v, &w});
  if (!oracle.has_subdiff()) throw Error(Errc::NoAnalyticForm, oracle.name() + " has no analytic subdifferential");
  const int n = oracle.dimension();
  const auto perts = perturbation_directions(n, g.samples);
  const std::size_t P = perts.size() + 1;
  const auto K = static_cast<std::size_t>(g.depth);

  // cand[k][j]: z candidates at level k, direction index j (0 = w itself).
  std::vector<std::vector<std::vector<Point>>> cand(K, std::vector<std::vector<Point>>(P));
  std::vector<std::vector<Point>> wprobe(K, std::vector<Point>(P));
  for (std::size_t k = 0; k < K; ++k) {
    const double t = g.tau(static_cast<int>(k));
    const double dk = g.delta * std::pow(g.ratio, static_cast<double>(k));
    for (std::size_t j = 0; j < P; ++j) {
      const Point wp = j == 0 ? Point(w) : Point(w + dk * perts[j - 1]);
      wprobe[k][j] = wp;
      const Point xp = base.x + t * wp;
      if (oracle.value(xp).is_inf()) continue;
      const SubdiffSet s = oracle.subdiff(xp);
      if (s.empty()) continue;
      const double radius = t * g.z_radius;
      for (const auto& vp : s.selections_near(base.v, radius)) {
        if ((vp - base.v).norm() > radius * (1.0 + 1e-12)) continue;
        cand[k][j].push_back((vp - base.v) / t);
      }
    }
  }

  const double rel = 0.5 * (1.0 / g.ratio - 1.0);
  auto matches = [&](const Point& z, const std::vector<Point>& others) {
    for (const auto& o : others)
      if ((z - o).norm() <= rel * (1.0 + std::min(z.norm(), o.norm()))) return true;
    return false;
  };

  std::vector<ProbeResult> out;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < P; ++j) {
      for (const auto& z : cand[k][j]) {
        // Stable: matched at every finer level (the finest level by its predecessor).
        bool stable = K > 1;
        if (k + 1 == K) stable = stable && matches(z, cand[k - 1][j]);
        for (std::size_t m = k + 1; m < K && stable; ++m) stable = matches(z, cand[m][j]);
        if (!stable) continue;
        ProbeResult r;
        r.base = base;
        r.w = w;
        r.z = z;
        r.w_probe = wprobe[k][j];
        r.pairing = z.dot(r.w_probe);
        r.source = ProbeSource::Graphical;
        r.t = g.tau(static_cast<int>(k));
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<ProbeResult> graphical_probe_cloud(const std::vector<SubgradientPair>& pairs,
                                               const SubgradientPair& base, const Point& w, const GridConfig& g) {
  g.validate();
  struct Cand {
    double t;
    std::size_t idx;
    Point wp;
  };
  std::vector<Cand> cands;
  const double wn2 = w.squaredNorm();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.x.size() != base.x.size()) continue;
    const Point d = p.x - base.x;
    if (wn2 == 0.0) {
      if (d.norm() == 0.0 && (p.v - base.v).norm() > 0.0) cands.push_back({0.0, i, Point::Zero(w.size())});
      continue;
    }
    const double t = d.dot(w) / wn2;
    if (!(t > 0) || t > g.tau0) continue;
    const Point wp = d / t;
    if ((wp - w).norm() > std::max(g.delta, 0.25) * std::sqrt(wn2)) continue;
    cands.push_back({t, i, wp});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.t < b.t; });
  if (cands.size() > 16) cands.resize(16);

  std::vector<ProbeResult> out;
  for (const auto& c : cands) {
    const auto& p = pairs[c.idx];
    const std::vector<double> ts = c.t > 0 ? std::vector<double>{c.t}
                                           : std::vector<double>{g.tau(g.depth - 1), g.tau(g.depth / 2), g.tau0};
    for (double t : ts) {
      ProbeResult r;
      r.base = base;
      r.w = w;
      r.z = (p.v - base.v) / t;
      r.w_probe = c.wp;
      r.pairing = r.z.dot(r.w_probe);
      r.source = ProbeSource::Graphical;
      r.t = t;
      r.slack = (p.residual + base.residual) * c.wp.norm() / t;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ProbeResult> graphical_derivative_probe(const FunctionOracle* oracle,
                                                    const std::vector<SubgradientPair>& pairs,
                                                    const SubgradientPair& base, const Point& w,
                                                    const GridConfig& g) {
  if (oracle && oracle->has_subdiff()) return graphical_probe_structured(*oracle, base, w, g);
  return graphical_probe_cloud(pairs, base, w, g);
}

namespace {

struct PairOutcome {
  std::optional<ProbeResult> worst;
  double worst_margin = kInf;  // pairing - kappa|w'|^2 + tol + slack
  double min_margin = kInf;    // pairing - kappa|w'|^2
  std::size_t probes = 0;
};

// Symmetric part of the Jacobian assembled from unique stable candidates at
// the finest level of the basis probes, if every column is available.
std::optional<Point> min_eigen_direction(const std::vector<std::vector<ProbeResult>>& basis_probes, int n) {
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    const auto& probes = basis_probes[static_cast<std::size_t>(j)];
    double t_min = kInf;
    for (const auto& r : probes)
      if (r.w_probe == r.w) t_min = std::min(t_min, r.t);
    std::optional<Point> col;
    for (const auto& r : probes) {
      if (r.w_probe != r.w || r.t != t_min) continue;
      if (col && (*col - r.z).norm() > 1e-9 * (1.0 + col->norm())) return std::nullopt;
      col = r.z;
    }
    if (!col) return std::nullopt;
    J.col(j) = *col;
  }
  const Matrix S = 0.5 * (J + J.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  Point u = es.eigenvectors().col(0);
  // Fix the sign so the direction is reproducible.
  Eigen::Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  if (u[imax] < 0) u = -u;
  return u;
}

}  // namespace

PsdVerdict psd_graphical_test(const FunctionOracle& oracle, const Box& box, double kappa, const PsdTestConfig& cfg) {
  cfg.grid.validate();
  std::vector<SubgradientPair> pairs =
      sample_subgradient_pairs(oracle, box, cfg.lambda, cfg.n_pairs, cfg.seed, cfg.workers);
  const std::vector<SubgradientPair> hints = hint_pairs(oracle);
  pairs.insert(pairs.end(), hints.begin(), hints.end());
  const int n = oracle.dimension();
  const bool structured = oracle.has_subdiff();

  const auto outcomes = parallel_map<PairOutcome>(pairs.size(), cfg.workers, [&](std::size_t i) {
    const SubgradientPair& base = pairs[i];
    PairOutcome out;
    auto take = [&](const std::vector<ProbeResult>& probes) {
      for (const auto& r : probes) {
        ++out.probes;
        const double m = r.pairing - kappa * r.w_probe.squaredNorm();
        out.min_margin = std::min(out.min_margin, m);
        const double wm = m + tol_psd(r.w_probe) + r.slack;
        if (wm < out.worst_margin) {
          out.worst_margin = wm;
          out.worst = r;
        }
      }
    };
    if (oracle.value(base.x).is_inf()) return out;
    std::vector<std::vector<ProbeResult>> basis;
    for (int j = 0; j < n; ++j) {
      Point e = Point::Zero(n);
      e[j] = 1.0;
      basis.push_back(graphical_derivative_probe(structured ? &oracle : nullptr, pairs, base, e, cfg.grid));
      take(basis.back());
    }
    Rng rng = Rng::stream(cfg.seed ^ 0xa5a5a5a5a5a5a5a5ULL, i);
    for (int d = 0; d < cfg.n_dirs; ++d)
      take(graphical_derivative_probe(structured ? &oracle : nullptr, pairs, base, rng.unit_vector(n), cfg.grid));
    take(graphical_derivative_probe(structured ? &oracle : nullptr, pairs, base, Point::Zero(n), cfg.grid));
    if (structured && n > 1) {
      if (const auto u = min_eigen_direction(basis, n))
        take(graphical_derivative_probe(&oracle, pairs, base, *u, cfg.grid));
    }
    return out;
  });

  PsdVerdict v;
  v.pair_count = pairs.size();
  double worst = kInf;
  for (const auto& o : outcomes) {
    v.probe_count += o.probes;
    v.min_margin = std::min(v.min_margin, o.min_margin);
    if (o.worst && o.worst_margin < worst) {
      worst = o.worst_margin;
      if (worst < 0) v.witness = o.worst;
    }
  }
  if (v.witness) {
    v.verdict = RouteVerdict::Refuted;
  } else if (v.probe_count == 0) {
    v.verdict = RouteVerdict::Inconclusive;
    v.note = "no graphical candidates at this resolution";
  } else {
    v.verdict = RouteVerdict::Consistent;
  }
  return v;
}

double envelope_threshold(double kappa, double lambda) { return kappa / (1.0 + lambda * kappa); }

EnvelopePsdVerdict coderivative_psd_via_envelope(const EnvelopeHandle& h, const Box& box, double kappa,
                                                 int n_points, double step, std::uint64_t seed, int workers) {
  if (!(step > 0)) throw Error(Errc::InvalidArgument, "finite-difference step must be positive");
  const double lambda = h.lambda();
  EnvelopePsdVerdict out;
  out.kappa_lambda = envelope_threshold(kappa, lambda);
  struct One {
    bool ok = false;
    bool diverged = false;
    double margin = kInf;
    double tol = 0.0;
    double defect = 0.0;
    EnvelopeWitness wit;
  };
  const auto results = parallel_map<One>(static_cast<std::size_t>(std::max(n_points, 0)), workers, [&](std::size_t i) {
    One o;
    Rng rng = Rng::stream(seed, i);
    const Point u = rng.uniform_in(box);
    try {
      const ProxResult pr = h.prox_full(u);
      const Matrix H = h.hessian_fd(u, step, &o.defect);
      Eigen::SelfAdjointEigenSolver<Matrix> es(H);
      Point e = es.eigenvectors().col(0);
      Eigen::Index imax = 0;
      e.cwiseAbs().maxCoeff(&imax);
      if (e[imax] < 0) e = -e;
      const double curv = e.dot(H * e);
      o.margin = curv - out.kappa_lambda;
      o.tol = tol_psd(e) + (pr.analytic ? 0.0 : 1e-8 * (1.0 + u.norm()) / (lambda * step));
      o.wit.u = u;
      o.wit.w = e;
      o.wit.curvature = curv;
      o.wit.threshold = out.kappa_lambda;
      o.wit.x = pr.p;
      o.wit.v = (u - pr.p) / lambda;
      o.wit.z_phi = H * e;
      o.wit.w_phi = e - lambda * o.wit.z_phi;
      o.wit.pairing_phi = o.wit.z_phi.dot(o.wit.w_phi);
      o.ok = true;
    } catch (const Error& err) {
      if (err.code() != Errc::ProxDiverged && err.code() != Errc::InnerSolverFailed) throw;
      o.diverged = true;
    }
    return o;
  });
  double worst = kInf;
  std::size_t failed = 0;
  for (const auto& o : results) {
    if (!o.ok) {
      ++failed;
      continue;
    }
    ++out.probe_count;
    out.max_symmetry_defect = std::max(out.max_symmetry_defect, o.defect);
    out.min_margin = std::min(out.min_margin, o.margin);
    const double m = o.margin + o.tol;
    if (m < 0 && m < worst) {
      worst = m;
      out.witness = o.wit;
    }
  }
  if (out.witness) {
    out.verdict = RouteVerdict::Refuted;
  } else if (out.probe_count == 0) {
    out.verdict = RouteVerdict::Inconclusive;
    out.note = "prox failed at every sampled point";
  } else {
    out.verdict = RouteVerdict::Consistent;
  }
  if (failed) out.note = std::to_string(failed) + " points skipped: prox failed";
  return out;
}

SumRuleReport sum_rule_residuals(const FunctionOracle& oracle, double kappa, const std::vector<SubgradientPair>& pairs,
                                 const std::vector<Point>& directions, const GridConfig& g) {
  const FunctionOracle psi = add_quadratic(oracle, -kappa, oracle.name() + "_tilt");
  SumRuleReport rep;
  for (const auto& p : pairs) {
    const SubgradientPair q{p.x, p.v - kappa * p.x, p.residual};
    for (const auto& w : directions) {
      ++rep.samples;
      const D2Estimate a = second_subderivative(oracle, p.x, p.v, w, g);
      const D2Estimate b = second_subderivative(psi, q.x, q.v, w, g);
      if (a.value.kind() != b.value.kind()) {
        ++rep.class_mismatches;
      } else if (a.value.is_finite()) {
        ++rep.finite_compared;
        rep.max_d2_residual =
            std::max(rep.max_d2_residual, std::abs(a.value.value() - b.value.value() - kappa * w.squaredNorm()));
      }
      if (!oracle.has_subdiff() || !psi.has_subdiff()) continue;
      const auto ga = graphical_probe_structured(oracle, p, w, g);
      const auto gb = graphical_probe_structured(psi, q, w, g);
      auto gap = [&](const std::vector<ProbeResult>& from, const std::vector<ProbeResult>& to, double sign) {
        double worst = 0.0;
        for (const auto& r : from) {
          double best = kInf;
          for (const auto& s : to) {
            if (s.t != r.t || s.w_probe != r.w_probe) continue;
            best = std::min(best, (r.z - (s.z + sign * kappa * s.w_probe)).norm());
          }
          worst = std::max(worst, best);
        }
        return worst;
      };
      rep.max_graphical_gap = std::max({rep.max_graphical_gap, gap(ga, gb, 1.0), gap(gb, ga, -1.0)});
    }
  }
  return rep;
}

SumRuleReport sum_rule_residuals(const FunctionOracle& oracle, double kappa, const Box& box, int samples,
                                 const GridConfig& g, std::uint64_t seed) {
  const auto pairs = sample_subgradient_pairs(oracle, box, 1.0, samples, seed);
  std::vector<Point> dirs;
  Rng rng(seed ^ 0x3c3c3c3c3c3c3c3cULL);
  dirs.push_back(rng.unit_vector(oracle.dimension()));
  dirs.push_back(-dirs.back());
  return sum_rule_residuals(oracle, kappa, pairs, dirs, g);
}

}  // namespace varkit
