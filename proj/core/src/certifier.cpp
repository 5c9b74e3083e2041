#include "varkit/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "varkit/errors.hpp"
#include "varkit/exact_calculus.hpp"
#include "varkit/moreau.hpp"
#include "varkit/parallel.hpp"
#include "varkit/rng.hpp"
#include "varkit/sampling.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Stream offsets so routes draw independent samples from one seed.
constexpr std::uint64_t kSegmentStream = 0x5e9d3c1a00000001ULL;
constexpr std::uint64_t kD2Stream = 0x5e9d3c1a00000002ULL;
constexpr std::uint64_t kEnvelopeStream = 0x5e9d3c1a00000003ULL;
constexpr std::uint64_t kMoreauStream = 0x5e9d3c1a00000004ULL;

const std::string kSegmentRecipe =
    "s = 2*((1-lambda)*phi(x) + lambda*phi(y) - phi((1-lambda)*x + lambda*y)) / (lambda*(1-lambda)*|x-y|^2)";

std::vector<double> vec(const Point& p) { return {p.data(), p.data() + p.size()}; }

Point to_point(const std::vector<double>& v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
  return p;
}

void check_box(const Box& box) {
  if (box.dim() < 1 || box.hi.size() != box.lo.size())
    throw Error(Errc::DegenerateBox, "box has no coordinates");
  for (int i = 0; i < box.dim(); ++i)
    if (!(box.hi[i] > box.lo[i])) throw Error(Errc::DegenerateBox, "box has empty interior");
}

Point clamp_to(const Box& box, Point p) {
  for (int i = 0; i < box.dim(); ++i) p[i] = std::clamp(p[i], box.lo[i], box.hi[i]);
  return p;
}

struct Triple {
  Point x, y;
  double lambda = 0.5;
  double s = kInf;
  double bound = 0.0;
  bool used = false;
};

Triple eval_triple(const FunctionOracle& oracle, Point x, Point y, double lambda) {
  Triple t{std::move(x), std::move(y), lambda};
  const auto s = segment_s(oracle, t.x, t.y, lambda);
  if (!s) return t;
  t.s = *s;
  if (std::isinf(t.s)) {
    t.used = true;
    return t;
  }
  t.bound = segment_rounding_bound(oracle, t.x, t.y, lambda);
  t.used = t.bound <= 1e-6 * std::max(1.0, std::abs(t.s));
  return t;
}

Witness segment_witness(const ModulusEstimate& m, double threshold) {
  Witness w;
  w.kind = "segment";
  w.data = {{"x", vec(m.x)}, {"y", vec(m.y)}, {"lambda", {m.lambda}}};
  w.value = m.s_hat;
  w.threshold = threshold;
  w.recipe = kSegmentRecipe;
  return w;
}

std::string fmt(double x) { return format_double(x); }

double secant(const EnvelopeHandle& h, const Point& u, const Point& e, double step) {
  return (h.gradient(u + step * e) - h.gradient(u - step * e)).dot(e) / (2.0 * step);
}

double moreau_pairing(const EnvelopeHandle& h, const Point& x, const Point& y) {
  return (h.gradient(x) - h.gradient(y)).dot(x - y);
}

Rational exact_kappa(double kappa) { return rational_from_double(kappa); }

// A point strictly inside piece i.
Rational piece_point(const PiecewiseQuad1D& f, std::size_t i) {
  const auto& bp = f.breakpoints();
  const std::optional<Rational> lo = i == 0 ? f.domain().lo : std::optional<Rational>(bp[i - 1]);
  const std::optional<Rational> hi = i == bp.size() ? f.domain().hi : std::optional<Rational>(bp[i]);
  if (lo && hi) return (*lo + *hi) / 2;
  if (lo) return *lo + 1;
  if (hi) return *hi - 1;
  return Rational(0);
}

std::optional<Witness> exact_witness(const PiecewiseQuad1D& f, const Rational& kappa) {
  const ConvexityDecision dec = convexity_decide_exact(f);
  if (!dec.weakly_convex() && dec.concave_kink) {
    const LocalData ld = f.local(*dec.concave_kink);
    Witness w;
    w.kind = "exact_concave_kink";
    w.data = {{"x", {to_double(ld.x)}}, {"d_left", {to_double(ld.d_left)}}, {"d_right", {to_double(ld.d_right)}}};
    w.exact = {{"x", to_string(ld.x)}, {"d_left", to_string(ld.d_left)}, {"d_right", to_string(ld.d_right)}};
    w.value = to_double(ld.d_right - ld.d_left);
    w.threshold = 0.0;
    w.recipe = "value = d_right - d_left at x; a kink with d_right < d_left is concave";
    return w;
  }
  const auto& pieces = f.pieces();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (pieces[i].a < pieces[imin].a) imin = i;
  const Rational curv = 2 * pieces[imin].a;
  if (curv >= kappa) return std::nullopt;
  const Rational x = piece_point(f, imin);
  Witness w;
  w.kind = "exact_curvature";
  w.data = {{"x", {to_double(x)}}};
  w.exact = {{"x", to_string(x)}, {"curvature", to_string(curv)}, {"kappa", to_string(kappa)}};
  w.value = to_double(curv);
  w.threshold = to_double(kappa);
  w.recipe = "value = 2a of the piece containing x";
  return w;
}

struct RouteContext {
  const FunctionOracle& oracle;
  const CertifyConfig& cfg;
  double kappa;
  double lambda;
};

MethodEntry route_segment(const ModulusEstimate& m, const CertifyConfig& cfg, double kappa) {
  MethodEntry e;
  e.method = "segment";
  e.probe_count = m.samples;
  e.params = {{"triples", std::to_string(cfg.triples)}, {"rho_max", fmt(cfg.rho_max)}};
  e.statistic_name = "s_hat";
  e.statistic = m.s_hat;
  e.tolerance = cfg.tol;
  if (m.evidence == ModulusEstimate::Evidence::NotWeaklyConvex) {
    e.verdict = RouteVerdict::GateFailed;
    e.witness = segment_witness(m, kappa);
    e.note = "not weakly convex evidence: second-order conditions inapplicable";
  } else if (m.s_hat + m.rounding_bound < kappa - cfg.tol) {
    e.verdict = RouteVerdict::Refuted;
    e.witness = segment_witness(m, kappa);
    if (m.evidence == ModulusEstimate::Evidence::WeaklyConvex) e.note = "rho_hat = " + fmt(-m.s_hat);
  } else {
    e.verdict = RouteVerdict::Consistent;
    if (m.evidence == ModulusEstimate::Evidence::WeaklyConvex) e.note = "rho_hat = " + fmt(-m.s_hat);
  }
  return e;
}

MethodEntry route_graphical(const RouteContext& c) {
  MethodEntry e;
  e.method = "graphical";
  PsdTestConfig pc;
  pc.n_pairs = c.cfg.samples;
  pc.lambda = c.lambda;
  pc.seed = c.cfg.seed;
  pc.workers = c.cfg.workers;
  pc.grid = c.cfg.grid;
  e.params = {{"pairs", std::to_string(pc.n_pairs)}, {"directions", std::to_string(pc.n_dirs)},
              {"lambda", fmt(c.lambda)}};
  e.statistic_name = "min_pairing_margin";
  e.tolerance = 1e-6;
  const PsdVerdict v = psd_graphical_test(c.oracle, c.cfg.box, c.kappa, pc);
  e.verdict = v.verdict;
  e.probe_count = v.probe_count;
  if (std::isfinite(v.min_margin)) e.statistic = v.min_margin;
  e.note = v.note;
  if (v.witness) {
    const ProbeResult& r = *v.witness;
    Witness w;
    w.kind = "graphical";
    w.data = {{"x", vec(r.base.x)}, {"v", vec(r.base.v)}, {"t", {r.t}}, {"w_probe", vec(r.w_probe)},
              {"z", vec(r.z)}, {"x_probe", vec(r.base.x + r.t * r.w_probe)}, {"slack", {r.slack}}};
    w.value = r.pairing;
    w.threshold = c.kappa * r.w_probe.squaredNorm();
    w.recipe = "value = <z, w_probe> with z = (v_probe - v)/t, v_probe in the subdifferential at x_probe";
    e.witness = std::move(w);
  }
  return e;
}

MethodEntry route_subderivative(const RouteContext& c) {
  MethodEntry e;
  e.method = "subderivative";
  e.tolerance = c.cfg.tol;
  e.statistic_name = "min_d2_margin";
  const int n = c.oracle.dimension();
  std::vector<SubgradientPair> pairs = sample_subgradient_pairs(c.oracle, c.cfg.box, c.lambda, c.cfg.d2_pairs,
                                                                c.cfg.seed ^ kD2Stream, c.cfg.workers);
  const auto hints = hint_pairs(c.oracle);
  pairs.insert(pairs.end(), hints.begin(), hints.end());
  e.params = {{"pairs", std::to_string(pairs.size())}, {"depth", std::to_string(c.cfg.grid.depth)},
              {"tau0", fmt(c.cfg.grid.tau0)}};

  struct Out {
    std::size_t probes = 0;
    double min_margin = kInf;
    std::optional<Witness> w;
    double w_margin = kInf;
  };
  const auto outs = parallel_map<Out>(pairs.size(), c.cfg.workers, [&](std::size_t i) {
    Out o;
    const auto& p = pairs[i];
    if (c.oracle.value(p.x).is_inf()) return o;
    std::vector<Point> dirs;
    for (int j = 0; j < n; ++j) {
      Point u = Point::Zero(n);
      u[j] = 1.0;
      dirs.push_back(u);
      dirs.push_back(-u);
    }
    Rng rng = Rng::stream(c.cfg.seed ^ kD2Stream, i);
    dirs.push_back(rng.unit_vector(n));
    dirs.push_back(rng.unit_vector(n));
    for (const auto& w : dirs) {
      const D2Estimate est = second_subderivative(c.oracle, p.x, p.v, w, c.cfg.grid);
      ++o.probes;
      const double thr = c.kappa * w.squaredNorm();
      o.min_margin = std::min(o.min_margin, est.value.as_double() - thr);
      if (!(est.value.as_double() < thr - c.cfg.tol)) continue;
      const ExtReal q = delta2(c.oracle, p.x, p.v, est.tau, est.u);
      if (q.is_inf()) continue;
      const double bound = delta2_rounding_bound(c.oracle, p.x, p.v, est.tau, est.u);
      const double slack = 2.0 * p.residual * est.u.norm() / est.tau;
      const double uthr = c.kappa * est.u.squaredNorm();
      const double margin = q.value() + bound + slack - (uthr - c.cfg.tol);
      if (margin < 0 && margin < o.w_margin) {
        Witness wit;
        wit.kind = "delta2";
        wit.data = {{"x", vec(p.x)}, {"v", vec(p.v)}, {"tau", {est.tau}}, {"u", vec(est.u)}, {"w", vec(w)}};
        wit.value = q.value();
        wit.threshold = uthr;
        wit.recipe = "value = (phi(x + tau*u) - phi(x) - tau*<v, u>) / (tau^2/2)";
        o.w = std::move(wit);
        o.w_margin = margin;
      }
    }
    return o;
  });
  double worst = kInf;
  double min_margin = kInf;
  for (const auto& o : outs) {
    e.probe_count += o.probes;
    min_margin = std::min(min_margin, o.min_margin);
    if (o.w && o.w_margin < worst) {
      worst = o.w_margin;
      e.witness = o.w;
    }
  }
  if (std::isfinite(min_margin)) e.statistic = min_margin;
  if (e.witness)
    e.verdict = RouteVerdict::Refuted;
  else if (e.probe_count == 0)
    e.verdict = RouteVerdict::Inconclusive;
  else
    e.verdict = RouteVerdict::Consistent;
  return e;
}

MethodEntry route_coderivative(const RouteContext& c) {
  MethodEntry e;
  e.method = "coderivative";
  e.params = {{"lambda", fmt(c.lambda)}, {"points", std::to_string(c.cfg.envelope_points)},
              {"step", fmt(c.cfg.fd_step)}};
  e.statistic_name = "min_envelope_curvature_margin";
  e.tolerance = 1e-6;
  const EnvelopeHandle h(c.oracle, c.lambda, c.cfg.box);
  const EnvelopePsdVerdict v = coderivative_psd_via_envelope(h, c.cfg.box, c.kappa, c.cfg.envelope_points,
                                                             c.cfg.fd_step, c.cfg.seed ^ kEnvelopeStream,
                                                             c.cfg.workers);
  e.probe_count = v.probe_count;
  if (std::isfinite(v.min_margin)) e.statistic = v.min_margin;
  e.params.emplace_back("kappa_lambda", fmt(v.kappa_lambda));
  e.note = v.note;
  e.verdict = v.verdict;
  if (v.witness) {
    const EnvelopeWitness& ew = *v.witness;
    const ProxResult pr = h.prox_full(ew.u);
    const double slack = pr.analytic ? 0.0 : 1e-8 * (1.0 + ew.u.norm()) / (c.lambda * c.cfg.fd_step);
    const double sec = secant(h, ew.u, ew.w, c.cfg.fd_step);
    if (sec < v.kappa_lambda - tol_psd(ew.w) - slack) {
      Witness w;
      w.kind = "envelope_secant";
      w.data = {{"u", vec(ew.u)},          {"direction", vec(ew.w)},        {"step", {c.cfg.fd_step}},
                {"lambda", {c.lambda}},    {"box_lo", vec(c.cfg.box.lo)},   {"box_hi", vec(c.cfg.box.hi)},
                {"x", vec(ew.x)},          {"v", vec(ew.v)},                {"z_phi", vec(ew.z_phi)},
                {"w_phi", vec(ew.w_phi)},  {"pairing_phi", {ew.pairing_phi}}};
      w.value = sec;
      w.threshold = v.kappa_lambda;
      w.recipe =
          "value = <grad e(u + step*d) - grad e(u - step*d), d> / (2*step), grad e(u) = (u - prox(u))/lambda";
      e.witness = std::move(w);
    } else {
      e.verdict = RouteVerdict::Inconclusive;
      e.note = "Hessian eigenvalue below threshold not confirmed by the directional secant";
    }
  }
  return e;
}

MethodEntry route_moreau(const RouteContext& c) {
  MethodEntry e;
  e.method = "moreau";
  e.tolerance = c.cfg.tol;
  e.statistic_name = "min_gradient_monotonicity_margin";
  const EnvelopeHandle h(c.oracle, c.lambda, c.cfg.box);
  const double kl = envelope_threshold(c.kappa, c.lambda);
  e.params = {{"lambda", fmt(c.lambda)}, {"pairs", std::to_string(c.cfg.moreau_pairs)}, {"kappa_lambda", fmt(kl)}};
  const double diam = c.cfg.box.diameter();
  const int n = c.oracle.dimension();
  struct Out {
    bool ok = false;
    Point x, y;
    double value = 0.0, threshold = 0.0, margin = kInf;
    bool violated = false;
  };
  const auto outs =
      parallel_map<Out>(static_cast<std::size_t>(std::max(c.cfg.moreau_pairs, 0)), c.cfg.workers, [&](std::size_t i) {
        Out o;
        Rng rng = Rng::stream(c.cfg.seed ^ kMoreauStream, i);
        o.x = rng.uniform_in(c.cfg.box);
        if (i % 2 == 0) {
          o.y = rng.uniform_in(c.cfg.box);
        } else {
          const double s = diam * std::ldexp(1.0, -static_cast<int>((i / 2) % 10)) * rng.uniform(0.5, 1.0);
          o.y = o.x + s * rng.unit_vector(n);
        }
        if ((o.x - o.y).norm() == 0.0) return o;
        try {
          const ProxResult px = h.prox_full(o.x);
          const ProxResult py = h.prox_full(o.y);
          const Point gx = (o.x - px.p) / c.lambda;
          const Point gy = (o.y - py.p) / c.lambda;
          const double d2 = (o.x - o.y).squaredNorm();
          o.value = (gx - gy).dot(o.x - o.y);
          o.threshold = kl * d2;
          const double slack = 2.0 * (px.residual + py.residual) * std::sqrt(d2);
          o.margin = o.value - o.threshold;
          o.violated = o.value < o.threshold - c.cfg.tol * (1.0 + d2) - slack;
          o.ok = true;
        } catch (const Error& err) {
          if (err.code() != Errc::ProxDiverged && err.code() != Errc::InnerSolverFailed) throw;
        }
        return o;
      });
  double worst = kInf;
  double min_margin = kInf;
  const Out* wit = nullptr;
  for (const auto& o : outs) {
    if (!o.ok) continue;
    ++e.probe_count;
    min_margin = std::min(min_margin, o.margin);
    if (o.violated && o.margin < worst) {
      worst = o.margin;
      wit = &o;
    }
  }
  if (std::isfinite(min_margin)) e.statistic = min_margin;
  if (wit) {
    e.verdict = RouteVerdict::Refuted;
    Witness w;
    w.kind = "moreau_monotonicity";
    w.data = {{"x", vec(wit->x)},
              {"y", vec(wit->y)},
              {"lambda", {c.lambda}},
              {"box_lo", vec(c.cfg.box.lo)},
              {"box_hi", vec(c.cfg.box.hi)}};
    w.value = wit->value;
    w.threshold = wit->threshold;
    w.recipe = "value = <grad e(x) - grad e(y), x - y>, grad e(u) = (u - prox(u))/lambda";
    e.witness = std::move(w);
  } else {
    e.verdict = e.probe_count ? RouteVerdict::Consistent : RouteVerdict::Inconclusive;
    if (!e.probe_count) e.note = "prox failed at every sampled point";
  }
  return e;
}

MethodEntry route_exact(const FunctionOracle& oracle, double kappa) {
  MethodEntry e;
  e.method = "exact1d";
  const PiecewiseQuad1D* f = oracle.piecewise();
  if (!f) throw Error(Errc::CapabilityMissing, oracle.name() + " has no piecewise quadratic form");
  const Rational k = exact_kappa(kappa);
  const EquivalenceReport rep = verify_theorem_equivalences(*f, k);
  e.probe_count = rep.pairs_checked;
  e.params = {{"kappa", to_string(k)}, {"decision", rep.decision.describe()}};
  e.statistic_name = "min_curvature";
  e.statistic = to_double(min_curvature(*f));
  e.tolerance = 0.0;
  e.witness = exact_witness(*f, k);
  if (!rep.decision.weakly_convex()) {
    e.verdict = RouteVerdict::Refuted;
    e.note = "not weakly convex: second-order conditions inapplicable";
  } else {
    e.verdict = e.witness ? RouteVerdict::Refuted : RouteVerdict::Proved;
    e.note = "equivalences " + rep.status_name();
  }
  for (const auto& n : rep.notes) e.note += "; " + n;
  return e;
}

std::string summary_for(const CertificateReport& r) {
  const bool strong = r.mode == "strong";
  const std::string prop = strong ? "strongly convex with modulus " + fmt(r.kappa) : "convex";
  switch (r.overall) {
    case RouteVerdict::Proved:
      return "proved " + prop + " (exact 1-D engine)";
    case RouteVerdict::Refuted: {
      std::string by;
      for (const auto& m : r.methods)
        if (m.witness && (m.verdict == RouteVerdict::Refuted || m.verdict == RouteVerdict::GateFailed)) {
          by = m.method;
          break;
        }
      if (!r.gate_passed)
        return "not " + prop + " (gate failed: not weakly convex evidence, second-order conditions inapplicable; " +
               "nonconvexity witnessed by " + by + ")";
      return "not " + prop + " (witness from " + by + ")";
    }
    case RouteVerdict::GateFailed:
      return "gate failed: not weakly convex evidence";
    case RouteVerdict::Consistent:
      return "consistent with " + prop + " (sampling found no violation)";
    case RouteVerdict::Inconclusive:
      return "inconclusive";
  }
  return {};
}

bool wants(const CertifyConfig& cfg, const std::string& m) { return cfg.method == "all" || cfg.method == m; }

CertificateReport run_pipeline(const FunctionOracle& oracle, double kappa, const CertifyConfig& cfg,
                               const std::string& mode) {
  if (std::find(method_names().begin(), method_names().end(), cfg.method) == method_names().end())
    throw Error(Errc::InvalidArgument, "unknown method '" + cfg.method + "'");
  if (cfg.box.dim() != oracle.dimension())
    throw Error(Errc::DimensionMismatch, "box dimension " + std::to_string(cfg.box.dim()) + " for oracle of dimension " +
                                             std::to_string(oracle.dimension()));
  check_box(cfg.box);
  CertificateReport rep;
  rep.oracle_name = oracle.name();
  rep.dimension = oracle.dimension();
  rep.mode = mode;
  rep.kappa = kappa;
  rep.seed = cfg.seed;

  if (cfg.method == "exact1d") {
    rep.methods.push_back(route_exact(oracle, kappa));
    rep.overall = rep.methods.back().verdict;
    rep.gate_passed = convexity_decide_exact(*oracle.piecewise()).weakly_convex();
    rep.summary = summary_for(rep);
    return rep;
  }

  SegmentConfig sc;
  sc.n_triples = cfg.triples;
  sc.seed = cfg.seed ^ kSegmentStream;
  sc.tol = cfg.tol;
  sc.rho_max = cfg.rho_max;
  sc.workers = cfg.workers;
  const ModulusEstimate m = segment_modulus(oracle, cfg.box, sc);
  rep.modulus = m;
  rep.gate_passed = m.evidence != ModulusEstimate::Evidence::NotWeaklyConvex;
  rep.methods.push_back(route_segment(m, cfg, kappa));

  const double lambda = default_lambda(oracle, cfg.lambda, m.rho_hat());
  const RouteContext ctx{oracle, cfg, kappa, lambda};
  std::vector<std::pair<std::string, std::function<MethodEntry()>>> routes;
  if (wants(cfg, "graphical")) routes.emplace_back("graphical", [&] { return route_graphical(ctx); });
  if (wants(cfg, "subderivative")) routes.emplace_back("subderivative", [&] { return route_subderivative(ctx); });
  if (wants(cfg, "coderivative")) routes.emplace_back("coderivative", [&] { return route_coderivative(ctx); });
  if (wants(cfg, "moreau")) routes.emplace_back("moreau", [&] { return route_moreau(ctx); });
  const bool exact = oracle.piecewise() && wants(cfg, "exact1d");
  if (exact) routes.emplace_back("exact1d", [&] { return route_exact(oracle, kappa); });

  const int outer = std::max(1, std::min(cfg.workers, static_cast<int>(routes.size())));
  const auto entries = parallel_map<MethodEntry>(routes.size(), outer, [&](std::size_t i) {
    try {
      return routes[i].second();
    } catch (const Error& err) {
      MethodEntry e;
      e.method = routes[i].first;
      e.verdict = RouteVerdict::Inconclusive;
      e.note = err.what();
      return e;
    }
  });
  rep.methods.insert(rep.methods.end(), entries.begin(), entries.end());

  if (!rep.gate_passed) rep.notes.push_back("weak-convexity gate failed; second-order verdicts are informational");
  const MethodEntry* ex = rep.find("exact1d");
  if (ex && (ex->verdict == RouteVerdict::Proved || ex->verdict == RouteVerdict::Refuted)) {
    rep.overall = ex->verdict;
    for (const auto& e : rep.methods)
      if (e.method != "exact1d" && e.verdict == RouteVerdict::Refuted && ex->verdict == RouteVerdict::Proved)
        rep.notes.push_back("route " + e.method + " disagrees with the exact engine");
  } else {
    bool refuted = false, any = false;
    for (const auto& e : rep.methods) {
      if (e.verdict == RouteVerdict::Refuted) refuted = true;
      if (e.verdict == RouteVerdict::GateFailed && e.witness && e.witness->value < e.witness->threshold - cfg.tol)
        refuted = true;
      if (e.verdict != RouteVerdict::Inconclusive) any = true;
    }
    if (refuted)
      rep.overall = RouteVerdict::Refuted;
    else if (!rep.gate_passed)
      rep.overall = RouteVerdict::GateFailed;
    else
      rep.overall = any ? RouteVerdict::Consistent : RouteVerdict::Inconclusive;
  }
  rep.summary = summary_for(rep);
  return rep;
}

}  // namespace

std::optional<double> segment_s(const FunctionOracle& oracle, const Point& x, const Point& y, double lambda) {
  if (x.size() != oracle.dimension() || y.size() != oracle.dimension())
    throw Error(Errc::DimensionMismatch, "segment triple dimension mismatch");
  if (!(lambda > 0 && lambda < 1)) throw Error(Errc::InvalidArgument, "lambda must lie in (0, 1)");
  const double d2 = (x - y).squaredNorm();
  if (d2 == 0.0) return std::nullopt;
  const ExtReal fx = oracle.value(x);
  const ExtReal fy = oracle.value(y);
  if (fx.is_inf() || fy.is_inf()) return std::nullopt;
  const Point z = (1.0 - lambda) * x + lambda * y;
  const ExtReal fz = oracle.value(z);
  if (fz.is_inf()) return -kInf;
  return 2.0 * ((1.0 - lambda) * fx.value() + lambda * fy.value() - fz.value()) / (lambda * (1.0 - lambda) * d2);
}

double segment_rounding_bound(const FunctionOracle& oracle, const Point& x, const Point& y, double lambda) {
  const double d2 = (x - y).squaredNorm();
  const Point z = (1.0 - lambda) * x + lambda * y;
  const double mag = std::abs(oracle.value(x).as_double()) + std::abs(oracle.value(y).as_double()) +
                     std::abs(oracle.value(z).as_double());
  return 16.0 * kEps * (1.0 + mag) / (lambda * (1.0 - lambda) * d2);
}

std::optional<double> ModulusEstimate::rho_hat() const {
  switch (evidence) {
    case Evidence::Convex:
      return 0.0;
    case Evidence::WeaklyConvex:
      return -s_hat;
    case Evidence::NotWeaklyConvex:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string ModulusEstimate::evidence_name() const {
  switch (evidence) {
    case Evidence::Convex:
      return "consistent with convex";
    case Evidence::WeaklyConvex:
      return "weakly convex evidence";
    case Evidence::NotWeaklyConvex:
      return "not weakly convex evidence";
  }
  return {};
}

ModulusEstimate segment_modulus(const FunctionOracle& oracle, const Box& box, const SegmentConfig& cfg) {
  check_box(box);
  if (box.dim() != oracle.dimension()) throw Error(Errc::DimensionMismatch, "box dimension mismatch");
  if (cfg.n_triples < 1) throw Error(Errc::InvalidArgument, "n_triples must be positive");
  const int n = box.dim();
  const double diam = box.diameter();

  const auto triples = parallel_map<Triple>(static_cast<std::size_t>(cfg.n_triples), cfg.workers, [&](std::size_t i) {
    Rng rng = Rng::stream(cfg.seed, i);
    Point x = rng.uniform_in(box);
    Point y;
    if (i % 2 == 0) {
      y = rng.uniform_in(box);
    } else {
      const double scale = diam * std::pow(10.0, -3.0 * rng.uniform());
      y = clamp_to(box, x + scale * rng.unit_vector(n));
    }
    const double lambda = rng.open_unit();
    return eval_triple(oracle, std::move(x), std::move(y), lambda);
  });

  ModulusEstimate m;
  m.seed = cfg.seed;
  const Triple* best = nullptr;
  bool any_finite = false;
  auto consider = [&](const Triple& t) {
    if (!t.used) return;
    ++m.samples;
    if (!best || t.s < best->s) best = &t;
  };
  for (const auto& t : triples) {
    if (t.s < kInf) any_finite = true;
    consider(t);
  }
  if (!any_finite) throw Error(Errc::DegenerateBox, "no sampled triple has finite endpoint values");

  // Refinement: 17-point grids along each axis around hints and the worst
  // triple, shrinking by 1/8 per round.
  std::vector<Point> centers;
  for (const auto& h : oracle.hints())
    if (h.size() == n && box.contains(h)) centers.push_back(h);
  if (best) {
    centers.push_back(best->x);
    centers.push_back(best->y);
  }
  double h0 = kInf;
  for (int i = 0; i < n; ++i) h0 = std::min(h0, 0.25 * (box.hi[i] - box.lo[i]));
  std::vector<std::vector<Triple>> rounds(static_cast<std::size_t>(std::max(cfg.refine_rounds, 0)));
  for (int r = 0; r < cfg.refine_rounds; ++r) {
    const double h = h0 * std::pow(0.125, r);
    auto& round = rounds[static_cast<std::size_t>(r)];
    for (const auto& c : centers) {
      for (int a = 0; a < n; ++a) {
        std::vector<Point> pts;
        for (int j = -8; j <= 8; ++j) {
          Point p = c;
          p[a] += h * j / 8.0;
          if (box.contains(p)) pts.push_back(p);
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t k = i + 1; k < pts.size(); ++k)
            for (double l : {0.25, 0.5, 0.75}) round.push_back(eval_triple(oracle, pts[i], pts[k], l));
      }
    }
    double rmin = kInf;
    for (const auto& t : round)
      if (t.used) rmin = std::min(rmin, t.s);
    m.refinement.push_back(rmin);
  }
  for (const auto& round : rounds)
    for (const auto& t : round) consider(t);

  if (best) {
    m.s_hat = best->s;
    m.x = best->x;
    m.y = best->y;
    m.lambda = best->lambda;
    m.rounding_bound = best->bound;
  }
  const auto& rf = m.refinement;
  if (rf.size() >= 3) {
    bool div = true;
    for (std::size_t i = rf.size() - 2; i < rf.size(); ++i)
      if (!(rf[i] < 0 && rf[i] <= 2.0 * rf[i - 1])) div = false;
    m.diverging = div && rf.back() < -cfg.rho_max;
  }
  if (m.s_hat == -kInf || m.diverging)
    m.evidence = ModulusEstimate::Evidence::NotWeaklyConvex;
  else if (m.s_hat + m.rounding_bound >= -cfg.tol)
    m.evidence = ModulusEstimate::Evidence::Convex;
  else
    m.evidence = ModulusEstimate::Evidence::WeaklyConvex;
  return m;
}

ModulusEstimate segment_modulus(const FunctionOracle& oracle, const Box& box, int n_triples, std::uint64_t seed) {
  SegmentConfig cfg;
  cfg.n_triples = n_triples;
  cfg.seed = seed;
  return segment_modulus(oracle, box, cfg);
}

const std::vector<double>& Witness::get(const std::string& key) const {
  for (const auto& f : data)
    if (f.key == key) return f.values;
  throw Error(Errc::InvalidArgument, "witness of kind " + kind + " has no field '" + key + "'");
}

Point Witness::point(const std::string& key) const { return to_point(get(key)); }

double replay_witness(const FunctionOracle& oracle, const Witness& w) {
  if (w.kind == "segment") {
    const auto s = segment_s(oracle, w.point("x"), w.point("y"), w.scalar("lambda"));
    if (!s) throw Error(Errc::InvalidArgument, "segment witness endpoints are infeasible");
    return *s;
  }
  if (w.kind == "monotonicity") return (w.point("x1") - w.point("x2")).dot(w.point("v1") - w.point("v2"));
  if (w.kind == "graphical") return w.point("z").dot(w.point("w_probe"));
  if (w.kind == "delta2") {
    const ExtReal q = delta2(oracle, w.point("x"), w.point("v"), w.scalar("tau"), w.point("u"));
    return q.as_double();
  }
  if (w.kind == "envelope_secant" || w.kind == "moreau_monotonicity") {
    const EnvelopeHandle h(oracle, w.scalar("lambda"), Box(w.point("box_lo"), w.point("box_hi")));
    if (w.kind == "envelope_secant") return secant(h, w.point("u"), w.point("direction"), w.scalar("step"));
    return moreau_pairing(h, w.point("x"), w.point("y"));
  }
  if (w.kind == "exact_concave_kink" || w.kind == "exact_curvature") {
    const PiecewiseQuad1D* f = oracle.piecewise();
    if (!f) throw Error(Errc::CapabilityMissing, "exact witness needs a piecewise form");
    std::string xs;
    for (const auto& [k, v] : w.exact)
      if (k == "x") xs = v;
    const Rational x = parse_rational(xs);
    if (w.kind == "exact_concave_kink") {
      const LocalData ld = f->local(x);
      return to_double(ld.d_right - ld.d_left);
    }
    return to_double(2 * f->pieces()[f->piece_index(x)].a);
  }
  throw Error(Errc::InvalidArgument, "unknown witness kind '" + w.kind + "'");
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"all",    "graphical", "subderivative", "coderivative",
                                              "moreau", "segment",   "exact1d"};
  return names;
}

const MethodEntry* CertificateReport::find(const std::string& method) const {
  for (const auto& m : methods)
    if (m.method == method) return &m;
  return nullptr;
}

int CertificateReport::exit_code() const {
  switch (overall) {
    case RouteVerdict::Proved:
    case RouteVerdict::Consistent:
      return 0;
    case RouteVerdict::Refuted:
      return 1;
    case RouteVerdict::Inconclusive:
    case RouteVerdict::GateFailed:
      return 2;
  }
  return 2;
}

CertificateReport certify_convexity(const FunctionOracle& oracle, const CertifyConfig& cfg) {
  return run_pipeline(oracle, 0.0, cfg, "convexity");
}

CertificateReport certify_strong(const FunctionOracle& oracle, double kappa, const CertifyConfig& cfg) {
  if (!(kappa > 0)) throw Error(Errc::InvalidArgument, "kappa must be positive");
  CertificateReport rep = run_pipeline(oracle, kappa, cfg, "strong");
  if (cfg.tilt_cross_check) {
    CertifyConfig sub = cfg;
    sub.tilt_cross_check = false;
    const FunctionOracle tilt = add_quadratic(oracle, -kappa, oracle.name() + "_tilt");
    const CertificateReport t = certify_convexity(tilt, sub);
    rep.tilt_agreement = t.overall == rep.overall;
    if (!*rep.tilt_agreement)
      rep.notes.push_back("tilt certification disagrees: " + to_string(t.overall) + " (" + t.summary + ")");
  }
  return rep;
}

std::optional<Witness> falsify(const FunctionOracle& oracle, const CertifyConfig& cfg) {
  if (const PiecewiseQuad1D* f = oracle.piecewise()) return exact_witness(*f, Rational(0));

  try {
    const double lambda = default_lambda(oracle, cfg.lambda);
    std::vector<SubgradientPair> pairs =
        sample_subgradient_pairs(oracle, cfg.box, lambda, cfg.samples, cfg.seed, cfg.workers);
    const auto hints = hint_pairs(oracle);
    pairs.insert(pairs.end(), hints.begin(), hints.end());
    double worst = kInf;
    std::optional<Witness> best;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        const auto& a = pairs[i];
        const auto& b = pairs[j];
        const double d = (a.x - b.x).norm();
        const double val = (a.x - b.x).dot(a.v - b.v);
        const double margin = val + cfg.tol + (a.residual + b.residual) * d;
        if (margin < 0 && margin < worst) {
          worst = margin;
          Witness w;
          w.kind = "monotonicity";
          w.data = {{"x1", vec(a.x)}, {"v1", vec(a.v)}, {"x2", vec(b.x)}, {"v2", vec(b.v)}};
          w.value = val;
          w.threshold = 0.0;
          w.recipe = "value = <x1 - x2, v1 - v2>; convex functions have monotone subdifferentials";
          best = std::move(w);
        }
      }
    }
    if (best) return best;
  } catch (const Error& err) {
    if (err.code() != Errc::CapabilityMissing && err.code() != Errc::ProxDiverged &&
        err.code() != Errc::InnerSolverFailed)
      throw;
  }

  SegmentConfig sc;
  sc.n_triples = cfg.triples;
  sc.seed = cfg.seed ^ kSegmentStream;
  sc.tol = cfg.tol;
  sc.rho_max = cfg.rho_max;
  sc.workers = cfg.workers;
  const ModulusEstimate m = segment_modulus(oracle, cfg.box, sc);
  if (m.s_hat + m.rounding_bound < -cfg.tol) return segment_witness(m, 0.0);
  return std::nullopt;
}

}  // namespace varkit
