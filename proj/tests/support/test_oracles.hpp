#pragma once

// Brute-force reference computations, written independently of the library's
// solvers, plus generators of random exact instances.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "varkit/piecewise.hpp"
#include "varkit/rational.hpp"
#include "varkit/rng.hpp"

namespace testsupport {

using Fn1 = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimizer of f over [lo, hi] by repeated dense grids, each zooming on the
/// best cell of the previous one.
inline double grid_argmin(const Fn1& f, double lo, double hi, int n = 4001, int rounds = 8) {
  double best = lo;
  for (int r = 0; r < rounds; ++r) {
    double fbest = kInf;
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x = lo + h * i;
      const double fx = f(x);
      if (fx < fbest) {
        fbest = fx;
        best = x;
      }
    }
    lo = best - 2 * h;
    hi = best + 2 * h;
  }
  return best;
}

inline double prox_grid(const Fn1& phi, double lambda, double x, double radius = 10.0) {
  return grid_argmin([&](double y) { return phi(y) + (y - x) * (y - x) / (2 * lambda); }, x - radius, x + radius);
}

inline double envelope_grid(const Fn1& phi, double lambda, double x, double radius = 10.0) {
  const double p = prox_grid(phi, lambda, x, radius);
  return phi(p) + (p - x) * (p - x) / (2 * lambda);
}

/// min over a dense (tau, u) grid of the second-order difference quotient.
inline double d2_grid(const Fn1& phi, double x, double v, double w, double delta = 1e-3) {
  double best = kInf;
  for (double tau : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
    for (int i = -20; i <= 20; ++i) {
      const double u = w + delta * i / 20.0;
      const double fy = phi(x + tau * u);
      if (std::isinf(fy)) continue;
      best = std::min(best, (fy - phi(x) - tau * v * u) / (0.5 * tau * tau));
    }
  }
  return best;
}

/// min of s(x, y, lambda) over grid triples in [lo, hi].
inline double segment_grid(const Fn1& phi, double lo, double hi, int n = 201) {
  double best = kInf;
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (double l : {0.125, 0.25, 0.5, 0.75, 0.875}) {
        const double x = lo + h * i, y = lo + h * j, z = (1 - l) * x + l * y;
        const double fx = phi(x), fy = phi(y), fz = phi(z);
        if (std::isinf(fx) || std::isinf(fy)) continue;
        if (std::isinf(fz)) return -kInf;
        best = std::min(best, 2 * ((1 - l) * fx + l * fy - fz) / (l * (1 - l) * (x - y) * (x - y)));
      }
  return best;
}

inline double huber_envelope(double lambda, double x) {
  return std::abs(x) <= lambda ? x * x / (2 * lambda) : std::abs(x) - lambda / 2;
}

/// Dyadic rational k / 2^e with |k| <= range * 2^e.
inline varkit::Rational dyadic(varkit::Rng& rng, int range, int e = 2) {
  const long den = 1L << e;
  const long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * range * den + 1))) - range * den;
  return varkit::Rational(k) / den;
}

/// Random continuous piecewise quadratic with dyadic data (exact in double).
/// Roughly one in five instances gets a bounded or half-bounded domain.
inline varkit::PiecewiseQuad1D random_piecewise(varkit::Rng& rng, int max_pieces = 4) {
  using varkit::Rational;
  const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_pieces)));
  std::vector<Rational> bp;
  while (static_cast<int>(bp.size()) < m - 1) {
    const Rational b = dyadic(rng, 3, 1);
    if (std::find(bp.begin(), bp.end(), b) == bp.end()) bp.push_back(b);
  }
  std::sort(bp.begin(), bp.end());
  std::vector<varkit::QuadPiece> pieces;
  for (int i = 0; i < m; ++i) {
    varkit::QuadPiece q{dyadic(rng, 2, 1), dyadic(rng, 2, 1), dyadic(rng, 2, 1)};
    if (i > 0) {
      const Rational& b = bp[static_cast<std::size_t>(i - 1)];
      q.d = pieces.back().value(b) - (q.a * b + q.c) * b;
    }
    pieces.push_back(q);
  }
  varkit::Domain1D dom;
  const auto kind = rng.below(10);
  const Rational lo_edge = bp.empty() ? Rational(-1) : bp.front() - 1;
  const Rational hi_edge = bp.empty() ? Rational(1) : bp.back() + 1;
  if (kind == 0) dom = {lo_edge, hi_edge};
  if (kind == 1) dom.lo = lo_edge;
  if (kind == 2) dom.hi = hi_edge;
  return varkit::PiecewiseQuad1D(bp, pieces, dom);
}

/// Test points: breakpoints, domain ends, and dyadic points inside pieces.
inline std::vector<varkit::Rational> sample_points(const varkit::PiecewiseQuad1D& f, varkit::Rng& rng, int interior) {
  using varkit::Rational;
  std::vector<Rational> xs(f.breakpoints().begin(), f.breakpoints().end());
  if (f.domain().lo) xs.push_back(*f.domain().lo);
  if (f.domain().hi) xs.push_back(*f.domain().hi);
  for (int i = 0; i < interior; ++i) {
    const Rational x = dyadic(rng, 4, 3);
    if (f.in_domain(x)) xs.push_back(x);
  }
  return xs;
}

}  // namespace testsupport
