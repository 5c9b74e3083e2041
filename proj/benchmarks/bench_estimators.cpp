#include <benchmark/benchmark.h>

#include "varkit/estimators.hpp"
#include "varkit/exact_calculus.hpp"
#include "varkit/moreau.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;

static void BM_SecondSubderivative(benchmark::State& state) {
  const ZooEntry e = zoo_get("huber", {}, static_cast<int>(state.range(0)));
  const int n = e.oracle.dimension();
  const Point x = Point::Constant(n, 0.3), v = x, w = Point::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(second_subderivative(e.oracle, x, v, w));
}
BENCHMARK(BM_SecondSubderivative)->Arg(1)->Arg(4)->Arg(16);

static void BM_GraphicalProbe(benchmark::State& state) {
  const ZooEntry e = zoo_get("abs");
  const SubgradientPair base{scalar_point(0), scalar_point(1), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(graphical_probe_structured(e.oracle, base, scalar_point(1)));
}
BENCHMARK(BM_GraphicalProbe);

static void BM_NumericalProx(benchmark::State& state) {
  const ZooEntry e = zoo_get("abs_x2_minus_1");
  InnerSolverConfig cfg;
  cfg.mode = InnerSolverConfig::Mode::Numerical;
  const EnvelopeHandle h(e.oracle, 0.25, e.default_box, cfg);
  double x = -1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.envelope(scalar_point(x)));
    x = x > 1.5 ? -1.5 : x + 0.01;
  }
}
BENCHMARK(BM_NumericalProx);

static void BM_ExactEquivalences(benchmark::State& state) {
  const PiecewiseQuad1D f({-1, 0, 1}, {{0, -2, -1}, {1, 0, 0}, {1, 0, 0}, {Rational(1, 2), 1, Rational(-1, 2)}});
  for (auto _ : state) benchmark::DoNotOptimize(verify_theorem_equivalences(f));
}
BENCHMARK(BM_ExactEquivalences);
