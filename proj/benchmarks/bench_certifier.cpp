#include <benchmark/benchmark.h>

#include "varkit/certifier.hpp"
#include "varkit/zoo.hpp"

using namespace varkit;

static void BM_SegmentModulus(benchmark::State& state) {
  const ZooEntry e = zoo_get("spliced_parabola");
  for (auto _ : state)
    benchmark::DoNotOptimize(segment_modulus(e.oracle, e.default_box, static_cast<int>(state.range(0)), 1));
}
BENCHMARK(BM_SegmentModulus)->Arg(1000)->Arg(10000);

static void BM_CertifyQuadratic3(benchmark::State& state) {
  const ZooEntry e = zoo_get("quadratic", {{"Q", {"2", "1", "0", "1", "3", "0", "0", "0", "1"}}});
  CertifyConfig cfg;
  cfg.box = e.default_box;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify_convexity(e.oracle, cfg));
}
BENCHMARK(BM_CertifyQuadratic3)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
