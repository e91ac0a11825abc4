// OpenMP kernels against their serial references. Thread count follows
// OMP_NUM_THREADS; results are identical either way (see test_parallel).

#include <benchmark/benchmark.h>

#include <cmath>

#include "hypercross/constants.hpp"
#include "hypercross/parallel.hpp"
#include "hypercross/polytope.hpp"
#include "hypercross/samplers.hpp"

using namespace hypercross;

namespace {

HyperplaneSample planes(int d, double t) {
  Rng rng(1, 0);
  return sample_poisson_hyperplanes(t, std::pow(t, -double(d) / (d + 1)), d, rng);
}

// Arg: intensity t. d = 2 gives about C(2 t^(1/3), 2) points.
void BM_IntersectionParallel(benchmark::State& state) {
  const auto h = planes(2, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intersection_process(h));
  state.counters["planes"] = static_cast<double>(h.planes.size());
}

void BM_IntersectionSerial(benchmark::State& state) {
  const auto h = planes(2, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intersection_process_serial(h));
  state.counters["planes"] = static_cast<double>(h.planes.size());
}

void BM_Intersection3dParallel(benchmark::State& state) {
  const auto h = planes(3, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intersection_process(h));
}

void BM_Intersection3dSerial(benchmark::State& state) {
  const auto h = planes(3, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intersection_process_serial(h));
}

// Limit-process hulls, the per-replication work of the f-vector experiment.
auto hull_rep = [](Rng& rng, std::int64_t) {
  const auto s = sample_limit_process(2, exact_c2(), 0.01, rng);
  return convex_hull(s.points).f_vector().counts[0];
};

void BM_HullReplicateParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(replicate<std::int64_t>(state.range(0), 7, hull_rep));
}

void BM_HullReplicateSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(replicate_serial<std::int64_t>(state.range(0), 7, hull_rep));
}

void BM_EstimateC3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cd(3, state.range(0), 5));
}

void BM_MonteCarloUniform(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo(state.range(0), 5, [](Rng& r) { return r.uniform(); }));
}

}  // namespace

BENCHMARK(BM_IntersectionParallel)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntersectionSerial)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Intersection3dParallel)->Arg(3'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Intersection3dSerial)->Arg(3'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HullReplicateParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HullReplicateSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateC3)->Arg(200'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloUniform)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
