// Serial reference loops against the OpenMP paths. Arg(0) is serial, Arg(1)
// parallel; results are bitwise identical, only the wall time differs.

#include <benchmark/benchmark.h>

#include "sdpi/bounds.hpp"
#include "sdpi/channel.hpp"
#include "sdpi/contraction.hpp"
#include "sdpi/random.hpp"
#include "sdpi/suites.hpp"

using namespace sdpi;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_EstimateEtaKl(benchmark::State& state) {
  Rng rng(1, 0);
  const JointSpec spec = random_interior_spec(rng, 4, 4);
  OptimizerConfig cfg;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_eta_f(make_kl(), spec, cfg).value);
  label(state);
}
BENCHMARK(BM_EstimateEtaKl)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LocalLimitProbe(benchmark::State& state) {
  Rng rng(2, 0);
  const JointSpec spec = random_interior_spec(rng, 3, 3);
  OptimizerConfig cfg;
  cfg.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_limit_probe(make_kl(), spec, {1e-2, 1e-4, 1e-6, 1e-8}, cfg).final_gap);
  }
  label(state);
}
BENCHMARK(BM_LocalLimitProbe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InequalitySuite(benchmark::State& state) {
  InequalityOptions o;
  o.samples = 2000;
  o.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(inequality_suite(o).checks.size());
  label(state);
}
BENCHMARK(BM_InequalitySuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PropertiesSuite(benchmark::State& state) {
  PropertyOptions o;
  o.samples = 20;
  o.execution = mode(state);
  o.optimizer.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(properties_suite(o).checks.size());
  label(state);
}
BENCHMARK(BM_PropertiesSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
